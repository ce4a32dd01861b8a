//! Spatial phase `theta(x) = int_0^x C / R^2` for real potentials.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::quadrature;

/// Absolute tolerance of the cumulative phase quadrature.
pub const THETA_TOLERANCE: f64 = 1e-10;

/// Cumulative adaptive quadrature of `C / R^2` on the grid nodes with `theta(0) = 0`.
pub fn theta_real_potential<R: Fn(f64) -> f64>(r: R, c: f64, grid: &GridSpec) -> Result<Vec<f64>> {
    let nodes = grid.nodes();
    if c == 0.0 {
        return Ok(vec![0.0; nodes.len()]);
    }
    for &x in &nodes {
        let v = r(x);
        if !(v.abs() > 1e-150) || !v.is_finite() {
            return Err(Error::ZeroCrossing { x });
        }
    }
    let integrand = |x: f64| c / r(x).powi(2);
    let cum = quadrature::cumulative(integrand, &nodes, THETA_TOLERANCE)?;
    let j = nearest_node(&nodes, 0.0);
    let to_ref = quadrature::integrate(integrand, 0.0, nodes[j], THETA_TOLERANCE)?;
    Ok(cum.iter().map(|v| v - cum[j] + to_ref).collect())
}

pub(crate) fn nearest_node(nodes: &[f64], x: f64) -> usize {
    let i = nodes.partition_point(|&v| v < x).min(nodes.len() - 1);
    if i > 0 && (x - nodes[i - 1]).abs() <= (nodes[i] - x).abs() {
        i - 1
    } else {
        i
    }
}
