//! Substitution of candidate fields into the coupled equation, power factorization and
//! pseudo-power drift checks.
//!
//! Residual of component `j`:
//! `i psi_t + psi_xx - mu0(t) (A0 psi)_j - V psi_j - (g_j1 |psi1|^2 + g_j2 |psi2|^2) psi_j`.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolve::Trajectory;
use crate::fd;
use crate::grid::GridSpec;
use crate::lossgain::eta_metric;
use crate::modulation::{weights, SampledModulation};
use crate::output::{csv_table, fmt_num};
use crate::solutions::{ExactSolution, PotentialSpec};
use crate::{AmplitudeVector, Complex, ComplexMatrix2, CouplingConfig, ModulationSpec};

pub const X_ORDER: usize = 8;
pub const T_ORDER: usize = 6;
/// Nodes at each end excluded from the norms.
pub const MARGIN: usize = 4;
/// Step of the centered time stencil.
pub const TIME_STEP: f64 = 5e-3;

/// Field on the grid nodes at a given time.
pub type FieldSampler<'a> = dyn Fn(f64) -> Result<Vec<[Complex; 2]>> + Sync + 'a;

/// Residual values at every interior node and time sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualField {
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    /// `values[k][i]` at `times[k]`, `x[i]`.
    pub values: Vec<Vec<[Complex; 2]>>,
}

impl ResidualField {
    pub fn to_csv(&self) -> String {
        let rows = self.times.iter().zip(&self.values).flat_map(|(&t, row)| {
            self.x.iter().zip(row).map(move |(&x, r)| vec![t, x, r[0].re, r[0].im, r[1].re, r[1].im])
        });
        csv_table(&["t", "x", "re_r1", "im_r1", "re_r2", "im_r2"], rows)
    }

    pub fn report(&self, dx: f64) -> ResidualReport {
        let mut rep = ResidualReport {
            max_abs: [0.0; 2],
            l2: [0.0; 2],
            worst_point: (f64::NAN, f64::NAN),
            x_order: X_ORDER,
            t_order: T_ORDER,
            margin: MARGIN,
            n_points: 0,
        };
        let mut worst = -1.0;
        for (&t, row) in self.times.iter().zip(&self.values) {
            for (&x, r) in self.x.iter().zip(row) {
                for j in 0..2 {
                    let a = r[j].norm();
                    rep.l2[j] += a * a * dx;
                    if a > rep.max_abs[j] {
                        rep.max_abs[j] = a;
                    }
                    if a > worst {
                        worst = a;
                        rep.worst_point = (x, t);
                    }
                }
                rep.n_points += 1;
            }
        }
        let nt = self.times.len().max(1) as f64;
        rep.l2 = rep.l2.map(|v| (v / nt).sqrt());
        rep
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_abs: [f64; 2],
    /// `(dx sum |r|^2 / n_t)^{1/2}` per component.
    pub l2: [f64; 2],
    pub worst_point: (f64, f64),
    pub x_order: usize,
    pub t_order: usize,
    pub margin: usize,
    pub n_points: usize,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.max_abs[0].max(self.max_abs[1])
    }

    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "max_abs_1: {}", fmt_num(self.max_abs[0]));
        let _ = writeln!(s, "max_abs_2: {}", fmt_num(self.max_abs[1]));
        let _ = writeln!(s, "l2_1: {}", fmt_num(self.l2[0]));
        let _ = writeln!(s, "l2_2: {}", fmt_num(self.l2[1]));
        let _ = writeln!(s, "worst_x: {}", fmt_num(self.worst_point.0));
        let _ = writeln!(s, "worst_t: {}", fmt_num(self.worst_point.1));
        let _ = writeln!(s, "x_order: {}", self.x_order);
        let _ = writeln!(s, "t_order: {}", self.t_order);
        let _ = writeln!(s, "margin: {}", self.margin);
        let _ = writeln!(s, "points: {}", self.n_points);
        s
    }
}

/// Pointwise residual of `psi` on the interior nodes at every `grid.t_samples`.
pub fn pde_residual_field(
    psi: &FieldSampler,
    cfg: &CouplingConfig,
    w: &AmplitudeVector,
    spec: &ModulationSpec,
    potential: &PotentialSpec,
    grid: &GridSpec,
) -> Result<ResidualField> {
    let n = grid.n_x;
    if n < 2 * MARGIN + 1 {
        return Err(Error::GridTooSmall { n, need: 2 * MARGIN + 1 });
    }
    let nodes = grid.nodes();
    let dx = grid.dx();
    let interior = MARGIN..n - MARGIN;
    let v: Vec<Complex> = nodes[interior.clone()].iter().map(|&x| potential.value(x)).collect::<Result<_>>()?;
    let sampled = SampledModulation::new(spec, &nodes)?;
    let a0 = cfg.a0();
    let values = grid
        .t_samples
        .par_iter()
        .map(|&t| {
            let center = psi(t)?;
            if center.len() != n {
                return Err(Error::Grid(format!("sampler returned {} nodes, grid has {n}", center.len())));
            }
            let mut shifted = Vec::with_capacity(6);
            for k in [-3isize, -2, -1, 1, 2, 3] {
                shifted.push(psi(t + k as f64 * TIME_STEP)?);
            }
            let at = |k: isize, i: usize| -> [Complex; 2] {
                match k {
                    0 => center[i],
                    k if k < 0 => shifted[(k + 3) as usize][i],
                    k => shifted[(k + 2) as usize][i],
                }
            };
            let mu0 = cfg.mu0.value(t)?;
            let (wp, wm) = weights(cfg, w, t)?;
            let factors = sampled.time_factors(t);
            let row = interior
                .clone()
                .zip(&v)
                .map(|(i, &vi)| {
                    let pt = fd::first(|k| vec2(at(k, i)), &fd::D1_ORDER6, TIME_STEP);
                    let pxx = fd::second8(|k| vec2(center[(i as isize + k) as usize]), dx);
                    let p = center[i];
                    let ap = a0.apply(p);
                    let g = sampled.gij(i, wp, wm, &factors);
                    let (n1, n2) = (p[0].norm_sqr(), p[1].norm_sqr());
                    let nl = [g.g11 * n1 + g.g12 * n2, g.g21 * n1 + g.g22 * n2];
                    let i_unit = Complex::new(0.0, 1.0);
                    let r = |j: usize| {
                        i_unit * pt.0[j] + pxx.0[j] - ap[j] * mu0 - vi * p[j] - p[j] * nl[j]
                    };
                    [r(0), r(1)]
                })
                .collect::<Vec<_>>();
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualField { times: grid.t_samples.clone(), x: nodes[interior].to_vec(), values })
}

pub fn pde_residual(
    psi: &FieldSampler,
    cfg: &CouplingConfig,
    w: &AmplitudeVector,
    spec: &ModulationSpec,
    potential: &PotentialSpec,
    grid: &GridSpec,
) -> Result<ResidualReport> {
    Ok(pde_residual_field(psi, cfg, w, spec, potential, grid)?.report(grid.dx()))
}

/// Residual of a constructed solution on its own grid at `t_samples`.
pub fn solution_residual(sol: &ExactSolution, spec: &ModulationSpec, t_samples: &[f64]) -> Result<ResidualReport> {
    let grid = sol.grid.with_times(t_samples.to_vec())?;
    let sampler = |t: f64| sol.psi_on_grid(t);
    pde_residual(&sampler, &sol.cfg, &sol.w, spec, &sol.potential, &grid)
}

/// Two-component vector with the arithmetic the stencils need.
#[derive(Debug, Clone, Copy)]
struct Vec2([Complex; 2]);

fn vec2(p: [Complex; 2]) -> Vec2 {
    Vec2(p)
}

impl std::ops::Add for Vec2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec2([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec2([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Vec2([self.0[0] * s, self.0[1] * s])
    }
}

/// `max |Psi^dagger Psi - P1(t) R^2(x)|` over the nodes and `t_samples`.
pub fn power_check(sol: &ExactSolution, t_samples: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in t_samples {
        let psi = sol.psi_on_grid(t)?;
        let fac = sol.factorized_power(t)?;
        for (p, f) in psi.iter().zip(&fac) {
            worst = worst.max((p[0].norm_sqr() + p[1].norm_sqr() - f).abs());
        }
    }
    Ok(worst)
}

/// `int Psi^dagger M Psi dx` as a plain node sum times `dx`.
pub fn quadratic_charge(field: &[[Complex; 2]], m: &ComplexMatrix2, dx: f64) -> f64 {
    field.iter().map(|p| m.quadratic_form(*p).re).sum::<f64>() * dx
}

fn max_relative_drift(values: &[f64]) -> f64 {
    let q0 = values[0];
    values.iter().map(|q| (q - q0).abs() / q0.abs()).fold(0.0, f64::max)
}

/// `max_t |Q~(t) - Q~(0)| / |Q~(0)|` with `Q~ = int Psi^dagger eta Psi`.
pub fn qtilde_drift(trajectory: &Trajectory, cfg: &CouplingConfig) -> Result<f64> {
    let eta = eta_metric(cfg)?;
    let q: Vec<f64> = trajectory.fields.iter().map(|f| quadratic_charge(f, &eta, trajectory.dx)).collect();
    if q.is_empty() {
        return Err(Error::Parameter("trajectory has no recorded fields".into()));
    }
    Ok(max_relative_drift(&q))
}

/// Same drift for the plain power `int Psi^dagger Psi`.
pub fn power_drift(trajectory: &Trajectory) -> Result<f64> {
    if trajectory.power.is_empty() {
        return Err(Error::Parameter("trajectory has no recorded power".into()));
    }
    Ok(max_relative_drift(&trajectory.power))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lossgain::Mu0Family;
    use crate::{FieldExpr, SpaceTimeField, TimeExpr};
    use crate::solutions::{AmplitudeProfile, FamilySpec, ScaleProfile};
    use std::f64::consts::PI;

    fn w() -> AmplitudeVector {
        AmplitudeVector::new(1.0, 1.0, PI / 6.0, 2.0 * PI / 3.0).unwrap()
    }

    fn soliton(cfg: &CouplingConfig, n: usize) -> ExactSolution {
        let fam = FamilySpec::Similarity {
            scale: ScaleProfile::Uniform,
            amplitude: AmplitudeProfile::Sech { m: -1.0, sigma: -0.5 },
        };
        let grid = GridSpec::new(-15.0, 15.0, n, vec![]).unwrap();
        ExactSolution::build(cfg, &w(), &fam, &grid).unwrap()
    }

    fn g_field() -> SpaceTimeField {
        SpaceTimeField::separable(FieldExpr::SechPower { sigma: 0.2, n: 1 }, TimeExpr::Cosine { omega: 1.3, phase: 0.2 })
    }

    #[test]
    fn zero_field_has_zero_residual() {
        let cfg = CouplingConfig::new(0.5, 0.7, PI / 3.0, Mu0Family::Constant(1.0)).unwrap();
        let grid = GridSpec::new(-5.0, 5.0, 64, vec![0.0, 1.0]).unwrap();
        let spec = ModulationSpec::from_profile(FieldExpr::Constant(1.0), FieldExpr::Constant(0.0), SpaceTimeField::zero());
        let z = |_t: f64| Ok(vec![[Complex::new(0.0, 0.0); 2]; 64]);
        let r = pde_residual(&z, &cfg, &w(), &spec, &PotentialSpec::FreeSpace, &grid).unwrap();
        assert_eq!(r.max(), 0.0);
        assert_eq!(r.n_points, 2 * (64 - 2 * MARGIN));
    }

    #[test]
    fn soliton_residual_and_sensitivity() {
        let cfg = CouplingConfig::new(0.5, 0.7, PI / 3.0, Mu0Family::Constant(1.0)).unwrap();
        let sol = soliton(&cfg, 2048);
        let spec = sol.modulation(FieldExpr::Constant(0.3), g_field());
        let times = GridSpec::uniform_times(0.0, 5.0, 6);
        let r = solution_residual(&sol, &spec, &times).unwrap();
        assert!(r.max() < 1e-8, "{}", r.to_text());
        let bad = |t: f64| Ok(sol.psi_on_grid(t)?.iter().map(|p| [p[0] * 1.001, p[1] * 1.001]).collect());
        let grid = sol.grid.with_times(times).unwrap();
        let r = pde_residual(&bad, &cfg, &w(), &spec, &sol.potential, &grid).unwrap();
        assert!(r.max() > 1e-4);
    }

    #[test]
    fn residual_converges_with_grid() {
        let cfg = CouplingConfig::decoupled();
        let spec_for = |s: &ExactSolution| s.modulation(FieldExpr::Constant(0.0), SpaceTimeField::zero());
        let coarse = soliton(&cfg, 121);
        let fine = soliton(&cfg, 241);
        let rc = solution_residual(&coarse, &spec_for(&coarse), &[0.5]).unwrap().max();
        let rf = solution_residual(&fine, &spec_for(&fine), &[0.5]).unwrap().max();
        assert!(rf < 1e-10 || rc / rf > 64.0, "{rc} {rf}");
    }

    #[test]
    fn power_factorization() {
        let cfg = CouplingConfig::new(0.5, 0.7, PI / 3.0, Mu0Family::Constant(1.0)).unwrap();
        let sol = soliton(&cfg, 256);
        let times = GridSpec::uniform_times(0.0, 15.0, 31);
        assert!(power_check(&sol, &times).unwrap() < 1e-12);
        let sol = soliton(&CouplingConfig::decoupled(), 256);
        assert!(power_check(&sol, &times).unwrap() < 1e-13);
    }

    #[test]
    fn report_text_lines() {
        let rep = ResidualReport {
            max_abs: [1e-9, 2.5e-9],
            l2: [0.0, 0.1],
            worst_point: (0.5, 1.0),
            x_order: 8,
            t_order: 6,
            margin: 4,
            n_points: 10,
        };
        let text = rep.to_text();
        assert!(text.lines().all(|l| l.contains(": ")));
        assert!(text.starts_with("max_abs_1: 1e-9\nmax_abs_2: 2.5e-9\n"));
    }
}
