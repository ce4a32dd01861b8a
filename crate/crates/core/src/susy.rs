//! Complex potentials and zero-energy modes generated by a superpotential `h(x)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::Complex;

/// Relative clamp distance from the box walls.
pub const BOX_CLAMP: f64 = 1e-8;
/// `|theta|` beyond which the phase is reported as singular.
pub const SINGULARITY_THRESHOLD: f64 = 50.0;
/// Grid-end amplitude, relative to the peak, above which a zero mode on an unbounded domain
/// is considered truncated rather than normalizable.
pub const TAIL_RATIO: f64 = 1e-3;

/// Linearly interpolated `h` samples with centered-difference slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSuperpotential {
    x: Vec<f64>,
    h: Vec<f64>,
    dh: Vec<f64>,
    theta: Vec<f64>,
}

impl TabulatedSuperpotential {
    pub fn new(x: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        if x.len() < 3 || x.len() != h.len() {
            return Err(Error::Parameter("tabulated superpotential needs >= 3 matching samples".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) || h.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("tabulated superpotential needs increasing x and finite h".into()));
        }
        let n = x.len();
        let dh = (0..n)
            .map(|i| {
                let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
                (h[b] - h[a]) / (x[b] - x[a])
            })
            .collect();
        let mut theta = vec![0.0; n];
        for i in 1..n {
            theta[i] = theta[i - 1] + 0.5 * (h[i] + h[i - 1]) * (x[i] - x[i - 1]);
        }
        let mut s = Self { x, h, dh, theta };
        if s.x[0] <= 0.0 && *s.x.last().unwrap() >= 0.0 {
            let off = s.theta_at(0.0)?;
            s.theta.iter_mut().for_each(|v| *v -= off);
        }
        Ok(s)
    }

    pub fn samples(&self) -> (&[f64], &[f64]) {
        (&self.x, &self.h)
    }

    fn cell(&self, x: f64) -> Result<usize> {
        let (lo, hi) = (self.x[0], *self.x.last().unwrap());
        if !(x >= lo && x <= hi) {
            return Err(Error::Domain(format!("x = {x} outside tabulated superpotential [{lo}, {hi}]")));
        }
        Ok(self.x.partition_point(|&v| v <= x).clamp(1, self.x.len() - 1) - 1)
    }

    fn lerp(&self, v: &[f64], x: f64) -> Result<f64> {
        let i = self.cell(x)?;
        let w = (x - self.x[i]) / (self.x[i + 1] - self.x[i]);
        Ok(v[i] + w * (v[i + 1] - v[i]))
    }

    fn theta_at(&self, x: f64) -> Result<f64> {
        let i = self.cell(x)?;
        let d = x - self.x[i];
        let slope = (self.h[i + 1] - self.h[i]) / (self.x[i + 1] - self.x[i]);
        Ok(self.theta[i] + self.h[i] * d + 0.5 * slope * d * d)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Superpotential {
    /// `h = w0 + w1 x + w2 x^3`.
    Polynomial { w0: f64, w1: f64, w2: f64 },
    /// `h = A - B e^{-a x}`.
    Exponential { a_amp: f64, b_amp: f64, rate: f64 },
    /// `h = -(pi/L) cot(pi x/L)` on `(0, L)`.
    Box { length: f64 },
    /// `h = N tanh x`.
    RosenMorse { n: f64 },
    Tabulated(TabulatedSuperpotential),
}

impl Superpotential {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Superpotential::Polynomial { w0, w1, w2 } => [w0, w1, w2].iter().all(|v| *v >= 0.0 && v.is_finite()),
            Superpotential::Exponential { a_amp, b_amp, rate } => {
                a_amp.is_finite() && b_amp.is_finite() && rate > 0.0 && rate.is_finite()
            }
            Superpotential::Box { length } => length > 0.0 && length.is_finite(),
            Superpotential::RosenMorse { n } => n > 0.0 && n.is_finite(),
            Superpotential::Tabulated(_) => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("superpotential parameters out of range: {self:?}")))
        }
    }

    /// Natural domain of `h`; `None` for the whole line.
    pub fn domain(&self) -> Option<(f64, f64)> {
        match self {
            Superpotential::Box { length } => Some((0.0, *length)),
            Superpotential::Tabulated(t) => Some((t.x[0], *t.x.last().unwrap())),
            _ => None,
        }
    }

    fn box_clamp(length: f64, x: f64) -> (f64, bool) {
        let d = BOX_CLAMP * length;
        if x < d {
            (d, true)
        } else if x > length - d {
            (length - d, true)
        } else {
            (x, false)
        }
    }

    /// True where the evaluation point is clamped away from a box wall.
    pub fn is_clamped(&self, x: f64) -> bool {
        match *self {
            Superpotential::Box { length } => Self::box_clamp(length, x).1,
            _ => false,
        }
    }

    fn check_box(length: f64, x: f64) -> Result<f64> {
        if !(0.0..=length).contains(&x) {
            return Err(Error::Domain(format!("x = {x} outside box (0, {length})")));
        }
        Ok(Self::box_clamp(length, x).0)
    }

    pub fn h(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Superpotential::Polynomial { w0, w1, w2 } => w0 + w1 * x + w2 * x.powi(3),
            Superpotential::Exponential { a_amp, b_amp, rate } => a_amp - b_amp * (-rate * x).exp(),
            Superpotential::Box { length } => {
                let x = Self::check_box(*length, x)?;
                let k = PI / length;
                -k / (k * x).tan()
            }
            Superpotential::RosenMorse { n } => n * x.tanh(),
            Superpotential::Tabulated(t) => t.lerp(&t.h, x)?,
        })
    }

    pub fn dh(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Superpotential::Polynomial { w1, w2, .. } => w1 + 3.0 * w2 * x * x,
            Superpotential::Exponential { b_amp, rate, .. } => b_amp * rate * (-rate * x).exp(),
            Superpotential::Box { length } => {
                let x = Self::check_box(*length, x)?;
                let k = PI / length;
                (k / (k * x).sin()).powi(2)
            }
            Superpotential::RosenMorse { n } => n / x.cosh().powi(2),
            Superpotential::Tabulated(t) => t.lerp(&t.dh, x)?,
        })
    }

    /// `theta = int h`, zero at the symmetry point (box centre) or at `x = 0`.
    pub fn theta(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Superpotential::Polynomial { w0, w1, w2 } => w0 * x + w1 * x * x / 2.0 + w2 * x.powi(4) / 4.0,
            Superpotential::Exponential { a_amp, b_amp, rate } => a_amp * x + b_amp / rate * ((-rate * x).exp_m1()),
            Superpotential::Box { length } => {
                let x = Self::check_box(*length, x)?;
                -(PI * x / length).sin().ln()
            }
            Superpotential::RosenMorse { n } => n * log_cosh(x),
            Superpotential::Tabulated(t) => t.theta_at(x)?,
        })
    }

    /// Effective Schrodinger potential `h^2 - h'`.
    pub fn v_eff(&self, x: f64) -> Result<f64> {
        Ok(self.h(x)?.powi(2) - self.dh(x)?)
    }
}

fn log_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// `V = -h' + i (h' - 2 h^2)`.
pub fn complex_potential(h: &Superpotential, x: f64) -> Result<Complex> {
    let (hv, dh) = (h.h(x)?, h.dh(x)?);
    Ok(Complex::new(-dh, dh - 2.0 * hv * hv))
}

/// Zero-energy mode `R0 = N0 e^{-theta}` with unit grid norm, and its phase `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroMode {
    pub r0: Vec<f64>,
    pub theta: Vec<f64>,
    pub norm: f64,
}

/// Trapezoid grid norm `(int f^2 dx)^{1/2}`.
pub fn grid_norm(values: &[f64], dx: f64) -> f64 {
    let n = values.len();
    let inner: f64 = values.iter().map(|v| v * v).sum();
    ((inner - 0.5 * (values[0].powi(2) + values[n - 1].powi(2))) * dx).sqrt()
}

pub fn zero_mode(h: &Superpotential, grid: &GridSpec) -> Result<ZeroMode> {
    h.validate()?;
    let nodes = grid.nodes();
    let theta = nodes.iter().map(|&x| h.theta(x)).collect::<Result<Vec<_>>>()?;
    let shift = theta.iter().cloned().fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = theta.iter().map(|t| (shift - t).exp()).collect();
    let peak = raw.iter().cloned().fold(0.0, f64::max);
    if h.domain().is_none() {
        let ends = raw[0].max(raw[raw.len() - 1]);
        if !(ends <= TAIL_RATIO * peak) {
            return Err(Error::NotNormalizable(format!(
                "grid-end amplitude ratio {:.3e} exceeds {TAIL_RATIO:.0e}",
                ends / peak
            )));
        }
    }
    let n_raw = grid_norm(&raw, grid.dx());
    if !(n_raw.is_finite() && n_raw > 0.0) {
        return Err(Error::NotNormalizable("grid norm is not finite and positive".into()));
    }
    let r0 = raw.iter().map(|v| v / n_raw).collect();
    Ok(ZeroMode { r0, theta, norm: shift.exp() / n_raw })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityKind {
    /// Evaluation clamped at a wall of a finite domain.
    Boundary,
    /// Divergent phase reaching the end of an unbounded grid.
    Tail,
    Interior,
}

impl SingularityKind {
    pub fn name(self) -> &'static str {
        match self {
            SingularityKind::Boundary => "boundary",
            SingularityKind::Tail => "tail",
            SingularityKind::Interior => "interior",
        }
    }
}

/// Contiguous run of grid nodes with a singular phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularRegion {
    pub start: f64,
    pub end: f64,
    pub kind: SingularityKind,
    pub max_abs_theta: f64,
}

pub fn phase_singularity_scan(h: &Superpotential, grid: &GridSpec) -> Result<Vec<SingularRegion>> {
    let mode = zero_mode(h, grid)?;
    let nodes = grid.nodes();
    let peak = mode.r0.iter().cloned().fold(0.0, f64::max);
    let n = nodes.len();
    let flagged: Vec<bool> = (0..n)
        .map(|i| {
            h.is_clamped(nodes[i])
                || (mode.theta[i].abs() > SINGULARITY_THRESHOLD && mode.r0[i] < 1e-10 * peak)
        })
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        if !flagged[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < n && flagged[i + 1] {
            i += 1;
        }
        let kind = if h.is_clamped(nodes[start]) || h.is_clamped(nodes[i]) {
            SingularityKind::Boundary
        } else if start == 0 || i == n - 1 {
            SingularityKind::Tail
        } else {
            SingularityKind::Interior
        };
        let max_abs_theta = mode.theta[start..=i].iter().map(|t| t.abs()).fold(0.0, f64::max);
        out.push(SingularRegion { start: nodes[start], end: nodes[i], kind, max_abs_theta });
        i += 1;
    }
    Ok(out)
}
