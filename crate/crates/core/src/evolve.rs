//! Strang-split propagation of the coupled equation, perturbation probes and power-trend
//! classification.
//!
//! The grid is treated as periodic with period `n_x dx`. Dispersion is applied spectrally;
//! the local part (potential, coupling, loss-gain, cubic terms) is advanced pointwise by RK4
//! over half steps. The splitting is unconditionally stable for the dispersive part; accuracy
//! needs `dt k_max^2` moderate, with `k_max = pi / dx`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::modulation::{weights, SampledModulation};
use crate::output::csv_table;
use crate::solutions::{ExactSolution, PotentialSpec};
use crate::{AmplitudeVector, Complex, CouplingConfig, ModulationSpec};

pub const BLOWUP_THRESHOLD: f64 = 1e6;
/// Peak damping rate inside an absorbing layer.
pub const ABSORB_RATE: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Periodic,
    /// Cosine-ramp damping over `width` at both ends.
    AbsorbingMask { width: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    pub grid: GridSpec,
    pub dt: f64,
    pub t_final: f64,
    pub boundary: Boundary,
    pub record_stride: usize,
}

impl EvolveConfig {
    pub fn new(grid: GridSpec, dt: f64, t_final: f64, boundary: Boundary, record_stride: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) || !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::Parameter(format!("need dt > 0 and t_final > 0, got dt = {dt}, t_final = {t_final}")));
        }
        if record_stride == 0 {
            return Err(Error::Parameter("record_stride must be positive".into()));
        }
        if let Boundary::AbsorbingMask { width } = boundary {
            if !(width > 0.0 && 2.0 * width < grid.x_max - grid.x_min) {
                return Err(Error::Parameter(format!("absorbing width {width} does not fit the domain")));
            }
        }
        Ok(Self { grid, dt, t_final, boundary, record_stride })
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// `dt (pi / dx)^2`.
    pub fn dispersion_budget(&self) -> f64 {
        self.dt * (std::f64::consts::PI / self.grid.dx()).powi(2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    pub dx: f64,
    pub fields: Vec<Vec<[Complex; 2]>>,
    /// `int |Psi|^2 dx` at each record.
    pub power: Vec<f64>,
}

impl Trajectory {
    pub fn to_csv(&self) -> String {
        let rows = self.times.iter().zip(&self.fields).flat_map(|(&t, f)| {
            self.x.iter().zip(f).map(move |(&x, p)| vec![t, x, p[0].re, p[0].im, p[1].re, p[1].im])
        });
        csv_table(&["t", "x", "re_psi1", "im_psi1", "re_psi2", "im_psi2"], rows)
    }

    pub fn power_csv(&self) -> String {
        csv_table(&["t", "power"], self.times.iter().zip(&self.power).map(|(&t, &p)| vec![t, p]))
    }

    pub fn last(&self) -> &[[Complex; 2]] {
        self.fields.last().map(|v| v.as_slice()).unwrap_or(&[])
    }
}

pub fn grid_power(field: &[[Complex; 2]], dx: f64) -> f64 {
    field.iter().map(|p| p[0].norm_sqr() + p[1].norm_sqr()).sum::<f64>() * dx
}

/// `||a - b|| / ||b||` in the discrete L2 norm.
pub fn relative_l2_error(a: &[[Complex; 2]], b: &[[Complex; 2]]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (p, q) in a.iter().zip(b) {
        num += (p[0] - q[0]).norm_sqr() + (p[1] - q[1]).norm_sqr();
        den += q[0].norm_sqr() + q[1].norm_sqr();
    }
    (num / den).sqrt()
}

struct Stepper<'a> {
    cfg: &'a CouplingConfig,
    w: &'a AmplitudeVector,
    sampled: SampledModulation<f64>,
    v: Vec<Complex>,
    mask: Option<Vec<f64>>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    propagator: Vec<Complex>,
    a0: [[Complex; 2]; 2],
}

/// Coefficients of the local operator at one time.
struct LocalCoeffs {
    mu0: f64,
    wp: f64,
    wm: f64,
    factors: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(
        cfg: &'a CouplingConfig,
        w: &'a AmplitudeVector,
        spec: &ModulationSpec,
        potential: &PotentialSpec,
        ecfg: &EvolveConfig,
    ) -> Result<Self> {
        let grid = &ecfg.grid;
        let nodes = grid.nodes();
        let n = grid.n_x;
        let v = nodes.iter().map(|&x| potential.value(x)).collect::<Result<Vec<_>>>()?;
        let sampled = SampledModulation::new(spec, &nodes)?;
        let dx = grid.dx();
        let period = n as f64 * dx;
        let propagator = (0..n)
            .map(|j| {
                let jj = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
                let k = 2.0 * std::f64::consts::PI * jj / period;
                Complex::from_polar(1.0 / n as f64, -k * k * ecfg.dt)
            })
            .collect();
        let mask = match ecfg.boundary {
            Boundary::Periodic => None,
            Boundary::AbsorbingMask { width } => Some(
                nodes
                    .iter()
                    .map(|&x| {
                        let d = (x - grid.x_min).min(grid.x_max - x);
                        if d >= width {
                            1.0
                        } else {
                            let c = (std::f64::consts::FRAC_PI_2 * d / width).cos();
                            (-ecfg.dt * ABSORB_RATE * c * c).exp()
                        }
                    })
                    .collect(),
            ),
        };
        let mut planner = FftPlanner::new();
        Ok(Self {
            cfg,
            w,
            sampled,
            v,
            mask,
            fft: planner.plan_fft_forward(n),
            ifft: planner.plan_fft_inverse(n),
            propagator,
            a0: cfg.a0().m,
        })
    }

    fn coeffs(&self, t: f64) -> Result<LocalCoeffs> {
        let (wp, wm) = weights(self.cfg, self.w, t)?;
        Ok(LocalCoeffs { mu0: self.cfg.mu0.value(t)?, wp, wm, factors: self.sampled.time_factors(t) })
    }

    /// `d psi / dt = -i [mu0 A0 + V + N(psi)] psi` at node `i`.
    fn rhs(&self, i: usize, c: &LocalCoeffs, p: [Complex; 2]) -> [Complex; 2] {
        let g = self.sampled.gij(i, c.wp, c.wm, &c.factors);
        let (n1, n2) = (p[0].norm_sqr(), p[1].norm_sqr());
        let a = &self.a0;
        let h0 = (a[0][0] * p[0] + a[0][1] * p[1]) * c.mu0 + (self.v[i] + g.g11 * n1 + g.g12 * n2) * p[0];
        let h1 = (a[1][0] * p[0] + a[1][1] * p[1]) * c.mu0 + (self.v[i] + g.g21 * n1 + g.g22 * n2) * p[1];
        let mi = Complex::new(0.0, -1.0);
        [mi * h0, mi * h1]
    }

    /// RK4 over `[t, t + h]` at every node.
    fn local(&self, psi: &mut [[Complex; 2]], t: f64, h: f64) -> Result<()> {
        let c0 = self.coeffs(t)?;
        let c1 = self.coeffs(t + 0.5 * h)?;
        let c2 = self.coeffs(t + h)?;
        psi.par_iter_mut().enumerate().for_each(|(i, p)| {
            let add = |a: [Complex; 2], b: [Complex; 2], s: f64| [a[0] + b[0] * s, a[1] + b[1] * s];
            let k1 = self.rhs(i, &c0, *p);
            let k2 = self.rhs(i, &c1, add(*p, k1, 0.5 * h));
            let k3 = self.rhs(i, &c1, add(*p, k2, 0.5 * h));
            let k4 = self.rhs(i, &c2, add(*p, k3, h));
            for j in 0..2 {
                p[j] += (k1[j] + (k2[j] + k3[j]) * 2.0 + k4[j]) * (h / 6.0);
            }
        });
        Ok(())
    }

    fn dispersion(&self, psi: &mut [[Complex; 2]], buf: &mut [Complex]) {
        for j in 0..2 {
            for (b, p) in buf.iter_mut().zip(psi.iter()) {
                *b = p[j];
            }
            self.fft.process(buf);
            for (b, k) in buf.iter_mut().zip(&self.propagator) {
                *b *= k;
            }
            self.ifft.process(buf);
            for (b, p) in buf.iter().zip(psi.iter_mut()) {
                p[j] = *b;
            }
        }
    }

    fn step(&self, psi: &mut [[Complex; 2]], t: f64, dt: f64, buf: &mut [Complex]) -> Result<()> {
        self.local(psi, t, 0.5 * dt)?;
        self.dispersion(psi, buf);
        self.local(psi, t + 0.5 * dt, 0.5 * dt)?;
        if let Some(m) = &self.mask {
            for (p, s) in psi.iter_mut().zip(m) {
                p[0] *= *s;
                p[1] *= *s;
            }
        }
        Ok(())
    }
}

fn max_abs(psi: &[[Complex; 2]]) -> f64 {
    psi.iter().map(|p| p[0].norm().max(p[1].norm())).fold(0.0, f64::max)
}

/// Time and peak amplitude at which a run crossed [`BLOWUP_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Blowup {
    pub t: f64,
    pub max_abs: f64,
}

/// Propagates `psi0` from `t = 0` to `t_final`.
pub fn integrate(
    psi0: &[[Complex; 2]],
    cfg: &CouplingConfig,
    w: &AmplitudeVector,
    spec: &ModulationSpec,
    potential: &PotentialSpec,
    ecfg: &EvolveConfig,
) -> Result<Trajectory> {
    match integrate_until_blowup(psi0, cfg, w, spec, potential, ecfg)? {
        (tr, None) => Ok(tr),
        (_, Some(b)) => Err(Error::BlowupDetected { t: b.t, max_abs: b.max_abs }),
    }
}

/// Like [`integrate`] but stops at blow-up and returns the records up to that point.
pub fn integrate_until_blowup(
    psi0: &[[Complex; 2]],
    cfg: &CouplingConfig,
    w: &AmplitudeVector,
    spec: &ModulationSpec,
    potential: &PotentialSpec,
    ecfg: &EvolveConfig,
) -> Result<(Trajectory, Option<Blowup>)> {
    let grid = &ecfg.grid;
    if psi0.len() != grid.n_x {
        return Err(Error::Grid(format!("initial data has {} nodes, grid has {}", psi0.len(), grid.n_x)));
    }
    if psi0.iter().any(|p| !(p[0].re.is_finite() && p[0].im.is_finite() && p[1].re.is_finite() && p[1].im.is_finite())) {
        return Err(Error::NonFinite("initial data".into()));
    }
    let stepper = Stepper::new(cfg, w, spec, potential, ecfg)?;
    let dx = grid.dx();
    let mut psi = psi0.to_vec();
    let mut buf = vec![Complex::new(0.0, 0.0); grid.n_x];
    let mut traj = Trajectory { times: vec![0.0], x: grid.nodes(), dx, fields: vec![psi.clone()], power: vec![grid_power(&psi, dx)] };
    let steps = ecfg.steps();
    for s in 0..steps {
        let t = s as f64 * ecfg.dt;
        stepper.step(&mut psi, t, ecfg.dt, &mut buf)?;
        let peak = max_abs(&psi);
        let t_next = (s + 1) as f64 * ecfg.dt;
        if !(peak <= BLOWUP_THRESHOLD) {
            traj.times.push(t_next);
            traj.power.push(grid_power(&psi, dx));
            traj.fields.push(psi);
            return Ok((traj, Some(Blowup { t: t_next, max_abs: peak })));
        }
        if (s + 1) % ecfg.record_stride == 0 || s + 1 == steps {
            traj.times.push(t_next);
            traj.power.push(grid_power(&psi, dx));
            traj.fields.push(psi.clone());
        }
    }
    Ok((traj, None))
}

/// Evolves the exact initial data of `sol` on its own grid.
pub fn integrate_solution(sol: &ExactSolution, spec: &ModulationSpec, ecfg: &EvolveConfig) -> Result<Trajectory> {
    if sol.grid.nodes() != ecfg.grid.nodes() {
        return Err(Error::Grid("solution grid differs from the evolution grid".into()));
    }
    integrate(&sol.psi_on_grid(0.0)?, &sol.cfg, &sol.w, spec, &sol.potential, ecfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub times: Vec<f64>,
    /// `||Psi - Psi~||` at each record.
    pub deviation: Vec<f64>,
    /// `||Psi~(0) - Psi(0)||`.
    pub initial: f64,
    /// `max_t deviation / initial`, zero for an unperturbed run.
    pub growth_factor: f64,
}

/// Multiplicative complex noise `1 + amplitude (a + i b)`, `a, b` uniform on `[-1, 1]`.
pub fn perturb(psi: &[[Complex; 2]], amplitude: f64, seed: u64) -> Vec<[Complex; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    psi.iter()
        .map(|p| {
            let mut q = *p;
            for c in q.iter_mut() {
                let z = Complex::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
                *c *= Complex::new(1.0, 0.0) + z * amplitude;
            }
            q
        })
        .collect()
}

/// Evolves the exact and the perturbed initial data and tracks their distance.
pub fn stability_probe(
    sol: &ExactSolution,
    spec: &ModulationSpec,
    amplitude: f64,
    seed: u64,
    ecfg: &EvolveConfig,
) -> Result<GrowthReport> {
    let psi0 = sol.psi_on_grid(0.0)?;
    let noisy = perturb(&psi0, amplitude, seed);
    let (a, b) = rayon::join(
        || integrate(&psi0, &sol.cfg, &sol.w, spec, &sol.potential, ecfg),
        || integrate(&noisy, &sol.cfg, &sol.w, spec, &sol.potential, ecfg),
    );
    let (a, b) = (a?, b?);
    let dist = |x: &[[Complex; 2]], y: &[[Complex; 2]]| {
        (x.iter().zip(y).map(|(p, q)| (p[0] - q[0]).norm_sqr() + (p[1] - q[1]).norm_sqr()).sum::<f64>() * a.dx).sqrt()
    };
    let deviation: Vec<f64> = a.fields.iter().zip(&b.fields).map(|(x, y)| dist(x, y)).collect();
    let initial = dist(&psi0, &noisy);
    let growth_factor = if initial > 0.0 { deviation.iter().cloned().fold(0.0, f64::max) / initial } else { 0.0 };
    Ok(GrowthReport { times: a.times, deviation, initial, growth_factor })
}

/// Qualitative trend of `P(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerClass {
    Flat,
    Oscillating,
    /// Bounded and converging to a constant.
    Settling,
    Unbounded,
}

impl PowerClass {
    pub fn name(self) -> &'static str {
        match self {
            PowerClass::Flat => "flat",
            PowerClass::Oscillating => "oscillating",
            PowerClass::Settling => "settling",
            PowerClass::Unbounded => "unbounded",
        }
    }
}

pub const FLAT_TOLERANCE: f64 = 1e-5;
pub const UNBOUNDED_RATIO: f64 = 10.0;
/// Last-half to full-run variation ratio below which a bounded trend counts as settling.
pub const SETTLING_RATIO: f64 = 1e-2;

fn variation(p: &[f64]) -> f64 {
    let (lo, hi) = p.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    hi - lo
}

pub fn classify_power(power: &[f64]) -> PowerClass {
    let n = power.len();
    if n < 4 {
        return PowerClass::Flat;
    }
    let mean = power.iter().sum::<f64>() / n as f64;
    let full = variation(power);
    if full <= FLAT_TOLERANCE * mean.abs() {
        return PowerClass::Flat;
    }
    let tail = &power[n / 2..];
    let monotone = tail.windows(2).all(|w| w[1] >= w[0]);
    if power[n - 1] / power[0] > UNBOUNDED_RATIO && monotone {
        return PowerClass::Unbounded;
    }
    if variation(tail) <= SETTLING_RATIO * full {
        PowerClass::Settling
    } else {
        PowerClass::Oscillating
    }
}

/// Least-squares slope of `ln(P - P(0))` against `ln t` over `t in [t0, t1]`.
pub fn power_law_exponent(times: &[f64], power: &[f64], t0: f64, t1: f64) -> Option<f64> {
    let p0 = *power.first()?;
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(power)
        .filter(|(t, p)| **t >= t0 && **t <= t1 && **p > p0)
        .map(|(t, p)| (t.ln(), (p - p0).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    Some(sxy / sxx)
}
