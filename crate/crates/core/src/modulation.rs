//! Transformed-frame coefficient matrices and the space-time nonlinearity profiles `g_ij`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lossgain::{ComplexMatrix2, CouplingConfig};
use crate::scalar::Real;

/// `|W^dagger F W|` below this cannot carry a nonlinearity profile.
pub const DEGENERATE_WEIGHT: f64 = 1e-14;

/// Constant two-component amplitude `W = (W1 e^{i theta1}, W2 e^{i theta2})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeVector<T> {
    pub w1: T,
    pub w2: T,
    pub theta1: T,
    pub theta2: T,
}

impl<T: Real> AmplitudeVector<T> {
    pub fn new(w1: T, w2: T, theta1: T, theta2: T) -> Result<Self> {
        if ![w1, w2, theta1, theta2].iter().all(|v| v.is_finite()) {
            return Err(Error::Parameter("amplitude vector entries must be finite".into()));
        }
        if w1 < T::zero() || w2 < T::zero() {
            return Err(Error::Parameter("W1 and W2 must be non-negative".into()));
        }
        if w1 * w1 + w2 * w2 <= T::zero() {
            return Err(Error::Parameter("b0 = W1^2 + W2^2 must be positive".into()));
        }
        Ok(Self { w1, w2, theta1, theta2 })
    }

    pub fn b0(&self) -> T {
        self.w1 * self.w1 + self.w2 * self.w2
    }

    pub fn b3(&self) -> T {
        self.w1 * self.w1 - self.w2 * self.w2
    }

    pub fn vector(&self) -> [Complex<T>; 2] {
        [Complex::from_polar(self.w1, self.theta1), Complex::from_polar(self.w2, self.theta2)]
    }
}

/// `D = Gamma + (2/b0) W1 W2 |beta| sin(theta2 - theta1 - theta3)`.
pub fn d_constant<T: Real>(cfg: &CouplingConfig<T>, w: &AmplitudeVector<T>) -> T {
    cfg.gamma + T::lit(2.0) / w.b0() * w.w1 * w.w2 * cfg.beta_abs * (w.theta2 - w.theta1 - cfg.theta3).sin()
}

/// `T+- = (Gamma mu / eps^2) sin^2 eps +- sin(2 eps)/(2 eps)`.
pub fn t_pm<T: Real>(cfg: &CouplingConfig<T>, t: T) -> Result<(T, T)> {
    let e = cfg.eps_terms(t)?;
    let a = cfg.gamma * e.mu * e.sin2_ratio;
    Ok((a + e.sinc2, a - e.sinc2))
}

/// Closed forms of `F+- = U^dagger P+- U` and `K(xi1, xi2) = xi1 U^{-1} P+ U + xi2 U^{-1} P- U`.
pub fn f_pm_and_k<T: Real>(
    cfg: &CouplingConfig<T>,
    t: T,
    xi1: T,
    xi2: T,
) -> Result<(ComplexMatrix2<T>, ComplexMatrix2<T>, ComplexMatrix2<T>)> {
    let e = cfg.eps_terms(t)?;
    let (tp, tm) = t_pm(cfg, t)?;
    let half = T::lit(0.5);
    let beta = cfg.beta();
    let s0 = ComplexMatrix2::identity();
    let s3 = ComplexMatrix2::sigma3();
    let sp = ComplexMatrix2::sigma_plus();
    let sm = ComplexMatrix2::sigma_minus();
    let off = sp.scale(beta.conj()) - sm.scale(beta);
    let i = Complex::new(T::zero(), T::one());
    let gm = cfg.gamma * e.mu;
    let f = |tk: T, sign: T| {
        s0.scale_real(half + gm * tk) + off.scale(-i * tk * e.mu) + s3.scale_real(gm * e.sinc2 + sign * half * e.cos2)
    };
    let fp = f(tp, T::one());
    let fm = f(tm, -T::one());
    let d = xi1 - xi2;
    let k = s0.scale_real((xi1 + xi2) * half)
        + (sp.scale(beta.conj() * tm) + sm.scale(beta * tp)).scale(i * d * e.mu)
        + s3.scale_real(d * (half - e.mu * e.mu * cfg.beta_abs * cfg.beta_abs * e.sin2_ratio));
    Ok((fp, fm, k))
}

/// Quadratic forms `(W^dagger F+ W, W^dagger F- W)` in closed form.
pub fn w_f_w<T: Real>(cfg: &CouplingConfig<T>, w: &AmplitudeVector<T>, t: T) -> Result<(T, T)> {
    let e = cfg.eps_terms(t)?;
    let (tp, tm) = t_pm(cfg, t)?;
    let d = d_constant(cfg, w);
    let half = T::lit(0.5);
    let (b0, b3) = (w.b0(), w.b3());
    let shared = b3 * cfg.gamma * e.mu * e.sinc2;
    let tilt = b3 * half * e.cos2;
    Ok((b0 * (half + tp * e.mu * d) + shared + tilt, b0 * (half + tm * e.mu * d) + shared - tilt))
}

/// Time factor of a separable `G(x, t)` term.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeExpr<T> {
    Constant(T),
    Cosine { omega: T, phase: T },
    Exponential { rate: T },
    Gaussian { width: T },
}

impl<T: Real> TimeExpr<T> {
    pub fn value(&self, t: T) -> T {
        match self {
            TimeExpr::Constant(c) => *c,
            TimeExpr::Cosine { omega, phase } => (*omega * t + *phase).cos(),
            TimeExpr::Exponential { rate } => (*rate * t).exp(),
            TimeExpr::Gaussian { width } => (-(t / *width).powi(2)).exp(),
        }
    }
}

/// Samples on a uniform or non-uniform grid, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedField<T> {
    pub x: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Real> TabulatedField<T> {
    pub fn new(x: Vec<T>, values: Vec<T>) -> Result<Self> {
        if x.len() < 2 || x.len() != values.len() {
            return Err(Error::Parameter("tabulated field needs >= 2 matching samples".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parameter("tabulated field abscissae must be strictly increasing".into()));
        }
        Ok(Self { x, values })
    }

    pub fn value(&self, x: T) -> Result<T> {
        let (lo, hi) = (self.x[0], *self.x.last().unwrap());
        if !(x >= lo && x <= hi) {
            return Err(Error::Domain(format!("x = {x} outside tabulated field [{lo}, {hi}]")));
        }
        let i = self.x.partition_point(|&v| v <= x).clamp(1, self.x.len() - 1) - 1;
        let w = (x - self.x[i]) / (self.x[i + 1] - self.x[i]);
        Ok(self.values[i] + w * (self.values[i + 1] - self.values[i]))
    }
}

/// Closed-form scalar field on `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldExpr<T> {
    Constant(T),
    /// `2 sigma sech^{6n}(x)`.
    SechPower { sigma: T, n: u32 },
    /// `2 sigma / (1 + alpha cos(omega x))^3`.
    CosinePower { sigma: T, alpha: T, omega: T },
    /// `2 sigma e^{3 E x^2}`.
    GaussianGrowth { sigma: T, energy: T },
    Tabulated(TabulatedField<T>),
    /// `sum_k c_k f_k(x)`.
    Combination(Vec<(T, FieldExpr<T>)>),
}

impl<T: Real> FieldExpr<T> {
    pub fn value(&self, x: T) -> Result<T> {
        let two = T::lit(2.0);
        Ok(match self {
            FieldExpr::Constant(c) => *c,
            FieldExpr::SechPower { sigma, n } => two * *sigma * (T::one() / x.cosh()).powi(6 * *n as i32),
            FieldExpr::CosinePower { sigma, alpha, omega } => {
                two * *sigma / (T::one() + *alpha * (*omega * x).cos()).powi(3)
            }
            FieldExpr::GaussianGrowth { sigma, energy } => two * *sigma * (T::lit(3.0) * *energy * x * x).exp(),
            FieldExpr::Tabulated(tab) => tab.value(x)?,
            FieldExpr::Combination(terms) => {
                let mut acc = T::zero();
                for (c, f) in terms {
                    acc += *c * f.value(x)?;
                }
                acc
            }
        })
    }
}

/// `G(x, t) = sum_k g_k(x) h_k(t)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpaceTimeField<T> {
    pub terms: Vec<(FieldExpr<T>, TimeExpr<T>)>,
}

impl<T: Real> SpaceTimeField<T> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn separable(space: FieldExpr<T>, time: TimeExpr<T>) -> Self {
        Self { terms: vec![(space, time)] }
    }

    pub fn value(&self, x: T, t: T) -> Result<T> {
        let mut acc = T::zero();
        for (s, h) in &self.terms {
            acc += s.value(x)? * h.value(t);
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Free functions `f1(x)`, `f2(x)` and `G(x, t)` that tailor `g_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationSpec<T> {
    pub f1: FieldExpr<T>,
    pub f2: FieldExpr<T>,
    pub g: SpaceTimeField<T>,
}

impl<T: Real> ModulationSpec<T> {
    /// `f1 = f + split`, `f2 = f - split`, so `(f1 + f2)/2 = f`.
    pub fn from_profile(f: FieldExpr<T>, split: FieldExpr<T>, g: SpaceTimeField<T>) -> Self {
        let one = T::one();
        Self {
            f1: FieldExpr::Combination(vec![(one, f.clone()), (one, split.clone())]),
            f2: FieldExpr::Combination(vec![(one, f), (-one, split)]),
            g,
        }
    }

    /// `f(x) = (f1 + f2)/2`.
    pub fn f(&self, x: T) -> Result<T> {
        Ok((self.f1.value(x)? + self.f2.value(x)?) / T::lit(2.0))
    }
}

/// The four nonlinearity profiles at one `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gij<T> {
    pub g11: T,
    pub g12: T,
    pub g21: T,
    pub g22: T,
}

fn checked_weights<T: Real>(cfg: &CouplingConfig<T>, w: &AmplitudeVector<T>, t: T) -> Result<(T, T)> {
    let (wp, wm) = w_f_w(cfg, w, t)?;
    for v in [wp, wm] {
        if !(v.abs() >= T::lit(DEGENERATE_WEIGHT)) {
            return Err(Error::DegenerateWeight { t: t.as_f64(), value: v.as_f64() });
        }
    }
    Ok((wp, wm))
}

/// Symmetric choice from the pointwise values `f1`, `f2`, `G` and the weights.
pub fn gij_from_values<T: Real>(f1: T, f2: T, g: T, wp: T, wm: T) -> Gij<T> {
    let two = T::lit(2.0);
    Gij {
        g11: (f1 + g) / (two * wp),
        g21: (f1 - g) / (two * wp),
        g22: (f2 + g) / (two * wm),
        g12: (f2 - g) / (two * wm),
    }
}

/// Symmetric `g_ij(x, t)` assembled from `spec`.
pub fn build_gij<T: Real>(
    cfg: &CouplingConfig<T>,
    w: &AmplitudeVector<T>,
    spec: &ModulationSpec<T>,
    x: T,
    t: T,
) -> Result<Gij<T>> {
    let (wp, wm) = checked_weights(cfg, w, t)?;
    Ok(gij_from_values(spec.f1.value(x)?, spec.f2.value(x)?, spec.g.value(x, t)?, wp, wm))
}

/// General parameterization with `g22(x, t)` left free.
pub fn build_gij_general<T: Real>(
    cfg: &CouplingConfig<T>,
    w: &AmplitudeVector<T>,
    f1: &FieldExpr<T>,
    f2: &FieldExpr<T>,
    g22: &SpaceTimeField<T>,
    x: T,
    t: T,
) -> Result<Gij<T>> {
    let (wp, wm) = checked_weights(cfg, w, t)?;
    let (f1, f2) = (f1.value(x)?, f2.value(x)?);
    let f = (f1 + f2) / T::lit(2.0);
    let g22 = g22.value(x, t)?;
    Ok(Gij { g11: (f1 - f + g22 * wm) / wp, g21: (f - g22 * wm) / wp, g12: (f2 - g22 * wm) / wm, g22 })
}

/// `f1`, `f2` and the `G` space factors precomputed on fixed nodes.
#[derive(Debug, Clone)]
pub struct SampledModulation<T> {
    pub f1: Vec<T>,
    pub f2: Vec<T>,
    g_space: Vec<Vec<T>>,
    g_time: Vec<TimeExpr<T>>,
}

impl<T: Real> SampledModulation<T> {
    pub fn new(spec: &ModulationSpec<T>, nodes: &[T]) -> Result<Self> {
        let sample = |f: &FieldExpr<T>| nodes.iter().map(|&x| f.value(x)).collect::<Result<Vec<T>>>();
        let f1 = sample(&spec.f1)?;
        let f2 = sample(&spec.f2)?;
        if f1.iter().zip(&f2).any(|(a, b)| !(*a + *b).is_finite()) {
            return Err(Error::NonFinite("f(x) on the working grid".into()));
        }
        let mut g_space = Vec::new();
        let mut g_time = Vec::new();
        for (s, h) in &spec.g.terms {
            g_space.push(sample(s)?);
            g_time.push(h.clone());
        }
        Ok(Self { f1, f2, g_space, g_time })
    }

    /// Time factors of every `G` term at `t`.
    pub fn time_factors(&self, t: T) -> Vec<T> {
        self.g_time.iter().map(|h| h.value(t)).collect()
    }

    pub fn g_at(&self, i: usize, factors: &[T]) -> T {
        self.g_space.iter().zip(factors).fold(T::zero(), |acc, (s, &h)| acc + s[i] * h)
    }

    /// Evaluates `g_ij` at node `i` given the weights and time factors for the current `t`.
    pub fn gij(&self, i: usize, wp: T, wm: T, factors: &[T]) -> Gij<T> {
        gij_from_values(self.f1[i], self.f2[i], self.g_at(i, factors), wp, wm)
    }
}

/// `W^dagger F W` at `t`, rejecting degenerate weights.
pub fn weights<T: Real>(cfg: &CouplingConfig<T>, w: &AmplitudeVector<T>, t: T) -> Result<(T, T)> {
    checked_weights(cfg, w, t)
}
