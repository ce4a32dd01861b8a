//! Gauge potential, the non-unitary transform `U(t)`, the power factor `P1(t)` and the
//! pseudo-hermiticity metric.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::modulation::AmplitudeVector;
use crate::scalar::Real;
use crate::specfun;

/// `|eps0^2|` below this is the exceptional point.
pub const REGIME_TOLERANCE: f64 = 1e-12;

/// Dense 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> ComplexMatrix2<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(z, z, z, z)
    }

    pub fn identity() -> Self {
        Self::diag(Complex::new(T::one(), T::zero()), Complex::new(T::one(), T::zero()))
    }

    pub fn diag(a: Complex<T>, d: Complex<T>) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(a, z, z, d)
    }

    pub fn sigma1() -> Self {
        let (z, o) = (Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero()));
        Self::new(z, o, o, z)
    }

    pub fn sigma2() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(z, Complex::new(T::zero(), -T::one()), Complex::new(T::zero(), T::one()), z)
    }

    pub fn sigma3() -> Self {
        Self::diag(Complex::new(T::one(), T::zero()), Complex::new(-T::one(), T::zero()))
    }

    /// Raising matrix `[[0, 1], [0, 0]]`.
    pub fn sigma_plus() -> Self {
        let (z, o) = (Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero()));
        Self::new(z, o, z, z)
    }

    /// Lowering matrix `[[0, 0], [1, 0]]`.
    pub fn sigma_minus() -> Self {
        let (z, o) = (Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero()));
        Self::new(z, z, o, z)
    }

    /// Projector onto the first component.
    pub fn p_plus() -> Self {
        Self::diag(Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()))
    }

    /// Projector onto the second component.
    pub fn p_minus() -> Self {
        Self::diag(Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero()))
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> Complex<T> {
        self.m[0][0] + self.m[1][1]
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.norm() == T::zero() || !(d.re.is_finite() && d.im.is_finite()) {
            return Err(Error::Domain("singular 2x2 matrix".into()));
        }
        let m = &self.m;
        Ok(Self::new(m[1][1] / d, -m[0][1] / d, -m[1][0] / d, m[0][0] / d))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let m = &self.m;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        let m = &self.m;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Hermitian form `v^dagger M v`.
    pub fn quadratic_form(&self, v: [Complex<T>; 2]) -> Complex<T> {
        let mv = self.apply(v);
        v[0].conj() * mv[0] + v[1].conj() * mv[1]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> T {
        self.m.iter().flatten().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<T: Real> Mul for ComplexMatrix2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl<T: Real> Add for ComplexMatrix2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl<T: Real> Sub for ComplexMatrix2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Neg for ComplexMatrix2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_real(-T::one())
    }
}

/// Piecewise-linear `mu0(t)` table with exact cumulative integrals from `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSamples<T> {
    t: Vec<T>,
    values: Vec<T>,
    integral: Vec<T>,
}

impl<T: Real> TabulatedSamples<T> {
    pub fn new(t: Vec<T>, values: Vec<T>) -> Result<Self> {
        if t.len() < 2 || t.len() != values.len() {
            return Err(Error::Parameter("tabulated samples need >= 2 matching (t, value) pairs".into()));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parameter("tabulated sample times must be strictly increasing".into()));
        }
        if t.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("tabulated samples must be finite".into()));
        }
        if t[0] > T::zero() || *t.last().unwrap() < T::zero() {
            return Err(Error::Parameter("tabulated sample range must contain t = 0".into()));
        }
        let mut integral = vec![T::zero(); t.len()];
        for i in 1..t.len() {
            integral[i] = integral[i - 1] + (t[i] - t[i - 1]) * (values[i] + values[i - 1]) / T::lit(2.0);
        }
        let mut s = Self { t, values, integral };
        let offset = s.raw_integral(T::zero());
        for v in &mut s.integral {
            *v -= offset;
        }
        Ok(s)
    }

    pub fn times(&self) -> &[T] {
        &self.t
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    fn locate(&self, t: T) -> Result<usize> {
        let (lo, hi) = (self.t[0], *self.t.last().unwrap());
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfTableRange { t: t.as_f64(), lo: lo.as_f64(), hi: hi.as_f64() });
        }
        let i = self.t.partition_point(|&x| x <= t);
        Ok(i.clamp(1, self.t.len() - 1) - 1)
    }

    pub fn value(&self, t: T) -> Result<T> {
        let i = self.locate(t)?;
        let w = (t - self.t[i]) / (self.t[i + 1] - self.t[i]);
        Ok(self.values[i] + w * (self.values[i + 1] - self.values[i]))
    }

    fn raw_integral(&self, t: T) -> T {
        let i = self.locate(t).unwrap_or(0);
        let h = t - self.t[i];
        let slope = (self.values[i + 1] - self.values[i]) / (self.t[i + 1] - self.t[i]);
        self.integral[i] + h * self.values[i] + slope * h * h / T::lit(2.0)
    }

    pub fn integral(&self, t: T) -> Result<T> {
        self.locate(t)?;
        Ok(self.raw_integral(t))
    }
}

/// Time modulation of the coupling and loss-gain strengths.
#[derive(Debug, Clone, PartialEq)]
pub enum Mu0Family<T> {
    Constant(T),
    Cosine { omega0: T },
    /// `mu0 = (2/sqrt(pi)) e^{-t^2}`.
    Gaussian,
    Tabulated(TabulatedSamples<T>),
}

impl<T: Real> Mu0Family<T> {
    pub fn value(&self, t: T) -> Result<T> {
        Ok(match self {
            Mu0Family::Constant(c) => *c,
            Mu0Family::Cosine { omega0 } => (*omega0 * t).cos(),
            Mu0Family::Gaussian => T::FRAC_2_SQRT_PI() * (-t * t).exp(),
            Mu0Family::Tabulated(tab) => tab.value(t)?,
        })
    }

    /// `mu(t) = int_0^t mu0`.
    pub fn integral(&self, t: T) -> Result<T> {
        Ok(match self {
            Mu0Family::Constant(c) => *c * t,
            Mu0Family::Cosine { omega0 } => {
                if *omega0 == T::zero() {
                    t
                } else {
                    (*omega0 * t).sin() / *omega0
                }
            }
            Mu0Family::Gaussian => specfun::erf(t),
            Mu0Family::Tabulated(tab) => tab.integral(t)?,
        })
    }
}

/// Loss-gain strength `Gamma`, coupling `beta = |beta| e^{i theta3}` and their common modulation.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingConfig<T> {
    pub gamma: T,
    pub beta_abs: T,
    pub theta3: T,
    pub mu0: Mu0Family<T>,
}

/// Spectrum of `A0`: real, exceptional point, or imaginary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralRegime<T> {
    PositiveEps { eps0: T },
    ZeroEps,
    /// `eps0` holds `|eps0|`.
    ImaginaryEps { eps0: T },
}

impl<T: Real> SpectralRegime<T> {
    pub fn eps0(&self) -> T {
        match *self {
            SpectralRegime::PositiveEps { eps0 } | SpectralRegime::ImaginaryEps { eps0 } => eps0,
            SpectralRegime::ZeroEps => T::zero(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SpectralRegime::PositiveEps { .. } => "positive",
            SpectralRegime::ZeroEps => "zero",
            SpectralRegime::ImaginaryEps { .. } => "imaginary",
        }
    }
}

/// `mu(t)` together with the regime-aware trigonometric factors shared by `U`, `T+-`, `F+-`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsTerms<T> {
    pub mu: T,
    /// `eps = mu eps0` (`|eps|` in the imaginary regime).
    pub eps: T,
    /// `sin(eps)/eps` (hyperbolic in the imaginary regime).
    pub sinc: T,
    /// `cos(eps)` (hyperbolic in the imaginary regime).
    pub cos: T,
    /// `sin^2(eps)/eps^2`.
    pub sin2_ratio: T,
    /// `sin(2 eps)/(2 eps)`.
    pub sinc2: T,
    /// `cos(2 eps)`.
    pub cos2: T,
}

/// `sin(sqrt y)/sqrt y` continued to `sinh(sqrt -y)/sqrt -y` for `y < 0`.
pub fn sinc_signed<T: Real>(y: T) -> T {
    if y.abs() < T::lit(1e-3) {
        let c = [1.0, -1.0 / 6.0, 1.0 / 120.0, -1.0 / 5040.0, 1.0 / 362_880.0, -1.0 / 39_916_800.0];
        c.iter().rev().fold(T::zero(), |acc, &k| acc * y + T::lit(k))
    } else if y > T::zero() {
        let e = y.sqrt();
        e.sin() / e
    } else {
        let e = (-y).sqrt();
        e.sinh() / e
    }
}

/// `cos(sqrt y)` continued to `cosh(sqrt -y)` for `y < 0`.
pub fn cos_signed<T: Real>(y: T) -> T {
    if y >= T::zero() {
        y.sqrt().cos()
    } else {
        (-y).sqrt().cosh()
    }
}

impl<T: Real> CouplingConfig<T> {
    pub fn new(gamma: T, beta_abs: T, theta3: T, mu0: Mu0Family<T>) -> Result<Self> {
        if !(gamma.is_finite() && beta_abs.is_finite() && theta3.is_finite()) {
            return Err(Error::Parameter("coupling parameters must be finite".into()));
        }
        if beta_abs < T::zero() {
            return Err(Error::Parameter("|beta| must be non-negative".into()));
        }
        if let Mu0Family::Constant(c) = mu0 {
            if !c.is_finite() {
                return Err(Error::Parameter("mu0 constant must be finite".into()));
            }
        }
        if let Mu0Family::Cosine { omega0 } = mu0 {
            if !omega0.is_finite() {
                return Err(Error::Parameter("mu0 frequency must be finite".into()));
            }
        }
        Ok(Self { gamma, beta_abs, theta3, mu0 })
    }

    /// No coupling and no loss-gain.
    pub fn decoupled() -> Self {
        Self { gamma: T::zero(), beta_abs: T::zero(), theta3: T::zero(), mu0: Mu0Family::Constant(T::one()) }
    }

    pub fn beta(&self) -> Complex<T> {
        Complex::from_polar(self.beta_abs, self.theta3)
    }

    /// Signed `eps0^2 = |beta|^2 - Gamma^2`.
    pub fn eps0_sq(&self) -> T {
        self.beta_abs * self.beta_abs - self.gamma * self.gamma
    }

    pub fn regime(&self) -> SpectralRegime<T> {
        let e2 = self.eps0_sq();
        if e2.abs() < T::lit(REGIME_TOLERANCE) {
            SpectralRegime::ZeroEps
        } else if e2 > T::zero() {
            SpectralRegime::PositiveEps { eps0: e2.sqrt() }
        } else {
            SpectralRegime::ImaginaryEps { eps0: (-e2).sqrt() }
        }
    }

    /// `A0 = [[i Gamma, beta*], [beta, -i Gamma]]`.
    pub fn a0(&self) -> ComplexMatrix2<T> {
        let b = self.beta();
        ComplexMatrix2::new(
            Complex::new(T::zero(), self.gamma),
            b.conj(),
            b,
            Complex::new(T::zero(), -self.gamma),
        )
    }

    /// Gauge potential `A(t) = mu0(t) A0`.
    pub fn a_matrix(&self, t: T) -> Result<ComplexMatrix2<T>> {
        Ok(self.a0().scale_real(self.mu0.value(t)?))
    }

    pub fn eps_terms(&self, t: T) -> Result<EpsTerms<T>> {
        let mu = self.mu0.integral(t)?;
        if !mu.is_finite() {
            return Err(Error::NonFinite(format!("mu({t})")));
        }
        let y = match self.regime() {
            SpectralRegime::ZeroEps => T::zero(),
            _ => mu * mu * self.eps0_sq(),
        };
        let sinc = sinc_signed(y);
        let four = T::lit(4.0);
        Ok(EpsTerms {
            mu,
            eps: y.abs().sqrt(),
            sinc,
            cos: cos_signed(y),
            sin2_ratio: sinc * sinc,
            sinc2: sinc_signed(four * y),
            cos2: cos_signed(four * y),
        })
    }
}

/// `mu(t)` and `eps(t) = mu eps0` (`mu |eps0|` in the imaginary regime).
pub fn mu_epsilon<T: Real>(cfg: &CouplingConfig<T>, t: T) -> Result<(T, T)> {
    let mu = cfg.mu0.integral(t)?;
    Ok((mu, mu * cfg.regime().eps0()))
}

/// The transform `U(t) = exp(-i A0 mu(t))` in the regime-specific closed form.
pub fn u_matrix<T: Real>(cfg: &CouplingConfig<T>, t: T) -> Result<ComplexMatrix2<T>> {
    let e = cfg.eps_terms(t)?;
    let minus_i = Complex::new(T::zero(), -T::one());
    Ok(ComplexMatrix2::identity().scale_real(e.cos) + cfg.a0().scale(minus_i * e.mu * e.sinc))
}

/// `W^dagger U^dagger U W` evaluated from the matrix definition.
pub fn p1_definition<T: Real>(cfg: &CouplingConfig<T>, w: &AmplitudeVector<T>, t: T) -> Result<T> {
    let uw = u_matrix(cfg, t)?.apply(w.vector());
    Ok(uw[0].norm_sqr() + uw[1].norm_sqr())
}

/// Closed-form power factor, valid for a real spectrum.
pub fn p1_closed_form<T: Real>(cfg: &CouplingConfig<T>, w: &AmplitudeVector<T>, t: T) -> Result<T> {
    let eps0 = match cfg.regime() {
        SpectralRegime::PositiveEps { eps0 } => eps0,
        _ => return Err(Error::Domain("closed-form P1 requires |beta| > Gamma".into())),
    };
    let (_, eps) = mu_epsilon(cfg, t)?;
    let (b0, b3) = (w.b0(), w.b3());
    let d = crate::modulation::d_constant(cfg, w);
    let two = T::lit(2.0);
    Ok(b0
        * (T::one()
            + two * cfg.gamma * d / (eps0 * eps0) * eps.sin().powi(2)
            + b3 * cfg.gamma / (b0 * eps0) * (two * eps).sin()))
}

/// Power factor `P1(t)`; closed form for a real spectrum, matrix definition otherwise.
pub fn p1_factor<T: Real>(cfg: &CouplingConfig<T>, w: &AmplitudeVector<T>, t: T) -> Result<T> {
    match cfg.regime() {
        SpectralRegime::PositiveEps { .. } => p1_closed_form(cfg, w, t),
        _ => p1_definition(cfg, w, t),
    }
}

/// Hermitian positive-definite `eta` with `A0^dagger eta = eta A0` and `tr eta = 2`.
pub fn eta_metric<T: Real>(cfg: &CouplingConfig<T>) -> Result<ComplexMatrix2<T>> {
    if !matches!(cfg.regime(), SpectralRegime::PositiveEps { .. }) {
        return Err(Error::NoMetric { gamma: cfg.gamma.as_f64(), beta_abs: cfg.beta_abs.as_f64() });
    }
    let one = Complex::new(T::one(), T::zero());
    let q = Complex::new(T::zero(), -cfg.gamma / cfg.beta_abs) * Complex::from_polar(T::one(), -cfg.theta3);
    Ok(ComplexMatrix2::new(one, q, q.conj(), one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn fig1(gamma: f64, beta: f64, mu0: Mu0Family<f64>) -> CouplingConfig<f64> {
        CouplingConfig::new(gamma, beta, PI / 3.0, mu0).unwrap()
    }

    fn fig1_w() -> AmplitudeVector<f64> {
        AmplitudeVector::new(1.0, 1.0, PI / 6.0, 2.0 * PI / 3.0).unwrap()
    }

    // generic matrix exponential by scaling and squaring of a Taylor series
    fn expm(a: ComplexMatrix2<f64>) -> ComplexMatrix2<f64> {
        let s = 6;
        let a = a.scale_real(0.5f64.powi(s));
        let mut term = ComplexMatrix2::identity();
        let mut sum = term;
        for k in 1..30 {
            term = (term * a).scale_real(1.0 / k as f64);
            sum = sum + term;
        }
        for _ in 0..s {
            sum = sum * sum;
        }
        sum
    }

    #[test]
    fn mu_examples() {
        let c = fig1(0.5, 0.7, Mu0Family::Constant(1.0));
        let (mu, eps) = mu_epsilon(&c, 2.0).unwrap();
        assert_eq!(mu, 2.0);
        assert_abs_diff_eq!(eps, 2.0 * 0.24f64.sqrt(), epsilon = 1e-15);
        let c = fig1(0.5, 0.7, Mu0Family::Cosine { omega0: 1.0 });
        assert_abs_diff_eq!(mu_epsilon(&c, PI).unwrap().0, 0.0, epsilon = 1e-15);
        let c = fig1(0.5, 0.7, Mu0Family::Gaussian);
        assert_abs_diff_eq!(mu_epsilon(&c, 1.0).unwrap().0, 0.842_700_792_949_714_9, epsilon = 1e-15);
    }

    #[test]
    fn tabulated_integral_and_range() {
        let t: Vec<f64> = (-10..=40).map(|i| i as f64 * 0.1).collect();
        let v: Vec<f64> = t.iter().map(|&t| 2.0 * t + 1.0).collect();
        let tab = TabulatedSamples::new(t, v).unwrap();
        let fam = Mu0Family::Tabulated(tab);
        assert_abs_diff_eq!(fam.integral(0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fam.integral(1.55).unwrap(), 1.55 * 1.55 + 1.55, epsilon = 1e-13);
        assert_abs_diff_eq!(fam.integral(-0.75).unwrap(), 0.75 * 0.75 - 0.75, epsilon = 1e-13);
        assert!(matches!(fam.integral(4.5), Err(Error::OutOfTableRange { .. })));
        assert!(TabulatedSamples::new(vec![0.0, 1.0, 1.0], vec![1.0; 3]).is_err());
        assert!(TabulatedSamples::new(vec![1.0, 2.0], vec![1.0; 2]).is_err());
    }

    #[test]
    fn regime_classification() {
        assert!(matches!(fig1(0.5, 0.7, Mu0Family::Constant(1.0)).regime(), SpectralRegime::PositiveEps { .. }));
        assert_eq!(fig1(0.5, 0.5, Mu0Family::Constant(1.0)).regime(), SpectralRegime::ZeroEps);
        let r = fig1(0.5, 0.3, Mu0Family::Constant(1.0)).regime();
        assert!(matches!(r, SpectralRegime::ImaginaryEps { .. }));
        assert_abs_diff_eq!(r.eps0(), 0.4, epsilon = 1e-15);
    }

    #[test]
    fn decoupled_is_identity() {
        let c = CouplingConfig::<f64>::decoupled();
        for t in [0.0, 1.3, 50.0] {
            assert_eq!(u_matrix(&c, t).unwrap(), ComplexMatrix2::identity());
        }
    }

    #[test]
    fn matches_matrix_exponential_in_all_regimes() {
        for (g, b) in [(0.5, 0.7), (0.5, 0.5), (0.5, 0.3), (0.0, 0.9)] {
            let c = fig1(g, b, Mu0Family::Constant(1.0));
            for t in [0.3, 1.7, 4.0] {
                let arg = c.a0().scale(Complex::new(0.0, -t));
                let d = u_matrix(&c, t).unwrap().max_abs_diff(&expm(arg));
                assert!(d < 1e-11, "regime {g},{b} t={t}: {d}");
            }
        }
    }

    #[test]
    fn zero_eps_is_linear() {
        let c = fig1(0.5, 0.5, Mu0Family::Constant(1.0));
        let u = u_matrix(&c, 2.0).unwrap();
        let expect = ComplexMatrix2::identity() + c.a0().scale(Complex::new(0.0, -2.0));
        assert!(u.max_abs_diff(&expect) < 1e-15);
        let near = fig1(0.5, (0.25f64 + 1e-10).sqrt(), Mu0Family::Constant(1.0));
        assert!(u_matrix(&near, 2.0).unwrap().max_abs_diff(&expect) < 1e-9);
    }

    #[test]
    fn defining_ode_fig1b() {
        let c = fig1(0.5, 0.7, Mu0Family::Constant(1.0));
        let h = 1e-4;
        for t in [0.5, 2.0, 7.3] {
            let du = (u_matrix(&c, t + h).unwrap() - u_matrix(&c, t - h).unwrap()).scale_real(0.5 / h);
            let rhs = (c.a_matrix(t).unwrap() * u_matrix(&c, t).unwrap()).scale(Complex::new(0.0, -1.0));
            assert!(du.max_abs_diff(&rhs) < 1e-8);
        }
    }

    #[test]
    fn p1_fig1_bounds_and_cross_check() {
        let c = fig1(0.5, 0.7, Mu0Family::Constant(1.0));
        let w = fig1_w();
        assert_abs_diff_eq!(w.b0(), 2.0, epsilon = 1e-15);
        let upper = 2.0 * (1.0 + 2.0 * 0.5 * 0.85 / 0.24);
        for i in 0..100 {
            let t = i as f64 * 0.15;
            let p = p1_factor(&c, &w, t).unwrap();
            assert!(p >= 2.0 - 1e-12 && p <= upper + 1e-12);
            assert_abs_diff_eq!(p, p1_definition(&c, &w, t).unwrap(), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(p1_factor(&c, &w, PI / 0.24f64.sqrt()).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p1_factor(&c, &w, PI / 2.0 / 0.24f64.sqrt()).unwrap(), upper, epsilon = 1e-12);
    }

    #[test]
    fn p1_constant_without_loss_gain() {
        let c = fig1(0.0, 0.7, Mu0Family::Constant(1.0));
        let w = fig1_w();
        for t in [0.0, 3.0, 11.0] {
            assert_abs_diff_eq!(p1_factor(&c, &w, t).unwrap(), 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn p1_exceptional_point_quadratic_growth() {
        let c = fig1(0.5, 0.5, Mu0Family::Constant(1.0));
        let w = fig1_w();
        let p = |t: f64| p1_factor(&c, &w, t).unwrap() - w.b0();
        for t in [1.0, 3.0, 10.0] {
            assert_abs_diff_eq!(p(2.0 * t) / p(t), 4.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn p1_closed_form_rejects_other_regimes() {
        let c = fig1(0.5, 0.5, Mu0Family::Constant(1.0));
        assert!(p1_closed_form(&c, &fig1_w(), 1.0).is_err());
    }

    // solve A0^dagger eta = eta A0 for hermitian eta = [[a, c + i d], [c - i d, b]] numerically
    fn eta_oracle(c: &CouplingConfig<f64>) -> ComplexMatrix2<f64> {
        let basis = |k: usize| -> ComplexMatrix2<f64> {
            let z = Complex::new(0.0, 0.0);
            let o = Complex::new(1.0, 0.0);
            match k {
                0 => ComplexMatrix2::new(o, z, z, z),
                1 => ComplexMatrix2::new(z, z, z, o),
                2 => ComplexMatrix2::new(z, o, o, z),
                _ => ComplexMatrix2::new(z, Complex::new(0.0, 1.0), Complex::new(0.0, -1.0), z),
            }
        };
        let a = c.a0();
        // 8 real equations, 4 unknowns; add tr eta = 2 and solve normal equations
        let mut rows: Vec<[f64; 5]> = Vec::new();
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            for part in 0..2 {
                let mut row = [0.0; 5];
                for (k, r) in row.iter_mut().take(4).enumerate() {
                    let e = basis(k);
                    let z = (a.adjoint() * e - e * a).m[i][j];
                    *r = if part == 0 { z.re } else { z.im };
                }
                rows.push(row);
            }
        }
        rows.push([1.0, 1.0, 0.0, 0.0, 2.0]);
        let mut n = [[0.0; 5]; 4];
        for r in &rows {
            for i in 0..4 {
                for j in 0..5 {
                    n[i][j] += r[i] * r[j];
                }
            }
        }
        for p in 0..4 {
            let piv = (p..4).max_by(|&x, &y| n[x][p].abs().total_cmp(&n[y][p].abs())).unwrap();
            n.swap(p, piv);
            for r in 0..4 {
                if r != p {
                    let f = n[r][p] / n[p][p];
                    for col in 0..5 {
                        n[r][col] -= f * n[p][col];
                    }
                }
            }
        }
        let x: Vec<f64> = (0..4).map(|i| n[i][4] / n[i][i]).collect();
        (0..4).fold(ComplexMatrix2::zero(), |acc, k| acc + basis(k).scale_real(x[k]))
    }

    #[test]
    fn eta_identity_without_loss_gain() {
        let c = fig1(0.0, 0.7, Mu0Family::Constant(1.0));
        assert_eq!(eta_metric(&c).unwrap(), ComplexMatrix2::identity());
    }

    #[test]
    fn eta_fig1b_pseudo_hermitian() {
        let c = fig1(0.5, 0.7, Mu0Family::Constant(1.0));
        let eta = eta_metric(&c).unwrap();
        let a = c.a0();
        assert!((a.adjoint() * eta).max_abs_diff(&(eta * a)) < 1e-12);
        assert_abs_diff_eq!(eta.trace().re, 2.0, epsilon = 1e-15);
        assert!(eta.m[0][0].re > 0.0 && eta.det().re > 0.0);
        assert!(eta.max_abs_diff(&eta_oracle(&c)) < 1e-12);
    }

    #[test]
    fn eta_absent_without_real_spectrum() {
        assert!(matches!(eta_metric(&fig1(0.7, 0.5, Mu0Family::Constant(1.0))), Err(Error::NoMetric { .. })));
        assert!(matches!(eta_metric(&fig1(0.5, 0.5, Mu0Family::Constant(1.0))), Err(Error::NoMetric { .. })));
    }

    #[test]
    fn sinc_series_joins_direct_branch() {
        for y in [9.99e-4f64, -9.99e-4] {
            let direct = if y > 0.0 { y.sqrt().sin() / y.sqrt() } else { (-y).sqrt().sinh() / (-y).sqrt() };
            assert_abs_diff_eq!(sinc_signed(y), direct, epsilon = 3e-16);
        }
    }
}
