//! Jacobi elliptic functions, the complete elliptic integral of the first kind,
//! and the error-function family.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MODULUS_SLACK: f64 = 1e-12;
const AGM_MAX_ITER: usize = 48;

/// Squared modulus `m = r^2` of the Jacobi functions `sn(u, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus<T> {
    m: T,
}

impl<T: Real> EllipticModulus<T> {
    /// Validates `m`, clamping values within `1e-12` of `[0, 1]`.
    pub fn new(m: T) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::Domain(format!("elliptic modulus {m} is not finite")));
        }
        let slack = T::lit(MODULUS_SLACK);
        if m < -slack || m > T::one() + slack {
            return Err(Error::Domain(format!("elliptic modulus {m} outside [0, 1]")));
        }
        Ok(Self { m: m.max(T::zero()).min(T::one()) })
    }

    pub fn value(&self) -> T {
        self.m
    }
}

/// `(sn, cn, dn)` triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple<T> {
    pub sn: T,
    pub cn: T,
    pub dn: T,
}

/// Jacobi elliptic functions by the arithmetic-geometric mean with descending Landen
/// back-substitution; closed forms at `m = 0` and `m = 1`.
pub fn jacobi_elliptic<T: Real>(u: T, modulus: EllipticModulus<T>) -> Result<JacobiTriple<T>> {
    if !u.is_finite() {
        return Err(Error::Domain(format!("jacobi argument {u} is not finite")));
    }
    let m = modulus.value();
    let one = T::one();
    if m == T::zero() {
        return Ok(JacobiTriple { sn: u.sin(), cn: u.cos(), dn: one });
    }
    if m == one {
        let sech = one / u.cosh();
        return Ok(JacobiTriple { sn: u.tanh(), cn: sech, dn: sech });
    }
    if u == T::zero() {
        return Ok(JacobiTriple { sn: T::zero(), cn: one, dn: one });
    }

    let eps = T::epsilon();
    let mut a = one;
    let mut b = (one - m).sqrt();
    let mut ratios = [T::zero(); AGM_MAX_ITER];
    let mut n = 0;
    let mut two_pow = one;
    loop {
        let c = (a - b) / T::lit(2.0);
        if c.abs() <= eps * a || n == AGM_MAX_ITER {
            break;
        }
        let a_next = (a + b) / T::lit(2.0);
        b = (a * b).sqrt();
        a = a_next;
        ratios[n] = c / a;
        n += 1;
        two_pow = two_pow * T::lit(2.0);
    }

    let mut phi = two_pow * a * u;
    for k in (0..n).rev() {
        let s = ratios[k] * phi.sin();
        phi = (phi + s.max(-one).min(one).asin()) / T::lit(2.0);
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = ((one - m) + m * cn * cn).sqrt();
    Ok(JacobiTriple { sn, cn, dn })
}

/// Arithmetic-geometric mean of two non-negative numbers.
pub fn agm<T: Real>(a0: T, b0: T) -> T {
    let mut a = a0;
    let mut b = b0;
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= T::epsilon() * a {
            break;
        }
        let a_next = (a + b) / T::lit(2.0);
        b = (a * b).sqrt();
        a = a_next;
    }
    (a + b) / T::lit(2.0)
}

/// Complete elliptic integral of the first kind `K(m)`; infinite at `m = 1`.
pub fn complete_elliptic_k<T: Real>(modulus: EllipticModulus<T>) -> T {
    let m = modulus.value();
    if m == T::one() {
        return T::infinity();
    }
    T::PI() / (T::lit(2.0) * agm(T::one(), (T::one() - m).sqrt()))
}

/// Error function and imaginary error function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErfFamily<T> {
    pub erf: T,
    pub erfi: T,
    /// Set when `erfi` exceeded the representable range and was capped.
    pub erfi_overflow: bool,
}

pub fn erf_family<T: Real>(x: T) -> Result<ErfFamily<T>> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("erf argument {x} is not finite")));
    }
    let (erfi, erfi_overflow) = erfi_checked(x);
    Ok(ErfFamily { erf: erf(x), erfi, erfi_overflow })
}

const ERF_SERIES_LIMIT: f64 = 3.0;
const ERFI_SERIES_LIMIT: f64 = 6.0;

pub fn erf<T: Real>(x: T) -> T {
    let ax = x.abs();
    let v = if ax < T::lit(ERF_SERIES_LIMIT) {
        erf_series(ax)
    } else {
        T::one() - erfc_continued_fraction(ax)
    };
    if x < T::zero() {
        -v
    } else {
        v
    }
}

pub fn erfc<T: Real>(x: T) -> T {
    if x >= T::lit(ERF_SERIES_LIMIT) {
        erfc_continued_fraction(x)
    } else if x <= -T::lit(ERF_SERIES_LIMIT) {
        T::lit(2.0) - erfc_continued_fraction(-x)
    } else {
        T::one() - erf(x)
    }
}

// (2/sqrt(pi)) e^{-x^2} sum (2x^2)^n x / (2n+1)!!, all terms positive
fn erf_series<T: Real>(x: T) -> T {
    let two_x2 = T::lit(2.0) * x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0u32;
    while n < 500 {
        n += 1;
        term = term * two_x2 / T::lit(f64::from(2 * n + 1));
        sum += term;
        if term <= T::epsilon() * sum {
            break;
        }
    }
    sum * T::FRAC_2_SQRT_PI() * (-x * x).exp()
}

// modified Lentz evaluation of erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
fn erfc_continued_fraction<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value().sqrt();
    let mut f = x;
    let mut c = f;
    let mut d = T::zero();
    for k in 1..2000 {
        let a = T::lit(f64::from(k) / 2.0);
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = T::one() / d;
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    (-x * x).exp() / (f * T::PI().sqrt())
}

/// Imaginary error function `erfi(x) = -i erf(ix)`, capped at the largest finite value.
pub fn erfi<T: Real>(x: T) -> T {
    erfi_checked(x).0
}

fn erfi_checked<T: Real>(x: T) -> (T, bool) {
    let ax = x.abs();
    let (v, overflow) = if ax < T::lit(ERFI_SERIES_LIMIT) {
        (erfi_series(ax), false)
    } else {
        let log_v = ax * ax + (T::FRAC_2_SQRT_PI() * dawson_asymptotic(ax)).ln();
        if log_v >= T::max_value().ln() {
            (T::max_value(), true)
        } else {
            (log_v.exp(), false)
        }
    };
    (if x < T::zero() { -v } else { v }, overflow)
}

// (2/sqrt(pi)) sum x^{2n+1} / (n! (2n+1))
fn erfi_series<T: Real>(x: T) -> T {
    let x2 = x * x;
    let mut power = x;
    let mut sum = x;
    let mut n = 0u32;
    while n < 1000 {
        n += 1;
        power = power * x2 / T::lit(f64::from(n));
        let term = power / T::lit(f64::from(2 * n + 1));
        sum += term;
        if term <= T::epsilon() * sum && T::lit(f64::from(n)) > x2 {
            break;
        }
    }
    sum * T::FRAC_2_SQRT_PI()
}

// D(x) ~ (1/(2x)) sum (2n-1)!! / (2x^2)^n, truncated at the smallest term
fn dawson_asymptotic<T: Real>(x: T) -> T {
    let inv = T::one() / (T::lit(2.0) * x * x);
    let mut term = T::one();
    let mut sum = T::one();
    for n in 1..200 {
        let next = term * T::lit(f64::from(2 * n - 1)) * inv;
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        if term <= T::epsilon() * sum {
            break;
        }
    }
    sum / (T::lit(2.0) * x)
}

/// Dawson's integral `D(x) = e^{-x^2} int_0^x e^{t^2} dt`.
pub fn dawson<T: Real>(x: T) -> T {
    let ax = x.abs();
    let v = if ax < T::lit(ERFI_SERIES_LIMIT) {
        T::PI().sqrt() / T::lit(2.0) * (-ax * ax).exp() * erfi_series(ax)
    } else {
        dawson_asymptotic(ax)
    };
    if x < T::zero() {
        -v
    } else {
        v
    }
}
