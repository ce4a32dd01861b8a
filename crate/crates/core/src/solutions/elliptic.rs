//! Cubic-root reduction of the amplitude oscillator `u'' + m u - C^2/u^3 - 2 sigma u^3 = 0`.

use crate::error::{Error, Result};
use crate::specfun::{jacobi_elliptic, EllipticModulus};

/// Root ordering of the cubic `(Q - Q1)(Q - Q2)(Q - Q3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllipticCase {
    /// `sigma > 0`, `Q` oscillates in `[Q1, Q2]`.
    A,
    /// `sigma > 0`, `Q >= Q3`; singular.
    B,
    /// `sigma < 0`, `Q` oscillates in `[Q2, Q3]`.
    C,
}

impl EllipticCase {
    pub fn tag(self) -> char {
        match self {
            EllipticCase::A => 'a',
            EllipticCase::B => 'b',
            EllipticCase::C => 'c',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticTriple {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub sigma: f64,
    pub case: EllipticCase,
}

impl EllipticTriple {
    pub fn new(q1: f64, q2: f64, q3: f64, sigma: f64, case: EllipticCase) -> Result<Self> {
        if ![q1, q2, q3, sigma].iter().all(|v| v.is_finite()) {
            return Err(Error::Parameter("roots and sigma must be finite".into()));
        }
        let bad = |detail: &str| Err(Error::RootOrdering { case: case.tag(), detail: detail.into() });
        match case {
            EllipticCase::A => {
                if !(sigma > 0.0) {
                    return bad("needs sigma > 0");
                }
                if !(0.0 <= q1 && q1 <= q2 && q2 < q3) {
                    return bad("needs 0 <= Q1 <= Q2 < Q3");
                }
            }
            EllipticCase::B => {
                if !(sigma > 0.0) {
                    return bad("needs sigma > 0");
                }
                if !(0.0 < q1 && q1 < q2 && q2 < q3) {
                    return bad("needs 0 < Q1 < Q2 < Q3");
                }
            }
            EllipticCase::C => {
                if !(sigma < 0.0) {
                    return bad("needs sigma < 0");
                }
                if !(q1 < 0.0 && 0.0 <= q2 && q2 <= q3 && q3 > 0.0) {
                    return bad("needs Q1 < 0 <= Q2 <= Q3, Q3 > 0");
                }
            }
        }
        Ok(Self { q1, q2, q3, sigma, case })
    }

    /// Bounded case chosen from the sign of `sigma`.
    pub fn bounded(q1: f64, q2: f64, q3: f64, sigma: f64) -> Result<Self> {
        let case = if sigma < 0.0 { EllipticCase::C } else { EllipticCase::A };
        Self::new(q1, q2, q3, sigma, case)
    }

    /// `lambda = sqrt(Q3 - Q1)`.
    pub fn lambda(&self) -> f64 {
        (self.q3 - self.q1).sqrt()
    }

    /// Squared modulus `r^2` of the sn factor.
    pub fn modulus(&self) -> f64 {
        match self.case {
            EllipticCase::A | EllipticCase::B => (self.q2 - self.q1) / (self.q3 - self.q1),
            EllipticCase::C => (self.q3 - self.q2) / (self.q3 - self.q1),
        }
    }

    /// Range `[Q_min, Q_max]` of `Q = u^2` for the bounded cases.
    pub fn q_bounds(&self) -> (f64, f64) {
        match self.case {
            EllipticCase::A => (self.q1, self.q2),
            EllipticCase::B => (self.q3, f64::INFINITY),
            EllipticCase::C => (self.q2, self.q3),
        }
    }
}

/// Integration constants recovered from the roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicConstants {
    pub c: f64,
    pub c1: f64,
    pub m: f64,
}

/// `C^2 = sigma Q1 Q2 Q3`, `C1 = sigma (Q1 Q2 + Q2 Q3 + Q1 Q3)`, `m = sigma (Q1 + Q2 + Q3)`.
pub fn cubic_from_roots(triple: &EllipticTriple) -> Result<CubicConstants> {
    let EllipticTriple { q1, q2, q3, sigma, .. } = *triple;
    let c2 = sigma * q1 * q2 * q3;
    if c2 < 0.0 {
        return Err(Error::InconsistentRoots(c2));
    }
    Ok(CubicConstants { c: c2.sqrt(), c1: sigma * (q1 * q2 + q2 * q3 + q1 * q3), m: sigma * (q1 + q2 + q3) })
}

/// Real roots of `sigma Q^3 - m Q^2 + C1 Q - C^2 = 0`, ascending; `None` unless all three are real.
pub fn roots_from_constants(k: &CubicConstants, sigma: f64) -> Option<[f64; 3]> {
    let a = -k.m / sigma;
    let b = k.c1 / sigma;
    let c = -k.c * k.c / sigma;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let mut r = if p.abs() < 1e-300 {
        [shift - q.cbrt(); 3]
    } else {
        if p > 0.0 {
            return None;
        }
        let amp = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        [0, 1, 2].map(|k| amp * (phi - tau * k as f64).cos() + shift)
    };
    for root in &mut r {
        for _ in 0..4 {
            let f = ((*root + a) * *root + b) * *root + c;
            let df = (3.0 * *root + 2.0 * a) * *root + b;
            if df == 0.0 {
                break;
            }
            *root -= f / df;
        }
    }
    r.sort_by(f64::total_cmp);
    Some(r)
}

/// `u(zeta) = sqrt(Q)`, `y = sqrt(|sigma|) zeta`.
pub fn u_of_zeta(triple: &EllipticTriple, zeta: f64) -> Result<f64> {
    let y = triple.sigma.abs().sqrt() * zeta;
    let sn = jacobi_elliptic(triple.lambda() * y, EllipticModulus::new(triple.modulus())?)?.sn;
    let q = match triple.case {
        EllipticCase::A => triple.q1 + (triple.q2 - triple.q1) * sn * sn,
        EllipticCase::B => triple.q1 + (triple.q3 - triple.q1) / (sn * sn),
        EllipticCase::C => triple.q3 - (triple.q3 - triple.q2) * sn * sn,
    };
    Ok(q.max(0.0).sqrt())
}

/// Derivative `du/dzeta` from the closed form.
pub fn du_of_zeta(triple: &EllipticTriple, zeta: f64) -> Result<f64> {
    let s = triple.sigma.abs().sqrt();
    let lam = triple.lambda();
    let j = jacobi_elliptic(lam * s * zeta, EllipticModulus::new(triple.modulus())?)?;
    let dsn = j.cn * j.dn * lam * s;
    let dq = match triple.case {
        EllipticCase::A => 2.0 * (triple.q2 - triple.q1) * j.sn * dsn,
        EllipticCase::B => -2.0 * (triple.q3 - triple.q1) * dsn / j.sn.powi(3),
        EllipticCase::C => -2.0 * (triple.q3 - triple.q2) * j.sn * dsn,
    };
    let u = u_of_zeta(triple, zeta)?;
    Ok(if u > 0.0 { dq / (2.0 * u) } else { 0.0 })
}
