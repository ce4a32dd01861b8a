//! Solutions `u(zeta)` of the reduced amplitude equation `u'' + m u - C^2/u^3 = 2 sigma u^3`.

use crate::error::{Error, Result};

use super::elliptic::{cubic_from_roots, u_of_zeta, EllipticCase, EllipticTriple};

#[derive(Debug, Clone, PartialEq)]
pub enum AmplitudeProfile {
    Elliptic(EllipticTriple),
    /// `sqrt(m/sigma) sech(sqrt(-m) zeta)` with `m, sigma < 0`.
    Sech { m: f64, sigma: f64 },
    /// `sqrt(m/sigma) sec(sqrt(m) zeta)` with `m, sigma > 0`.
    Sec { m: f64, sigma: f64 },
    /// Linear case `sigma = 0`: `sqrt(sin^2(k zeta) + (C/k)^2 cos^2(k zeta))`, `k^2 = m > 0`.
    ErmakovPinney { m: f64, c: f64 },
}

impl AmplitudeProfile {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AmplitudeProfile::Elliptic(t) => {
                EllipticTriple::new(t.q1, t.q2, t.q3, t.sigma, t.case)?;
                cubic_from_roots(&t)?;
                Ok(())
            }
            AmplitudeProfile::Sech { m, sigma } => {
                if !(m < 0.0 && sigma < 0.0) {
                    return Err(Error::Parameter("sech amplitude needs m < 0 and sigma < 0".into()));
                }
                Ok(())
            }
            AmplitudeProfile::Sec { m, sigma } => {
                if !(m > 0.0 && sigma > 0.0) {
                    return Err(Error::Parameter("sec amplitude needs m > 0 and sigma > 0".into()));
                }
                Ok(())
            }
            AmplitudeProfile::ErmakovPinney { m, c } => {
                if !(m > 0.0) || !c.is_finite() {
                    return Err(Error::Parameter("Ermakov-Pinney amplitude needs m > 0".into()));
                }
                Ok(())
            }
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, AmplitudeProfile::Elliptic(t) if t.case == EllipticCase::B)
    }

    pub fn sigma(&self) -> f64 {
        match *self {
            AmplitudeProfile::Elliptic(t) => t.sigma,
            AmplitudeProfile::Sech { sigma, .. } | AmplitudeProfile::Sec { sigma, .. } => sigma,
            AmplitudeProfile::ErmakovPinney { .. } => 0.0,
        }
    }

    /// Separation constant `m`.
    pub fn separation_constant(&self) -> Result<f64> {
        Ok(match *self {
            AmplitudeProfile::Elliptic(t) => cubic_from_roots(&t)?.m,
            AmplitudeProfile::Sech { m, .. } | AmplitudeProfile::Sec { m, .. } => m,
            AmplitudeProfile::ErmakovPinney { m, .. } => m,
        })
    }

    /// Phase integration constant `C`.
    pub fn phase_constant(&self) -> Result<f64> {
        Ok(match *self {
            AmplitudeProfile::Elliptic(t) => cubic_from_roots(&t)?.c,
            AmplitudeProfile::Sech { .. } | AmplitudeProfile::Sec { .. } => 0.0,
            AmplitudeProfile::ErmakovPinney { c, .. } => c,
        })
    }

    pub fn u(&self, zeta: f64) -> Result<f64> {
        match *self {
            AmplitudeProfile::Elliptic(t) => u_of_zeta(&t, zeta),
            AmplitudeProfile::Sech { m, sigma } => Ok((m / sigma).sqrt() / ((-m).sqrt() * zeta).cosh()),
            AmplitudeProfile::Sec { m, sigma } => {
                let arg = m.sqrt() * zeta;
                if arg.abs() >= std::f64::consts::FRAC_PI_2 {
                    return Err(Error::Domain(format!("sec amplitude singular at zeta = {zeta}")));
                }
                Ok((m / sigma).sqrt() / arg.cos())
            }
            AmplitudeProfile::ErmakovPinney { m, c } => {
                let k = m.sqrt();
                let (s, co) = (k * zeta).sin_cos();
                Ok((s * s + (c / k).powi(2) * co * co).sqrt())
            }
        }
    }
}
