//! Similarity scale `rho(x)`, stretched coordinate `zeta(x) = int dx/rho^2` and the matching
//! nonlinearity profile `f = 2 sigma / rho^6` for the real-potential families.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::modulation::FieldExpr;
use crate::specfun;

use super::PotentialSpec;

#[derive(Debug, Clone, PartialEq)]
pub enum ScaleProfile {
    /// `rho = 1`, `zeta = x`, free space.
    Uniform,
    /// `rho^2 = 1 + alpha cos(omega x)`, free space.
    Modulated { alpha: f64, omega: f64 },
    /// `rho = cosh^n x` in `V = n^2 - n(n-1) sech^2 x`.
    Reflectionless { n: u32 },
    /// `rho = e^{-E x^2/2}` in `V = E^2 x^2`.
    Quadratic { energy: f64 },
}

impl ScaleProfile {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ScaleProfile::Uniform => Ok(()),
            ScaleProfile::Modulated { alpha, omega } => {
                if !(alpha.abs() < 1.0) {
                    return Err(Error::Parameter(format!("modulated scale needs |alpha| < 1, got {alpha}")));
                }
                if !(omega > 0.0 && omega.is_finite()) {
                    return Err(Error::Parameter(format!("modulated scale needs omega > 0, got {omega}")));
                }
                Ok(())
            }
            ScaleProfile::Reflectionless { n } => {
                if n == 0 {
                    return Err(Error::Parameter("reflectionless order must be positive".into()));
                }
                Ok(())
            }
            ScaleProfile::Quadratic { energy } => {
                if !(energy > 0.0 && energy.is_finite()) {
                    return Err(Error::Parameter(format!("quadratic potential needs E > 0, got {energy}")));
                }
                Ok(())
            }
        }
    }

    pub fn potential(&self) -> PotentialSpec {
        match *self {
            ScaleProfile::Uniform | ScaleProfile::Modulated { .. } => PotentialSpec::FreeSpace,
            ScaleProfile::Reflectionless { n } => PotentialSpec::Reflectionless { n },
            ScaleProfile::Quadratic { energy } => PotentialSpec::Quadratic { energy },
        }
    }

    /// Separation constant fixed by the scale equation `rho'' + (E - s) rho = m / rho^3`;
    /// `None` when any `m` is admissible.
    pub fn separation_constant(&self) -> Option<f64> {
        match *self {
            ScaleProfile::Uniform => None,
            ScaleProfile::Modulated { alpha, omega } => Some(omega * omega * (1.0 - alpha * alpha) / 4.0),
            ScaleProfile::Reflectionless { .. } | ScaleProfile::Quadratic { .. } => Some(0.0),
        }
    }

    /// Energy `E` for a given amplitude separation constant.
    pub fn energy(&self, amplitude_m: f64) -> f64 {
        match *self {
            ScaleProfile::Uniform => amplitude_m,
            ScaleProfile::Modulated { omega, .. } => omega * omega / 4.0,
            ScaleProfile::Reflectionless { .. } => 0.0,
            ScaleProfile::Quadratic { energy } => energy,
        }
    }

    pub fn rho(&self, x: f64) -> f64 {
        match *self {
            ScaleProfile::Uniform => 1.0,
            ScaleProfile::Modulated { alpha, omega } => (1.0 + alpha * (omega * x).cos()).sqrt(),
            ScaleProfile::Reflectionless { n } => x.cosh().powi(n as i32),
            ScaleProfile::Quadratic { energy } => (-energy * x * x / 2.0).exp(),
        }
    }

    pub fn zeta(&self, x: f64) -> Result<f64> {
        match *self {
            ScaleProfile::Uniform => Ok(x),
            ScaleProfile::Modulated { alpha, omega } => Ok(modulated_zeta(alpha, omega, x)),
            ScaleProfile::Reflectionless { n } => Ok(sech_power_integral(n, x)),
            ScaleProfile::Quadratic { energy } => {
                let e = specfun::erf_family(energy.sqrt() * x)?;
                if e.erfi_overflow {
                    return Err(Error::NonFinite(format!("erfi overflow in zeta at x = {x}")));
                }
                Ok(0.5 * (PI / energy).sqrt() * e.erfi)
            }
        }
    }

    /// `f = 2 sigma / rho^6` as a field expression.
    pub fn f_expr(&self, sigma: f64) -> FieldExpr<f64> {
        match *self {
            ScaleProfile::Uniform => FieldExpr::Constant(2.0 * sigma),
            ScaleProfile::Modulated { alpha, omega } => FieldExpr::CosinePower { sigma, alpha, omega },
            ScaleProfile::Reflectionless { n } => FieldExpr::SechPower { sigma, n },
            ScaleProfile::Quadratic { energy } => FieldExpr::GaussianGrowth { sigma, energy },
        }
    }
}

/// Continuous branch of `(2/(omega sqrt(1-a^2))) arctan(sqrt((1-a)/(1+a)) tan(omega x/2))`.
fn modulated_zeta(alpha: f64, omega: f64, x: f64) -> f64 {
    let k = ((1.0 - alpha) / (1.0 + alpha)).sqrt();
    let phi = omega * x / 2.0;
    let n = ((phi + PI / 2.0) / PI).floor();
    let principal = (k * (phi - n * PI).tan()).atan();
    2.0 / (omega * (1.0 - alpha * alpha).sqrt()) * (principal + n * PI)
}

/// `int_0^x sech^{2n}` by the reduction `I_k = sech^{k-2} tanh/(k-1) + (k-2)/(k-1) I_{k-2}`.
fn sech_power_integral(n: u32, x: f64) -> f64 {
    let sech = 1.0 / x.cosh();
    let tanh = x.tanh();
    let mut acc = 0.0;
    let mut sech_pow = 1.0;
    for j in 1..=n {
        let k = 2.0 * j as f64;
        acc = sech_pow * tanh / (k - 1.0) + (k - 2.0) / (k - 1.0) * acc;
        sech_pow *= sech * sech;
    }
    acc
}

/// Scale samples on a grid together with the separation constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSamples {
    pub rho: Vec<f64>,
    pub zeta: Vec<f64>,
    pub f: Vec<f64>,
    pub m: Option<f64>,
}

pub fn rho_zeta_f(scale: &ScaleProfile, sigma: f64, grid: &GridSpec) -> Result<ScaleSamples> {
    scale.validate()?;
    let f = scale.f_expr(sigma);
    let nodes = grid.nodes();
    let rho = nodes.iter().map(|&x| scale.rho(x)).collect();
    let zeta = nodes.iter().map(|&x| scale.zeta(x)).collect::<Result<Vec<_>>>()?;
    let f = nodes.iter().map(|&x| f.value(x)).collect::<Result<Vec<_>>>()?;
    Ok(ScaleSamples { rho, zeta, f, m: scale.separation_constant() })
}
