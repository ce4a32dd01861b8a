//! Exact solutions `Psi(x, t) = U(t) W R(x) e^{i(theta(x) - E t)}` built by similarity
//! reduction, closed forms for complex potentials, and superpotential zero modes.

pub mod amplitude;
pub mod elliptic;
pub mod phase;
pub mod scale;

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::lossgain::{p1_factor, u_matrix};
use crate::quadrature;
use crate::susy::{self, Superpotential};
use crate::{AmplitudeVector, Complex, CouplingConfig, FieldExpr, ModulationSpec, SpaceTimeField};

pub use amplitude::AmplitudeProfile;
pub use elliptic::{cubic_from_roots, roots_from_constants, u_of_zeta, CubicConstants, EllipticCase, EllipticTriple};
pub use phase::{theta_real_potential, THETA_TOLERANCE};
pub use scale::{rho_zeta_f, ScaleProfile, ScaleSamples};

/// Distance kept from the poles of `sec x` for the periodic complex family.
pub const PERIODIC_MARGIN: f64 = 1e-2;
/// Relative tolerance on agreement of the scale and amplitude separation constants.
pub const SEPARATION_TOLERANCE: f64 = 1e-10;

/// External potential `V = s + i s~`.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    FreeSpace,
    /// `N^2 - N(N-1) sech^2 x`.
    Reflectionless { n: u32 },
    /// `E^2 x^2`.
    Quadratic { energy: f64 },
    /// `-(V^2/9) sech^2 x - i V sech x tanh x`.
    ScarfII { depth: f64 },
    /// `-cos^2 x + i sin x`.
    PeriodicComplex,
    FromSuperpotential(Superpotential),
}

impl PotentialSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::Reflectionless { n: 0 } => Err(Error::Parameter("reflectionless order must be positive".into())),
            PotentialSpec::Quadratic { energy } if !(*energy > 0.0) => {
                Err(Error::Parameter(format!("quadratic potential needs E > 0, got {energy}")))
            }
            PotentialSpec::ScarfII { depth } if !depth.is_finite() => Err(Error::Parameter("Scarf-II depth must be finite".into())),
            PotentialSpec::FromSuperpotential(h) => h.validate(),
            _ => Ok(()),
        }
    }

    pub fn value(&self, x: f64) -> Result<Complex> {
        Ok(match self {
            PotentialSpec::FreeSpace => Complex::new(0.0, 0.0),
            PotentialSpec::Reflectionless { n } => {
                let n = *n as f64;
                Complex::new(n * n - n * (n - 1.0) / x.cosh().powi(2), 0.0)
            }
            PotentialSpec::Quadratic { energy } => Complex::new(energy * energy * x * x, 0.0),
            PotentialSpec::ScarfII { depth } => {
                let sech = 1.0 / x.cosh();
                Complex::new(-depth * depth / 9.0 * sech * sech, -depth * sech * x.tanh())
            }
            PotentialSpec::PeriodicComplex => Complex::new(-x.cos().powi(2), x.sin()),
            PotentialSpec::FromSuperpotential(h) => susy::complex_potential(h, x)?,
        })
    }

    pub fn s(&self, x: f64) -> Result<f64> {
        Ok(self.value(x)?.re)
    }

    pub fn s_tilde(&self, x: f64) -> Result<f64> {
        Ok(self.value(x)?.im)
    }

    pub fn is_real(&self) -> bool {
        matches!(self, PotentialSpec::FreeSpace | PotentialSpec::Reflectionless { .. } | PotentialSpec::Quadratic { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            PotentialSpec::FreeSpace => "free",
            PotentialSpec::Reflectionless { .. } => "reflectionless",
            PotentialSpec::Quadratic { .. } => "quadratic",
            PotentialSpec::ScarfII { .. } => "scarf2",
            PotentialSpec::PeriodicComplex => "periodic",
            PotentialSpec::FromSuperpotential(_) => "susy",
        }
    }
}

/// Which construction produces `R` and `theta`.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// `R = rho u(zeta)`, `theta = int C/R^2`.
    Similarity { scale: ScaleProfile, amplitude: AmplitudeProfile },
    ScarfII { depth: f64, sigma: f64 },
    PeriodicComplex { sigma: f64 },
    /// `R0 = N0 e^{-theta}`, `theta = int h`.
    ZeroMode { h: Superpotential },
}

impl FamilySpec {
    pub fn potential(&self) -> PotentialSpec {
        match self {
            FamilySpec::Similarity { scale, .. } => scale.potential(),
            FamilySpec::ScarfII { depth, .. } => PotentialSpec::ScarfII { depth: *depth },
            FamilySpec::PeriodicComplex { .. } => PotentialSpec::PeriodicComplex,
            FamilySpec::ZeroMode { h } => PotentialSpec::FromSuperpotential(h.clone()),
        }
    }
}

/// Closed-form amplitude, phase and energy for the Scarf-II and periodic complex potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexCore {
    pub sigma: f64,
    pub energy: f64,
    depth: Option<f64>,
}

impl ComplexCore {
    pub fn r(&self, x: f64) -> Result<f64> {
        match self.depth {
            Some(_) => Ok(1.0 / (x.cosh() * self.sigma.abs().sqrt())),
            None => {
                check_periodic_domain(x)?;
                Ok(1.0 / (x.cos() * self.sigma.sqrt()))
            }
        }
    }

    pub fn theta(&self, x: f64) -> f64 {
        match self.depth {
            Some(v) => v / 3.0 * x.sinh().atan(),
            None => x.sin(),
        }
    }

    pub fn theta_x(&self, x: f64) -> f64 {
        match self.depth {
            Some(v) => v / 3.0 / x.cosh(),
            None => x.cos(),
        }
    }
}

fn check_periodic_domain(x: f64) -> Result<()> {
    if !(x.abs() < FRAC_PI_2) {
        return Err(Error::Domain(format!("periodic complex solution singular at x = {x}")));
    }
    Ok(())
}

pub fn closed_form_complex(potential: &PotentialSpec, sigma: f64) -> Result<ComplexCore> {
    match potential {
        PotentialSpec::ScarfII { depth } => {
            if !(sigma < 0.0) {
                return Err(Error::Parameter(format!("Scarf-II solution needs sigma < 0, got {sigma}")));
            }
            Ok(ComplexCore { sigma, energy: -1.0, depth: Some(*depth) })
        }
        PotentialSpec::PeriodicComplex => {
            if !(sigma > 0.0) {
                return Err(Error::Parameter(format!("periodic complex solution needs sigma > 0, got {sigma}")));
            }
            Ok(ComplexCore { sigma, energy: 1.0, depth: None })
        }
        other => Err(Error::Parameter(format!("no closed complex form for potential '{}'", other.name()))),
    }
}

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub cfg: CouplingConfig,
    pub w: AmplitudeVector,
    pub family: FamilySpec,
    pub potential: PotentialSpec,
    pub energy: f64,
    pub grid: GridSpec,
    /// `R` on the grid nodes.
    pub r: Vec<f64>,
    /// `theta` on the grid nodes.
    pub theta: Vec<f64>,
    /// `rho` and `zeta` on the grid nodes (similarity families only).
    pub rho: Vec<f64>,
    pub zeta: Vec<f64>,
    pub phase_constant: f64,
    /// `m_scale - m_amplitude` when the two separation constants disagree.
    pub separation_mismatch: Option<f64>,
    pub notes: Vec<String>,
    zero_mode_norm: f64,
}

impl ExactSolution {
    /// Rejects families whose scale and amplitude separation constants differ.
    pub fn build(cfg: &CouplingConfig, w: &AmplitudeVector, family: &FamilySpec, grid: &GridSpec) -> Result<Self> {
        Self::construct(cfg, w, family, grid, true)
    }

    /// Like [`build`](Self::build) but records a separation mismatch instead of failing.
    pub fn build_lenient(cfg: &CouplingConfig, w: &AmplitudeVector, family: &FamilySpec, grid: &GridSpec) -> Result<Self> {
        Self::construct(cfg, w, family, grid, false)
    }

    fn construct(cfg: &CouplingConfig, w: &AmplitudeVector, family: &FamilySpec, grid: &GridSpec, strict: bool) -> Result<Self> {
        let potential = family.potential();
        potential.validate()?;
        let nodes = grid.nodes();
        let mut notes = Vec::new();
        let mut sol = Self {
            cfg: cfg.clone(),
            w: *w,
            family: family.clone(),
            potential,
            energy: 0.0,
            grid: grid.clone(),
            r: Vec::new(),
            theta: Vec::new(),
            rho: Vec::new(),
            zeta: Vec::new(),
            phase_constant: 0.0,
            separation_mismatch: None,
            notes: Vec::new(),
            zero_mode_norm: 1.0,
        };
        match family {
            FamilySpec::Similarity { scale, amplitude } => {
                amplitude.validate()?;
                if amplitude.is_singular() {
                    return Err(Error::SingularFamily);
                }
                let m_amp = amplitude.separation_constant()?;
                let samples = rho_zeta_f(scale, amplitude.sigma(), grid)?;
                if let Some(m_scale) = samples.m {
                    if (m_scale - m_amp).abs() > SEPARATION_TOLERANCE * m_amp.abs().max(1.0) {
                        if strict {
                            return Err(Error::SeparationMismatch { scale: m_scale, amplitude: m_amp });
                        }
                        sol.separation_mismatch = Some(m_scale - m_amp);
                        notes.push(format!("separation constants disagree: scale m = {m_scale}, amplitude m = {m_amp}"));
                    }
                }
                if samples.zeta.windows(2).any(|z| !(z[1] > z[0])) {
                    return Err(Error::NonFinite("zeta(x) not strictly increasing on the grid".into()));
                }
                sol.energy = scale.energy(m_amp);
                sol.r = samples
                    .rho
                    .iter()
                    .zip(&samples.zeta)
                    .map(|(rho, z)| Ok(rho * amplitude.u(*z)?))
                    .collect::<Result<Vec<_>>>()?;
                sol.phase_constant = amplitude.phase_constant()?;
                let (s, a) = (scale.clone(), amplitude.clone());
                sol.theta = theta_real_potential(
                    move |x| s.zeta(x).and_then(|z| a.u(z)).map(|u| s.rho(x) * u).unwrap_or(f64::NAN),
                    sol.phase_constant,
                    grid,
                )?;
                sol.rho = samples.rho;
                sol.zeta = samples.zeta;
                notes.push(format!("similarity family, scale {scale:?}, amplitude {amplitude:?}"));
            }
            FamilySpec::ScarfII { sigma, .. } | FamilySpec::PeriodicComplex { sigma } => {
                let core = closed_form_complex(&sol.potential, *sigma)?;
                sol.energy = core.energy;
                sol.r = nodes.iter().map(|&x| core.r(x)).collect::<Result<Vec<_>>>()?;
                sol.theta = nodes.iter().map(|&x| core.theta(x)).collect();
                notes.push(format!("closed complex form for {}", sol.potential.name()));
            }
            FamilySpec::ZeroMode { h } => {
                let mode = susy::zero_mode(h, grid)?;
                sol.energy = 0.0;
                sol.zero_mode_norm = mode.norm;
                sol.r = mode.r0;
                sol.theta = mode.theta;
                notes.push("superpotential zero mode, E = 0, unit grid norm".into());
            }
        }
        if sol.r.iter().chain(&sol.theta).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("R or theta on the grid for {}", sol.potential.name())));
        }
        sol.notes = notes;
        Ok(sol)
    }

    /// `R(x)` at an arbitrary point.
    pub fn r_at(&self, x: f64) -> Result<f64> {
        match &self.family {
            FamilySpec::Similarity { scale, amplitude } => Ok(scale.rho(x) * amplitude.u(scale.zeta(x)?)?),
            FamilySpec::ScarfII { sigma, .. } | FamilySpec::PeriodicComplex { sigma } => {
                closed_form_complex(&self.potential, *sigma)?.r(x)
            }
            FamilySpec::ZeroMode { h } => Ok(self.zero_mode_norm * (-h.theta(x)?).exp()),
        }
    }

    /// `theta(x)` at an arbitrary point; similarity phases continue from the nearest node.
    pub fn theta_at(&self, x: f64) -> Result<f64> {
        match &self.family {
            FamilySpec::Similarity { .. } => {
                if self.phase_constant == 0.0 {
                    return Ok(0.0);
                }
                let nodes = self.grid.nodes();
                let j = phase::nearest_node(&nodes, x);
                let c = self.phase_constant;
                let d = quadrature::integrate(
                    |y| self.r_at(y).map(|r| c / (r * r)).unwrap_or(f64::NAN),
                    nodes[j],
                    x,
                    THETA_TOLERANCE,
                )?;
                Ok(self.theta[j] + d)
            }
            FamilySpec::ScarfII { sigma, .. } | FamilySpec::PeriodicComplex { sigma } => {
                Ok(closed_form_complex(&self.potential, *sigma)?.theta(x))
            }
            FamilySpec::ZeroMode { h } => h.theta(x),
        }
    }

    /// `sigma` of the underlying reduced equation (zero for zero modes).
    pub fn sigma(&self) -> f64 {
        match &self.family {
            FamilySpec::Similarity { amplitude, .. } => amplitude.sigma(),
            FamilySpec::ScarfII { sigma, .. } | FamilySpec::PeriodicComplex { sigma } => *sigma,
            FamilySpec::ZeroMode { .. } => 0.0,
        }
    }

    /// Nonlinearity profile `f(x)` the solution requires.
    pub fn required_f(&self) -> FieldExpr {
        match &self.family {
            FamilySpec::Similarity { scale, amplitude } => scale.f_expr(amplitude.sigma()),
            FamilySpec::ScarfII { sigma, .. } | FamilySpec::PeriodicComplex { sigma } => FieldExpr::Constant(2.0 * sigma),
            FamilySpec::ZeroMode { .. } => FieldExpr::Constant(0.0),
        }
    }

    /// Modulation with `f1 = f + split`, `f2 = f - split` and the given `G`.
    pub fn modulation(&self, split: FieldExpr, g: SpaceTimeField) -> ModulationSpec {
        ModulationSpec::from_profile(self.required_f(), split, g)
    }

    /// Largest `|f_spec - f_required|` over the grid nodes.
    pub fn check_modulation(&self, spec: &ModulationSpec) -> Result<f64> {
        let req = self.required_f();
        let mut worst: f64 = 0.0;
        for x in self.grid.nodes() {
            let (a, b) = (spec.f(x)?, req.value(x)?);
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
        Ok(worst)
    }

    fn assemble(&self, r: f64, theta: f64, t: f64) -> Result<[Complex; 2]> {
        let u = u_matrix(&self.cfg, t)?;
        let phase = Complex::from_polar(r, theta - self.energy * t);
        let [w1, w2] = u.apply(self.w.vector());
        Ok([w1 * phase, w2 * phase])
    }

    /// `Psi(x, t)` at an arbitrary point.
    pub fn psi_at(&self, x: f64, t: f64) -> Result<[Complex; 2]> {
        self.assemble(self.r_at(x)?, self.theta_at(x)?, t)
    }

    /// `Psi` at node `i`.
    pub fn assemble_psi(&self, i: usize, t: f64) -> Result<[Complex; 2]> {
        self.assemble(self.r[i], self.theta[i], t)
    }

    /// `Psi` on every grid node.
    pub fn psi_on_grid(&self, t: f64) -> Result<Vec<[Complex; 2]>> {
        let u = u_matrix(&self.cfg, t)?;
        let [w1, w2] = u.apply(self.w.vector());
        Ok(self
            .r
            .iter()
            .zip(&self.theta)
            .map(|(&r, &th)| {
                let p = Complex::from_polar(r, th - self.energy * t);
                [w1 * p, w2 * p]
            })
            .collect())
    }

    /// `P1(t) R^2(x)` on the grid nodes.
    pub fn factorized_power(&self, t: f64) -> Result<Vec<f64>> {
        let p1 = p1_factor(&self.cfg, &self.w, t)?;
        Ok(self.r.iter().map(|r| p1 * r * r).collect())
    }

    /// Copy with a different coupling configuration.
    pub fn with_coupling(&self, cfg: &CouplingConfig) -> Self {
        Self { cfg: cfg.clone(), ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd;
    use crate::lossgain::Mu0Family;
    use crate::TimeExpr;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn fig_w() -> AmplitudeVector {
        AmplitudeVector::new(1.0, 1.0, PI / 6.0, 2.0 * PI / 3.0).unwrap()
    }

    /// Real-part and imaginary-part separation residuals of `(R, theta)` on interior nodes.
    fn separation_residuals(sol: &ExactSolution) -> (f64, f64) {
        let dx = sol.grid.dx();
        let f = sol.required_f();
        let n = sol.grid.n_x;
        let (mut re, mut im): (f64, f64) = (0.0, 0.0);
        for i in 8..n - 8 {
            let x = sol.grid.x(i);
            let r = |k: isize| sol.r[(i as isize + k) as usize];
            let th = |k: isize| sol.theta[(i as isize + k) as usize];
            let r0 = sol.r[i];
            let rpp = fd::second8(r, dx);
            let thx = fd::first(th, &fd::D1_ORDER8, dx);
            let v = sol.potential.value(x).unwrap();
            let res_re = rpp + (sol.energy - v.re - thx * thx) * r0 - f.value(x).unwrap() * r0.powi(3);
            let flux = |k: isize| {
                let j = (i as isize + k) as usize;
                let thx = fd::first(|l| sol.theta[(j as isize + l) as usize], &fd::D1_ORDER8, dx);
                sol.r[j].powi(2) * thx
            };
            let dflux = fd::first(flux, &fd::D1_ORDER8, dx);
            let res_im = dflux - v.im * r0 * r0;
            re = re.max(res_re.abs());
            im = im.max(res_im.abs());
        }
        (re, im)
    }

    #[test]
    fn scarf_closed_form() {
        let core = closed_form_complex(&PotentialSpec::ScarfII { depth: 3.0 }, -1.0).unwrap();
        assert_eq!(core.r(0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(core.theta_x(0.0), 1.0, epsilon = 1e-15);
        let pot = PotentialSpec::ScarfII { depth: 3.0 };
        for x in [-3.0, -0.4, 0.0, 1.1, 5.0] {
            let lhs = core.theta_x(x).powi(2);
            let rhs = core.energy - (-1.0) - pot.s(x).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
        assert!(closed_form_complex(&pot, 1.0).is_err());
    }

    #[test]
    fn periodic_closed_form() {
        let core = closed_form_complex(&PotentialSpec::PeriodicComplex, 2.0).unwrap();
        assert_abs_diff_eq!(core.r(0.0).unwrap(), 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(core.theta_x(0.0), 1.0);
        for x in [-1.2, 0.3, 1.5] {
            let rhs = core.energy - 1.0 - PotentialSpec::PeriodicComplex.s(x).unwrap();
            assert_abs_diff_eq!(core.theta_x(x).powi(2), rhs, epsilon = 1e-12);
        }
        assert!(core.r(FRAC_PI_2).is_err());
        assert!(closed_form_complex(&PotentialSpec::PeriodicComplex, -1.0).is_err());
    }

    #[test]
    fn complex_families_separate() {
        let cases = [
            (FamilySpec::ScarfII { depth: 3.0, sigma: -1.0 }, GridSpec::new(-10.0, 10.0, 2001, vec![]).unwrap()),
            (
                FamilySpec::PeriodicComplex { sigma: 1.0 },
                GridSpec::new(-FRAC_PI_2 + 0.2, FRAC_PI_2 - 0.2, 2001, vec![]).unwrap(),
            ),
            (
                FamilySpec::ZeroMode { h: Superpotential::RosenMorse { n: 2.0 } },
                GridSpec::new(-10.0, 10.0, 2001, vec![]).unwrap(),
            ),
        ];
        for (fam, grid) in cases {
            let sol = ExactSolution::build(&CouplingConfig::decoupled(), &fig_w(), &fam, &grid).unwrap();
            let (re, im) = separation_residuals(&sol);
            let scale = sol.r.iter().cloned().fold(0.0, f64::max).powi(3).max(1.0);
            assert!(re / scale < 1e-7 && im / scale < 1e-7, "{fam:?}: {re} {im}");
        }
    }

    fn fig2_family() -> FamilySpec {
        FamilySpec::Similarity {
            scale: ScaleProfile::Quadratic { energy: 0.12 },
            amplitude: AmplitudeProfile::Elliptic(EllipticTriple::bounded(-0.3, 0.1, 0.2, -1.0).unwrap()),
        }
    }

    #[test]
    fn real_family_separates() {
        let grid = GridSpec::new(-4.0, 4.0, 1601, vec![]).unwrap();
        let sol = ExactSolution::build(&CouplingConfig::decoupled(), &fig_w(), &fig2_family(), &grid).unwrap();
        assert_eq!(sol.energy, 0.12);
        let (re, im) = separation_residuals(&sol);
        assert!(re < 1e-7 && im < 1e-7, "{re} {im}");
        assert_abs_diff_eq!(sol.r[800], 0.2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn fig1_roots_mismatch_separation() {
        let fam = FamilySpec::Similarity {
            scale: ScaleProfile::Modulated { alpha: 0.15, omega: 2.0 },
            amplitude: AmplitudeProfile::Elliptic(EllipticTriple::bounded(0.1, 0.29, 0.3, 1.0).unwrap()),
        };
        let grid = GridSpec::new(-5.0, 5.0, 257, vec![]).unwrap();
        let cfg = CouplingConfig::decoupled();
        assert!(matches!(
            ExactSolution::build(&cfg, &fig_w(), &fam, &grid),
            Err(Error::SeparationMismatch { .. })
        ));
        let sol = ExactSolution::build_lenient(&cfg, &fig_w(), &fam, &grid).unwrap();
        assert_abs_diff_eq!(sol.separation_mismatch.unwrap(), 0.9775 - 0.69, epsilon = 1e-12);
    }

    #[test]
    fn singular_case_rejected() {
        let fam = FamilySpec::Similarity {
            scale: ScaleProfile::Uniform,
            amplitude: AmplitudeProfile::Elliptic(EllipticTriple::new(0.1, 0.2, 0.3, 1.0, EllipticCase::B).unwrap()),
        };
        let grid = GridSpec::new(-1.0, 1.0, 33, vec![]).unwrap();
        assert!(matches!(
            ExactSolution::build(&CouplingConfig::decoupled(), &fig_w(), &fam, &grid),
            Err(Error::SingularFamily)
        ));
    }

    #[test]
    fn psi_reduces_at_zero_coupling_and_zero_time() {
        let grid = GridSpec::new(-5.0, 5.0, 101, vec![]).unwrap();
        let fam = FamilySpec::ScarfII { depth: 3.0, sigma: -1.0 };
        let w = fig_w();
        let sol = ExactSolution::build(&CouplingConfig::decoupled(), &w, &fam, &grid).unwrap();
        let (x, t) = (0.7, 1.3);
        let p = sol.psi_at(x, t).unwrap();
        let expect = Complex::from_polar(w.w1, w.theta1) / x.cosh()
            * Complex::from_polar(1.0, x.sinh().atan() + t);
        assert!((p[0] - expect).norm() < 1e-14);
        let cfg = CouplingConfig::new(0.5, 0.7, PI / 3.0, Mu0Family::Constant(1.0)).unwrap();
        let sol = sol.with_coupling(&cfg);
        let p0 = sol.psi_on_grid(0.0).unwrap();
        let v = w.vector();
        for (i, p) in p0.iter().enumerate() {
            let phase = Complex::from_polar(sol.r[i], sol.theta[i]);
            assert!((p[0] - v[0] * phase).norm() < 1e-15 && (p[1] - v[1] * phase).norm() < 1e-15);
        }
    }

    #[test]
    fn off_grid_matches_tables() {
        let grid = GridSpec::new(-3.0, 3.0, 301, vec![]).unwrap();
        let fam = FamilySpec::Similarity {
            scale: ScaleProfile::Modulated { alpha: 0.15, omega: 2.0 },
            amplitude: AmplitudeProfile::ErmakovPinney { m: 0.9775, c: 0.4 },
        };
        let sol = ExactSolution::build(&CouplingConfig::decoupled(), &fig_w(), &fam, &grid).unwrap();
        for i in [0, 57, 150, 300] {
            let x = grid.x(i);
            assert_abs_diff_eq!(sol.theta_at(x).unwrap(), sol.theta[i], epsilon = 1e-12);
            assert_abs_diff_eq!(sol.r_at(x).unwrap(), sol.r[i], epsilon = 1e-14);
        }
        let th = sol.theta_at(0.123).unwrap();
        let q = quadrature::integrate(|y| 0.4 / sol.r_at(y).unwrap().powi(2), 0.0, 0.123, 1e-13).unwrap();
        assert_abs_diff_eq!(th, q, epsilon = 1e-10);
    }

    #[test]
    fn modulation_matches_required_profile() {
        let grid = GridSpec::new(-4.0, 4.0, 101, vec![]).unwrap();
        let sol = ExactSolution::build(&CouplingConfig::decoupled(), &fig_w(), &fig2_family(), &grid).unwrap();
        let g = SpaceTimeField::separable(FieldExpr::Constant(0.3), TimeExpr::Cosine { omega: 1.0, phase: 0.0 });
        let spec = sol.modulation(FieldExpr::Constant(0.7), g);
        assert!(sol.check_modulation(&spec).unwrap() < 1e-15);
        let wrong = ModulationSpec::from_profile(FieldExpr::Constant(1.0), FieldExpr::Constant(0.0), SpaceTimeField::zero());
        assert!(sol.check_modulation(&wrong).unwrap() > 0.1);
    }
}
