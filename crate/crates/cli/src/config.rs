//! Flat `key = value` run configuration with dotted section prefixes.
//!
//! Blank lines and `#` comments are ignored. Numbers accept plain decimals and the forms
//! `pi`, `pi/6`, `2pi/3`, `2*pi/3`. Lists are comma separated.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use nlse_forge::evolve::{Boundary, EvolveConfig};
use nlse_forge::lossgain::TabulatedSamples;
use nlse_forge::output::fmt_num;
use nlse_forge::solutions::{AmplitudeProfile, EllipticCase, EllipticTriple, ScaleProfile};
use nlse_forge::susy::TabulatedSuperpotential;
use nlse_forge::{
    AmplitudeVector, CouplingConfig, FamilySpec, FieldExpr, GridSpec, ModulationSpec, Mu0Family, SpaceTimeField,
    Superpotential, TimeExpr,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected key = value")]
    Syntax { line: usize },
    #[error("duplicate key '{0}'")]
    Duplicate(String),
    #[error("missing key '{0}'")]
    Missing(String),
    #[error("key '{key}': cannot parse '{value}'")]
    Value { key: String, value: String },
    #[error("unknown key(s): {0}")]
    Unknown(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

impl From<nlse_forge::Error> for ConfigError {
    fn from(e: nlse_forge::Error) -> Self {
        ConfigError::Invalid(e.to_string())
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Construct,
    Verify,
    Evolve,
    Sweep,
    Susy,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Construct => "construct",
            Command::Verify => "verify",
            Command::Evolve => "evolve",
            Command::Sweep => "sweep",
            Command::Susy => "susy",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "construct" => Command::Construct,
            "verify" => Command::Verify,
            "evolve" => Command::Evolve,
            "sweep" => Command::Sweep,
            "susy" => Command::Susy,
            _ => return None,
        })
    }
}

/// Spatially constant `f1 - f2` split and a separable `G(x, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationChoice {
    pub split: f64,
    pub g_amplitude: f64,
    /// Order of the `sech^{6n}` space factor of `G`; `0` for a constant factor.
    pub g_sech_order: u32,
    pub g_time: TimeExpr,
}

impl ModulationChoice {
    pub fn g_field(&self) -> SpaceTimeField {
        if self.g_amplitude == 0.0 {
            return SpaceTimeField::zero();
        }
        let space = match self.g_sech_order {
            0 => FieldExpr::Constant(self.g_amplitude),
            n => FieldExpr::SechPower { sigma: self.g_amplitude / 2.0, n },
        };
        SpaceTimeField::separable(space, self.g_time.clone())
    }

    pub fn spec(&self, f: FieldExpr) -> ModulationSpec {
        ModulationSpec::from_profile(f, FieldExpr::Constant(self.split), self.g_field())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSampling {
    pub t_min: f64,
    pub t_max: f64,
    pub n_t: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveSettings {
    pub dt: f64,
    pub t_final: f64,
    pub boundary: Boundary,
    pub record_stride: usize,
    /// A growth regime was requested, so blow-up is an expected outcome.
    pub expect_growth: bool,
    /// Relative amplitude of the seeded multiplicative noise on the initial data.
    pub perturbation: f64,
}

impl EvolveSettings {
    pub fn config(&self, grid: &GridSpec) -> nlse_forge::Result<EvolveConfig> {
        EvolveConfig::new(grid.clone(), self.dt, self.t_final, self.boundary, self.record_stride)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        GridSpec::uniform_times(self.min, self.max, self.n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub gamma: Range,
    pub beta_abs: Range,
    pub mu0: Vec<Mu0Family>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub coupling: CouplingConfig,
    pub amplitude: AmplitudeVector,
    pub family: FamilySpec,
    /// Accept a similarity family whose separation constants disagree.
    pub lenient: bool,
    pub modulation: ModulationChoice,
    pub grid: GridSpec,
    pub times: TimeSampling,
    pub evolve: Option<EvolveSettings>,
    pub sweep: Option<SweepSettings>,
    pub verify_tolerance: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
}

/// Key-value table that tracks which keys were consumed.
struct Table {
    map: BTreeMap<String, String>,
    used: std::cell::RefCell<std::collections::BTreeSet<String>>,
}

impl Table {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: k + 1 })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError::Syntax { line: k + 1 });
            }
            if map.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(ConfigError::Duplicate(key.to_string()));
            }
        }
        Ok(Self { map, used: Default::default() })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        let v = self.map.get(key)?;
        self.used.borrow_mut().insert(key.to_string());
        Some(v.as_str())
    }

    fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.raw(key).unwrap_or(default)
    }

    fn req(&self, key: &str) -> Result<&str> {
        self.raw(key).ok_or_else(|| ConfigError::Missing(key.to_string()))
    }

    fn bad(key: &str, value: &str) -> ConfigError {
        ConfigError::Value { key: key.to_string(), value: value.to_string() }
    }

    fn num(&self, key: &str) -> Result<f64> {
        let v = self.req(key)?;
        parse_number(v).ok_or_else(|| Self::bad(key, v))
    }

    fn num_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.raw(key) {
            Some(v) => parse_number(v).ok_or_else(|| Self::bad(key, v)),
            None => Ok(default),
        }
    }

    fn int<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let v = self.req(key)?;
        v.parse().map_err(|_| Self::bad(key, v))
    }

    fn int_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.raw(key) {
            Some(v) => v.parse().map_err(|_| Self::bad(key, v)),
            None => Ok(default),
        }
    }

    fn flag_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.raw(key) {
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(v) => Err(Self::bad(key, v)),
            None => Ok(default),
        }
    }

    fn list(&self, key: &str) -> Result<Vec<f64>> {
        let v = self.req(key)?;
        v.split(',').map(|s| parse_number(s.trim()).ok_or_else(|| Self::bad(key, v))).collect()
    }

    fn has_prefix(&self, prefix: &str) -> bool {
        self.map.keys().any(|k| k.starts_with(prefix))
    }

    fn unused(&self) -> Vec<String> {
        let used = self.used.borrow();
        self.map.keys().filter(|k| !used.contains(*k)).cloned().collect()
    }
}

/// Parses a decimal or a rational multiple of `pi`.
pub fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim().parse::<f64>().ok()?),
        None => (s, 1.0),
    };
    let coef = num.strip_suffix("pi")?.trim().trim_end_matches('*').trim();
    let coef = match coef {
        "" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().ok()?,
    };
    Some(coef * std::f64::consts::PI / den)
}

fn parse_mu0_token(t: &Table, key: &str, token: &str) -> Result<Mu0Family> {
    let (name, arg) = match token.split_once(':') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (token.trim(), None),
    };
    let arg_num = || arg.and_then(parse_number).ok_or_else(|| Table::bad(key, token));
    Ok(match name {
        "constant" => Mu0Family::Constant(arg_num()?),
        "cosine" => Mu0Family::Cosine { omega0: arg_num()? },
        "gaussian" if arg.is_none() => Mu0Family::Gaussian,
        "tabulated" if arg.is_none() => {
            let tab = TabulatedSamples::new(t.list(&format!("{key}.t"))?, t.list(&format!("{key}.values"))?)?;
            Mu0Family::Tabulated(tab)
        }
        _ => return Err(Table::bad(key, token)),
    })
}

fn mu0_token(m: &Mu0Family) -> String {
    match m {
        Mu0Family::Constant(c) => format!("constant:{}", fmt_num(*c)),
        Mu0Family::Cosine { omega0 } => format!("cosine:{}", fmt_num(*omega0)),
        Mu0Family::Gaussian => "gaussian".into(),
        Mu0Family::Tabulated(_) => "tabulated".into(),
    }
}

fn parse_profile(t: &Table) -> Result<AmplitudeProfile> {
    let kind = t.req("profile")?;
    Ok(match kind {
        "elliptic" => {
            let case = match t.str_or("profile.case", "bounded") {
                "a" => Some(EllipticCase::A),
                "b" => Some(EllipticCase::B),
                "c" => Some(EllipticCase::C),
                "bounded" => None,
                v => return Err(Table::bad("profile.case", v)),
            };
            let (q1, q2, q3, s) = (t.num("profile.q1")?, t.num("profile.q2")?, t.num("profile.q3")?, t.num("profile.sigma")?);
            let triple = match case {
                Some(c) => EllipticTriple::new(q1, q2, q3, s, c)?,
                None => EllipticTriple::bounded(q1, q2, q3, s)?,
            };
            AmplitudeProfile::Elliptic(triple)
        }
        "sech" => AmplitudeProfile::Sech { m: t.num("profile.m")?, sigma: t.num("profile.sigma")? },
        "sec" => AmplitudeProfile::Sec { m: t.num("profile.m")?, sigma: t.num("profile.sigma")? },
        "ermakov" => AmplitudeProfile::ErmakovPinney { m: t.num("profile.m")?, c: t.num("profile.c")? },
        v => return Err(Table::bad("profile", v)),
    })
}

fn parse_scale(t: &Table) -> Result<ScaleProfile> {
    Ok(match t.str_or("scale", "uniform") {
        "uniform" => ScaleProfile::Uniform,
        "modulated" => ScaleProfile::Modulated { alpha: t.num("scale.alpha")?, omega: t.num("scale.omega")? },
        "reflectionless" => ScaleProfile::Reflectionless { n: t.int("scale.n")? },
        "quadratic" => ScaleProfile::Quadratic { energy: t.num("scale.energy")? },
        v => return Err(Table::bad("scale", v)),
    })
}

fn parse_superpotential(t: &Table) -> Result<Superpotential> {
    Ok(match t.req("superpotential")? {
        "polynomial" => Superpotential::Polynomial {
            w0: t.num("superpotential.w0")?,
            w1: t.num("superpotential.w1")?,
            w2: t.num("superpotential.w2")?,
        },
        "exponential" => Superpotential::Exponential {
            a_amp: t.num("superpotential.a")?,
            b_amp: t.num("superpotential.b")?,
            rate: t.num("superpotential.rate")?,
        },
        "box" => Superpotential::Box { length: t.num("superpotential.length")? },
        "rosen_morse" => Superpotential::RosenMorse { n: t.num("superpotential.n")? },
        "tabulated" => Superpotential::Tabulated(TabulatedSuperpotential::new(
            t.list("superpotential.x")?,
            t.list("superpotential.h")?,
        )?),
        v => return Err(Table::bad("superpotential", v)),
    })
}

fn parse_family(t: &Table) -> Result<FamilySpec> {
    Ok(match t.req("family")? {
        "similarity" => FamilySpec::Similarity { scale: parse_scale(t)?, amplitude: parse_profile(t)? },
        "scarf2" => FamilySpec::ScarfII { depth: t.num("family.depth")?, sigma: t.num("family.sigma")? },
        "periodic" => FamilySpec::PeriodicComplex { sigma: t.num("family.sigma")? },
        "zero_mode" => FamilySpec::ZeroMode { h: parse_superpotential(t)? },
        v => return Err(Table::bad("family", v)),
    })
}

fn parse_time_expr(t: &Table) -> Result<TimeExpr> {
    Ok(match t.str_or("modulation.g.time", "constant") {
        "constant" => TimeExpr::Constant(t.num_or("modulation.g.time.value", 1.0)?),
        "cosine" => TimeExpr::Cosine { omega: t.num("modulation.g.omega")?, phase: t.num_or("modulation.g.phase", 0.0)? },
        "exponential" => TimeExpr::Exponential { rate: t.num("modulation.g.rate")? },
        "gaussian" => TimeExpr::Gaussian { width: t.num("modulation.g.width")? },
        v => return Err(Table::bad("modulation.g.time", v)),
    })
}

fn parse_range(t: &Table, key: &str) -> Result<Range> {
    let r = Range { min: t.num(&format!("{key}.min"))?, max: t.num(&format!("{key}.max"))?, n: t.int(&format!("{key}.n"))? };
    if r.n == 0 || r.max < r.min {
        return Err(ConfigError::Invalid(format!("sweep range '{key}' needs n >= 1 and max >= min")));
    }
    Ok(r)
}

impl RunConfig {
    /// Parses `text`; `command` overrides a `command` key when given.
    pub fn parse(text: &str, command: Option<Command>) -> Result<Self> {
        let t = Table::parse(text)?;
        let file_cmd = match t.raw("command") {
            Some(v) => Some(Command::parse(v).ok_or_else(|| Table::bad("command", v))?),
            None => None,
        };
        let command = command.or(file_cmd).ok_or_else(|| ConfigError::Missing("command".into()))?;
        let mu0 = parse_mu0_token(&t, "coupling.mu0", t.str_or("coupling.mu0", "constant:1"))?;
        let coupling = CouplingConfig::new(
            t.num_or("coupling.gamma", 0.0)?,
            t.num_or("coupling.beta_abs", 0.0)?,
            t.num_or("coupling.theta3", 0.0)?,
            mu0,
        )?;
        let amplitude = AmplitudeVector::new(
            t.num("amplitude.w1")?,
            t.num("amplitude.w2")?,
            t.num_or("amplitude.theta1", 0.0)?,
            t.num_or("amplitude.theta2", 0.0)?,
        )?;
        let family = parse_family(&t)?;
        let lenient = t.flag_or("solution.lenient", false)?;
        let modulation = ModulationChoice {
            split: t.num_or("modulation.split", 0.0)?,
            g_amplitude: t.num_or("modulation.g", 0.0)?,
            g_sech_order: t.int_or("modulation.g.sech_order", 0)?,
            g_time: parse_time_expr(&t)?,
        };
        let times = TimeSampling {
            t_min: t.num_or("grid.t_min", 0.0)?,
            t_max: t.num_or("grid.t_max", 0.0)?,
            n_t: t.int_or("grid.n_t", 1)?,
        };
        let grid = GridSpec::new(
            t.num("grid.x_min")?,
            t.num("grid.x_max")?,
            t.int("grid.n_x")?,
            GridSpec::uniform_times(times.t_min, times.t_max, times.n_t),
        )?;
        let evolve = if t.has_prefix("evolve.") {
            let boundary = match t.str_or("evolve.boundary", "periodic") {
                "periodic" => Boundary::Periodic,
                "absorbing" => Boundary::AbsorbingMask { width: t.num("evolve.width")? },
                v => return Err(Table::bad("evolve.boundary", v)),
            };
            let s = EvolveSettings {
                dt: t.num("evolve.dt")?,
                t_final: t.num("evolve.t_final")?,
                boundary,
                record_stride: t.int_or("evolve.record_stride", 1)?,
                expect_growth: t.flag_or("evolve.expect_growth", false)?,
                perturbation: t.num_or("evolve.perturbation", 0.0)?,
            };
            s.config(&grid)?;
            if !(s.perturbation >= 0.0) {
                return Err(ConfigError::Invalid("evolve.perturbation must be >= 0".into()));
            }
            Some(s)
        } else {
            None
        };
        let sweep = if t.has_prefix("sweep.") {
            let raw = t.req("sweep.mu0")?;
            let mu0 = raw
                .split(',')
                .map(|tok| parse_mu0_token(&t, "sweep.mu0", tok.trim()))
                .collect::<Result<Vec<_>>>()?;
            if mu0.iter().any(|m| matches!(m, Mu0Family::Tabulated(_))) {
                return Err(ConfigError::Invalid("sweep.mu0 does not accept tabulated families".into()));
            }
            Some(SweepSettings { gamma: parse_range(&t, "sweep.gamma")?, beta_abs: parse_range(&t, "sweep.beta_abs")?, mu0 })
        } else {
            None
        };
        let cfg = RunConfig {
            command,
            coupling,
            amplitude,
            family,
            lenient,
            modulation,
            grid,
            times,
            evolve,
            sweep,
            verify_tolerance: t.num_or("verify.tolerance", 1e-6)?,
            output_dir: PathBuf::from(t.str_or("output.dir", "out")),
            seed: t.int_or("seed", 0)?,
        };
        let unused = t.unused();
        if !unused.is_empty() {
            return Err(ConfigError::Unknown(unused.join(", ")));
        }
        if matches!(cfg.command, Command::Evolve | Command::Sweep) && cfg.evolve.is_none() {
            return Err(ConfigError::Missing("evolve.dt".into()));
        }
        if cfg.command == Command::Sweep && cfg.sweep.is_none() {
            return Err(ConfigError::Missing("sweep.mu0".into()));
        }
        Ok(cfg)
    }

    /// Canonical text form; parses back to an identical configuration.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        let n = |v: f64| fmt_num(v);
        let list = |v: &[f64]| v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(",");
        kv("command", self.command.name().into());
        kv("coupling.gamma", n(self.coupling.gamma));
        kv("coupling.beta_abs", n(self.coupling.beta_abs));
        kv("coupling.theta3", n(self.coupling.theta3));
        kv("coupling.mu0", mu0_token(&self.coupling.mu0));
        if let Mu0Family::Tabulated(tab) = &self.coupling.mu0 {
            kv("coupling.mu0.t", list(tab.times()));
            kv("coupling.mu0.values", list(tab.values()));
        }
        kv("amplitude.w1", n(self.amplitude.w1));
        kv("amplitude.w2", n(self.amplitude.w2));
        kv("amplitude.theta1", n(self.amplitude.theta1));
        kv("amplitude.theta2", n(self.amplitude.theta2));
        match &self.family {
            FamilySpec::Similarity { scale, amplitude } => {
                kv("family", "similarity".into());
                match scale {
                    ScaleProfile::Uniform => kv("scale", "uniform".into()),
                    ScaleProfile::Modulated { alpha, omega } => {
                        kv("scale", "modulated".into());
                        kv("scale.alpha", n(*alpha));
                        kv("scale.omega", n(*omega));
                    }
                    ScaleProfile::Reflectionless { n: order } => {
                        kv("scale", "reflectionless".into());
                        kv("scale.n", order.to_string());
                    }
                    ScaleProfile::Quadratic { energy } => {
                        kv("scale", "quadratic".into());
                        kv("scale.energy", n(*energy));
                    }
                }
                match amplitude {
                    AmplitudeProfile::Elliptic(tr) => {
                        kv("profile", "elliptic".into());
                        kv("profile.case", tr.case.tag().to_string());
                        kv("profile.q1", n(tr.q1));
                        kv("profile.q2", n(tr.q2));
                        kv("profile.q3", n(tr.q3));
                        kv("profile.sigma", n(tr.sigma));
                    }
                    AmplitudeProfile::Sech { m, sigma } | AmplitudeProfile::Sec { m, sigma } => {
                        let name = if matches!(amplitude, AmplitudeProfile::Sech { .. }) { "sech" } else { "sec" };
                        kv("profile", name.into());
                        kv("profile.m", n(*m));
                        kv("profile.sigma", n(*sigma));
                    }
                    AmplitudeProfile::ErmakovPinney { m, c } => {
                        kv("profile", "ermakov".into());
                        kv("profile.m", n(*m));
                        kv("profile.c", n(*c));
                    }
                }
            }
            FamilySpec::ScarfII { depth, sigma } => {
                kv("family", "scarf2".into());
                kv("family.depth", n(*depth));
                kv("family.sigma", n(*sigma));
            }
            FamilySpec::PeriodicComplex { sigma } => {
                kv("family", "periodic".into());
                kv("family.sigma", n(*sigma));
            }
            FamilySpec::ZeroMode { h } => {
                kv("family", "zero_mode".into());
                match h {
                    Superpotential::Polynomial { w0, w1, w2 } => {
                        kv("superpotential", "polynomial".into());
                        kv("superpotential.w0", n(*w0));
                        kv("superpotential.w1", n(*w1));
                        kv("superpotential.w2", n(*w2));
                    }
                    Superpotential::Exponential { a_amp, b_amp, rate } => {
                        kv("superpotential", "exponential".into());
                        kv("superpotential.a", n(*a_amp));
                        kv("superpotential.b", n(*b_amp));
                        kv("superpotential.rate", n(*rate));
                    }
                    Superpotential::Box { length } => {
                        kv("superpotential", "box".into());
                        kv("superpotential.length", n(*length));
                    }
                    Superpotential::RosenMorse { n: order } => {
                        kv("superpotential", "rosen_morse".into());
                        kv("superpotential.n", n(*order));
                    }
                    Superpotential::Tabulated(tab) => {
                        let (x, hv) = tab.samples();
                        kv("superpotential", "tabulated".into());
                        kv("superpotential.x", list(x));
                        kv("superpotential.h", list(hv));
                    }
                }
            }
        }
        kv("solution.lenient", self.lenient.to_string());
        let m = &self.modulation;
        kv("modulation.split", n(m.split));
        kv("modulation.g", n(m.g_amplitude));
        kv("modulation.g.sech_order", m.g_sech_order.to_string());
        match &m.g_time {
            TimeExpr::Constant(c) => {
                kv("modulation.g.time", "constant".into());
                kv("modulation.g.time.value", n(*c));
            }
            TimeExpr::Cosine { omega, phase } => {
                kv("modulation.g.time", "cosine".into());
                kv("modulation.g.omega", n(*omega));
                kv("modulation.g.phase", n(*phase));
            }
            TimeExpr::Exponential { rate } => {
                kv("modulation.g.time", "exponential".into());
                kv("modulation.g.rate", n(*rate));
            }
            TimeExpr::Gaussian { width } => {
                kv("modulation.g.time", "gaussian".into());
                kv("modulation.g.width", n(*width));
            }
        }
        kv("grid.x_min", n(self.grid.x_min));
        kv("grid.x_max", n(self.grid.x_max));
        kv("grid.n_x", self.grid.n_x.to_string());
        kv("grid.t_min", n(self.times.t_min));
        kv("grid.t_max", n(self.times.t_max));
        kv("grid.n_t", self.times.n_t.to_string());
        if let Some(e) = &self.evolve {
            kv("evolve.dt", n(e.dt));
            kv("evolve.t_final", n(e.t_final));
            match e.boundary {
                Boundary::Periodic => kv("evolve.boundary", "periodic".into()),
                Boundary::AbsorbingMask { width } => {
                    kv("evolve.boundary", "absorbing".into());
                    kv("evolve.width", n(width));
                }
            }
            kv("evolve.record_stride", e.record_stride.to_string());
            kv("evolve.expect_growth", e.expect_growth.to_string());
            kv("evolve.perturbation", n(e.perturbation));
        }
        if let Some(sw) = &self.sweep {
            for (key, r) in [("sweep.gamma", sw.gamma), ("sweep.beta_abs", sw.beta_abs)] {
                kv(&format!("{key}.min"), n(r.min));
                kv(&format!("{key}.max"), n(r.max));
                kv(&format!("{key}.n"), r.n.to_string());
            }
            kv("sweep.mu0", sw.mu0.iter().map(mu0_token).collect::<Vec<_>>().join(","));
        }
        kv("verify.tolerance", n(self.verify_tolerance));
        kv("output.dir", self.output_dir.display().to_string());
        kv("seed", self.seed.to_string());
        s
    }
}
