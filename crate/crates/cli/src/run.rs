//! Command handlers. Each one writes its artifacts under the configured output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nlse_forge::evolve::{classify_power, grid_power, integrate_until_blowup, perturb, power_law_exponent, Blowup, Trajectory};
use nlse_forge::output::{csv_table, fmt_num};
use nlse_forge::susy::{complex_potential, phase_singularity_scan, zero_mode};
use nlse_forge::verify::{power_check, qtilde_drift, solution_residual};
use nlse_forge::{Complex, CouplingConfig, Error, ExactSolution, FamilySpec, ModulationSpec, Mu0Family};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{Command, ConfigError, RunConfig};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numerical(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualExceeded { residual: f64, tolerance: f64 },
    #[error("blow-up at t={t}: max|psi|={max_abs:e} (set evolve.expect_growth = true to accept)")]
    Blowup { t: f64, max_abs: f64 },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io { .. } => 1,
            RunError::Numerical(e) => match e {
                Error::Parameter(_)
                | Error::RootOrdering { .. }
                | Error::InconsistentRoots(_)
                | Error::SingularFamily
                | Error::SeparationMismatch { .. }
                | Error::GridTooSmall { .. }
                | Error::Grid(_) => 1,
                Error::BlowupDetected { .. } => 3,
                _ => 2,
            },
            RunError::ResidualExceeded { .. } => 2,
            RunError::Blowup { .. } => 3,
        }
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;

/// Summary line printed by the binary on success.
pub type Summary = String;

fn write(dir: &Path, name: &str, contents: &str) -> RunResult<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| RunError::Io { path, source })
}

pub fn run(cfg: &RunConfig) -> RunResult<Summary> {
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.clone(), source })?;
    write(dir, "config.cfg", &cfg.echo())?;
    match cfg.command {
        Command::Construct => construct(cfg),
        Command::Verify => verify(cfg),
        Command::Evolve => evolve(cfg),
        Command::Sweep => sweep(cfg),
        Command::Susy => susy(cfg),
    }
}

fn build(cfg: &RunConfig, coupling: &CouplingConfig) -> RunResult<ExactSolution> {
    let sol = if cfg.lenient {
        ExactSolution::build_lenient(coupling, &cfg.amplitude, &cfg.family, &cfg.grid)?
    } else {
        ExactSolution::build(coupling, &cfg.amplitude, &cfg.family, &cfg.grid)?
    };
    Ok(sol)
}

fn spec_for(cfg: &RunConfig, sol: &ExactSolution) -> ModulationSpec {
    cfg.modulation.spec(sol.required_f())
}

fn field_rows(t: f64, x: &[f64], psi: &[[Complex; 2]], rows: &mut Vec<Vec<f64>>) {
    for (xi, p) in x.iter().zip(psi) {
        rows.push(vec![t, *xi, p[0].re, p[0].im, p[1].re, p[1].im]);
    }
}

const FIELD_HEADER: [&str; 6] = ["t", "x", "re_psi1", "im_psi1", "re_psi2", "im_psi2"];

fn construct(cfg: &RunConfig) -> RunResult<Summary> {
    let sol = build(cfg, &cfg.coupling)?;
    let x = cfg.grid.nodes();
    let profile = if sol.rho.is_empty() {
        csv_table(&["x", "R", "theta"], (0..x.len()).map(|i| vec![x[i], sol.r[i], sol.theta[i]]))
    } else {
        csv_table(
            &["x", "rho", "zeta", "R", "theta"],
            (0..x.len()).map(|i| vec![x[i], sol.rho[i], sol.zeta[i], sol.r[i], sol.theta[i]]),
        )
    };
    write(&cfg.output_dir, "profile.csv", &profile)?;
    let mut rows = Vec::new();
    let mut power = Vec::new();
    for &t in &cfg.grid.t_samples {
        let psi = sol.psi_on_grid(t)?;
        power.push(vec![t, grid_power(&psi, cfg.grid.dx())]);
        field_rows(t, &x, &psi, &mut rows);
    }
    write(&cfg.output_dir, "solution.csv", &csv_table(&FIELD_HEADER, rows))?;
    write(&cfg.output_dir, "power.csv", &csv_table(&["t", "power"], power))?;
    let mut meta = String::new();
    let _ = writeln!(meta, "potential: {}", sol.potential.name());
    let _ = writeln!(meta, "regime: {}", cfg.coupling.regime().name());
    let _ = writeln!(meta, "energy: {}", fmt_num(sol.energy));
    let _ = writeln!(meta, "phase_constant: {}", fmt_num(sol.phase_constant));
    match sol.separation_mismatch {
        Some(d) => {
            let _ = writeln!(meta, "separation_mismatch: {}", fmt_num(d));
        }
        None => {
            let _ = writeln!(meta, "separation_mismatch: none");
        }
    }
    for n in &sol.notes {
        let _ = writeln!(meta, "note: {n}");
    }
    write(&cfg.output_dir, "metadata.txt", &meta)?;
    Ok(format!("constructed {} on {} nodes x {} times", sol.potential.name(), x.len(), cfg.grid.t_samples.len()))
}

fn verify(cfg: &RunConfig) -> RunResult<Summary> {
    let sol = build(cfg, &cfg.coupling)?;
    let spec = spec_for(cfg, &sol);
    let report = solution_residual(&sol, &spec, &cfg.grid.t_samples)?;
    let power = power_check(&sol, &cfg.grid.t_samples)?;
    let residual = report.max();
    let pass = residual <= cfg.verify_tolerance;
    let mut text = report.to_text();
    let _ = writeln!(text, "power_identity_error: {}", fmt_num(power));
    let _ = writeln!(text, "tolerance: {}", fmt_num(cfg.verify_tolerance));
    if let Some(d) = sol.separation_mismatch {
        let _ = writeln!(text, "separation_mismatch: {}", fmt_num(d));
    }
    let _ = writeln!(text, "status: {}", if pass { "pass" } else { "fail" });
    write(&cfg.output_dir, "residual.txt", &text)?;
    if !pass {
        return Err(RunError::ResidualExceeded { residual, tolerance: cfg.verify_tolerance });
    }
    Ok(format!("residual {} within tolerance {}", fmt_num(residual), fmt_num(cfg.verify_tolerance)))
}

/// Integrates the configured family under `coupling`, perturbing the initial data when requested.
fn run_cell(cfg: &RunConfig, coupling: &CouplingConfig, seed: u64) -> RunResult<(Trajectory, Option<Blowup>)> {
    let settings = cfg.evolve.as_ref().ok_or(ConfigError::Missing("evolve.dt".into()))?;
    let sol = build(cfg, coupling)?;
    let spec = spec_for(cfg, &sol);
    let mut psi0 = sol.psi_on_grid(0.0)?;
    if settings.perturbation > 0.0 {
        psi0 = perturb(&psi0, settings.perturbation, seed);
    }
    let ecfg = settings.config(&cfg.grid)?;
    Ok(integrate_until_blowup(&psi0, &sol.cfg, &sol.w, &spec, &sol.potential, &ecfg)?)
}

fn evolve(cfg: &RunConfig) -> RunResult<Summary> {
    let settings = cfg.evolve.as_ref().ok_or(ConfigError::Missing("evolve.dt".into()))?;
    let (traj, blowup) = run_cell(cfg, &cfg.coupling, cfg.seed)?;
    write(&cfg.output_dir, "trajectory.csv", &traj.to_csv())?;
    write(&cfg.output_dir, "power.csv", &traj.power_csv())?;
    let class = classify_power(&traj.power);
    let mut text = String::new();
    let _ = writeln!(text, "class: {}", if blowup.is_some() { "blowup" } else { class.name() });
    let t_end = *traj.times.last().unwrap_or(&0.0);
    match power_law_exponent(&traj.times, &traj.power, 0.2 * t_end, t_end) {
        Some(p) => {
            let _ = writeln!(text, "power_law_exponent: {}", fmt_num(p));
        }
        None => {
            let _ = writeln!(text, "power_law_exponent: none");
        }
    }
    if let Ok(d) = qtilde_drift(&traj, &cfg.coupling) {
        let _ = writeln!(text, "qtilde_drift: {}", fmt_num(d));
    }
    if let Some(b) = blowup {
        let _ = writeln!(text, "blowup_t: {}", fmt_num(b.t));
        let _ = writeln!(text, "blowup_max_abs: {}", fmt_num(b.max_abs));
    }
    write(&cfg.output_dir, "classification.txt", &text)?;
    match blowup {
        Some(b) if !settings.expect_growth => Err(RunError::Blowup { t: b.t, max_abs: b.max_abs }),
        Some(b) => Ok(format!("growth run stopped at t={} as expected", fmt_num(b.t))),
        None => Ok(format!("evolved to t={}, power class {}", fmt_num(t_end), class.name())),
    }
}

fn mu0_label(m: &Mu0Family) -> String {
    match m {
        Mu0Family::Constant(c) => format!("constant:{}", fmt_num(*c)),
        Mu0Family::Cosine { omega0 } => format!("cosine:{}", fmt_num(*omega0)),
        Mu0Family::Gaussian => "gaussian".into(),
        Mu0Family::Tabulated(_) => "tabulated".into(),
    }
}

fn sweep(cfg: &RunConfig) -> RunResult<Summary> {
    let sw = cfg.sweep.as_ref().ok_or(ConfigError::Missing("sweep.mu0".into()))?;
    let mut cells = Vec::new();
    for mu0 in &sw.mu0 {
        for g in sw.gamma.values() {
            for b in sw.beta_abs.values() {
                cells.push((mu0.clone(), g, b));
            }
        }
    }
    let cell_dir = cfg.output_dir.join("cells");
    fs::create_dir_all(&cell_dir).map_err(|source| RunError::Io { path: cell_dir.clone(), source })?;
    let classes: Vec<RunResult<String>> = cells
        .par_iter()
        .enumerate()
        .map(|(k, (mu0, g, b))| {
            let coupling = match CouplingConfig::new(*g, *b, cfg.coupling.theta3, mu0.clone()) {
                Ok(c) => c,
                Err(_) => return Ok("failed".to_string()),
            };
            match run_cell(cfg, &coupling, cfg.seed.wrapping_add(k as u64)) {
                Ok((traj, blowup)) => {
                    write(&cell_dir, &format!("cell_{k:04}_power.csv"), &traj.power_csv())?;
                    Ok(if blowup.is_some() { "blowup".into() } else { classify_power(&traj.power).name().into() })
                }
                Err(RunError::Io { path, source }) => Err(RunError::Io { path, source }),
                Err(_) => Ok("failed".into()),
            }
        })
        .collect();
    let mut heat = String::from("cell,mu0,gamma,beta_abs,class\n");
    let mut counts = std::collections::BTreeMap::new();
    for (k, ((mu0, g, b), class)) in cells.iter().zip(classes).enumerate() {
        let class = class?;
        let _ = writeln!(heat, "{k},{},{},{},{class}", mu0_label(mu0), fmt_num(*g), fmt_num(*b));
        *counts.entry(class).or_insert(0usize) += 1;
    }
    write(&cfg.output_dir, "heatmap.csv", &heat)?;
    let tally: Vec<String> = counts.iter().map(|(c, n)| format!("{c}={n}")).collect();
    Ok(format!("swept {} cells: {}", cells.len(), tally.join(" ")))
}

fn susy(cfg: &RunConfig) -> RunResult<Summary> {
    let FamilySpec::ZeroMode { h } = &cfg.family else {
        return Err(ConfigError::Invalid("susy needs family = zero_mode".into()).into());
    };
    let x = cfg.grid.nodes();
    let mode = zero_mode(h, &cfg.grid)?;
    let mut rows = Vec::with_capacity(x.len());
    for (i, &xi) in x.iter().enumerate() {
        let v = complex_potential(h, xi)?;
        rows.push(vec![xi, v.re, v.im, h.v_eff(xi)?, mode.r0[i], mode.theta[i]]);
    }
    write(&cfg.output_dir, "susy.csv", &csv_table(&["x", "re_v", "im_v", "v_eff", "r0", "theta"], rows))?;
    let regions = phase_singularity_scan(h, &cfg.grid)?;
    let mut text = String::new();
    let _ = writeln!(text, "norm: {}", fmt_num(mode.norm));
    let _ = writeln!(text, "regions: {}", regions.len());
    for r in &regions {
        let _ = writeln!(
            text,
            "region: {} {} {} {}",
            r.kind.name(),
            fmt_num(r.start),
            fmt_num(r.end),
            fmt_num(r.max_abs_theta)
        );
    }
    write(&cfg.output_dir, "singularities.txt", &text)?;
    Ok(format!("zero mode with {} flagged region(s)", regions.len()))
}
