use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use nlse_forge_cli::{RunConfig, THREADS_ENV};

const BIN: &str = env!("CARGO_BIN_EXE_nlse-forge");

fn presets_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets")
}

fn soliton(gamma: f64, beta: f64, mu0: &str, extra: &str) -> String {
    format!(
        "coupling.gamma = {gamma}
coupling.beta_abs = {beta}
coupling.theta3 = pi/3
coupling.mu0 = {mu0}
amplitude.w1 = 1
amplitude.w2 = 1
amplitude.theta1 = pi/6
amplitude.theta2 = 2pi/3
family = similarity
scale = uniform
profile = sech
profile.m = -1
profile.sigma = -0.5
grid.x_min = -16
grid.x_max = 16
grid.n_x = 128
evolve.dt = 1e-2
evolve.t_final = 20
evolve.record_stride = 10
{extra}
"
    )
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(cmd: &str, config: &str, out: &Path, args: &[&str], env: &[(&str, &str)]) -> Outcome {
    fs::create_dir_all(out).unwrap();
    let cfg_path = out.join("input.cfg");
    fs::write(&cfg_path, config).unwrap();
    run_file(cmd, &cfg_path, out, args, env)
}

fn run_file(cmd: &str, cfg: &Path, out: &Path, args: &[&str], env: &[(&str, &str)]) -> Outcome {
    let mut c = Command::new(BIN);
    c.arg(cmd).arg("--config").arg(cfg).arg("--out").arg(out).args(args);
    for (k, v) in env {
        c.env(k, v);
    }
    let o = c.output().unwrap();
    Outcome {
        code: o.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&o.stdout).into(),
        stderr: String::from_utf8_lossy(&o.stderr).into(),
    }
}

fn read_pairs(path: &Path) -> Vec<(f64, f64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

fn key(text: &str, k: &str) -> String {
    text.lines().find_map(|l| l.strip_prefix(&format!("{k}: "))).unwrap_or_else(|| panic!("no {k} in {text}")).to_string()
}

#[test]
fn presets_echo_round_trip() {
    let mut n = 0;
    for entry in fs::read_dir(presets_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let cfg = RunConfig::parse(&text, None).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let echo = cfg.echo();
        assert_eq!(RunConfig::parse(&echo, None).unwrap(), cfg, "{}", path.display());
        n += 1;
    }
    assert_eq!(n, 18);
}

#[test]
fn echo_file_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let text = soliton(0.5, 0.7, "cosine:1.5", "evolve.boundary = absorbing\nevolve.width = 2\nseed = 9");
    let o = run("construct", &text, dir.path(), &["--seed", "42"], &[]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let echo = fs::read_to_string(dir.path().join("config.cfg")).unwrap();
    let cfg = RunConfig::parse(&echo, None).unwrap();
    assert_eq!(cfg.seed, 42);
    assert_eq!(cfg.output_dir, dir.path());
    assert_eq!(cfg.echo(), echo);
}

#[test]
fn evolve_is_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let text = soliton(0.5, 0.7, "constant:1", "evolve.perturbation = 1e-3").replace("evolve.t_final = 20", "evolve.t_final = 2");
    let outs: Vec<_> = [("a", "7"), ("b", "7"), ("c", "8")]
        .iter()
        .map(|(name, seed)| {
            let out = dir.path().join(name);
            let o = run("evolve", &text, &out, &["--seed", seed], &[]);
            assert_eq!(o.code, 0, "{}", o.stderr);
            fs::read(out.join("trajectory.csv")).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    assert_ne!(outs[0], outs[2]);
}

#[test]
fn decoupled_soliton_has_flat_power() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("evolve", &soliton(0.0, 0.0, "constant:1", ""), dir.path(), &[], &[]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let class = fs::read_to_string(dir.path().join("classification.txt")).unwrap();
    assert_eq!(key(&class, "class"), "flat");
    let p = read_pairs(&dir.path().join("power.csv"));
    assert!(p.iter().all(|(_, v)| (v - p[0].1).abs() < 1e-9 * p[0].1));
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let base = soliton(0.5, 0.7, "constant:1", "");
    assert_eq!(run("verify", &format!("{base}\nbogus.key = 1"), &dir.path().join("a"), &[], &[]).code, 1);
    assert_eq!(run("verify", &base.replace("grid.n_x = 128", ""), &dir.path().join("b"), &[], &[]).code, 1);
    let roots = base.replace("profile = sech", "profile = elliptic\nprofile.case = a\nprofile.q1 = 0.3\nprofile.q2 = 0.1\nprofile.q3 = 0.2")
        .replace("profile.m = -1\n", "")
        .replace("profile.sigma = -0.5", "profile.sigma = 1");
    assert_eq!(run("verify", &roots, &dir.path().join("c"), &[], &[]).code, 1);
    let threads = run("verify", &base, &dir.path().join("d"), &[], &[(THREADS_ENV, "zero")]);
    assert_eq!(threads.code, 1);
    let missing = run_file("verify", &dir.path().join("none.cfg"), dir.path(), &[], &[]);
    assert_eq!(missing.code, 1);
}

#[test]
fn soliton_verifies_and_thread_cap_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let text = soliton(0.5, 0.7, "constant:1", "grid.t_max = 5\ngrid.n_t = 11\ngrid.n_x = 512");
    let text = text.replace("grid.n_x = 128\n", "");
    let o = run("verify", &text, dir.path(), &[], &[(THREADS_ENV, "2")]);
    assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    let rep = fs::read_to_string(dir.path().join("residual.txt")).unwrap();
    assert_eq!(key(&rep, "status"), "pass");
    assert!(key(&rep, "max_abs_1").parse::<f64>().unwrap() < 1e-6);
}

#[test]
fn residual_and_blowup_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_file("verify", &presets_dir().join("fig1a.cfg"), &dir.path().join("fig1a"), &[], &[]);
    assert_eq!(o.code, 2, "{}", o.stderr);
    let rep = fs::read_to_string(dir.path().join("fig1a/residual.txt")).unwrap();
    assert_eq!(key(&rep, "status"), "fail");
    assert!(key(&rep, "separation_mismatch").parse::<f64>().unwrap().abs() > 0.1);

    let growth = soliton(2.0, 0.5, "constant:1", "");
    let o = run("evolve", &growth, &dir.path().join("g"), &[], &[]);
    assert_eq!(o.code, 3, "{}", o.stderr);
    assert_eq!(key(&fs::read_to_string(dir.path().join("g/classification.txt")).unwrap(), "class"), "blowup");
    let o = run("evolve", &format!("{growth}evolve.expect_growth = true\n"), &dir.path().join("h"), &[], &[]);
    assert_eq!(o.code, 0, "{}", o.stderr);
}

/// Parabolic refinement of interior local maxima.
fn maxima(p: &[(f64, f64)]) -> Vec<f64> {
    p.windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
        .map(|w| {
            let h = w[1].0 - w[0].0;
            let (a, b, c) = (w[0].1, w[1].1, w[2].1);
            w[1].0 + 0.5 * h * (a - c) / (a - 2.0 * b + c)
        })
        .collect()
}

#[test]
fn fig1b_power_period() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_file("construct", &presets_dir().join("fig1b.cfg"), dir.path(), &[], &[]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let p = read_pairs(&dir.path().join("power.csv"));
    let peaks = maxima(&p);
    assert!(peaks.len() >= 3, "{peaks:?}");
    let period = (peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64;
    let expected = std::f64::consts::PI / (0.7f64 * 0.7 - 0.25).sqrt();
    assert!((period - expected).abs() < 1e-3, "period {period}, expected {expected}");
}

#[test]
fn fig1b_with_consistent_frequency_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let omega = (4.0 * 0.69 / (1.0 - 0.15f64 * 0.15)).sqrt();
    let text = fs::read_to_string(presets_dir().join("fig1b.cfg"))
        .unwrap()
        .replace("scale.omega = 2", &format!("scale.omega = {omega:?}"))
        .replace("solution.lenient = true", "solution.lenient = false");
    let o = run("verify", &text, dir.path(), &[], &[]);
    assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    let strict = fs::read_to_string(presets_dir().join("fig1b.cfg")).unwrap().replace("solution.lenient = true", "");
    assert_eq!(run("verify", &strict, &dir.path().join("strict"), &[], &[]).code, 1);
}

#[test]
fn cosine_sweep_is_bounded_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let text = soliton(0.0, 0.0, "constant:1", "")
        + "sweep.gamma.min = 0\nsweep.gamma.max = 1\nsweep.gamma.n = 3\n"
        + "sweep.beta_abs.min = 0\nsweep.beta_abs.max = 1\nsweep.beta_abs.n = 3\nsweep.mu0 = cosine:1\n";
    let a = run("sweep", &text, &dir.path().join("a"), &[], &[(THREADS_ENV, "3")]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let b = run("sweep", &text, &dir.path().join("b"), &[], &[(THREADS_ENV, "1")]);
    assert_eq!(b.code, 0, "{}", b.stderr);
    let heat = fs::read_to_string(dir.path().join("a/heatmap.csv")).unwrap();
    assert_eq!(heat, fs::read_to_string(dir.path().join("b/heatmap.csv")).unwrap());
    let rows: Vec<&str> = heat.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    for r in &rows {
        let class = r.rsplit(',').next().unwrap();
        assert!(matches!(class, "flat" | "oscillating" | "settling"), "{r}");
    }
    for k in 0..9 {
        let name = format!("cells/cell_{k:04}_power.csv");
        assert_eq!(fs::read(dir.path().join("a").join(&name)).unwrap(), fs::read(dir.path().join("b").join(&name)).unwrap());
    }
}

#[test]
fn susy_flags_rosen_morse_tails() {
    let dir = tempfile::tempdir().unwrap();
    let text = "amplitude.w1 = 1
amplitude.w2 = 0
family = zero_mode
superpotential = rosen_morse
superpotential.n = 2
grid.x_min = -40
grid.x_max = 40
grid.n_x = 801
";
    let o = run("susy", text, dir.path(), &[], &[]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let flags = fs::read_to_string(dir.path().join("singularities.txt")).unwrap();
    assert_eq!(key(&flags, "regions"), "2");
    assert!(key(&flags, "norm").parse::<f64>().unwrap() > 0.0);
    let csv = fs::read_to_string(dir.path().join("susy.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "x,re_v,im_v,v_eff,r0,theta");
    assert_eq!(csv.lines().count(), 802);
    let r0: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(4).unwrap().parse().unwrap()).collect();
    let dx = 0.1;
    let trapz = dx * (r0.iter().map(|r| r * r).sum::<f64>() - 0.5 * (r0[0].powi(2) + r0[800].powi(2)));
    assert!((trapz - 1.0).abs() < 1e-12, "{trapz}");
    let wrong_family = soliton(0.0, 0.0, "constant:1", "");
    assert_eq!(run("susy", &wrong_family, &dir.path().join("w"), &[], &[]).code, 1);
}
