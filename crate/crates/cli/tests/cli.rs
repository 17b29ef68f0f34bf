use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fermigas"));
    cmd.env_remove("FERMIGAS_CONFIG");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn parse_csv_block(block: &str) -> (String, Vec<(f64, f64)>) {
    let mut lines = block.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| {
            let (x, y) = l.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect();
    (header, rows)
}

#[test]
fn mu_curve_csv() {
    let text = stdout(&["mu-curve", "--t-max", "1.5", "--steps", "300", "--format", "csv"]);
    let (header, rows) = parse_csv_block(&text);
    assert_eq!(header, "t,m");
    assert_eq!(rows.len(), 300);
    assert_eq!(rows[0], (0.0, 1.0));
    assert_eq!(rows[299].0, 1.5);
    assert!(rows.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 < w[0].1));
    assert!(!text.contains('\r'));
}

#[test]
fn default_grids() {
    for (cmd, label) in [("mu-curve", "t,m"), ("heat-curve", "t,c"), ("msd-curve", "t,msd")] {
        let (header, rows) = parse_csv_block(&stdout(&[cmd]));
        assert_eq!(header, label);
        assert_eq!(rows.len(), 200);
        assert_eq!(rows.last().unwrap().0, 2.0);
    }
}

#[test]
fn csv_values_round_trip_against_json() {
    let csv = stdout(&["heat-curve", "--t-min", "0.1", "--t-max", "0.3", "--steps", "3"]);
    let json = stdout(&["heat-curve", "--t-min", "0.1", "--t-max", "0.3", "--steps", "3", "--format", "json"]);
    let (_, rows) = parse_csv_block(&csv);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["x_label"], "t");
    assert_eq!(v["y_label"], "c");
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 3);
    for ((x, y), s) in rows.iter().zip(samples) {
        assert_eq!(*x, s[0].as_f64().unwrap());
        assert_eq!(*y, s[1].as_f64().unwrap());
    }
}

#[test]
fn profile_blocks() {
    let text = stdout(&["profile", "--t", "0,0.25,0.5,0.75,1.0"]);
    let blocks: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(blocks.len(), 5);
    for block in &blocks {
        let (header, rows) = parse_csv_block(block);
        assert_eq!(header, "s,density");
        assert_eq!(rows.len(), 300);
        assert!(rows.last().unwrap().0 >= 1.5);
    }
    let (_, zero) = parse_csv_block(blocks[0]);
    assert!((zero[0].1 - 8.0 / (std::f64::consts::PI.powi(2))).abs() < 1e-15);

    let momentum = stdout(&["profile", "--t", "0.5", "--momentum", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&momentum).unwrap();
    assert_eq!(v["x_label"], "q");
    assert_eq!(v["t"], 0.5);
    let space = stdout(&["profile", "--t", "0.5", "--space", "--format", "json"]);
    let w: serde_json::Value = serde_json::from_str(&space).unwrap();
    assert_eq!(v["samples"], w["samples"]);
    assert_eq!(run(&["profile", "--space", "--momentum"]).status.code(), Some(2));
}

#[test]
fn lithium_scales_json() {
    let text = stdout(&["scales", "--preset", "li6-top", "--format", "json", "--temperature", "3.5e-6"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let um = |k: &str| v[k].as_f64().unwrap() * 1e6;
    assert!((um("r_fermi_m") - 25.0).abs() < 1.0);
    assert!((um("t_fermi_k") - 3.5).abs() < 0.1);
    assert!((um("sigma_r_m") - 1.6).abs() < 0.1);
    assert!((um("inverse_k_fermi_m") - 0.1).abs() < 0.01);
    assert!((v["t"].as_f64().unwrap() - 1.0).abs() < 0.02);
    assert_eq!(v["n_particles"], 100000);
}

#[test]
fn custom_trap() {
    let text =
        stdout(&["scales", "--preset", "none", "--mass-amu", "40", "--omega-r", "1000", "--lambda", "1", "--n", "1"]);
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("fermi_levels,1.8171205928321397e0\n"), "{text}");
    assert_eq!(run(&["scales", "--preset", "none", "--mass-amu", "40"]).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let a = scratch("det-a.csv");
    let b = scratch("det-b.csv");
    for path in [&a, &b] {
        let out = run(&["profile", "--t", "0.1,0.6", "--output", path.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let j1 = stdout(&["oracle", "--format", "json"]);
    let j2 = stdout(&["oracle", "--format", "json"]);
    assert_eq!(j1, j2);
}

#[test]
fn config_file_and_precedence() {
    let cfg = scratch("mu.conf");
    fs::write(&cfg, "# chemical potential grid\nt-max = 1.0\nsteps=11\nformat=json\n").unwrap();
    let text = stdout(&["mu-curve", "--config", cfg.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["samples"].as_array().unwrap().len(), 11);

    let flagged = stdout(&["mu-curve", "--config", cfg.to_str().unwrap(), "--steps", "4", "--format", "csv"]);
    assert_eq!(parse_csv_block(&flagged).1.len(), 4);

    let via_env = bin().env("FERMIGAS_CONFIG", &cfg).args(["mu-curve"]).output().unwrap();
    assert!(via_env.status.success());
    assert_eq!(String::from_utf8(via_env.stdout).unwrap(), text);

    let bad = scratch("bad.conf");
    fs::write(&bad, "t-max=1\nwidth=3\n").unwrap();
    let out = run(&["mu-curve", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("width"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors() {
    for args in [
        vec!["mu-curve", "--steps", "0"],
        vec!["mu-curve", "--t-min", "-1"],
        vec!["mu-curve", "--t-max", "abc"],
        vec!["heat-curve", "--format", "xml"],
        vec!["profile", "--t", "0.5,0.2"],
        vec!["validity", "--radii", "1.5"],
        vec!["oracle", "--shells", "2.5"],
        vec!["perturb"],
        vec!["frobnicate"],
        vec![],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn empty_curve_writes_nothing() {
    let path = scratch("empty.csv");
    let _ = fs::remove_file(&path);
    let out = run(&["msd-curve", "--steps", "0", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!path.exists());
}

#[test]
fn unwritable_output_fails() {
    let out = run(&["mu-curve", "--steps", "3", "--output", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn perturbation_from_table() {
    let input = scratch("dv.csv");
    let mut table = String::from("s,dv\n");
    for i in 0..=100 {
        let s = i as f64 / 100.0;
        table.push_str(&format!("{s},{}\n", 1e-3 * s * s));
    }
    fs::write(&input, table).unwrap();
    let text = stdout(&["perturb", "--input", input.to_str().unwrap()]);
    let mut blocks = text.split("\n\n");
    let report = blocks.next().unwrap();
    let shift: f64 = report.lines().nth(1).unwrap().strip_prefix("delta_e_fermi,").unwrap().parse().unwrap();
    // linear interpolation of the 101-row table adds at most eps h^2 / 4
    assert!((shift - 5e-4).abs() < 1e-7, "{shift}");
    let (header, rows) = parse_csv_block(blocks.next().unwrap());
    assert_eq!(header, "s,density");
    assert_eq!(rows.len(), 2048);

    let large = scratch("dv-large.csv");
    fs::write(&large, "0,0.5\n1,0.5\n").unwrap();
    assert_eq!(run(&["perturb", "--input", large.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["perturb", "--input", "/nonexistent/dv.csv"]).status.code(), Some(1));
}

#[test]
fn bose_and_validity_reports() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["bose-compare", "--format", "json"])).unwrap();
    let ratio = v["radius_ratio"].as_f64().unwrap();
    assert!(ratio > 0.5 && ratio < 2.0);
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["validity", "--radii", "0,0.5,1", "--format", "json"])).unwrap();
    let rows = v[1]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[0]["margin"].is_null());
    assert_eq!(rows[1]["valid"], true);
    assert_eq!(rows[2]["valid"], false);
}

#[test]
fn oracle_report() {
    let text = stdout(&["oracle", "--shells", "10,20"]);
    let blocks: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(blocks.len(), 2);
    let dev: f64 = blocks[0].lines().find_map(|l| l.strip_prefix("deviation_over_e_fermi,")).unwrap().parse().unwrap();
    assert!(dev < 0.01);
    assert_eq!(blocks[1].lines().count(), 3);
}
