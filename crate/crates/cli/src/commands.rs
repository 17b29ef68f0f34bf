//! One function per subcommand, each returning the blocks to emit.

use std::fs;

use fermigas::bose::{compare_sizes, pauli_pseudopotential};
use fermigas::curve::linspace;
use fermigas::discrete::{
    breakdown_distance, closed_shell_count, exact_central_density, exact_mu, margin_crossing,
    semiclassical_central_density, validity_report,
};
use fermigas::distributions::{msd_curve, profile_curves, Marginal};
use fermigas::perturbation::{density_response, mean_field_correction, PerturbationField};
use fermigas::scales::{to_scaled, PhysicalCoordinates, AMU};
use fermigas::{derive_scales, solve_mu, thermo_curve, TrapSpec};

use crate::output::{Block, Value};
use crate::params::RunConfig;
use crate::CliError;

pub fn run(cfg: &RunConfig) -> Result<Vec<Block>, CliError> {
    match cfg.command {
        "mu-curve" => Ok(vec![Block::curve(thermo_curve(&t_grid(cfg)?)?.0)]),
        "heat-curve" => Ok(vec![Block::curve(thermo_curve(&t_grid(cfg)?)?.1)]),
        "msd-curve" => Ok(vec![Block::curve(msd_curve(&t_grid(cfg)?)?)]),
        "profile" => profile(cfg),
        "scales" => scales(cfg),
        "perturb" => perturb(cfg),
        "bose-compare" => bose(cfg),
        "oracle" => oracle(cfg),
        "validity" => validity(cfg),
        other => Err(CliError::Usage(format!("unknown command {other}"))),
    }
}

fn t_grid(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let (lo, hi) = (cfg.f64("t-min")?, cfg.f64("t-max")?);
    let steps = cfg.count("steps")? as usize;
    if lo < 0.0 {
        return Err(CliError::Usage(format!("--t-min must be non-negative, got {lo}")));
    }
    if steps == 0 {
        return Err(CliError::Usage("--steps is zero; the curve would be empty".into()));
    }
    if steps > 1 && hi <= lo {
        return Err(CliError::Usage(format!("--t-max ({hi}) must exceed --t-min ({lo})")));
    }
    Ok(linspace(lo, hi, steps))
}

fn profile(cfg: &RunConfig) -> Result<Vec<Block>, CliError> {
    let marginal = match cfg.raw("marginal") {
        "space" => Marginal::Space,
        "momentum" => Marginal::Momentum,
        other => return Err(CliError::Usage(format!("--marginal must be space or momentum, got '{other}'"))),
    };
    let temps = cfg.list("t")?;
    if temps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage("--t values must be strictly increasing".into()));
    }
    let steps = cfg.count("steps")? as usize;
    if steps < 2 {
        return Err(CliError::Usage("--steps must be at least 2".into()));
    }
    let curves = profile_curves(&temps, steps, cfg.positive("s-max")?, marginal)?;
    Ok(curves.into_iter().map(|p| Block::Curve { curve: p.curve, meta: vec![("t", Value::Num(p.t))] }).collect())
}

fn scales(cfg: &RunConfig) -> Result<Vec<Block>, CliError> {
    let from_preset = match cfg.raw("preset") {
        "li6-top" => true,
        "none" => false,
        other => return Err(CliError::Usage(format!("unknown preset '{other}'"))),
    };
    if !from_preset {
        if let Some(missing) = ["mass-amu", "omega-r", "lambda", "n"].iter().find(|k| !cfg.is_set(k)) {
            return Err(CliError::Usage(format!("--preset none needs --{missing}")));
        }
    }
    let mut spec = TrapSpec::li6_top();
    if cfg.is_set("mass-amu") {
        spec.mass = cfg.positive("mass-amu")? * AMU;
    }
    if cfg.is_set("omega-r") {
        spec.omega_r = cfg.positive("omega-r")?;
    }
    if cfg.is_set("lambda") {
        spec.lambda = cfg.positive("lambda")?;
    }
    if cfg.is_set("n") {
        spec.n_particles = cfg.count("n")?;
    }
    let s = derive_scales(&spec)?;
    let mut rows = vec![
        ("preset", Value::Text(cfg.raw("preset").to_string())),
        ("mass_kg", Value::Num(spec.mass)),
        ("omega_r_per_s", Value::Num(spec.omega_r)),
        ("lambda", Value::Num(spec.lambda)),
        ("n_particles", Value::Int(spec.n_particles)),
        ("e_fermi_j", Value::Num(s.e_fermi)),
        ("t_fermi_k", Value::Num(s.t_fermi)),
        ("r_fermi_m", Value::Num(s.r_fermi)),
        ("k_fermi_per_m", Value::Num(s.k_fermi)),
        ("inverse_k_fermi_m", Value::Num(1.0 / s.k_fermi)),
        ("sigma_r_m", Value::Num(s.sigma_r)),
        ("level_spacing_j", Value::Num(s.level_spacing)),
        ("size_ratio", Value::Num(s.size_ratio())),
        ("fermi_levels", Value::Num(s.fermi_levels())),
    ];
    if cfg.is_set("temperature") {
        let temperature = cfg.f64("temperature")?;
        let scaled = to_scaled(&spec, PhysicalCoordinates { rho: 0.0, wavenumber: 0.0, temperature })?;
        rows.push(("temperature_k", Value::Num(temperature)));
        rows.push(("t", Value::Num(scaled.t)));
    }
    Ok(vec![Block::Report(rows)])
}

/// Reads `s, dV/E_F` rows; a non-numeric first line is taken as a header.
fn read_table(path: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Failure(format!("cannot read {path}: {e}")))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed = line.split_once(',').and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
        match parsed {
            Some(row) => rows.push(row),
            None if i == 0 => continue,
            None => return Err(CliError::Usage(format!("{path}:{}: expected two numbers", i + 1))),
        }
    }
    Ok(rows)
}

fn perturb(cfg: &RunConfig) -> Result<Vec<Block>, CliError> {
    let result = match (cfg.is_set("input"), cfg.is_set("u-int")) {
        (true, false) => density_response(&PerturbationField::from_table(&read_table(cfg.raw("input"))?)?)?,
        (false, true) => mean_field_correction(cfg.f64("u-int")?)?,
        _ => return Err(CliError::Usage("give exactly one of --input or --u-int".into())),
    };
    Ok(vec![Block::Report(vec![("delta_e_fermi", Value::Num(result.delta_e_fermi))]), Block::curve(result.curve()?)])
}

fn bose(cfg: &RunConfig) -> Result<Vec<Block>, CliError> {
    let n = cfg.count("n")?;
    let lambda = cfg.positive("lambda")?;
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let u_bose = match cfg.raw("u-bose") {
        "pauli" => {
            // trap units do not depend on the mass or frequency chosen here
            let spec = TrapSpec::new(1.0, 1.0, lambda, n)?;
            let scales = derive_scales(&spec)?;
            pauli_pseudopotential(&scales).in_trap_units(&scales)
        }
        _ => cfg.positive("u-bose")?,
    };
    let c = compare_sizes(n as f64, lambda, u_bose)?;
    Ok(vec![Block::Report(vec![
        ("n_particles", Value::Int(n)),
        ("lambda", Value::Num(lambda)),
        ("u_bose", Value::Num(u_bose)),
        ("thomas_fermi_parameter", Value::Num(u_bose * n as f64 / lambda)),
        ("r_fermi", Value::Num(c.r_fermi)),
        ("r_bose", Value::Num(c.r_bose)),
        ("radius_ratio", Value::Num(c.r_bose / c.r_fermi)),
        ("k_fermi", Value::Num(c.k_fermi)),
        ("k_bose", Value::Num(c.k_bose)),
        ("e_fermi", Value::Num(c.e_fermi)),
        ("mu_bose", Value::Num(c.mu_bose)),
    ])])
}

fn oracle(cfg: &RunConfig) -> Result<Vec<Block>, CliError> {
    let n = cfg.count("n")?;
    let lambda = cfg.positive("lambda")?;
    let t = cfg.positive("t")?;
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let e_fermi = (6.0 * lambda * n as f64).cbrt();
    let suppressed = exact_mu(n, lambda, t * e_fermi)? / e_fermi;
    let exact = suppressed + 0.5 * (2.0 + lambda) / e_fermi;
    let continuum = solve_mu(t)?;
    let report = Block::Report(vec![
        ("n_particles", Value::Int(n)),
        ("lambda", Value::Num(lambda)),
        ("t", Value::Num(t)),
        ("kt_over_level_spacing", Value::Num(t * e_fermi)),
        ("continuum_mu", Value::Num(continuum)),
        ("exact_mu", Value::Num(exact)),
        ("exact_mu_zero_point_suppressed", Value::Num(suppressed)),
        ("deviation_over_e_fermi", Value::Num((exact - continuum).abs())),
    ]);

    let mut rows = Vec::new();
    for shell in cfg.list("shells")? {
        if shell < 0.0 || shell.fract() != 0.0 || shell > 2000.0 {
            return Err(CliError::Usage(format!("--shells entries must be integers in [0, 2000], got {shell}")));
        }
        let count = closed_shell_count(shell as u64);
        let exact = exact_central_density(count)?;
        let semi = semiclassical_central_density(count as f64, 1.0);
        rows.push(vec![
            Value::Int(shell as u64),
            Value::Int(count),
            Value::Num(exact),
            Value::Num(semi),
            Value::Num((exact / semi - 1.0).abs()),
        ]);
    }
    let table = Block::Table {
        columns: vec!["shell", "n_particles", "exact_central_density", "semiclassical_central_density", "deviation"],
        rows,
    };
    Ok(vec![report, table])
}

fn validity(cfg: &RunConfig) -> Result<Vec<Block>, CliError> {
    let n = cfg.count("n")?;
    let lambda = cfg.positive("lambda")?;
    let report = validity_report(n, lambda, &cfg.list("radii")?)?;
    let nf = n as f64;
    let summary = Block::Report(vec![
        ("n_particles", Value::Int(n)),
        ("lambda", Value::Num(lambda)),
        ("shell_thickness", Value::Num(report.shell_thickness)),
        ("inverse_k_fermi", Value::Num(report.inverse_k_fermi)),
        ("margin_crossing_s", Value::Num(margin_crossing(nf, lambda))),
        ("breakdown_distance", Value::Num(breakdown_distance(nf, lambda))),
    ]);
    let rows = report
        .radii
        .iter()
        .map(|r| {
            vec![
                Value::Num(r.s),
                Value::Num(r.margin),
                Value::Num(r.cell_min),
                Value::Num(r.cell_max),
                Value::Num(r.cell_scale.unwrap_or(f64::NAN)),
                Value::Bool(r.valid),
            ]
        })
        .collect();
    let table = Block::Table { columns: vec!["s", "margin", "cell_min", "cell_max", "cell_scale", "valid"], rows };
    Ok(vec![summary, table])
}
