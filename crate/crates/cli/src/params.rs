//! Command table, config-file parsing and typed parameter lookup.

use std::collections::BTreeMap;
use std::fs;

use crate::CliError;

pub const CONFIG_ENV: &str = "FERMIGAS_CONFIG";

/// A parameter accepted by a subcommand: flag name (also the config key),
/// default value and help text.
pub struct Param {
    pub key: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [Param],
}

const fn p(key: &'static str, default: &'static str, help: &'static str) -> Param {
    Param { key, default, help }
}

const T_GRID: [Param; 3] = [
    p("t-min", "0", "lowest reduced temperature k_B T / E_F"),
    p("t-max", "2", "highest reduced temperature"),
    p("steps", "200", "number of grid points"),
];

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec { name: "mu-curve", about: "Chemical potential mu/E_F against reduced temperature", params: &T_GRID },
    CommandSpec {
        name: "heat-curve",
        about: "Heat capacity per particle against reduced temperature",
        params: &T_GRID,
    },
    CommandSpec {
        name: "profile",
        about: "Universal density profiles, one block per temperature",
        params: &[
            p("t", "0,0.25,0.5,0.75,1.0", "comma-separated reduced temperatures"),
            p("s-max", "1.5", "smallest sampled extent; widened to hold 99.9% of the atoms"),
            p("steps", "300", "samples per profile"),
            p("marginal", "space", "space or momentum (also --space / --momentum)"),
        ],
    },
    CommandSpec {
        name: "msd-curve",
        about: "Mean-square cloud size <s^2> against reduced temperature",
        params: &T_GRID,
    },
    CommandSpec {
        name: "scales",
        about: "Characteristic energy, length and temperature scales of a trap",
        params: &[
            p("preset", "li6-top", "li6-top or none"),
            p("mass-amu", "", "atomic mass in atomic mass units"),
            p("omega-r", "", "radial trap frequency in rad/s"),
            p("lambda", "", "anisotropy omega_z / omega_r"),
            p("n", "", "number of atoms"),
            p("temperature", "", "optional temperature in kelvin, reported as k_B T / E_F"),
        ],
    },
    CommandSpec {
        name: "perturb",
        about: "Linear response of the zero-temperature cloud to a small extra potential",
        params: &[
            p("input", "", "two-column CSV of s, dV/E_F covering [0, 1]"),
            p("u-int", "", "mean-field coupling U N lambda / (E_F R_F^3) instead of an input file"),
        ],
    },
    CommandSpec {
        name: "bose-compare",
        about: "Fermi and Thomas-Fermi Bose cloud sizes in trap units",
        params: &[
            p("n", "100000", "number of atoms"),
            p("lambda", "2.8284271247461903", "anisotropy omega_z / omega_r"),
            p("u-bose", "pauli", "contact coupling 4 pi a in trap units, or pauli for E_F R_F^3 / N"),
        ],
    },
    CommandSpec {
        name: "oracle",
        about: "Exact discrete-spectrum checks of the continuum results",
        params: &[
            p("n", "10000", "number of atoms for the chemical potential check"),
            p("lambda", "1", "anisotropy omega_z / omega_r"),
            p("t", "0.2", "reduced temperature k_B T / E_F"),
            p("shells", "10,20,40,80", "isotropic closed shells for the central-density check"),
        ],
    },
    CommandSpec {
        name: "validity",
        about: "Local validity margin of the semiclassical profile",
        params: &[
            p("n", "100000", "number of atoms"),
            p("lambda", "2.8284271247461903", "anisotropy omega_z / omega_r"),
            p("radii", "0,0.25,0.5,0.75,0.9,0.95,1.0", "comma-separated reduced radii in [0, 1.2]"),
        ],
    },
];

/// Keys accepted everywhere, in addition to the command's own.
pub const GLOBAL_KEYS: [&str; 2] = ["format", "output"];

pub fn command(name: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.name == name)
}

/// Parses flat `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

pub fn read_config(path: &str) -> Result<Vec<(String, String)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    parse_config(&text)
}

/// Resolved parameters of one run: defaults, then config file, then flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub values: BTreeMap<&'static str, String>,
}

impl RunConfig {
    pub fn resolve(
        spec: &'static CommandSpec,
        file: &[(String, String)],
        flags: &[(&'static str, String)],
    ) -> Result<Self, CliError> {
        let mut values: BTreeMap<&'static str, String> = BTreeMap::new();
        values.insert("format", "csv".into());
        values.insert("output", String::new());
        for param in spec.params {
            values.insert(param.key, param.default.into());
        }
        for (key, value) in file {
            let known = values.keys().find(|k| **k == key.as_str()).copied();
            match known {
                Some(k) => {
                    values.insert(k, value.clone());
                }
                None => {
                    return Err(CliError::Usage(format!("unknown config key '{key}' for {}", spec.name)));
                }
            }
        }
        for (key, value) in flags {
            values.insert(key, value.clone());
        }
        let config = Self { command: spec.name, values };
        config.format()?;
        Ok(config)
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    pub fn is_set(&self, key: &str) -> bool {
        !self.raw(key).is_empty()
    }

    pub fn format(&self) -> Result<Format, CliError> {
        match self.raw("format") {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Usage(format!("format must be csv or json, got '{other}'"))),
        }
    }

    pub fn output(&self) -> Option<&str> {
        Some(self.raw("output")).filter(|s| !s.is_empty())
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        parse_f64(key, self.raw(key))
    }

    pub fn positive(&self, key: &str) -> Result<f64, CliError> {
        let v = self.f64(key)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(CliError::Usage(format!("--{key} must be positive, got {v}")))
        }
    }

    /// Non-negative integer; accepts exponent notation such as `1e5`.
    pub fn count(&self, key: &str) -> Result<u64, CliError> {
        let raw = self.raw(key);
        if let Ok(v) = raw.parse::<u64>() {
            return Ok(v);
        }
        let v = parse_f64(key, raw)?;
        if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
            Ok(v as u64)
        } else {
            Err(CliError::Usage(format!("--{key} must be a non-negative integer, got '{raw}'")))
        }
    }

    pub fn list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let raw = self.raw(key);
        if raw.trim().is_empty() {
            return Err(CliError::Usage(format!("--{key} needs at least one value")));
        }
        raw.split(',').map(|item| parse_f64(key, item.trim())).collect()
    }
}

fn parse_f64(key: &str, raw: &str) -> Result<f64, CliError> {
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::Usage(format!("--{key} expects a finite number, got '{raw}'"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}
