//! `fermigas`: universal curves of a harmonically trapped ideal Fermi gas as
//! CSV or JSON data.

mod commands;
mod output;
mod params;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};

use params::{CommandSpec, RunConfig, COMMANDS, CONFIG_ENV};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input; exit status 2.
    Usage(String),
    /// Numerical or I/O failure; exit status 1.
    Failure(String),
}

impl From<fermigas::Error> for CliError {
    fn from(e: fermigas::Error) -> Self {
        use fermigas::Error::*;
        match e {
            Domain(_) | SmallnessGuard { .. } | PartialShell { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

fn cli() -> Command {
    let global = [
        Arg::new("config")
            .long("config")
            .global(true)
            .value_name("PATH")
            .help(format!("key=value parameter file; flags override it (default: ${CONFIG_ENV})")),
        Arg::new("format").long("format").global(true).value_name("csv|json").help("output format [default: csv]"),
        Arg::new("output")
            .long("output")
            .short('o')
            .global(true)
            .value_name("PATH")
            .help("write here instead of stdout"),
    ];
    let mut app = Command::new("fermigas")
        .about("Universal curves of a harmonically trapped ideal Fermi gas")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true)
        .args(global);
    for spec in COMMANDS {
        app = app.subcommand(subcommand(spec));
    }
    app
}

fn subcommand(spec: &'static CommandSpec) -> Command {
    let mut cmd = Command::new(spec.name).about(spec.about);
    for p in spec.params {
        let help =
            if p.default.is_empty() { p.help.to_string() } else { format!("{} [default: {}]", p.help, p.default) };
        cmd = cmd.arg(Arg::new(p.key).long(p.key).value_name("VALUE").allow_hyphen_values(true).help(help));
    }
    if spec.name == "profile" {
        cmd = cmd.arg(Arg::new("space").long("space").action(ArgAction::SetTrue).help("spatial profiles n(s)")).arg(
            Arg::new("momentum")
                .long("momentum")
                .action(ArgAction::SetTrue)
                .conflicts_with("space")
                .help("momentum profiles n(q)"),
        );
    }
    cmd
}

fn flag_values(spec: &'static CommandSpec, root: &ArgMatches, sub: &ArgMatches) -> Vec<(&'static str, String)> {
    let mut flags = Vec::new();
    for key in params::GLOBAL_KEYS {
        if let Some(v) = sub.get_one::<String>(key).or_else(|| root.get_one::<String>(key)) {
            flags.push((key, v.clone()));
        }
    }
    for p in spec.params {
        if let Some(v) = sub.get_one::<String>(p.key) {
            flags.push((p.key, v.clone()));
        }
    }
    if spec.name == "profile" {
        if sub.get_flag("space") {
            flags.push(("marginal", "space".into()));
        }
        if sub.get_flag("momentum") {
            flags.push(("marginal", "momentum".into()));
        }
    }
    flags
}

fn run(root: &ArgMatches) -> Result<(), CliError> {
    let (name, sub) = root.subcommand().ok_or_else(|| CliError::Usage("missing subcommand".into()))?;
    let spec = params::command(name).ok_or_else(|| CliError::Usage(format!("unknown command {name}")))?;
    let config_path = sub
        .get_one::<String>("config")
        .or_else(|| root.get_one::<String>("config"))
        .cloned()
        .or_else(|| std::env::var(CONFIG_ENV).ok().filter(|s| !s.is_empty()));
    let file = match config_path {
        Some(path) => params::read_config(&path)?,
        None => Vec::new(),
    };
    let cfg = RunConfig::resolve(spec, &file, &flag_values(spec, root, sub))?;
    let format = cfg.format()?;
    let blocks = commands::run(&cfg)?;
    let text = output::render(&blocks, format)?;
    match cfg.output() {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Failure(format!("cannot write {path}: {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Failure(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_definitions_are_consistent() {
        cli().debug_assert();
    }
}
