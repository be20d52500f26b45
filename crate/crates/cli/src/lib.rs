//! Command-line driver: parses flags (optionally layered over a config file),
//! runs one experiment and writes CSV or JSON.

mod args;
mod commands;
mod config;
mod emit;

use std::ffi::OsString;
use std::fmt;

use clap::{CommandFactory, FromArgMatches};

pub use args::{Cli, Command, Format};
pub use emit::fmt_sig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Runtime(String),
    /// A computed estimate violated the inequality it is checked against.
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
            CliError::Violation(_) => EXIT_VIOLATION,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(m) => write!(f, "runtime error: {m}"),
            CliError::Violation(m) => write!(f, "bound violation: {m}"),
        }
    }
}

impl From<rlat::Error> for CliError {
    fn from(e: rlat::Error) -> Self {
        match e {
            rlat::Error::InvalidArgument(m) => CliError::Usage(m),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code. Errors are reported as a single line on standard error.
pub fn parse_and_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match parse(&argv) {
        Ok(cli) => cli,
        Err(ParseOutcome::Display(text)) => {
            print!("{text}");
            return EXIT_OK;
        }
        Err(ParseOutcome::Failed(e)) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    match commands::run(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", config::one_line(&e.to_string()));
            e.exit_code()
        }
    }
}

enum ParseOutcome {
    /// Help or version text requested.
    Display(String),
    Failed(CliError),
}

fn parse(argv: &[OsString]) -> Result<Cli, ParseOutcome> {
    // Locate the subcommand and any config file without enforcing required
    // flags, which the config may supply.
    let merged = match Cli::command().ignore_errors(true).try_get_matches_from(argv) {
        Ok(lenient) => with_config(argv, &lenient)?,
        Err(_) => None,
    };
    let matches = try_matches(merged.as_deref().unwrap_or(argv))?;
    Cli::from_arg_matches(&matches).map_err(|e| ParseOutcome::Failed(CliError::Usage(first_line(&e.to_string()))))
}

/// Inserts config-file values right after the subcommand name so that any
/// flag given on the command line still takes precedence.
fn with_config(argv: &[OsString], lenient: &clap::ArgMatches) -> Result<Option<Vec<OsString>>, ParseOutcome> {
    let Some((name, sub_matches)) = lenient.subcommand() else {
        return Ok(None);
    };
    let Some(path) = sub_matches.try_get_one::<std::path::PathBuf>("config").ok().flatten() else {
        return Ok(None);
    };
    let root = Cli::command();
    let sub = root.find_subcommand(name).expect("matched subcommand exists");
    let extra = config::config_args(path, sub, sub_matches).map_err(ParseOutcome::Failed)?;
    let pos = 1 + argv[1..].iter().position(|a| a == name).expect("subcommand name present in argv");
    let mut merged = argv[..=pos].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&argv[pos + 1..]);
    Ok(Some(merged))
}

fn try_matches(argv: &[OsString]) -> Result<clap::ArgMatches, ParseOutcome> {
    Cli::command().try_get_matches_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ParseOutcome::Display(e.render().to_string()),
            ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                ParseOutcome::Failed(CliError::Usage("missing command; see --help".into()))
            }
            _ => ParseOutcome::Failed(CliError::Usage(first_line(&e.to_string()))),
        }
    })
}

/// Collapses a clap error message (without its usage footer) to one line.
fn first_line(s: &str) -> String {
    let body = s.split("Usage:").next().unwrap_or(s);
    let body = body.split("For more information").next().unwrap_or(body);
    let line = config::one_line(body.trim_start().trim_start_matches("error:"));
    if line.is_empty() {
        "invalid arguments".into()
    } else {
        line
    }
}
