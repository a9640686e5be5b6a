//! Command-line front end for the protocol simulator.
//!
//! Subcommands: `predict`, `simulate`, `estimate`, `distinguish`,
//! `geometry`. Exit codes: 0 success, 2 usage/configuration/geometry
//! validation, 3 I/O failure, 4 malformed input data.

use std::collections::BTreeMap;

pub mod commands;
pub mod config;
pub mod csv;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Io(String),
    Data { line: usize, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Data { .. } => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Data { line, message } => {
                write!(f, "malformed data at line {line}: {message}")
            }
        }
    }
}

impl std::error::Error for CliError {}

/// Parsed `--name value` flags.
#[derive(Debug, Default)]
pub struct Flags {
    values: BTreeMap<String, String>,
}

impl Flags {
    pub fn parse(args: &[String]) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        let mut iter = args.iter();
        while let Some(arg) = iter.next() {
            let name = arg
                .strip_prefix("--")
                .ok_or_else(|| CliError::Usage(format!("expected a --flag, found `{arg}`")))?;
            let value = iter
                .next()
                .ok_or_else(|| CliError::Usage(format!("flag --{name} needs a value")))?;
            if values.insert(name.to_string(), value.clone()).is_some() {
                return Err(CliError::Usage(format!("flag --{name} given twice")));
            }
        }
        Ok(Self { values })
    }

    pub fn check_known(&self, known: &[&str]) -> Result<(), CliError> {
        for name in self.values.keys() {
            if !known.contains(&name.as_str()) {
                return Err(CliError::Usage(format!("unknown flag --{name}")));
            }
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(String::as_str)
    }

    pub fn require(&self, name: &str) -> Result<&str, CliError> {
        self.get(name)
            .ok_or_else(|| CliError::Usage(format!("missing required flag --{name}")))
    }

    pub fn get_f64(&self, name: &str) -> Result<Option<f64>, CliError> {
        match self.get(name) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<f64>()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("flag --{name}: `{raw}` is not a number"))),
        }
    }

    pub fn require_f64(&self, name: &str) -> Result<f64, CliError> {
        self.require(name)?;
        Ok(self.get_f64(name)?.expect("presence checked"))
    }

    pub fn get_u64(&self, name: &str) -> Result<Option<u64>, CliError> {
        match self.get(name) {
            None => Ok(None),
            Some(raw) => raw.parse::<u64>().map(Some).map_err(|_| {
                CliError::Usage(format!("flag --{name}: `{raw}` is not a non-negative integer"))
            }),
        }
    }
}

pub const USAGE: &str = "\
proxyclock: entangled-clock proxy-measurement protocol simulator

USAGE:
    proxyclock <COMMAND> [FLAGS]

COMMANDS:
    predict      --config PATH [--seed N] [--trials N]
    simulate     --config PATH --out PATH [--seed N] [--trials N] [--threads N]
    estimate     --csv PATH --omega W [--confidence C] [--window LO,HI]
    distinguish  --config PATH --v0 V --v1 V [--alpha A] [--power P] [--seed N]
    geometry     --a X --b X --t1 T --v V

EXIT CODES:
    0 success, 2 usage/configuration, 3 i/o failure, 4 malformed data
";

/// Dispatch a full argument list (without the executable name). Returns the
/// summary text to print on stdout.
pub fn run(args: &[String]) -> Result<String, CliError> {
    let (command, rest) = args
        .split_first()
        .ok_or_else(|| CliError::Usage("no command given".into()))?;
    let flags = Flags::parse(rest)?;
    match command.as_str() {
        "predict" => commands::cmd_predict(&flags),
        "simulate" => commands::cmd_simulate(&flags),
        "estimate" => commands::cmd_estimate(&flags),
        "distinguish" => commands::cmd_distinguish(&flags),
        "geometry" => commands::cmd_geometry(&flags),
        other => Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
}
