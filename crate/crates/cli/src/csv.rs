//! Trial CSV: ASCII, comma-separated, LF line endings, one row per trial.
//! Outcomes are encoded `+1`/`-1`; collapse times carry 9 significant
//! digits, so the file is bit-stable for golden tests.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use proxyclock_core::protocol::{Sign, TrialRecord};
use proxyclock_core::stats::JointCounts;

use crate::CliError;

pub const HEADER: &str = "trial_index,c_outcome,b_outcome,t_collapse";

fn sign_field(sign: Sign) -> &'static str {
    match sign {
        Sign::Plus => "+1",
        Sign::Minus => "-1",
    }
}

/// Write the trial records to `path`.
pub fn write_trials(path: &Path, records: &[TrialRecord<f64>]) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    let mut line = String::with_capacity(64);
    w.write_all(HEADER.as_bytes()).map_err(io_err)?;
    w.write_all(b"\n").map_err(io_err)?;
    for r in records {
        line.clear();
        line.push_str(&r.index.to_string());
        line.push(',');
        line.push_str(sign_field(r.c_outcome));
        line.push(',');
        line.push_str(sign_field(r.b_outcome));
        line.push(',');
        line.push_str(&format!("{:.8e}", r.t_collapse));
        line.push('\n');
        w.write_all(line.as_bytes()).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

fn data_err(line: usize, message: String) -> CliError {
    CliError::Data { line, message }
}

fn parse_sign(field: &str, line: usize, column: &str) -> Result<Sign, CliError> {
    match field {
        "+1" => Ok(Sign::Plus),
        "-1" => Ok(Sign::Minus),
        other => Err(data_err(
            line,
            format!("column {column}: `{other}` is not +1 or -1"),
        )),
    }
}

/// Read a simulate-format CSV back into an outcome tally. Errors carry the
/// offending 1-based line number; a file without data rows is malformed.
pub fn read_counts(path: &Path) -> Result<JointCounts, CliError> {
    let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let reader = BufReader::new(file);
    let mut counts = JointCounts::default();
    let mut rows = 0u64;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        if lineno == 1 {
            if line != HEADER {
                return Err(data_err(1, format!("expected header `{HEADER}`")));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(data_err(lineno, format!("expected 4 fields, found {}", fields.len())));
        }
        fields[0]
            .parse::<u64>()
            .map_err(|_| data_err(lineno, format!("column trial_index: `{}`", fields[0])))?;
        let c = parse_sign(fields[1], lineno, "c_outcome")?;
        let b = parse_sign(fields[2], lineno, "b_outcome")?;
        let t: f64 = fields[3]
            .parse()
            .map_err(|_| data_err(lineno, format!("column t_collapse: `{}`", fields[3])))?;
        if !t.is_finite() {
            return Err(data_err(lineno, "column t_collapse: not finite".into()));
        }
        match (c, b) {
            (Sign::Plus, Sign::Plus) => counts.n_pp += 1,
            (Sign::Plus, Sign::Minus) => counts.n_pm += 1,
            (Sign::Minus, Sign::Plus) => counts.n_mp += 1,
            (Sign::Minus, Sign::Minus) => counts.n_mm += 1,
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(data_err(1, "no data rows".into()));
    }
    Ok(counts)
}
