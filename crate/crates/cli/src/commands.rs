//! The subcommands, as functions returning what to print on stdout.

use std::fs;
use std::path::Path;

use spikes_core::Error;

use crate::format::{
    generate_spike, split, FormatError, MatroidFile, Metadata, Props, Relabel, SpikeMode, Step,
};
use crate::verify::{reports_to_jsonl, run_suite, SuiteConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        let code = match e {
            FormatError::Core(Error::NotBinary | Error::Unsupported(_)) => EXIT_UNSUPPORTED,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        FormatError::Core(e).into()
    }
}

fn read_matroid_file(path: &Path) -> Result<MatroidFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(MatroidFile::parse(&text)?)
}

/// Writes `text` to `out`, or returns it for stdout.
fn emit(out: Option<&Path>, text: String) -> Result<String, CliError> {
    match out {
        Some(p) => {
            fs::write(p, text)
                .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn label_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(String::from)
        .collect()
}

pub fn gen_spike(
    rank: usize,
    mode: SpikeMode,
    c3_path: Option<&Path>,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let c3: Option<Vec<Vec<String>>> = match c3_path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", p.display())))?;
            Some(serde_json::from_str(&text).map_err(|e| {
                CliError::usage(format!(
                    "{}: expected a list of label lists: {e}",
                    p.display()
                ))
            })?)
        }
        None => None,
    };
    let m = generate_spike(rank, mode, c3.as_deref())?;
    let name = match mode {
        SpikeMode::Binary => format!("Z{rank}"),
        SpikeMode::Free => format!("free-spike-{rank}"),
        SpikeMode::C3 => format!("spike-{rank}"),
    };
    let meta = Metadata {
        seed: None,
        steps: vec![Step::GenSpike { rank, mode, c3 }],
    };
    emit(out, MatroidFile::from_matroid(name, &m, Some(meta)).emit())
}

pub fn essplit(
    input: &Path,
    x: &str,
    e: &str,
    relabel: Relabel,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let file = read_matroid_file(input)?;
    let m = file.to_matroid()?;
    let x = label_list(x);
    let result = split(&m, &x, e, relabel)?;
    let step = Step::Essplit {
        x,
        e: e.to_string(),
        relabel,
    };
    let name = format!("{}^{e}", file.name);
    let meta = file.derived_metadata(step);
    emit(
        out,
        MatroidFile::from_matroid(name, &result, Some(meta)).emit(),
    )
}

pub fn relax(input: &Path, circuit: &str, out: Option<&Path>) -> Result<String, CliError> {
    let file = read_matroid_file(input)?;
    let m = file.to_matroid()?;
    let step = Step::Relax {
        circuit: label_list(circuit),
    };
    let result = step.apply(Some(&m))?;
    let name = format!("{}~relaxed", file.name);
    let meta = file.derived_metadata(step);
    emit(
        out,
        MatroidFile::from_matroid(name, &result, Some(meta)).emit(),
    )
}

pub fn props(input: &Path, json: bool) -> Result<String, CliError> {
    let file = read_matroid_file(input)?;
    let p = Props::of(&file.name, &file.to_matroid()?);
    if json {
        let mut s = serde_json::to_string_pretty(&p).expect("props serialize");
        s.push('\n');
        Ok(s)
    } else {
        Ok(p.to_text())
    }
}

/// Runs the suites. Returns the exit code and a one-line-per-report summary;
/// the full reports go to `report` (one JSON object per line).
pub fn verify(cfg: &SuiteConfig, report: Option<&Path>) -> Result<(u8, String), CliError> {
    let reports = run_suite(cfg).map_err(CliError::usage)?;
    if let Some(p) = report {
        fs::write(p, reports_to_jsonl(&reports))
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display())))?;
    }
    let mut summary = String::new();
    for r in &reports {
        summary.push_str(&format!(
            "{} {} r={} cases={}{}\n",
            if r.passed() { "PASS" } else { "FAIL" },
            r.claim_id,
            r.rank,
            r.universe_size,
            r.witnesses
                .first()
                .filter(|_| !r.passed())
                .map(|w| format!(" first witness: {w}"))
                .unwrap_or_default()
        ));
    }
    let code = if reports.iter().all(|r| r.passed()) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    };
    Ok((code, summary))
}
