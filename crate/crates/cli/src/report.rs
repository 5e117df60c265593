use std::fmt;

use gpt_sim::numerics::Tolerance;
use serde_json::{json, Value};

/// Why a command did not produce a report.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    SolverLimit(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::SolverLimit(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::SolverLimit(m) => write!(f, "solver limit: {m}"),
        }
    }
}

impl From<gpt_sim::Error> for Failure {
    fn from(e: gpt_sim::Error) -> Self {
        match e {
            gpt_sim::Error::IterationLimit { .. } => Failure::SolverLimit(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub type CmdResult<T> = Result<T, Failure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Exact unless some input contains a floating-point number.
    Auto,
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Settings shared by all commands; echoed in every report.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub tol: Tolerance,
    pub format: Format,
    pub seed: u64,
    pub jobs: usize,
    pub k_max: usize,
    pub facets: usize,
}

impl RunConfig {
    pub fn to_json(&self, resolved: &str) -> Value {
        json!({
            "mode": resolved,
            "eps_rank": self.tol.eps_rank,
            "eps_feas": self.tol.eps_feas,
            "eps_compare": self.tol.eps_compare,
            "seed": self.seed,
            "jobs": self.jobs,
            "k_max": self.k_max,
            "facets": self.facets,
        })
    }
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.iter().map(|c| escape(c)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

fn escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Command output before it is wrapped in the envelope.
pub struct Report {
    /// `exact` or `float`; `mixed` for commands that pick per item.
    pub mode: &'static str,
    pub payload: Value,
    pub table: Option<Table>,
    /// Exit status for a report that is still printed: 1 for a failed
    /// reproduction, 2 for an invalid state space.
    pub exit: u8,
}

impl Report {
    pub fn new(mode: &'static str, payload: Value) -> Self {
        Report {
            mode,
            payload,
            table: None,
            exit: 0,
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }
}

pub fn render(
    report: &Report,
    command: &[String],
    cfg: &RunConfig,
    elapsed_ms: Option<f64>,
) -> CmdResult<String> {
    match cfg.format {
        Format::Json => {
            let mut env = json!({
                "command": command,
                "config": cfg.to_json(report.mode),
                "payload": report.payload,
            });
            if let Some(ms) = elapsed_ms {
                env["timing_ms"] = json!(ms);
            }
            let mut s = serde_json::to_string_pretty(&env).map_err(|e| Failure::Input(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let table = report
                .table
                .as_ref()
                .ok_or_else(|| Failure::Input(format!("no CSV form for `{}`", command.join(" "))))?;
            let mut s = format!("# {} mode={} seed={}", command.join(" "), report.mode, cfg.seed);
            if let Some(ms) = elapsed_ms {
                s.push_str(&format!(" timing_ms={ms}"));
            }
            s.push('\n');
            s.push_str(&table.render());
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::from(gpt_sim::Error::IterationLimit { iterations: 5 }).exit_code(), 3);
        assert_eq!(Failure::from(gpt_sim::Error::Parse("x".into())).exit_code(), 2);
        assert_eq!(Failure::from(gpt_sim::Error::CertificateRejected("x".into())).exit_code(), 2);
    }

    #[test]
    fn csv_cells_are_quoted() {
        assert_eq!(escape("a,b"), "\"a,b\"");
        assert_eq!(escape("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(escape("plain"), "plain");
    }
}
