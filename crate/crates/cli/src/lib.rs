//! Library side of the `rtp` command-line tool.

pub mod cli;
pub mod commands;
pub mod document;
pub mod error;
pub mod report;
pub mod workspace;

use std::fs;
use std::time::Instant;

use crate::cli::Cli;
use crate::error::{CliError, CliResult};
use crate::report::{ResultRecord, Tolerances};

/// Rendered stdout and process exit code of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

fn write_csv(path: &std::path::Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let io = |e: csv::Error| CliError::parse(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::parse(format!("cannot write {}: {e}", path.display())))
}

fn render(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json renders") + "\n"
}

pub fn run(cli: &Cli) -> Outcome {
    let name = cli.command.name();
    let g = &cli.global;
    let fail = |e: CliError| Outcome {
        stdout: render(&e.to_json(name)),
        exit_code: e.exit_code(),
    };
    if !(g.rtol.is_finite() && g.rtol > 0.0) || !(g.norm_tol.is_finite() && g.norm_tol > 0.0) {
        return fail(CliError::parse(
            "--rtol and --norm-tol must be positive and finite",
        ));
    }
    rtp_core::set_rank_rtol(g.rtol);

    let start = Instant::now();
    let produced = match commands::execute(&cli.command, g.norm_tol) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let record = ResultRecord {
        command: name.to_string(),
        inputs: produced.inputs,
        outputs: produced.outputs,
        tolerances: Tolerances {
            rtol: g.rtol,
            norm_tol: g.norm_tol,
        },
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        error: produced
            .failure
            .as_ref()
            .map(|e| e.to_json(name)["error"].clone()),
    };
    let json = render(&record.to_json());
    if let Some(path) = &g.out {
        if let Err(e) = fs::write(path, &json) {
            return fail(CliError::parse(format!(
                "cannot write {}: {e}",
                path.display()
            )));
        }
    }
    if let (Some(path), Some((header, rows))) = (&g.csv, &produced.csv) {
        if let Err(e) = write_csv(path, header, rows) {
            return fail(e);
        }
    }
    let mut stdout = if g.table { record.to_table() } else { json };
    let exit_code = match &produced.failure {
        Some(e) => {
            if g.table {
                stdout.push_str(&format!("\n{e}\n"));
            }
            e.exit_code()
        }
        None => 0,
    };
    Outcome { stdout, exit_code }
}
