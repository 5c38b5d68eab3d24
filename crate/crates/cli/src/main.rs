//! `arctn`: evaluate generalized arctangents and check their identities.
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric non-convergence,
//! 3 a residual check failed.

mod args;
mod commands;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use commands::{Failure, Outcome};

const EXIT_USAGE: u8 = 1;
const EXIT_NONCONVERGED: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    if let Command::Integrands = cli.command {
        return match print_registry(cli.common.format) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => io_failure(e),
        };
    }

    let outcome = match commands::run(&cli.command, &cli.common) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_NONCONVERGED);
        }
    };

    let stdout = io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = output::write_records(&mut lock, &outcome.records, cli.common.format)
        .and_then(|_| lock.flush())
    {
        return io_failure(e);
    }
    summarize(&outcome);

    if !outcome.all_converged() {
        ExitCode::from(EXIT_NONCONVERGED)
    } else if !outcome.all_passed() {
        ExitCode::from(EXIT_CHECK_FAILED)
    } else {
        ExitCode::SUCCESS
    }
}

fn summarize(outcome: &Outcome) {
    let n = outcome.records.len();
    let failed = outcome.passed.iter().filter(|&&p| !p).count();
    let unconverged = outcome.records.iter().filter(|r| !r.converged).count();
    let mut line = format!("{n} record{}", if n == 1 { "" } else { "s" });
    if let Some(m) = outcome.max_abs_residual() {
        line.push_str(&format!(", max |residual| = {}", output::sig(m, 3)));
    }
    if outcome.checked {
        if failed == 0 {
            line.push_str(", all pass");
        } else {
            line.push_str(&format!(", {failed} failed"));
        }
    }
    if unconverged > 0 {
        line.push_str(&format!(", {unconverged} not converged"));
    }
    eprintln!("{line}");
}

fn print_registry(format: Format) -> io::Result<()> {
    let header = ["name", "formula", "arity", "alpha_bound", "separable"];
    let rows = commands::registry_rows();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Text => {
            let width: Vec<usize> = (0..header.len())
                .map(|i| {
                    rows.iter()
                        .map(|r| r[i].chars().count())
                        .chain([header[i].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&width)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(out, "{}", line(header.to_vec()))?;
            for r in &rows {
                writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
            }
        }
        Format::Json => {
            for r in &rows {
                let mut m = serde_json::Map::new();
                for (k, v) in header.iter().zip(r) {
                    let value = match *k {
                        "alpha_bound" => output::json_number(v.parse().unwrap_or(f64::NAN)),
                        "separable" => serde_json::Value::Bool(v == "true"),
                        _ => serde_json::Value::String(v.clone()),
                    };
                    m.insert((*k).to_string(), value);
                }
                writeln!(out, "{}", serde_json::Value::Object(m))?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(header).map_err(io::Error::other)?;
            for r in &rows {
                w.write_record(r).map_err(io::Error::other)?;
            }
            w.flush()?;
        }
    }
    out.flush()
}

fn io_failure(e: io::Error) -> ExitCode {
    if e.kind() == io::ErrorKind::BrokenPipe {
        return ExitCode::SUCCESS;
    }
    eprintln!("error: {e}");
    ExitCode::from(EXIT_USAGE)
}
