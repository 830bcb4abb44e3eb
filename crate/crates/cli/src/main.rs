//! Command-line driver for the checker.
//!
//! Exit codes: 0 = success, 1 = a declaration failed to check (or a required
//! one is missing), 2 = usage or I/O error. Diagnostics go to standard
//! error; payloads (normal forms, types, reports) go to standard output.

use clap::{Parser, Subcommand};
use holim_core::corpus::{
    self, check_parsed, parse_files, parse_manifest, CheckReport, SourceFile,
};
use holim_core::pretty::render_closed;
use holim_core::value::GlobalEnv;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "holim", version, about = "A small checker for a dependent type theory")]
struct Cli {
    /// Largest universe level a type may inhabit
    #[arg(long, global = true, default_value_t = 3, value_name = "LEVEL")]
    max_universe: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, elaborate, and kernel-check source files in order
    Check {
        /// Files checked into one shared environment, in the order given
        #[arg(required = true, value_name = "FILE")]
        files: Vec<PathBuf>,
    },
    /// Check the whole corpus against its manifest
    ///
    /// The corpus root defaults to `corpus/` and can be overridden with the
    /// HOLIM_CORPUS environment variable; it must contain MANIFEST.tsv.
    Corpus {
        /// Print per-file wall times
        #[arg(long)]
        timing: bool,
        /// Print one JSON report object instead of text
        #[arg(long)]
        json: bool,
    },
    /// Print the beta-normal form of a declaration's body
    Nf {
        file: PathBuf,
        /// Declaration to normalize (an axiom is its own normal form)
        name: String,
    },
    /// Print the elaborated type of a declaration
    Type {
        file: PathBuf,
        /// Declaration whose type to print
        name: String,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("holim: {}", msg);
            ExitCode::from(2)
        }
    }
}

/// Errors returned here are usage/IO problems (exit 2); check failures are
/// reported inside and produce `ExitCode::from(1)`.
fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check { files } => {
            let sources = read_sources(&files)?;
            Ok(exit_for(report_outcome(&check_sources(&sources, None, cli.max_universe))))
        }
        Command::Corpus { timing, json } => run_corpus(timing, json, cli.max_universe),
        Command::Nf { file, name } => run_query(&file, &name, cli.max_universe, corpus::nf_of),
        Command::Type { file, name } => {
            run_query(&file, &name, cli.max_universe, corpus::type_of)
        }
    }
}

fn read_sources(paths: &[PathBuf]) -> Result<Vec<SourceFile>, String> {
    paths
        .iter()
        .map(|p| {
            let content = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read `{}`: {}", p.display(), e))?;
            Ok(SourceFile { path: p.display().to_string(), content })
        })
        .collect()
}

enum Checked {
    /// Parsing failed; nothing was checked.
    ParseError(holim_core::diag::Diagnostic),
    Report(CheckReport, GlobalEnv),
}

fn check_sources(
    sources: &[SourceFile],
    manifest: Option<&corpus::CorpusManifest>,
    max_universe: u32,
) -> Checked {
    match parse_files(sources) {
        Err(d) => Checked::ParseError(d),
        Ok(parsed) => {
            let (report, genv) = check_parsed(&parsed, manifest, max_universe);
            Checked::Report(report, genv)
        }
    }
}

/// Print every diagnostic to stderr; returns whether everything checked.
fn report_outcome(checked: &Checked) -> bool {
    match checked {
        Checked::ParseError(d) => {
            eprintln!("{}", d);
            false
        }
        Checked::Report(report, _) => {
            for status in report.failures() {
                eprintln!("{}", status.diagnostic.as_ref().unwrap());
            }
            report.ok()
        }
    }
}

fn exit_for(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn corpus_root() -> PathBuf {
    match std::env::var_os("HOLIM_CORPUS") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from("corpus"),
    }
}

fn run_corpus(timing: bool, json: bool, max_universe: u32) -> Result<ExitCode, String> {
    let start = Instant::now();
    let root = corpus_root();
    let manifest_path = root.join("MANIFEST.tsv");
    let manifest_text = std::fs::read_to_string(&manifest_path)
        .map_err(|e| format!("cannot read `{}`: {}", manifest_path.display(), e))?;
    let manifest = parse_manifest(&manifest_path.display().to_string(), &manifest_text)
        .map_err(|d| d.to_string())?;

    let paths: Vec<PathBuf> = manifest.files.iter().map(|f| root.join(f.as_str())).collect();
    let sources = read_sources(&paths)?;
    let checked = check_sources(&sources, Some(&manifest), max_universe);
    let elapsed_ms = start.elapsed().as_millis();

    if json {
        println!("{}", json_report(&checked, elapsed_ms));
        return Ok(match &checked {
            Checked::Report(report, _) if report.ok() => ExitCode::SUCCESS,
            _ => ExitCode::from(1),
        });
    }

    if let Checked::Report(report, _) = &checked {
        if timing {
            for ft in &report.file_times {
                println!("{}: {} declarations, {} ms", ft.file, ft.declarations, ft.millis);
            }
        }
        println!(
            "checked {} files, {} declarations; {} failures; {} ms",
            report.file_times.len(),
            report.total_declarations,
            report.total_failures,
            elapsed_ms
        );
    }
    Ok(exit_for(report_outcome(&checked)))
}

fn json_report(checked: &Checked, elapsed_ms: u128) -> serde_json::Value {
    match checked {
        Checked::ParseError(d) => serde_json::json!({
            "files": 0,
            "declarations": 0,
            "failures": [{
                "name": serde_json::Value::Null,
                "file": d.span.as_ref().map(|s| s.file.to_string()),
                "code": d.code.as_str(),
                "message": d.to_string(),
            }],
            "elapsed_ms": elapsed_ms as u64,
        }),
        Checked::Report(report, _) => {
            let failures: Vec<serde_json::Value> = report
                .failures()
                .map(|s| {
                    let d = s.diagnostic.as_ref().unwrap();
                    serde_json::json!({
                        "name": s.name.as_ref(),
                        "file": s.file,
                        "code": d.code.as_str(),
                        "message": d.to_string(),
                    })
                })
                .collect();
            serde_json::json!({
                "files": report.file_times.len(),
                "declarations": report.total_declarations,
                "failures": failures,
                "elapsed_ms": elapsed_ms as u64,
            })
        }
    }
}

fn run_query(
    file: &Path,
    name: &str,
    max_universe: u32,
    query: fn(&GlobalEnv, &str) -> holim_core::diag::Result<holim_core::syntax::Term>,
) -> Result<ExitCode, String> {
    let sources = read_sources(std::slice::from_ref(&file.to_path_buf()))?;
    let checked = check_sources(&sources, None, max_universe);
    if !report_outcome(&checked) {
        return Ok(ExitCode::from(1));
    }
    let Checked::Report(_, genv) = &checked else { unreachable!() };
    match query(genv, name) {
        Ok(t) => {
            println!("{}", render_closed(&t));
            Ok(ExitCode::SUCCESS)
        }
        Err(d) => {
            eprintln!("{}", d);
            Ok(ExitCode::from(1))
        }
    }
}
