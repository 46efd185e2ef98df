use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cohomotopy_core::cohomotopy::CohomotopyError;
use cohomotopy_core::manifold::{ManifoldDescriptor, SteenrodData};
use cohomotopy_core::report::{assemble, Report, ReportOptions};

/// Cohomotopy calculator for closed highly connected manifolds.
///
/// Reads a descriptor file, validates it, computes the suspension
/// splitting and the full cohomotopy table, and prints a report.
#[derive(Parser)]
#[command(name = "cohomotopy", version, disable_help_subcommand = true)]
struct Args {
    /// Descriptor file (TOML).
    #[arg(long)]
    input: PathBuf,
    /// Restrict the cohomotopy table to one degree.
    #[arg(long)]
    degree: Option<u32>,
    /// Output format.
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    format: String,
    /// Run the homology and cross-engine consistency checks.
    #[arg(long)]
    check: bool,
    /// Certify the canonical attaching form against the orbit oracle.
    #[arg(long)]
    oracle: bool,
    /// Operation matrices to merge into the descriptor.
    #[arg(long)]
    steenrod: Option<PathBuf>,
}

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(err) => {
            // Help and version are successful exits; everything else is a
            // usage error.
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&args) {
        Ok(code) => code,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(args: &Args) -> Result<ExitCode, (u8, String)> {
    let raw = fs::read_to_string(&args.input).map_err(|e| {
        (
            EXIT_USAGE,
            format!("cannot read {}: {e}", args.input.display()),
        )
    })?;
    let mut descriptor = ManifoldDescriptor::from_toml_str(&raw)
        .map_err(|e| (EXIT_VALIDATION, format!("{}: {e}", args.input.display())))?;
    if let Some(path) = &args.steenrod {
        let raw = fs::read_to_string(path)
            .map_err(|e| (EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
        let extra = SteenrodData::from_toml_str(&raw)
            .map_err(|e| (EXIT_VALIDATION, format!("{}: {e}", path.display())))?;
        match descriptor.steenrod.as_mut() {
            Some(existing) => existing.merge(extra),
            None => descriptor.steenrod = Some(extra),
        }
    }
    let violations = descriptor.validate();
    if !violations.is_empty() {
        let listing = violations
            .iter()
            .map(|v| format!("  {v}"))
            .collect::<Vec<_>>()
            .join("\n");
        return Err((EXIT_VALIDATION, format!("invalid descriptor\n{listing}")));
    }
    let options = ReportOptions {
        degree: args.degree,
        checks: args.check,
        oracle: args.oracle,
    };
    let report = assemble(&descriptor, &options).map_err(|e| match e {
        CohomotopyError::UnsupportedDegree(_) => (EXIT_USAGE, e.to_string()),
        other => (EXIT_VALIDATION, other.to_string()),
    })?;
    match write_report(&report, args.format == "json") {
        Ok(()) => {}
        // The consumer closed the pipe (`cohomotopy … | head`): stop
        // printing, but still exit with the computed status.
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
        Err(e) => return Err((EXIT_USAGE, format!("cannot write output: {e}"))),
    }
    if report.consistency_ok() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: consistency checks failed");
        Ok(ExitCode::from(EXIT_INCONSISTENT))
    }
}

fn write_report(report: &Report, json: bool) -> io::Result<()> {
    let mut out = io::stdout().lock();
    if json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        out.write_all(report.to_text().as_bytes())?;
    }
    out.flush()
}
