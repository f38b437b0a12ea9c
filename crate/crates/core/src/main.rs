use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;

use sasaki7_core::error::{Error, Result};
use sasaki7_core::harness::{self, DumpObject, Format, Mode, Status, SuiteConfig, DEFAULT_TOLERANCE};
use sasaki7_core::scalar::parse_rational;

/// Exact verification of the 3-Sasakian 7-sphere, its canonical G2-structure,
/// characteristic connection and canonical spinor.
#[derive(Parser, Debug)]
#[command(name = "sasaki7", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the identity checks.
    Verify {
        /// Comma-separated sections among 2..7.
        #[arg(long, default_value = "2,3,4,5,6,7")]
        sections: String,
        /// Deformation parameter t = s², used by section 7.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Float-mode tolerance.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Tabulate curvature and Dirac data along t.
    Sweep {
        #[arg(long, allow_hyphen_values = true)]
        t_from: String,
        #[arg(long)]
        t_to: String,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Print one object of the model as JSON.
    Dump {
        /// omega, torsion, gammas, phi or coset.
        #[arg(long)]
        object: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        t: String,
    },
    /// Read and validate a coset structure-constant file.
    Ingest { file: PathBuf },
}

fn verify(sections: &str, t: &str, mode: &str, tol: f64, format: &str) -> Result<ExitCode> {
    let cfg = SuiteConfig {
        mode: mode.parse::<Mode>()?,
        t: parse_rational(t)?,
        tolerance: tol,
        sections: harness::parse_sections(sections)?,
        format: format.parse::<Format>()?,
    };
    let results = harness::run_suite(&cfg)?;
    match cfg.format {
        Format::Json => {
            let report = harness::report_json(&cfg, &results);
            println!(
                "{}",
                serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?
            );
        }
        _ => print!("{}", harness::report_text(&results)),
    }
    let all_pass = results.iter().all(|r| r.status == Status::Pass);
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn sweep(t_from: &str, t_to: &str, steps: usize, format: &str) -> Result<ExitCode> {
    let (from, to): (BigRational, BigRational) = (parse_rational(t_from)?, parse_rational(t_to)?);
    let format = format.parse::<Format>()?;
    let rows = harness::sweep(&from, &to, steps)?;
    match format {
        Format::Csv => print!("{}", harness::sweep_csv(&rows)),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&rows).map_err(|e| Error::Io(e.to_string()))?
        ),
        Format::Text => return Err(Error::Config("sweep output is csv or json".into())),
    }
    Ok(ExitCode::SUCCESS)
}

fn dump(object: &str, t: &str) -> Result<ExitCode> {
    let json = harness::dump(object.parse::<DumpObject>()?, &parse_rational(t)?)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&json).map_err(|e| Error::Io(e.to_string()))?
    );
    Ok(ExitCode::SUCCESS)
}

fn ingest(file: &PathBuf) -> Result<ExitCode> {
    let ingested = harness::ingest_coset(file)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&ingested.to_json()).map_err(|e| Error::Io(e.to_string()))?
    );
    if ingested.report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Error::InvalidCoset(ingested.report.failures().join(", ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify {
            sections,
            t,
            mode,
            tol,
            format,
        } => verify(sections, t, mode, *tol, format),
        Command::Sweep {
            t_from,
            t_to,
            steps,
            format,
        } => sweep(t_from, t_to, *steps, format),
        Command::Dump { object, t } => dump(object, t),
        Command::Ingest { file } => ingest(file),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
