use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use qcr_cli::config::Format;
use qcr_cli::{load_config, parse_config, output, run, CliError, RunOptions, SweepSpec, DEFAULT_CONFIG};

/// Raman-diffraction pulse simulations driven by a TOML config.
#[derive(Debug, Parser)]
#[command(name = "simulate", version)]
struct Args {
    /// Config file; the bundled single-atom example when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run only this scenario.
    #[arg(long)]
    scenario: Option<String>,
    /// Sweep as name=start:step:stop or name=v1,v2,…
    #[arg(long)]
    sweep: Option<SweepSpec>,
    /// Exit with status 2 when a tolerance is breached.
    #[arg(long)]
    check: bool,
    /// Compare against filtered exact evolution of the full model.
    #[arg(long)]
    oracle: bool,
    /// Output directory for rows and report.json; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "jsonl"])]
    format: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn real_main() -> Result<ExitCode, CliError> {
    let args = Args::parse();
    let start = Instant::now();
    let cfg = match &args.config {
        Some(p) => load_config(p)?,
        None => parse_config(DEFAULT_CONFIG)?,
    };
    let opts = RunOptions { scenario: args.scenario.clone(), sweep: args.sweep.clone(), oracle: args.oracle, seed: args.seed };
    let out = run(&cfg, &opts)?;
    let format = match args.format.as_deref() {
        Some("jsonl") => Format::Jsonl,
        Some(_) => Format::Csv,
        None => cfg.output.format,
    };
    match args.out.as_ref().or(cfg.output.dir.as_ref()) {
        Some(dir) => {
            let path = output::write_dir(dir, &out.rows, &out.report, format)?;
            eprintln!("wrote {} rows to {}", out.rows.len(), path.display());
        }
        None => {
            let stdout = std::io::stdout();
            output::write_rows(&out.rows, format, stdout.lock())?;
        }
    }
    eprintln!("wall time {:.3} s", start.elapsed().as_secs_f64());
    for b in &out.report.breaches {
        eprintln!("breach: {b}");
    }
    std::io::stderr().flush()?;
    if args.check && !out.report.breaches.is_empty() {
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}
