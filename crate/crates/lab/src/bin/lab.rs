//! Experiment sweeps, fits, tables and calibration.
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 some trials
//! failed (their errors are in the records).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use perturb_lab::analysis::fit_scaling;
use perturb_lab::calibrate::{calibrate, Goldens, QUICK};
use perturb_lab::run::{read_jsonl, reverify, write_jsonl};
use perturb_lab::tables::emit_tables;
use perturb_lab::{run_experiment, ExperimentConfig, LabError, Result, RunOptions};

#[derive(Parser)]
#[command(name = "lab", version, about = "Seeded experiment sweeps over perturbed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Runs every cell × trial of a config and writes JSON lines.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's worker count.
        #[arg(long)]
        workers: Option<usize>,
        /// Directory for certificate files.
        #[arg(long)]
        certs: Option<PathBuf>,
        /// Also write table.csv, summary.json and schema.json here.
        #[arg(long)]
        tables: Option<PathBuf>,
    },
    /// Log-log slope of median(y) against x with a bootstrap interval.
    Fit {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value = "n")]
        x: String,
        #[arg(long, default_value = "order")]
        y: String,
    },
    /// Per-cell CSV, summary and schema from a records file.
    Tables {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerates each host and re-verifies its stored certificate.
    Reverify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        certs: PathBuf,
    },
    /// Runs the calibration suite and updates the goldens file.
    Calibrate {
        /// Names to run; defaults to the quick suite.
        names: Vec<String>,
        /// Include the hour-long G(n, p) diameter run.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/data/goldens.json"))]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn read_records(path: &PathBuf) -> Result<Vec<perturb_lab::TrialRecord>> {
    read_jsonl(&std::fs::read_to_string(path)?)
}

fn load_config(path: &PathBuf) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_json(&text)
}

/// Returns whether any trial failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, out, workers, certs, tables } => {
            let mut cfg = load_config(&config)?;
            if workers.is_some() {
                cfg.workers = workers;
                cfg.validate()?;
            }
            let records = run_experiment(&cfg, RunOptions { cert_dir: certs.as_deref() })?;
            write_jsonl(&records, BufWriter::new(File::create(&out)?))?;
            if let Some(dir) = tables {
                emit_tables(&records, &dir)?;
            }
            let failed = records.iter().filter(|r| r.error.is_some()).count();
            eprintln!("{} records, {failed} with errors", records.len());
            Ok(failed > 0)
        }
        Command::Fit { records, x, y } => {
            let fit = fit_scaling(&read_records(&records)?, &x, &y)?;
            println!("{}", serde_json::to_string_pretty(&fit)?);
            Ok(false)
        }
        Command::Tables { records, out } => {
            for path in emit_tables(&read_records(&records)?, &out)? {
                println!("{}", path.display());
            }
            Ok(false)
        }
        Command::Reverify { config, records, certs } => {
            let cfg = load_config(&config)?;
            let mut failed = 0;
            let mut checked = 0;
            for rec in read_records(&records)?.iter().filter(|r| r.certificate_digest.is_some()) {
                checked += 1;
                if let Err(e) = reverify(&cfg, rec, &certs) {
                    failed += 1;
                    eprintln!("cell {} trial {}: {e}", rec.cell, rec.trial);
                }
            }
            println!("{checked} certificates checked, {failed} rejected");
            Ok(failed > 0)
        }
        Command::Calibrate { names, full, out, workers } => {
            let mut names: Vec<String> = if names.is_empty() { QUICK.map(String::from).to_vec() } else { names };
            if full && !names.iter().any(|n| n == "gnp-diameter") {
                names.push("gnp-diameter".into());
            }
            let mut goldens = if out.exists() { Goldens::load(&out)? } else { Goldens::default() };
            for name in &names {
                eprint!("{name} ... ");
                let g = calibrate(name, workers)?;
                eprintln!("{}", g.observed);
                goldens.upsert(g);
                goldens.save(&out)?;
            }
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{}", out.display())?;
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(3),
        Err(e) => {
            eprintln!("lab: {e}");
            ExitCode::from(2)
        }
    }
}
