//! Single-graph tools: minor and subdivision finders, connectivity and
//! diameter runs, family generation and certificate checking.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use perturb_core::minor::{find_minor_perturbed, find_minor_sparse, MinorOptions, MinorOutcome};
use perturb_core::robust::{connectivity_trial, diameter_upper_pipeline};
use perturb_core::topo::{route_subdivision, RouteOptions};
use perturb_core::{Graph, Seed};
use perturb_lab::io::{load_edge_list, load_labelled, save_edge_list, write_label_table};
use perturb_lab::{CertificateDoc, FamilySpec, LabError, Result};
use serde_json::json;

#[derive(Parser)]
#[command(name = "perturb", version, about = "Certified constructions on randomly perturbed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Edge list: header "n m", then "u v" lines.
    #[arg(long)]
    input: PathBuf,
    /// Read whitespace-separated label pairs instead; ids follow first appearance.
    #[arg(long)]
    labelled: bool,
}

#[derive(Args)]
struct SeedArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
}

impl SeedArgs {
    fn seed(&self) -> Seed {
        Seed::with_stream(self.seed, self.stream)
    }
}

#[derive(Args)]
struct Output {
    /// Certificate JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// The host graph `G ∪ R` the certificate refers to.
    #[arg(long)]
    host_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Dense pipeline on `G ∪ G(n, (1+ε)/n)`.
    FindMinor {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        epsilon: f64,
        /// Trusted upper bound on α(G); defaults to n.
        #[arg(long)]
        alpha: Option<u64>,
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Path-peeling pipeline on `G ∪ G(n, 8/(nk))`, `δ(G) ≥ k`.
    FindMinorSparse {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: Option<u64>,
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Routes a complete subdivision through `G ∪ G(n, cp/n)`.
    FindTopo {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 30.0)]
        cp: f64,
        /// Number of branch vertices; defaults to `min(δ/8, √(n/(60 log₂ n)))`.
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        allow_low_degree: bool,
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        output: Output,
    },
    /// k-connectivity of `G ∪ G(n, p)`, one JSON line per trial.
    Connectivity {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Radius-2 partition pipeline and the exact diameter of `G ∪ G(n, p)`.
    Diameter {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Writes a family member as an edge list.
    Generate {
        /// Family document, e.g. '{"family": "disjoint-cliques", "k": 50}'.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Checks a certificate against a host edge list.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        host: PathBuf,
    },
}

fn load(input: &Input) -> Result<(Graph, Option<Vec<String>>)> {
    if input.labelled {
        let lg = load_labelled(&input.input)?;
        Ok((lg.graph, Some(lg.labels)))
    } else {
        Ok((load_edge_list(&input.input)?, None))
    }
}

fn emit(value: serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, &value)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Writes the certificate, the host and, for labelled input, the id→label
/// table next to the certificate.
fn save(doc: &CertificateDoc, host: &Graph, labels: Option<&[String]>, output: &Output) -> Result<()> {
    if let Some(path) = &output.out {
        doc.save(path)?;
        if let Some(labels) = labels {
            write_label_table(labels, BufWriter::new(File::create(path.with_extension("labels.csv"))?))?;
        }
    }
    if let Some(path) = &output.host_out {
        save_edge_list(host, path)?;
    }
    Ok(())
}

fn minor_report(o: &MinorOutcome, labels: Option<&[String]>, output: &Output) -> Result<()> {
    let doc = CertificateDoc::from_minor(&o.certificate, &o.host);
    doc.verify(&o.host)?;
    save(&doc, &o.host, labels, output)?;
    emit(json!({
        "order": o.certificate.order(),
        "host_digest": doc.host_digest(),
        "certificate_digest": doc.digest(),
        "metrics": o.metrics,
        "shortfall": o.shortfall,
    }))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::FindMinor { input, epsilon, alpha, seed, output } => {
            let (g, labels) = load(&input)?;
            let opts = MinorOptions::new(alpha.unwrap_or(g.n() as u64));
            let o = find_minor_perturbed(&g, epsilon, seed.seed(), &opts)?;
            minor_report(&o, labels.as_deref(), &output)
        }
        Command::FindMinorSparse { input, k, alpha, seed, output } => {
            let (g, labels) = load(&input)?;
            let opts = MinorOptions::new(alpha.unwrap_or(g.n() as u64));
            let o = find_minor_sparse(&g, k, seed.seed(), &opts)?;
            minor_report(&o, labels.as_deref(), &output)
        }
        Command::FindTopo { input, cp, ell, allow_low_degree, seed, output } => {
            let (g, labels) = load(&input)?;
            let opts = RouteOptions { ell_override: ell, allow_low_degree, ..RouteOptions::default() };
            let o = route_subdivision(&g, (cp / g.n().max(1) as f64).min(1.0), seed.seed(), &opts);
            let doc = CertificateDoc::from_subdivision(&o.certificate, &o.host);
            doc.verify(&o.host)?;
            save(&doc, &o.host, labels.as_deref(), &output)?;
            emit(json!({
                "order": o.certificate.order(),
                "host_digest": doc.host_digest(),
                "certificate_digest": doc.digest(),
                "metrics": o.metrics,
            }))
        }
        Command::Connectivity { input, k, p, trials, seed } => {
            let (g, _) = load(&input)?;
            for i in 0..trials {
                let s = seed.seed().fork(i as u64);
                let t = connectivity_trial(&g, k, p, s);
                emit(json!({
                    "trial": i,
                    "k": k,
                    "p": p,
                    "seed": t.seed,
                    "k_connected": t.k_connected,
                    "separator": t.separator,
                }))?;
            }
            Ok(())
        }
        Command::Diameter { input, k, p, seed } => {
            let (g, _) = load(&input)?;
            emit(json!(diameter_upper_pipeline(&g, k, p, seed.seed())?))
        }
        Command::Generate { family, n, out } => {
            let spec: FamilySpec = serde_json::from_str(&family).map_err(|e| LabError::Config(e.to_string()))?;
            let g = spec.build(n)?;
            save_edge_list(&g, &out)?;
            emit(json!({"n": g.n(), "m": g.edge_count(), "digest": perturb_lab::cert::hex_digest(g.digest())}))
        }
        Command::Verify { cert, host } => {
            let doc = CertificateDoc::load(&cert)?;
            let g = load_edge_list(&host)?;
            doc.verify(&g)?;
            emit(json!({"valid": true, "order": doc.order()}))
        }
    }
}

fn exit_code(e: &LabError) -> u8 {
    match e {
        LabError::Rejected(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("perturb: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
