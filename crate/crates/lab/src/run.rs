//! Trial execution.
//!
//! Every (cell, trial) job gets the seed `(base_seed, hash(cell, trial))`,
//! runs on the worker pool, and lands in a record keyed by its indices.
//! Records come back sorted by key, so the output does not depend on the
//! number of workers or on scheduling.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use perturb_core::diameter::exact_diameter;
use perturb_core::minor::{find_minor_sparse, find_minor_with, MinorOptions};
use perturb_core::oracles::greedy_coloring;
use perturb_core::random::{sample_gnp, splitmix64};
use perturb_core::robust::{connectivity_trial, diameter_upper_pipeline};
use perturb_core::topo::{route_subdivision, RouteOptions};
use perturb_core::traversal::Distance;
use perturb_core::{Graph, Seed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cert::{hex_digest, CertificateDoc};
use crate::config::{Cell, ExperimentConfig, ExperimentKind};
use crate::error::{LabError, Result};

/// Rounds to 12 significant digits so records do not depend on the last
/// bits of floating-point library calls.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn round_json(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(num) if num.is_f64() => {
            let x = round12(num.as_f64().expect("f64 number"));
            if let Some(r) = serde_json::Number::from_f64(x) {
                *num = r;
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_json),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn metrics_json<T: Serialize>(m: &T) -> serde_json::Value {
    let mut v = serde_json::to_value(m).expect("metrics serialize");
    round_json(&mut v);
    v
}

/// Measured quantities; which fields are present depends on the kind.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Measured {
    /// Certified complete-minor order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// Certified topological-clique order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tcl_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub host_edges: Option<usize>,
    /// `r(r-1)/2 ≤ e(host)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_budget_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separator_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub host_diameter: Option<Distance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aux_diameter: Option<Distance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_formula: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_formula: Option<f64>,
    /// Host diameter within `[⌊L⌋, ⌈6U⌉]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_bracket: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assembly_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime_warning: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diameter_formula: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_greedy: Option<usize>,
    /// `(1 + ln n) n / α`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_formula: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hadwiger_ge_chi: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub shortfall: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub cell: usize,
    pub trial: usize,
    pub kind: ExperimentKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub p: f64,
    pub seed: Seed,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub measured: Measured,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

pub fn trial_seed(base: u64, cell: usize, trial: usize) -> Seed {
    Seed::with_stream(base, splitmix64(((cell as u64) << 32) ^ trial as u64))
}

/// Output of a single trial before it is flattened into a record.
pub struct TrialOutput {
    pub p: f64,
    pub measured: Measured,
    pub certificate: Option<CertificateDoc>,
    pub host: Option<Graph>,
}

/// Runs one trial of `cfg` on the prepared cell graph `g`.
pub fn run_trial(cfg: &ExperimentConfig, cell: &Cell, g: &Graph, seed: Seed) -> Result<TrialOutput> {
    let n = cell.n;
    let s = cfg.grid.s.or(Some(g.min_degree()));
    let p = cfg.grid.p.eval(n, cell.k, s)?;
    let need_k = || cell.k.ok_or_else(|| LabError::Config("missing k".into()));
    let alpha = || {
        cfg.params
            .alpha_bound
            .or_else(|| cfg.family.alpha_bound(n))
            .ok_or_else(|| LabError::Config("no independence bound known; set params.alpha_bound".into()))
    };
    let mut m = Measured::default();
    let mut out = TrialOutput { p, measured: Measured::default(), certificate: None, host: None };
    match cfg.kind {
        ExperimentKind::Minor | ExperimentKind::MinorSparse | ExperimentKind::HadwigerVsChi => {
            let opts = MinorOptions::new(alpha()?);
            let mut o = if cfg.kind == ExperimentKind::Minor {
                let epsilon = cfg.epsilon().expect("validated");
                let r = sample_gnp(n, p, seed.fork(1));
                find_minor_with(g, &r, epsilon, seed, &opts)?
            } else {
                find_minor_sparse(g, need_k()?, seed, &opts)?
            };
            o.metrics.p = p;
            let order = o.certificate.order();
            let doc = CertificateDoc::from_minor(&o.certificate, &o.host);
            m.order = Some(order);
            m.verified = Some(doc.verify(&o.host).is_ok());
            m.host_edges = Some(o.host.edge_count());
            m.edge_budget_ok = Some(order * order.saturating_sub(1) / 2 <= o.host.edge_count());
            m.shortfall = o.shortfall.iter().map(metrics_json).collect();
            m.metrics = Some(metrics_json(&o.metrics));
            if cfg.kind == ExperimentKind::HadwigerVsChi {
                let chi = greedy_coloring(&o.host).0;
                m.chi_greedy = Some(chi);
                m.chi_formula = Some(round12((1.0 + (n as f64).ln()) * n as f64 / alpha()? as f64));
                m.hadwiger_ge_chi = Some(order >= chi);
            }
            out.certificate = Some(doc);
            out.host = Some(o.host);
        }
        ExperimentKind::Topo => {
            let opts = RouteOptions { ell_override: cfg.params.ell, ..RouteOptions::default() };
            let o = route_subdivision(g, p, seed, &opts);
            let doc = CertificateDoc::from_subdivision(&o.certificate, &o.host);
            m.tcl_order = Some(o.certificate.order());
            m.verified = Some(doc.verify(&o.host).is_ok());
            m.complete = Some(o.metrics.complete);
            m.host_edges = Some(o.host.edge_count());
            m.metrics = Some(metrics_json(&o.metrics));
            out.certificate = Some(doc);
            out.host = Some(o.host);
        }
        ExperimentKind::Connectivity => {
            let k = need_k()?;
            if !cfg.params.allow_large_k && 17 * k > g.min_degree() {
                return Err(LabError::Config(format!("k = {k} exceeds δ/17 = {}", g.min_degree() / 17)));
            }
            let t = connectivity_trial(g, k, p, seed);
            m.kappa_ok = Some(t.k_connected);
            m.separator_size = t.separator.as_ref().map(|s| s.len());
        }
        ExperimentKind::Diameter => {
            let rep = diameter_upper_pipeline(g, need_k()?, p, seed)?;
            let (lo, hi) = (rep.lower_formula.floor(), (6.0 * rep.upper_formula).ceil());
            m.in_bracket = Some(rep.host_diameter.finite().is_some_and(|d| lo <= d as f64 && d as f64 <= hi));
            m.host_diameter = Some(rep.host_diameter);
            m.aux_diameter = Some(rep.aux_diameter);
            m.lower_formula = Some(round12(rep.lower_formula));
            m.upper_formula = Some(round12(rep.upper_formula));
            m.assembly_ok = rep.assembly_ok;
            m.regime_warning = Some(rep.regime_warning);
        }
        ExperimentKind::GnpDiameter => {
            let host = sample_gnp(n, p, seed);
            m.host_diameter = Some(exact_diameter(&host));
            m.host_edges = Some(host.edge_count());
            let np = n as f64 * p;
            m.diameter_formula = Some(round12((n as f64).ln() / np.ln()));
            m.regime_warning = Some(np <= (n as f64).ln());
        }
    }
    out.measured = m;
    Ok(out)
}

/// Where certificate documents go, if anywhere.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions<'a> {
    pub cert_dir: Option<&'a Path>,
}

pub fn certificate_file(dir: &Path, cell: usize, trial: usize) -> std::path::PathBuf {
    dir.join(format!("cell{cell:03}-trial{trial:04}.json"))
}

/// Runs every cell × trial. Per-trial failures are embedded in the records;
/// only configuration problems (a family that cannot be built, a broken
/// worker pool) abort.
pub fn run_experiment(cfg: &ExperimentConfig, opts: RunOptions<'_>) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let cells = cfg.cells();
    let mut graphs = Vec::with_capacity(cells.len());
    for c in &cells {
        graphs.push(cfg.family.build(c.n)?);
    }
    if let Some(dir) = opts.cert_dir {
        std::fs::create_dir_all(dir)?;
    }
    let jobs: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..cfg.trials).map(move |t| (c, t))).collect();
    let run = |&(c, t): &(usize, usize)| -> TrialRecord {
        let cell = &cells[c];
        let seed = trial_seed(cfg.base_seed, c, t);
        let start = Instant::now();
        let result = run_trial(cfg, cell, &graphs[c], seed);
        let wall_ms = cfg.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        let mut rec = TrialRecord {
            cell: c,
            trial: t,
            kind: cfg.kind,
            n: cell.n,
            k: cell.k,
            p: 0.0,
            seed,
            error: None,
            measured: Measured::default(),
            certificate_digest: None,
            host_digest: None,
            wall_ms,
        };
        match result {
            Ok(out) => {
                rec.p = round12(out.p);
                rec.measured = out.measured;
                rec.host_digest = out.host.as_ref().map(|h| hex_digest(h.digest()));
                if let Some(doc) = out.certificate {
                    rec.certificate_digest = Some(doc.digest());
                    if let Some(dir) = opts.cert_dir {
                        if let Err(e) = doc.save(&certificate_file(dir, c, t)) {
                            rec.error = Some(format!("writing certificate: {e}"));
                        }
                    }
                }
                if rec.measured.verified == Some(false) {
                    rec.error = Some("certificate failed verification".into());
                }
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        rec
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.unwrap_or(0))
        .build()
        .map_err(|e| LabError::Config(e.to_string()))?;
    let mut records: Vec<TrialRecord> = pool.install(|| jobs.par_iter().map(run).collect());
    records.sort_by_key(|r| (r.cell, r.trial));
    Ok(records)
}

/// Re-runs the trial behind `rec`, then checks the stored certificate file
/// against the regenerated host.
pub fn reverify(cfg: &ExperimentConfig, rec: &TrialRecord, cert_dir: &Path) -> Result<()> {
    let cell = cfg.cells().into_iter().nth(rec.cell).ok_or_else(|| LabError::Config("cell out of range".into()))?;
    let g = cfg.family.build(cell.n)?;
    let out = run_trial(cfg, &cell, &g, rec.seed)?;
    let host = out.host.ok_or_else(|| LabError::Rejected("trial has no host graph".into()))?;
    if rec.host_digest.as_deref() != Some(hex_digest(host.digest()).as_str()) {
        return Err(LabError::Rejected("regenerated host differs from the record".into()));
    }
    let doc = CertificateDoc::load(&certificate_file(cert_dir, rec.cell, rec.trial))?;
    if rec.certificate_digest.as_deref() != Some(doc.digest().as_str()) {
        return Err(LabError::Rejected("certificate file differs from the record".into()));
    }
    doc.verify(&host)
}

pub fn write_jsonl<W: Write>(records: &[TrialRecord], mut w: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_jsonl(text: &str) -> Result<Vec<TrialRecord>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| Ok(serde_json::from_str(l)?)).collect()
}
