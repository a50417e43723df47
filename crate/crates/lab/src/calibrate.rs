//! Calibration runs: the desk-scale experiments whose observed statistics
//! are pinned in `data/goldens.json` together with the producing config.

use perturb_core::families;
use perturb_core::minor::long_path;
use perturb_core::random::{rules, sample_gnp, uniform_permutation};
use perturb_core::robust::{check_matching_property, mader_decompose, PartitionSample};
use perturb_core::topo::diameter_core;
use perturb_core::{Seed, VertexSet};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::{fit_scaling, hadwiger_vs_chi, median, tightness_check};
use crate::config::{ExperimentConfig, ExperimentKind, FamilySpec, Grid, PRule, Params};
use crate::error::{LabError, Result};
use crate::run::{run_experiment, RunOptions, TrialRecord};

pub const MINOR_GRID: [usize; 4] = [5100, 10200, 20400, 40800];

fn config(kind: ExperimentKind, family: FamilySpec, grid: Grid, trials: usize, base_seed: u64) -> ExperimentConfig {
    ExperimentConfig { kind, family, grid, trials, base_seed, workers: None, params: Params::default(), timings: false }
}

/// Dense pipeline on disjoint `K_51`, `ε = 0.5`, 20 trials per `n`.
pub fn minor_trend() -> ExperimentConfig {
    let grid = Grid { n: MINOR_GRID.to_vec(), k: vec![], s: None, p: PRule::SparseThreshold { epsilon: 0.5 } };
    config(ExperimentKind::Minor, FamilySpec::DisjointCliques { k: 50 }, grid, 20, 1)
}

/// Disjoint `K_101`, `n = 5050`, `k = 5`, `p = 40(k + ln(n/s))/(ns)`.
pub fn connectivity_upper() -> ExperimentConfig {
    let grid = Grid { n: vec![5050], k: vec![5], s: Some(100), p: PRule::Connectivity { c: 40.0 } };
    config(ExperimentKind::Connectivity, FamilySpec::DisjointCliques { k: 100 }, grid, 50, 2)
}

/// Disjoint `K_101`, `n = 50000`, `p = factor · ln(n/s)/(ns)`; success means
/// the host stayed connected.
pub fn connectivity_lower(factor: f64) -> ExperimentConfig {
    let grid = Grid { n: vec![50000], k: vec![1], s: Some(100), p: PRule::Isolation { c: factor } };
    config(ExperimentKind::Connectivity, FamilySpec::DisjointCliques { k: 100 }, grid, 100, 3)
}

/// Random 64-regular graph, `n = 20000`, `p = 30/n`, eight branch vertices.
pub fn topo_routing() -> ExperimentConfig {
    let grid = Grid { n: vec![20000], k: vec![], s: None, p: PRule::PerVertex { c: 30.0 } };
    let mut cfg = config(ExperimentKind::Topo, FamilySpec::RandomRegular { d: 64, seed: 1 }, grid, 50, 4);
    cfg.params.ell = Some(8);
    cfg
}

/// Disjoint `K_51`, `n = 51000`, `k = 50`, `p = 10 ln(n/k)/(nk)`.
pub fn diameter_bracket() -> ExperimentConfig {
    let grid = Grid { n: vec![51000], k: vec![50], s: None, p: PRule::Diameter { m: 10.0 } };
    config(ExperimentKind::Diameter, FamilySpec::DisjointCliques { k: 50 }, grid, 100, 5)
}

/// `G(10^5, 20 ln n/n)`.
pub fn gnp_diameter(trials: usize) -> ExperimentConfig {
    let grid = Grid { n: vec![100_000], k: vec![1], s: None, p: PRule::Diameter { m: 20.0 } };
    config(ExperimentKind::GnpDiameter, FamilySpec::Empty, grid, trials, 6)
}

/// Circulant `n = 20000` with offsets `1..=50`, sparse pipeline with `k = 20`.
pub fn hadwiger_circulant() -> ExperimentConfig {
    let grid = Grid { n: vec![20000], k: vec![20], s: None, p: PRule::PathPeeling };
    config(ExperimentKind::HadwigerVsChi, FamilySpec::Circulant { offsets: (1..=50).collect() }, grid, 20, 7)
}

/// Fraction of 100 samples of `G(10^4, 1.6/n)` whose long path has at
/// least 300 edges.
pub fn long_path_rate(seeds: u64) -> (f64, Vec<usize>) {
    let n = 10_000;
    let lengths: Vec<usize> = (0..seeds)
        .map(|s| {
            let r = sample_gnp(n, 1.6 / n as f64, Seed::with_stream(s, 50));
            long_path(&r, Seed::with_stream(s, 51)).len().saturating_sub(1)
        })
        .collect();
    let ok = lengths.iter().filter(|&&l| l >= 300).count();
    (ok as f64 / seeds as f64, lengths)
}

/// Fraction of samples of `G(10^4, 30/n)` with a random `U`, `|U| = 0.9n`,
/// whose `C/2`-core has at least `0.8n` vertices and diameter at most `3 log₂ n`.
pub fn core_rate(seeds: u64) -> f64 {
    let n = 10_000;
    let ok = (0..seeds)
        .filter(|&s| {
            let r = sample_gnp(n, 30.0 / n as f64, Seed::with_stream(s, 60));
            let perm = uniform_permutation(n, Seed::with_stream(s, 61));
            let u: VertexSet = perm[..9 * n / 10].iter().copied().collect();
            let d = diameter_core(&r, &u, 30);
            d.size_bound_met && d.diameter_bound_met
        })
        .count();
    ok as f64 / seeds as f64
}

/// Fraction of seeds for which the cross-matching property holds on
/// disjoint cliques, `n = 5000`, `s = 100`, `k = 5`, `p = 40(k + ln(n/s))/(ns)`.
pub fn matching_rate(seeds: u64) -> Result<f64> {
    let (n, s, k) = (5000, 100, 5);
    let g = families::disjoint_cliques(n, s)?;
    let d = mader_decompose(&g, s)?;
    let p = rules::connectivity(n, k, s, 40.0);
    let pass = (0..seeds)
        .filter(|&i| {
            let r = sample_gnp(n, p, Seed::with_stream(i, 70));
            let spec = PartitionSample { cap: Some(k), ..PartitionSample::new(Seed::with_stream(i, 71)) };
            check_matching_property(&g, &r, &d, k, &spec).pass
        })
        .count();
    Ok(pass as f64 / seeds as f64)
}

pub fn rate_of(records: &[TrialRecord], pick: impl Fn(&TrialRecord) -> Option<bool>) -> f64 {
    let hits = records.iter().filter(|r| pick(r) == Some(true)).count();
    hits as f64 / records.len().max(1) as f64
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Golden {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ExperimentConfig>,
    /// Fixed inputs of calibrations that are not harness experiments.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setup: Option<serde_json::Value>,
    pub observed: serde_json::Value,
}

/// Everything but `gnp-diameter`, which takes about an hour.
pub const QUICK: [&str; 9] = [
    "minor-trend",
    "long-path",
    "core",
    "topo-routing",
    "connectivity-upper",
    "connectivity-lower",
    "matching",
    "diameter-bracket",
    "hadwiger-vs-chi",
];

/// Runs the named calibration.
pub fn calibrate(name: &str, workers: Option<usize>) -> Result<Golden> {
    let with_workers = |mut c: ExperimentConfig| {
        c.workers = workers;
        c
    };
    let run = |c: &ExperimentConfig| run_experiment(c, RunOptions::default());
    let golden = |config: Option<ExperimentConfig>, setup: Option<serde_json::Value>, observed| Golden {
        name: name.to_owned(),
        config,
        setup,
        observed,
    };
    Ok(match name {
        "minor-trend" => {
            let cfg = with_workers(minor_trend());
            let recs = run(&cfg)?;
            let fit = fit_scaling(&recs, "n", "order")?;
            let tight = tightness_check(&recs, 50);
            let observed = json!({
                "medians": fit.points.iter().map(|p| p.median).collect::<Vec<_>>(),
                "slope": fit.slope,
                "slope_ci": fit.ci,
                "edge_budget_violations": tight.edge_budget_violations.len(),
                "ratio_constant": tight.constant,
                "ratio_cells": tight.cells,
                "ratio_stable": tight.stable,
            });
            golden(Some(cfg), None, observed)
        }
        "long-path" => {
            let (rate, lengths) = long_path_rate(100);
            let lengths: Vec<f64> = lengths.iter().map(|&l| l as f64).collect();
            let setup = json!({"n": 10000, "p": "1.6/n", "seeds": 100});
            golden(None, Some(setup), json!({"rate_ge_300": rate, "median_length": median(&lengths)}))
        }
        "core" => golden(None, Some(json!({"n": 10000, "p": "30/n", "u": "0.9n", "seeds": 100})), json!({"rate": core_rate(100)})),
        "matching" => {
            let setup = json!({"n": 5000, "s": 100, "k": 5, "c": 40, "cap": 5, "seeds": 100});
            golden(None, Some(setup), json!({"pass_rate": matching_rate(100)?}))
        }
        "connectivity-lower" => {
            let mut rates = serde_json::Map::new();
            for factor in [0.5, 0.8] {
                let recs = run(&with_workers(connectivity_lower(factor)))?;
                let rate = rate_of(&recs, |r| r.measured.kappa_ok.map(|k| !k));
                rates.insert(format!("disconnected_rate_at_{factor}"), json!(rate));
            }
            golden(Some(with_workers(connectivity_lower(0.5))), Some(json!({"factors": [0.5, 0.8]})), rates.into())
        }
        "topo-routing" | "connectivity-upper" | "diameter-bracket" | "hadwiger-vs-chi" | "gnp-diameter" => {
            let cfg = with_workers(match name {
                "topo-routing" => topo_routing(),
                "connectivity-upper" => connectivity_upper(),
                "diameter-bracket" => diameter_bracket(),
                "hadwiger-vs-chi" => hadwiger_circulant(),
                _ => gnp_diameter(100),
            });
            let recs = run(&cfg)?;
            let observed = match name {
                "topo-routing" => json!({
                    "complete_rate": rate_of(&recs, |r| r.measured.complete),
                    "verified_rate": rate_of(&recs, |r| r.measured.verified),
                }),
                "connectivity-upper" => json!({"k_connected_rate": rate_of(&recs, |r| r.measured.kappa_ok)}),
                "diameter-bracket" => json!({
                    "in_bracket_rate": rate_of(&recs, |r| r.measured.in_bracket),
                    "assembly_failures": recs.iter().filter(|r| r.measured.assembly_ok == Some(false)).count(),
                    "diameters": recs.iter().map(|r| r.measured.host_diameter).collect::<Vec<_>>(),
                }),
                "hadwiger-vs-chi" => json!(hadwiger_vs_chi(&recs)),
                _ => json!({
                    "in_2_or_3_rate": rate_of(&recs, |r| r.measured.host_diameter.and_then(|d| d.finite()).map(|d| d == 2 || d == 3)),
                }),
            };
            golden(Some(cfg), None, observed)
        }
        other => return Err(LabError::Config(format!("unknown calibration {other:?}"))),
    })
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Goldens {
    pub goldens: Vec<Golden>,
}

impl Goldens {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Replaces the entry with the same name, keeping the rest.
    pub fn upsert(&mut self, g: Golden) {
        match self.goldens.iter_mut().find(|x| x.name == g.name) {
            Some(slot) => *slot = g,
            None => self.goldens.push(g),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Golden> {
        self.goldens.iter().find(|g| g.name == name)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}
