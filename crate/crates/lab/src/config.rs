//! Experiment configuration documents.

use std::path::PathBuf;

use perturb_core::families::Family;
use perturb_core::random::rules;
use perturb_core::Graph;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::io::load_edge_list;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Minor,
    MinorSparse,
    Topo,
    Connectivity,
    Diameter,
    GnpDiameter,
    HadwigerVsChi,
}

/// Seed graph family; `n` comes from the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    /// Cliques of order at least `k + 1`.
    DisjointCliques { k: usize },
    Complete,
    Empty,
    Path,
    Cycle,
    Star,
    Circulant { offsets: Vec<usize> },
    RandomRegular {
        d: usize,
        #[serde(default)]
        seed: u64,
    },
    /// `G(n, degree/n)`.
    Gnp {
        degree: f64,
        #[serde(default)]
        seed: u64,
    },
    /// A fixed graph; every grid `n` must equal its order.
    EdgeList { path: PathBuf },
}

impl FamilySpec {
    fn family(&self, n: usize) -> Option<Family> {
        Some(match self {
            FamilySpec::DisjointCliques { k } => Family::DisjointCliques { n, k: *k },
            FamilySpec::Complete => Family::Complete { n },
            FamilySpec::Empty => Family::Empty { n },
            FamilySpec::Path => Family::Path { n },
            FamilySpec::Cycle => Family::Cycle { n },
            FamilySpec::Star => Family::Star { n },
            FamilySpec::Circulant { offsets } => Family::Circulant { n, offsets: offsets.clone() },
            FamilySpec::RandomRegular { d, seed } => Family::RandomRegular { n, d: *d, seed: *seed },
            FamilySpec::Gnp { degree, seed } => Family::Gnp { n, p: (degree / n as f64).min(1.0), seed: *seed },
            FamilySpec::EdgeList { .. } => return None,
        })
    }

    pub fn build(&self, n: usize) -> Result<Graph> {
        match self {
            FamilySpec::EdgeList { path } => {
                let g = load_edge_list(path)?;
                if g.n() != n {
                    return Err(LabError::Config(format!("{} has {} vertices, grid asks for {n}", path.display(), g.n())));
                }
                Ok(g)
            }
            other => Ok(other.family(n).expect("generated family").build()?),
        }
    }

    /// Upper bound on the independence number known from the construction.
    pub fn alpha_bound(&self, n: usize) -> Option<u64> {
        self.family(n)?.independence_upper_bound().map(|a| a as u64)
    }
}

/// How the edge probability of `R` depends on the cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum PRule {
    Explicit { p: f64 },
    /// `(1 + ε)/n`.
    SparseThreshold { epsilon: f64 },
    /// `8/(nk)`.
    PathPeeling,
    /// `c (k + ln(n/s))/(ns)`.
    Connectivity { c: f64 },
    /// `c ln(n/s)/(ns)`.
    Isolation { c: f64 },
    /// `m ln(n/k)/(nk)`.
    Diameter { m: f64 },
    /// `c/n`.
    PerVertex { c: f64 },
}

impl PRule {
    pub fn eval(&self, n: usize, k: Option<usize>, s: Option<usize>) -> Result<f64> {
        let need = |x: Option<usize>, name: &str| x.ok_or_else(|| LabError::Config(format!("p rule needs {name}")));
        let p = match *self {
            PRule::Explicit { p } => p,
            PRule::SparseThreshold { epsilon } => rules::sparse_threshold(n, epsilon),
            PRule::PathPeeling => rules::path_peeling(n, need(k, "k")?),
            PRule::Connectivity { c } => rules::connectivity(n, need(k, "k")?, need(s, "s")?, c),
            PRule::Isolation { c } => rules::isolation(n, need(s, "s")?, c),
            PRule::Diameter { m } => rules::diameter(n, need(k, "k")?, m),
            PRule::PerVertex { c } => c / n as f64,
        };
        if !(0.0..=1.0).contains(&p) {
            return Err(LabError::Config(format!("p = {p} outside [0, 1]")));
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n: Vec<usize>,
    /// Optional second axis; cells are `n × k`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub k: Vec<usize>,
    /// Minimum-degree parameter `s`; defaults to `δ(G)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    pub p: PRule,
}

/// Kind-specific knobs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Overrides the number of branch vertices in the routing pipeline.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_bound: Option<u64>,
    /// Permit `k > δ/17` in connectivity runs.
    pub allow_large_k: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub family: FamilySpec,
    pub grid: Grid,
    pub trials: usize,
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default)]
    pub params: Params,
    /// Record wall time per trial; off by default since it breaks
    /// byte-identical reruns.
    #[serde(default)]
    pub timings: bool,
}

/// One grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub index: usize,
    pub n: usize,
    pub k: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(LabError::Config(m.to_owned()));
        if self.grid.n.is_empty() {
            return bad("grid.n is empty");
        }
        if self.workers == Some(0) {
            return bad("workers must be positive");
        }
        let needs_k = matches!(
            self.kind,
            ExperimentKind::MinorSparse | ExperimentKind::Connectivity | ExperimentKind::Diameter | ExperimentKind::HadwigerVsChi
        );
        if needs_k && self.grid.k.is_empty() {
            return bad("this experiment needs grid.k");
        }
        match (self.kind, self.grid.p) {
            (ExperimentKind::Minor, _) if self.epsilon().is_none() => bad("minor needs params.epsilon or a sparse-threshold rule"),
            (ExperimentKind::MinorSparse | ExperimentKind::HadwigerVsChi, rule) if rule != PRule::PathPeeling => {
                bad("the sparse pipeline fixes p = 8/(nk); use the path-peeling rule")
            }
            _ => Ok(()),
        }
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.params.epsilon.or(match self.grid.p {
            PRule::SparseThreshold { epsilon } => Some(epsilon),
            _ => None,
        })
    }

    pub fn cells(&self) -> Vec<Cell> {
        let ks: Vec<Option<usize>> = if self.grid.k.is_empty() { vec![None] } else { self.grid.k.iter().map(|&k| Some(k)).collect() };
        self.grid
            .n
            .iter()
            .flat_map(|&n| ks.iter().map(move |&k| (n, k)))
            .enumerate()
            .map(|(index, (n, k))| Cell { index, n, k })
            .collect()
    }
}
