//! Scaling fits and family-level reports over trial records.

use std::collections::BTreeMap;

use perturb_core::Seed;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::run::TrialRecord;

/// Numeric value of a record field: `n`, `k`, `p`, `cell`, `trial`, or any
/// measured field (booleans as 0/1, infinite distances as `+∞`).
pub fn field(rec: &TrialRecord, name: &str) -> Option<f64> {
    match name {
        "n" => return Some(rec.n as f64),
        "k" => return rec.k.map(|k| k as f64),
        "p" => return Some(rec.p),
        "cell" => return Some(rec.cell as f64),
        "trial" => return Some(rec.trial as f64),
        _ => {}
    }
    let value = serde_json::to_value(&rec.measured).ok()?;
    let v = value.get(name).or_else(|| value.get("metrics")?.get(name))?;
    match v {
        serde_json::Value::Number(x) => x.as_f64(),
        serde_json::Value::Bool(b) => Some(f64::from(u8::from(*b))),
        serde_json::Value::String(s) if s == "inf" => Some(f64::INFINITY),
        _ => None,
    }
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    quantile(&v, 0.5)
}

/// Least-squares slope and intercept.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub x: f64,
    pub median: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub points: Vec<ScalingPoint>,
    /// Slope of `ln median(y)` against `ln x`.
    pub slope: f64,
    pub intercept: f64,
    /// 95% percentile bootstrap interval, resampling trials within cells.
    pub ci: (f64, f64),
    /// Theory curve at each `x`, if one was supplied.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theory: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory_slope: Option<f64>,
}

pub const BOOTSTRAP_ROUNDS: usize = 2000;
const MIN_POINTS: usize = 4;

/// Groups records by `x`, takes the median of `y` per group and fits a
/// line in log-log space. Records with an error or a non-positive or
/// non-finite value are skipped.
pub fn fit_scaling(records: &[TrialRecord], x: &str, y: &str) -> Result<ScalingFit> {
    let mut groups: BTreeMap<u64, (f64, Vec<f64>)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.error.is_none()) {
        if let (Some(xv), Some(yv)) = (field(r, x), field(r, y)) {
            if xv > 0.0 && yv > 0.0 && xv.is_finite() && yv.is_finite() {
                groups.entry(xv.to_bits()).or_insert((xv, Vec::new())).1.push(yv);
            }
        }
    }
    fit_groups(groups.into_values().collect())
}

/// [`fit_scaling`] on explicit `(x, samples)` groups.
pub fn fit_groups(mut groups: Vec<(f64, Vec<f64>)>) -> Result<ScalingFit> {
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    if groups.len() < MIN_POINTS {
        return Err(LabError::InsufficientPoints { needed: MIN_POINTS, have: groups.len() });
    }
    let lx: Vec<f64> = groups.iter().map(|g| g.0.ln()).collect();
    let points: Vec<ScalingPoint> =
        groups.iter().map(|(x, ys)| ScalingPoint { x: *x, median: median(ys), count: ys.len() }).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.median.ln()).collect();
    let (slope, intercept) = least_squares(&lx, &ly);

    let mut rng = Seed::new(0x5ca1_ab1e).rng();
    let mut slopes = Vec::with_capacity(BOOTSTRAP_ROUNDS);
    let mut resample = Vec::new();
    for _ in 0..BOOTSTRAP_ROUNDS {
        let ly: Vec<f64> = groups
            .iter()
            .map(|(_, ys)| {
                resample.clear();
                resample.extend((0..ys.len()).map(|_| ys[rng.random_range(0..ys.len())]));
                median(&resample).ln()
            })
            .collect();
        slopes.push(least_squares(&lx, &ly).0);
    }
    slopes.sort_by(f64::total_cmp);
    let ci = (quantile(&slopes, 0.025), quantile(&slopes, 0.975));
    Ok(ScalingFit { points, slope, intercept, ci, theory: Vec::new(), theory_slope: None })
}

impl ScalingFit {
    /// Evaluates `curve` at every `x` and fits its log-log slope.
    pub fn with_theory(mut self, curve: impl Fn(f64) -> f64) -> Self {
        self.theory = self.points.iter().map(|p| curve(p.x)).collect();
        let lx: Vec<f64> = self.points.iter().map(|p| p.x.ln()).collect();
        let ly: Vec<f64> = self.theory.iter().map(|t| t.ln()).collect();
        self.theory_slope = Some(least_squares(&lx, &ly).0);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRatio {
    pub n: usize,
    pub median_ratio: f64,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub records: usize,
    /// Records whose order violates `r(r-1)/2 ≤ e(host)`.
    pub edge_budget_violations: Vec<(usize, usize)>,
    pub cells: Vec<CellRatio>,
    /// Mean of the per-cell median ratios `r/√(nk)`.
    pub constant: f64,
    pub max_ratio: f64,
    /// Every cell median lies within ±30% of `constant`.
    pub stable: bool,
}

/// Edge-budget check per record and the spread of `order/√(nk)` across
/// cells, where `k` is the clique degree of the seed family.
pub fn tightness_check(records: &[TrialRecord], k: usize) -> TightnessReport {
    let mut violations = Vec::new();
    let mut by_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    let mut counted = 0;
    for r in records.iter().filter(|r| r.error.is_none()) {
        let (Some(order), Some(edges)) = (r.measured.order, r.measured.host_edges) else { continue };
        counted += 1;
        if order * order.saturating_sub(1) / 2 > edges {
            violations.push((r.cell, r.trial));
        }
        by_n.entry(r.n).or_default().push(order as f64 / ((r.n * k) as f64).sqrt());
    }
    let cells: Vec<CellRatio> = by_n
        .into_iter()
        .map(|(n, v)| CellRatio { n, median_ratio: median(&v), max_ratio: v.iter().copied().fold(0.0, f64::max) })
        .collect();
    let constant = if cells.is_empty() { 0.0 } else { cells.iter().map(|c| c.median_ratio).sum::<f64>() / cells.len() as f64 };
    TightnessReport {
        records: counted,
        stable: !cells.is_empty() && cells.iter().all(|c| (c.median_ratio - constant).abs() <= 0.3 * constant),
        max_ratio: cells.iter().map(|c| c.max_ratio).fold(0.0, f64::max),
        edge_budget_violations: violations,
        cells,
        constant,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HadwigerRow {
    pub cell: usize,
    pub trial: usize,
    pub n: usize,
    pub h_cert: usize,
    pub chi_greedy: usize,
    pub chi_formula: f64,
    /// Reported, not asserted.
    pub h_at_least_chi: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HadwigerReport {
    pub rows: Vec<HadwigerRow>,
    pub holds: usize,
}

/// Certified minor order against a greedy colouring bound, per record.
pub fn hadwiger_vs_chi(records: &[TrialRecord]) -> HadwigerReport {
    let rows: Vec<HadwigerRow> = records
        .iter()
        .filter_map(|r| {
            let m = &r.measured;
            Some(HadwigerRow {
                cell: r.cell,
                trial: r.trial,
                n: r.n,
                h_cert: m.order?,
                chi_greedy: m.chi_greedy?,
                chi_formula: m.chi_formula?,
                h_at_least_chi: m.hadwiger_ge_chi?,
            })
        })
        .collect();
    HadwigerReport { holds: rows.iter().filter(|r| r.h_at_least_chi).count(), rows }
}
