//! Seeded samplers: binomial random graphs, perturbations, relabelings and
//! vertex ensembles.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::graph::{Graph, Vertex, VertexSet};

/// Reproducible source of randomness.
///
/// `(value, stream)` selects a ChaCha8 key and stream; [`Seed::fork`] derives
/// independent child seeds by label, so sub-computations never share draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Seed {
    pub value: u64,
    pub stream: u64,
}

impl Seed {
    pub const fn new(value: u64) -> Self {
        Seed { value, stream: 0 }
    }

    pub const fn with_stream(value: u64, stream: u64) -> Self {
        Seed { value, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.value);
        rng.set_stream(self.stream);
        rng
    }

    /// Child seed for the sub-computation named `label`.
    pub fn fork(&self, label: u64) -> Seed {
        Seed {
            value: splitmix64(self.value ^ splitmix64(label.wrapping_add(0x5851_f42d_4c95_7f2d))),
            stream: self.stream,
        }
    }
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Below this edge probability pairs are visited by geometric skipping.
pub const SKIP_THRESHOLD: f64 = 0.01;

/// Binomial random graph `G(n, p)`.
pub fn sample_gnp(n: usize, p: f64, seed: Seed) -> Graph {
    assert!((0.0..=1.0).contains(&p), "edge probability {p} outside [0, 1]");
    if p == 0.0 || n < 2 {
        return Graph::empty(n);
    }
    if p == 1.0 {
        return Graph::complete(n);
    }
    let mut rng = seed.rng();
    let mut edges = Vec::new();
    if p < SKIP_THRESHOLD {
        let expected = p * (n as f64) * (n as f64 - 1.0) / 2.0;
        edges.reserve((expected * 1.1) as usize + 16);
        let log_q = libm::log1p(-p);
        // Walk the pairs (w, v), w < v, in row-major order of v.
        let (mut v, mut w) = (1usize, -1isize);
        loop {
            w += 1 + skip(&mut rng, log_q) as isize;
            while v < n && w >= v as isize {
                w -= v as isize;
                v += 1;
            }
            if v >= n {
                break;
            }
            edges.push((w as Vertex, v as Vertex));
        }
    } else {
        for v in 1..n {
            for w in 0..v {
                if rng.random::<f64>() < p {
                    edges.push((w as Vertex, v as Vertex));
                }
            }
        }
    }
    Graph::from_edge_vec(n, &edges)
}

/// Number of failures before the next success of a Bernoulli sequence with
/// `ln(1 - p) = log_q`.
#[inline]
fn skip(rng: &mut ChaCha8Rng, log_q: f64) -> u64 {
    let u: f64 = rng.random();
    let s = libm::floor(libm::log1p(-u) / log_q);
    if s >= u64::MAX as f64 {
        u64::MAX / 4
    } else {
        s as u64
    }
}

/// Each element of `candidates` independently with probability `p`,
/// in order. The draw depends only on `(candidates.len(), p, seed)`.
pub fn sample_row(candidates: &[Vertex], p: f64, seed: Seed) -> Vec<Vertex> {
    let mut out = Vec::new();
    if p <= 0.0 {
        return out;
    }
    if p >= 1.0 {
        return candidates.to_vec();
    }
    let mut rng = seed.rng();
    if p < SKIP_THRESHOLD {
        let log_q = libm::log1p(-p);
        let mut i = skip(&mut rng, log_q);
        while (i as usize) < candidates.len() {
            out.push(candidates[i as usize]);
            i = i.saturating_add(1 + skip(&mut rng, log_q));
        }
    } else {
        out.extend(candidates.iter().copied().filter(|_| rng.random::<f64>() < p));
    }
    out
}

/// `g ∪ R` with `R ~ G(n, p)` drawn from `seed`.
pub fn perturb(g: &Graph, p: f64, seed: Seed) -> Graph {
    g.union(&sample_gnp(g.n(), p, seed)).expect("same vertex count")
}

/// Keeps every edge independently with probability `keep`.
pub fn thin(g: &Graph, keep: f64, seed: Seed) -> Graph {
    let mut rng = seed.rng();
    let edges: Vec<_> = g.edges().filter(|_| rng.random::<f64>() < keep).collect();
    Graph::from_edge_vec(g.n(), &edges)
}

/// Uniformly random permutation of `0..n` (Fisher–Yates).
pub fn uniform_permutation(n: usize, seed: Seed) -> Vec<Vertex> {
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    perm.shuffle(&mut seed.rng());
    perm
}

/// Isomorphic copy of `g` under a uniformly random permutation.
pub fn uniform_relabel(g: &Graph, seed: Seed) -> Graph {
    g.relabel(&uniform_permutation(g.n(), seed))
}

/// A sequence of disjoint vertex sets, each listed in sampling order.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ensemble {
    pub sets: Vec<Vec<Vertex>>,
    pub ambient_n: usize,
}

impl Ensemble {
    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn ell(&self) -> usize {
        self.sets.first().map_or(0, Vec::len)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.sets.iter().flatten().copied()
    }
}

/// `k` disjoint `ell`-sets drawn in succession, uniformly without
/// replacement, from the vertices outside `forbidden`.
pub fn sample_ensemble(n: usize, k: usize, ell: usize, forbidden: &VertexSet, seed: Seed) -> Result<Ensemble, Error> {
    let mut pool: Vec<Vertex> = (0..n as Vertex).filter(|&v| !forbidden.contains(v)).collect();
    let needed = k * ell;
    if needed > pool.len() {
        return Err(Error::InsufficientVertices { needed, available: pool.len() });
    }
    let mut rng = seed.rng();
    let (picked, _) = pool.partial_shuffle(&mut rng, needed);
    let sets = picked.chunks(ell.max(1)).take(k).map(<[Vertex]>::to_vec).collect();
    Ok(Ensemble { sets, ambient_n: n })
}

/// Parameters of a `(k, ℓ)`-ensemble for a host with independence number
/// `alpha_g`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnsembleParams {
    pub gamma: f64,
    pub alpha_g: u64,
    pub n: usize,
    pub ell: usize,
    pub k: usize,
    /// `γ² / (α_G / n) ≥ 2`.
    pub alpha_constraint_holds: bool,
}

/// `ℓ = max{⌈(2/γ)√α⌉, ⌈(32/γ) ln n⌉}` and `k = ⌊γ n / ℓ⌋`.
pub fn ensemble_params(n: usize, alpha_g: u64, gamma: f64) -> Result<EnsembleParams, Error> {
    if !(gamma > 0.0 && gamma < 1.0 / 12.0) {
        return Err(Error::GammaOutOfRange(gamma));
    }
    if alpha_g == 0 {
        return Err(Error::InvalidParameter("independence number must be at least 1"));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two vertices"));
    }
    let sqrt_branch = libm::ceil(2.0 / gamma * libm::sqrt(alpha_g as f64));
    let log_branch = libm::ceil(32.0 / gamma * libm::log(n as f64));
    let ell = sqrt_branch.max(log_branch) as usize;
    let k = libm::floor(gamma * n as f64 / ell as f64) as usize;
    let alpha_cap = alpha_g as f64 / n as f64;
    Ok(EnsembleParams {
        gamma,
        alpha_g,
        n,
        ell,
        k,
        alpha_constraint_holds: gamma * gamma / alpha_cap >= 2.0,
    })
}

/// Edge-probability rules used by the pipelines. Each is evaluated as a
/// single rounded division where the inputs allow it.
pub mod rules {
    /// `(1 + ε) / n`.
    pub fn sparse_threshold(n: usize, epsilon: f64) -> f64 {
        (1.0 + epsilon) / n as f64
    }

    /// `8 / (n k)`.
    pub fn path_peeling(n: usize, k: usize) -> f64 {
        8.0 / (n as f64 * k as f64)
    }

    /// `c (k + ln(n/s)) / (n s)`.
    pub fn connectivity(n: usize, k: usize, s: usize, c: f64) -> f64 {
        c * (k as f64 + libm::log(n as f64 / s as f64)) / (n as f64 * s as f64)
    }

    /// `c ln(n/s) / (n s)`, the isolation scale of disjoint cliques.
    pub fn isolation(n: usize, s: usize, c: f64) -> f64 {
        c * libm::log(n as f64 / s as f64) / (n as f64 * s as f64)
    }

    /// `m ln(n/k) / (n k)`.
    pub fn diameter(n: usize, k: usize, m: f64) -> f64 {
        m * libm::log(n as f64 / k as f64) / (n as f64 * k as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes() {
        assert_eq!(sample_gnp(5, 1.0, Seed::new(3)), Graph::complete(5));
        assert_eq!(sample_gnp(5, 0.0, Seed::new(3)), Graph::empty(5));
    }

    #[test]
    fn gnp_is_reproducible() {
        let a = sample_gnp(500, 0.004, Seed::with_stream(9, 2));
        let b = sample_gnp(500, 0.004, Seed::with_stream(9, 2));
        let c = sample_gnp(500, 0.004, Seed::with_stream(9, 3));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn gnp_mean_edge_count() {
        let n = 10_000;
        let p = 3.0 / n as f64;
        let total: usize = (0..200).map(|s| sample_gnp(n, p, Seed::new(s)).edge_count()).sum();
        let mean = total as f64 / 200.0;
        let expected = p * (n * (n - 1) / 2) as f64;
        assert!((mean - expected).abs() <= 0.05 * expected, "mean {mean}");
    }

    #[test]
    fn dense_branch_mean() {
        let n = 200;
        let total: usize = (0..200).map(|s| sample_gnp(n, 0.3, Seed::new(s)).edge_count()).sum();
        let mean = total as f64 / 200.0;
        let expected = 0.3 * (n * (n - 1) / 2) as f64;
        // Standard error of the mean is about 2.4 edges.
        assert!((mean - expected).abs() < 15.0, "mean {mean}");
    }

    #[test]
    fn perturb_edge_cases() {
        let g = crate::families::cycle(30);
        assert_eq!(perturb(&g, 0.0, Seed::new(1)), g);
        let e = Graph::empty(40);
        assert_eq!(perturb(&e, 0.2, Seed::new(4)), sample_gnp(40, 0.2, Seed::new(4)));
    }

    #[test]
    fn row_sampling_matches_rate() {
        let cands: Vec<Vertex> = (0..100_000).collect();
        let hits = sample_row(&cands, 0.001, Seed::new(5)).len();
        assert!((70..=130).contains(&hits), "{hits}");
        assert!(sample_row(&cands, 0.0, Seed::new(5)).is_empty());
    }

    #[test]
    fn ensemble_of_everything() {
        let e = sample_ensemble(10, 1, 10, &VertexSet::new(), Seed::new(0)).unwrap();
        let mut all = e.sets[0].clone();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert!(matches!(
            sample_ensemble(10, 2, 5, &VertexSet::from_vec(vec![3]), Seed::new(0)),
            Err(Error::InsufficientVertices { needed: 10, available: 9 })
        ));
    }

    #[test]
    fn ensemble_marginal() {
        let hits = (0..10_000)
            .filter(|&s| {
                let e = sample_ensemble(100, 3, 10, &VertexSet::new(), Seed::new(s)).unwrap();
                e.sets[0].contains(&17)
            })
            .count();
        let freq = hits as f64 / 10_000.0;
        assert!((freq - 0.1).abs() <= 0.01, "{freq}");
    }

    #[test]
    fn params_log_branch() {
        // ln n just below 32 makes the log branch 32·16·32.
        let n = libm::floor(libm::exp(32.0)) as usize;
        let p = ensemble_params(n, 1, 1.0 / 16.0).unwrap();
        assert_eq!(p.ell, 16_384);
        assert_eq!(p.k, libm::floor(n as f64 / 16.0 / 16_384.0) as usize);
    }

    #[test]
    fn params_sqrt_branch() {
        let p = ensemble_params(100_000, 100_000, 1.0 / 16.0).unwrap();
        // 32·√100000 ≈ 10119.3 beats 512·ln(100000) ≈ 5894.5.
        assert_eq!(p.ell, 10_120);
        assert_eq!(p.k, 0);
        let q = ensemble_params(10_000, 2500, 1.0 / 16.0).unwrap();
        assert_eq!(q.ell, 4716);
        assert!(!q.alpha_constraint_holds);
    }

    #[test]
    fn params_reject_bad_gamma() {
        assert_eq!(ensemble_params(100, 1, 0.1), Err(Error::GammaOutOfRange(0.1)));
        assert!(ensemble_params(100, 1, 0.0).is_err());
    }

    #[test]
    fn forks_differ() {
        let s = Seed::new(1);
        assert_ne!(s.fork(1), s.fork(2));
        assert_eq!(s.fork(1), s.fork(1));
    }
}
