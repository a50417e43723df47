//! Complete minors in randomly perturbed graphs.
//!
//! The dense pipeline takes a long path in the random part, cuts it into
//! `2k` segments of length `ℓ`, checks the neighbourhood-growth properties
//! of the first `k` segments, contracts all segments to an auxiliary graph
//! `H` and looks for a complete minor inside `H`. The sparse pipeline first
//! peels `n/(2k)` disjoint paths out of the seed graph and runs the dense
//! pipeline on the quotient over those paths.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::certificate::{verify_minor_certificate, MinorCertificate};
use crate::contract::contract_sets;
use crate::error::Error;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::oracles::greedy_independence_lower_bound;
use crate::peeling::Core;
use crate::random::{ensemble_params, rules, sample_gnp, Ensemble, Seed};
use crate::traversal::induces_connected;

pub const LONG_PATH_RESTARTS: usize = 32;

/// Longest simple path found by randomized depth-first search.
///
/// Each restart runs a DFS from a random vertex, then a second DFS from the
/// far end of the deepest stack; the longest stack seen is kept.
pub fn long_path(r: &Graph, seed: Seed) -> Vec<Vertex> {
    long_path_with(r, seed, LONG_PATH_RESTARTS)
}

pub fn long_path_with(r: &Graph, seed: Seed, restarts: usize) -> Vec<Vertex> {
    if r.n() == 0 {
        return Vec::new();
    }
    let mut rng = seed.rng();
    let mut dfs = Dfs::new(r.n());
    let mut best: Vec<Vertex> = vec![0];
    let starts: Vec<Vertex> = r.vertices().filter(|&v| r.degree(v) > 0).collect();
    if starts.is_empty() {
        return best;
    }
    for _ in 0..restarts.max(1) {
        let s = *starts.choose(&mut rng).unwrap();
        let first = dfs.deepest(r, s, &mut rng);
        let end = *first.last().unwrap();
        let second = dfs.deepest(r, end, &mut rng);
        for p in [first, second] {
            if p.len() > best.len() {
                best = p;
            }
        }
    }
    best
}

struct Dfs {
    mark: Vec<u32>,
    epoch: u32,
    cursor: Vec<u32>,
    offset: Vec<u32>,
}

impl Dfs {
    fn new(n: usize) -> Self {
        Dfs { mark: vec![0; n], epoch: 0, cursor: vec![0; n], offset: vec![0; n] }
    }

    fn deepest(&mut self, g: &Graph, s: Vertex, rng: &mut impl Rng) -> Vec<Vertex> {
        self.epoch += 1;
        let mut stack = vec![s];
        let mut best = stack.clone();
        self.enter(g, s, rng);
        while let Some(&v) = stack.last() {
            let nb = g.neighbors(v);
            let vi = v as usize;
            let mut next = None;
            while (self.cursor[vi] as usize) < nb.len() {
                let idx = (self.cursor[vi] + self.offset[vi]) as usize % nb.len();
                self.cursor[vi] += 1;
                let w = nb[idx];
                if self.mark[w as usize] != self.epoch {
                    next = Some(w);
                    break;
                }
            }
            match next {
                Some(w) => {
                    self.enter(g, w, rng);
                    stack.push(w);
                    if stack.len() > best.len() {
                        best.clone_from(&stack);
                    }
                }
                None => {
                    stack.pop();
                }
            }
        }
        best
    }

    fn enter(&mut self, g: &Graph, v: Vertex, rng: &mut impl Rng) {
        let vi = v as usize;
        self.mark[vi] = self.epoch;
        self.cursor[vi] = 0;
        let d = g.degree(v) as u32;
        self.offset[vi] = if d > 1 { rng.random_range(0..d) } else { 0 };
    }
}

/// Splits the front of `path` into `count` consecutive segments of
/// `ell + 1` vertices each.
pub fn carve_subpaths(path: &[Vertex], count: usize, ell: usize) -> Result<Vec<Vec<Vertex>>, Error> {
    let needed = count * (ell + 1);
    if needed > path.len() {
        return Err(Error::PathTooShort { needed, available: path.len() });
    }
    Ok(path[..needed].chunks(ell + 1).map(<[Vertex]>::to_vec).collect())
}

/// How the independence number of the shrinking ambient set is estimated in
/// the degree filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum AlphaSurrogate {
    /// A trusted upper bound on α of the whole graph.
    Global(u64),
    /// Randomized greedy independent set of the ambient set, once per branch.
    GreedyPerRound,
}

/// Neighbourhood growth for the first ensemble.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodGrowth {
    /// `A_i`: accumulated neighbourhoods.
    pub accumulated: Vec<VertexSet>,
    /// `N_i`: `A_i` minus the ensemble, truncated to `⌈k/3⌉` lowest ids.
    pub filtered: Vec<VertexSet>,
    /// Number of successful vertex additions per branch.
    pub successful: Vec<usize>,
    /// `|A_i| ≥ k/2`.
    pub large: Vec<bool>,
    /// `|A_i ∩ 𝒳| ≤ 2γ|A_i|`.
    pub sparse_overlap: Vec<bool>,
    /// `|N_i| ≥ k/3`; the only flag treated as a failure.
    pub ok: Vec<bool>,
    /// Number of second-ensemble sets met by `N_i`.
    pub hits: Vec<usize>,
}

impl NeighborhoodGrowth {
    pub fn failed(&self) -> usize {
        self.ok.iter().filter(|&&o| !o).count()
    }

    pub fn min_hits(&self) -> usize {
        self.hits.iter().copied().min().unwrap_or(0)
    }
}

/// Grows `A_i` for every set `X_i` of `first`, in sampling order, with the
/// low-degree filter `deg < γ|R|/α`, then measures how many sets of
/// `second` each `N_i` meets.
pub fn grow_filtered_neighborhoods(
    g: &Graph,
    first: &Ensemble,
    second: &Ensemble,
    gamma: f64,
    alpha: AlphaSurrogate,
) -> NeighborhoodGrowth {
    let n = g.n();
    let k = first.k();
    let mut in_x = vec![false; n];
    for v in first.vertices() {
        in_x[v as usize] = true;
    }
    // Earlier sets of the first ensemble plus the prefix of the current one.
    let mut taken = vec![false; n];
    let mut taken_count = 0usize;
    let mut in_a = vec![false; n];
    let mut out = NeighborhoodGrowth {
        accumulated: Vec::with_capacity(k),
        filtered: Vec::with_capacity(k),
        successful: Vec::with_capacity(k),
        large: Vec::with_capacity(k),
        sparse_overlap: Vec::with_capacity(k),
        ok: Vec::with_capacity(k),
        hits: Vec::with_capacity(k),
    };
    for (i, xi) in first.sets.iter().enumerate() {
        let mut a: Vec<Vertex> = Vec::new();
        // |taken ∩ A|; A never meets the earlier sets, only later picks of X_i.
        let mut overlap = 0usize;
        let mut successful = 0;
        let alpha_round = match alpha {
            AlphaSurrogate::Global(bound) => bound.max(1) as f64,
            AlphaSurrogate::GreedyPerRound => {
                let ambient: Vec<Vertex> = g.vertices().filter(|&v| !taken[v as usize]).collect();
                greedy_independence_lower_bound(&g.induced(&ambient), i as u64).max(1) as f64
            }
        };
        for &v in xi {
            if 2 * a.len() >= k {
                successful += 1;
            } else {
                let r_size = n - (taken_count + a.len() - overlap);
                let in_r = |w: Vertex| !taken[w as usize] && !in_a[w as usize];
                if in_r(v) {
                    let fresh: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&w| in_r(w)).collect();
                    if fresh.len() as f64 >= gamma * r_size as f64 / alpha_round {
                        successful += 1;
                        for w in fresh {
                            in_a[w as usize] = true;
                            a.push(w);
                        }
                    }
                }
            }
            if !taken[v as usize] {
                taken[v as usize] = true;
                taken_count += 1;
                if in_a[v as usize] {
                    overlap += 1;
                }
            }
        }
        let a_set = VertexSet::from_vec(a);
        for w in a_set.iter() {
            in_a[w as usize] = false;
        }
        let in_ensemble = a_set.iter().filter(|&w| in_x[w as usize]).count();
        let quota = k.div_ceil(3);
        let n_set: VertexSet = a_set.iter().filter(|&w| !in_x[w as usize]).take(quota).collect();
        out.large.push(2 * a_set.len() >= k);
        out.sparse_overlap.push(in_ensemble as f64 <= 2.0 * gamma * a_set.len() as f64);
        out.ok.push(3 * n_set.len() >= k);
        out.successful.push(successful);
        out.accumulated.push(a_set);
        out.filtered.push(n_set);
    }
    let mut owner = vec![u32::MAX; n];
    for (j, uj) in second.sets.iter().enumerate() {
        for &u in uj {
            owner[u as usize] = j as u32;
        }
    }
    let mut met = vec![usize::MAX; second.k()];
    for (i, ni) in out.filtered.iter().enumerate() {
        let mut count = 0;
        for w in ni.iter() {
            let j = owner[w as usize];
            if j != u32::MAX && met[j as usize] != i {
                met[j as usize] = i;
                count += 1;
            }
        }
        out.hits.push(count);
    }
    out
}

/// Quotient of `host` over the sets of `first` followed by those of
/// `second`, with a certificate binding it into `host` as a minor.
pub fn build_auxiliary_minor(
    host: &Graph,
    first: &Ensemble,
    second: &Ensemble,
) -> Result<(Graph, MinorCertificate), Error> {
    let sets: Vec<VertexSet> = first
        .sets
        .iter()
        .chain(&second.sets)
        .map(|s| VertexSet::from_vec(s.clone()))
        .collect();
    for (i, s) in sets.iter().enumerate() {
        if !induces_connected(host, s.as_slice()) {
            return Err(Error::DisconnectedBranchSet(i));
        }
    }
    let (h, witness_edges) = contract_sets(host, &sets)?;
    Ok((h, MinorCertificate { branch_sets: sets, witness_edges }))
}

/// Contraction heuristic for a large complete minor.
///
/// Repeatedly contracts a minimum-degree vertex of the current quotient
/// into the neighbour it shares the fewest neighbours with, ties broken at
/// random, recording the best greedy clique of the quotient on the way.
/// Four restarts; the largest certified clique wins.
pub fn dense_minor_extract(h: &Graph, seed: Seed) -> MinorCertificate {
    let n = h.n();
    if n == 0 {
        return MinorCertificate::default();
    }
    let mut best: Vec<Vec<Vertex>> = Vec::new();
    for attempt in 0..4 {
        let found = Quotient::new(h).run(&mut seed.fork(attempt).rng());
        if found.len() > best.len() {
            best = found;
        }
    }
    let blocks: Vec<VertexSet> = best.into_iter().map(VertexSet::from_vec).collect();
    let (_, witness_edges) = contract_sets(h, &blocks).expect("blocks are disjoint");
    MinorCertificate { branch_sets: blocks, witness_edges }
}

struct Quotient {
    words: usize,
    adj: Vec<u64>,
    deg: Vec<usize>,
    alive: Vec<usize>,
    blocks: Vec<Vec<Vertex>>,
}

impl Quotient {
    fn new(h: &Graph) -> Self {
        let n = h.n();
        let words = n.div_ceil(64);
        let mut adj = vec![0u64; n * words];
        for v in h.vertices() {
            for &w in h.neighbors(v) {
                adj[v as usize * words + w as usize / 64] |= 1 << (w % 64);
            }
        }
        Quotient {
            words,
            adj,
            deg: h.vertices().map(|v| h.degree(v)).collect(),
            alive: (0..n).collect(),
            blocks: h.vertices().map(|v| vec![v]).collect(),
        }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    fn has(&self, v: usize, w: usize) -> bool {
        self.adj[v * self.words + w / 64] >> (w % 64) & 1 == 1
    }

    fn common(&self, v: usize, w: usize) -> usize {
        self.row(v).iter().zip(self.row(w)).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    fn run(mut self, rng: &mut impl Rng) -> Vec<Vec<Vertex>> {
        // Snapshots: later contractions change the blocks.
        let mut best: Vec<Vec<Vertex>> = Vec::new();
        let mut step = 0usize;
        let mut ties = Vec::new();
        while !self.alive.is_empty() {
            let m = self.alive.len();
            let min = self.alive.iter().map(|&v| self.deg[v]).min().unwrap();
            if min + 1 == m {
                if m > best.len() {
                    best = self.snapshot(&self.alive);
                }
                break;
            }
            if m <= 512 || step % 16 == 0 {
                let clique = self.greedy_clique();
                if clique.len() > best.len() {
                    best = self.snapshot(&clique);
                }
            }
            step += 1;
            ties.clear();
            ties.extend(self.alive.iter().copied().filter(|&v| self.deg[v] == min));
            let u = *ties.choose(rng).unwrap();
            if min == 0 {
                self.alive.retain(|&v| v != u);
                continue;
            }
            ties.clear();
            let mut fewest = usize::MAX;
            for &w in &self.alive {
                if w == u || !self.has(u, w) {
                    continue;
                }
                let c = self.common(u, w);
                if c < fewest {
                    fewest = c;
                    ties.clear();
                }
                if c == fewest {
                    ties.push(w);
                }
            }
            let w = *ties.choose(rng).unwrap();
            self.contract(u, w);
        }
        best
    }

    fn snapshot(&self, vertices: &[usize]) -> Vec<Vec<Vertex>> {
        vertices.iter().map(|&v| self.blocks[v].clone()).collect()
    }

    /// Merges `u` into its neighbour `w`.
    fn contract(&mut self, u: usize, w: usize) {
        let words = self.words;
        let neighbors: Vec<usize> = self.alive.iter().copied().filter(|&x| self.has(u, x)).collect();
        for x in neighbors {
            self.adj[x * words + u / 64] &= !(1 << (u % 64));
            if x == w {
                continue;
            }
            if self.has(x, w) {
                self.deg[x] -= 1;
            } else {
                self.adj[x * words + w / 64] |= 1 << (w % 64);
                self.adj[w * words + x / 64] |= 1 << (x % 64);
            }
        }
        self.adj[w * words + u / 64] &= !(1 << (u % 64));
        self.deg[w] = self.row(w).iter().map(|r| r.count_ones() as usize).sum();
        self.alive.retain(|&v| v != u);
        let moved = core::mem::take(&mut self.blocks[u]);
        self.blocks[w].extend(moved);
    }

    fn greedy_clique(&self) -> Vec<usize> {
        let mut order = self.alive.clone();
        order.sort_unstable_by_key(|&v| (core::cmp::Reverse(self.deg[v]), v));
        let mut cand = vec![0u64; self.words];
        for &v in &self.alive {
            cand[v / 64] |= 1 << (v % 64);
        }
        let mut clique = Vec::new();
        for v in order {
            if cand[v / 64] >> (v % 64) & 1 == 1 {
                clique.push(v);
                for (c, r) in cand.iter_mut().zip(self.row(v)) {
                    *c &= r;
                }
            }
        }
        clique
    }
}

/// How `ℓ` (and with it `k`) is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum EllRule {
    /// `ℓ` and `k` from the ensemble parameter formulas.
    Paper,
    /// `ℓ = max(⌈√α⌉, ⌈ln n⌉)`, `k = ⌊|P| / (2(ℓ+1))⌋`.
    Desk,
    /// Fixed `ℓ`, `k` from the path length.
    Fixed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinorOptions {
    /// Trusted upper bound on α of the seed graph.
    pub alpha_bound: u64,
    pub ell_rule: EllRule,
    pub surrogate: Option<AlphaSurrogate>,
    /// Overrides the default `ζ = min(1/12, ε²/48) / 2`.
    pub zeta: Option<f64>,
    pub restarts: usize,
}

impl MinorOptions {
    pub fn new(alpha_bound: u64) -> Self {
        MinorOptions {
            alpha_bound,
            ell_rule: EllRule::Desk,
            surrogate: None,
            zeta: None,
            restarts: LONG_PATH_RESTARTS,
        }
    }
}

pub fn default_zeta(epsilon: f64) -> f64 {
    (1.0 / 12.0f64).min(epsilon * epsilon / 48.0) / 2.0
}

/// Why a pipeline fell short of its full construction.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "stage", rename_all = "kebab-case"))]
pub enum Shortfall {
    /// No room for even two segments.
    PathTooShort { needed: usize, available: usize },
    /// Some branches ended with `|N_i| < k/3`.
    BranchGrowth { failed: usize, of: usize },
    /// The peeling stage could not extract all paths.
    Peeling { round: usize, removed: usize },
    /// The pipeline produced nothing; the certificate is a greedy clique.
    Fallback,
}

/// Stage measurements of a minor pipeline run.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MinorMetrics {
    pub n: usize,
    pub p: f64,
    pub zeta: f64,
    pub alpha_bound: u64,
    pub paper_ell: usize,
    pub paper_k: usize,
    pub ell: usize,
    pub k: usize,
    pub path_length: usize,
    pub host_edges: usize,
    pub h_edges: usize,
    pub branches_ok: usize,
    pub branches_large: usize,
    pub branches_sparse_overlap: usize,
    pub min_hits: usize,
    pub order: usize,
    /// Sparse pipeline only: number of peeled paths and quotient edges.
    pub peeled_paths: usize,
    pub gamma_g_edges: usize,
    pub gamma_r_edges: usize,
}

/// Certificate together with the graph it certifies.
#[derive(Clone, Debug)]
pub struct MinorOutcome {
    pub certificate: MinorCertificate,
    pub host: Graph,
    pub metrics: MinorMetrics,
    pub shortfall: Vec<Shortfall>,
}

/// Dense pipeline on `g ∪ G(n, (1+ε)/n)`.
pub fn find_minor_perturbed(g: &Graph, epsilon: f64, seed: Seed, opts: &MinorOptions) -> Result<MinorOutcome, Error> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter("epsilon must be positive"));
    }
    let p = rules::sparse_threshold(g.n(), epsilon).min(1.0);
    let r = sample_gnp(g.n(), p, seed.fork(1));
    let mut out = find_minor_with(g, &r, epsilon, seed, opts)?;
    out.metrics.p = p;
    Ok(out)
}

/// Dense pipeline with the random graph `r` supplied by the caller.
pub fn find_minor_with(
    g: &Graph,
    r: &Graph,
    epsilon: f64,
    seed: Seed,
    opts: &MinorOptions,
) -> Result<MinorOutcome, Error> {
    let host = g.union(r)?;
    let (certificate, metrics, shortfall) = pipeline(g, r, &host, epsilon, seed, opts)?;
    Ok(MinorOutcome { certificate, host, metrics, shortfall })
}

fn pipeline(
    g: &Graph,
    r: &Graph,
    host: &Graph,
    epsilon: f64,
    seed: Seed,
    opts: &MinorOptions,
) -> Result<(MinorCertificate, MinorMetrics, Vec<Shortfall>), Error> {
    let n = g.n();
    let zeta = opts.zeta.unwrap_or_else(|| default_zeta(epsilon));
    let mut m = MinorMetrics { n, zeta, alpha_bound: opts.alpha_bound, host_edges: host.edge_count(), ..Default::default() };
    let mut shortfall = Vec::new();
    if n >= 2 {
        let params = ensemble_params(n, opts.alpha_bound.max(1), zeta)?;
        m.paper_ell = params.ell;
        m.paper_k = params.k;
    }
    let path = long_path_with(r, seed.fork(3), opts.restarts);
    m.path_length = path.len().saturating_sub(1);
    let ell = match opts.ell_rule {
        EllRule::Paper => m.paper_ell,
        EllRule::Desk => {
            let root = libm::ceil(libm::sqrt(opts.alpha_bound.max(1) as f64)) as usize;
            let log = libm::ceil(libm::log(n.max(2) as f64)) as usize;
            root.max(log)
        }
        EllRule::Fixed(ell) => ell,
    };
    let k = match opts.ell_rule {
        EllRule::Paper => m.paper_k,
        _ => path.len() / (2 * (ell + 1)),
    };
    m.ell = ell;
    m.k = k;
    let mut certificate = MinorCertificate::default();
    match carve_subpaths(&path, 2 * k, ell) {
        Err(Error::PathTooShort { needed, available }) => {
            shortfall.push(Shortfall::PathTooShort { needed, available })
        }
        Err(e) => return Err(e),
        Ok(_) if k == 0 => shortfall.push(Shortfall::PathTooShort { needed: 2 * (ell + 1), available: path.len() }),
        Ok(segments) => {
            let mut segments = segments.into_iter();
            let first = Ensemble { sets: segments.by_ref().take(k).collect(), ambient_n: n };
            let second = Ensemble { sets: segments.collect(), ambient_n: n };
            let surrogate = opts.surrogate.unwrap_or(AlphaSurrogate::Global(opts.alpha_bound));
            let growth = grow_filtered_neighborhoods(g, &first, &second, zeta, surrogate);
            m.branches_ok = k - growth.failed();
            m.branches_large = growth.large.iter().filter(|&&b| b).count();
            m.branches_sparse_overlap = growth.sparse_overlap.iter().filter(|&&b| b).count();
            m.min_hits = growth.min_hits();
            if growth.failed() > 0 {
                shortfall.push(Shortfall::BranchGrowth { failed: growth.failed(), of: k });
            }
            let (h, model) = build_auxiliary_minor(host, &first, &second)?;
            m.h_edges = h.edge_count();
            let inner = dense_minor_extract(&h, seed.fork(4));
            certificate = model.compose(&inner);
        }
    }
    if certificate.order() <= 1 || verify_minor_certificate(host, &certificate).is_err() {
        debug_assert!(
            certificate.order() <= 1,
            "pipeline certificate rejected: {:?}",
            verify_minor_certificate(host, &certificate)
        );
        let fallback = greedy_clique(host);
        if fallback.len() > certificate.order() {
            certificate = MinorCertificate::from_clique(host, &fallback);
            shortfall.push(Shortfall::Fallback);
        }
    }
    m.order = certificate.order();
    Ok((certificate, m, shortfall))
}

/// Clique grown greedily from a maximum-degree vertex.
fn greedy_clique(g: &Graph) -> Vec<Vertex> {
    let Some(v) = g.vertices().max_by_key(|&v| (g.degree(v), core::cmp::Reverse(v))) else {
        return Vec::new();
    };
    let mut cand: Vec<Vertex> = g.neighbors(v).to_vec();
    cand.sort_unstable_by_key(|&w| (core::cmp::Reverse(g.degree(w)), w));
    let mut clique = vec![v];
    for w in cand {
        if clique.iter().all(|&c| g.has_edge(c, w)) {
            clique.push(w);
        }
    }
    clique
}

/// Disjoint paths extracted by repeated core peeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelState {
    /// Each path has exactly `k` vertices.
    pub paths: Vec<Vec<Vertex>>,
    /// Vertices not on any path.
    pub remaining: usize,
    /// `|V(G'_i)|` before path `i` was taken.
    pub core_sizes: Vec<usize>,
    /// Whether every core had minimum degree at least `k`.
    pub cores_min_degree_ok: bool,
}

/// `⌊n/(2k)⌋` disjoint paths on `k` vertices, each walked greedily inside
/// the subgraph left after repeatedly discarding vertices of degree below
/// `k`. Fails with `CoreEmpty` when a core vanishes.
///
/// `alpha_bound` is not used by the construction; when `2k·alpha_bound < n`
/// an empty core contradicts it.
pub fn peel_disjoint_paths(g: &Graph, k: usize, alpha_bound: u64) -> Result<PeelState, Error> {
    let _ = alpha_bound;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive"));
    }
    let n = g.n();
    let rounds = n / (2 * k);
    let all: Vec<Vertex> = g.vertices().collect();
    let (mut core, _) = Core::new(g, &all, k);
    let mut used = vec![false; n];
    let mut state = PeelState { paths: Vec::with_capacity(rounds), remaining: n, core_sizes: Vec::new(), cores_min_degree_ok: true };
    let mut cursor = 0usize;
    let mut on_path = vec![false; n];
    for round in 1..=rounds {
        if core.is_empty() {
            return Err(Error::CoreEmpty { round, removed: state.remaining });
        }
        state.core_sizes.push(core.len());
        while !core.contains(cursor as Vertex) {
            cursor += 1;
        }
        // Every core vertex has ≥ k live neighbours, so a walk of fewer
        // than k vertices can always be extended.
        let mut path = vec![cursor as Vertex];
        on_path[cursor] = true;
        while path.len() < k {
            let v = *path.last().unwrap();
            if core.degree(v) < k {
                state.cores_min_degree_ok = false;
            }
            let next = g.neighbors(v).iter().copied().find(|&w| core.contains(w) && !on_path[w as usize]);
            match next {
                Some(w) => {
                    on_path[w as usize] = true;
                    path.push(w);
                }
                None => {
                    state.cores_min_degree_ok = false;
                    break;
                }
            }
        }
        if path.len() < k {
            return Err(Error::CoreEmpty { round, removed: state.remaining - core.len() });
        }
        for &v in &path {
            used[v as usize] = true;
        }
        core.remove(g, &path);
        state.remaining -= k;
        state.paths.push(path);
    }
    Ok(state)
}

/// Sparse pipeline on `g ∪ G(n, 8/(nk))`.
pub fn find_minor_sparse(g: &Graph, k: usize, seed: Seed, opts: &MinorOptions) -> Result<MinorOutcome, Error> {
    let n = g.n();
    if k == 0 || 64 * k > n {
        return Err(Error::InvalidParameter("sparse pipeline needs 1 ≤ k ≤ n/64"));
    }
    let p = rules::path_peeling(n, k).min(1.0);
    let r = sample_gnp(n, p, seed.fork(1));
    let host = g.union(&r)?;
    let mut metrics = MinorMetrics { n, p, alpha_bound: opts.alpha_bound, host_edges: host.edge_count(), ..Default::default() };
    let peel = match peel_disjoint_paths(g, k, opts.alpha_bound) {
        Ok(peel) => peel,
        Err(Error::CoreEmpty { round, removed }) => {
            let clique = greedy_clique(&host);
            metrics.order = clique.len();
            return Ok(MinorOutcome {
                certificate: MinorCertificate::from_clique(&host, &clique),
                host,
                metrics,
                shortfall: vec![Shortfall::Peeling { round, removed }, Shortfall::Fallback],
            });
        }
        Err(e) => return Err(e),
    };
    let blocks: Vec<VertexSet> = peel.paths.iter().map(|p| VertexSet::from_vec(p.clone())).collect();
    let (gamma_g, _) = contract_sets(g, &blocks)?;
    let (gamma_r, _) = contract_sets(&r, &blocks)?;
    let (_, witness_edges) = contract_sets(&host, &blocks)?;
    let outer = MinorCertificate { branch_sets: blocks, witness_edges };
    let inner_opts = MinorOptions { alpha_bound: opts.alpha_bound.min(peel.paths.len() as u64), ..*opts };
    let inner_host = gamma_g.union(&gamma_r)?;
    let (inner, inner_metrics, mut shortfall) = pipeline(&gamma_g, &gamma_r, &inner_host, 1.0, seed, &inner_opts)?;
    let mut certificate = outer.compose(&inner);
    if verify_minor_certificate(&host, &certificate).is_err() {
        debug_assert!(false, "composed sparse certificate failed verification");
        certificate = MinorCertificate::from_clique(&host, &greedy_clique(&host));
        shortfall.push(Shortfall::Fallback);
    }
    metrics = MinorMetrics {
        n,
        p,
        alpha_bound: opts.alpha_bound,
        host_edges: host.edge_count(),
        peeled_paths: peel.paths.len(),
        gamma_g_edges: gamma_g.edge_count(),
        gamma_r_edges: gamma_r.edge_count(),
        order: certificate.order(),
        ..inner_metrics
    };
    Ok(MinorOutcome { certificate, host, metrics, shortfall })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_minor_model;
    use crate::families;
    use crate::oracles::exact_hadwiger_capped;

    #[test]
    fn long_path_on_cycle_and_edgeless() {
        let c = families::cycle(40);
        let p = long_path(&c, Seed::new(1));
        assert_eq!(p.len(), 40);
        for w in p.windows(2) {
            assert!(c.has_edge(w[0], w[1]));
        }
        assert_eq!(long_path(&Graph::empty(5), Seed::new(1)).len(), 1);
        assert!(long_path(&Graph::empty(0), Seed::new(1)).is_empty());
    }

    #[test]
    fn carving() {
        let path: Vec<Vertex> = (0..12).collect();
        let segs = carve_subpaths(&path, 2, 5).unwrap();
        assert_eq!(segs, vec![(0..6).collect::<Vec<_>>(), (6..12).collect()]);
        assert_eq!(carve_subpaths(&path, 3, 5), Err(Error::PathTooShort { needed: 18, available: 12 }));
    }

    fn ensembles(sets: &[&[Vertex]], split: usize, n: usize) -> (Ensemble, Ensemble) {
        let all: Vec<Vec<Vertex>> = sets.iter().map(|s| s.to_vec()).collect();
        (
            Ensemble { sets: all[..split].to_vec(), ambient_n: n },
            Ensemble { sets: all[split..].to_vec(), ambient_n: n },
        )
    }

    #[test]
    fn growth_on_complete_graph() {
        let n = 60;
        let g = Graph::complete(n);
        let (first, second) = ensembles(&[&[0, 1], &[2, 3], &[4, 5], &[6, 7], &[8, 9], &[10, 11]], 3, n);
        let growth = grow_filtered_neighborhoods(&g, &first, &second, 0.05, AlphaSurrogate::Global(1));
        for i in 0..3 {
            // The first pick already takes every other remaining vertex.
            assert_eq!(growth.successful[i], 2);
            assert!(growth.ok[i]);
            assert_eq!(growth.filtered[i].len(), 1);
            assert!(growth.filtered[i].iter().all(|w| w >= 6));
        }
        assert_eq!(growth.accumulated[0].len(), n - 1);
    }

    #[test]
    fn growth_on_edgeless_graph() {
        let g = Graph::empty(20);
        let (first, second) = ensembles(&[&[0, 1], &[2, 3], &[4, 5], &[6, 7]], 2, 20);
        let growth = grow_filtered_neighborhoods(&g, &first, &second, 0.05, AlphaSurrogate::Global(20));
        assert!(growth.accumulated.iter().all(VertexSet::is_empty));
        assert_eq!(growth.failed(), 2);
    }

    #[test]
    fn auxiliary_minor_examples() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let (first, second) = ensembles(&[&[0], &[1]], 1, 2);
        let (h, cert) = build_auxiliary_minor(&g, &first, &second).unwrap();
        assert_eq!(h, Graph::complete(2));
        assert_eq!(verify_minor_certificate(&g, &cert), Ok(()));

        let pete = families::petersen();
        let (first, second) = ensembles(&[&[0, 5], &[1, 6], &[2, 7], &[3, 8], &[4, 9]], 2, 10);
        let (h, cert) = build_auxiliary_minor(&pete, &first, &second).unwrap();
        assert_eq!(h, Graph::complete(5));
        assert_eq!(verify_minor_model(&pete, &cert, &h), Ok(()));

        let (first, second) = ensembles(&[&[0, 2], &[1]], 1, 10);
        assert_eq!(build_auxiliary_minor(&pete, &first, &second), Err(Error::DisconnectedBranchSet(0)));
    }

    #[test]
    fn dense_extract_small_cases() {
        let k = Graph::complete(7);
        let cert = dense_minor_extract(&k, Seed::new(0));
        assert_eq!(cert.order(), 7);
        assert_eq!(verify_minor_certificate(&k, &cert), Ok(()));
        for n in 3..12 {
            let c = families::cycle(n);
            let cert = dense_minor_extract(&c, Seed::new(n as u64));
            assert_eq!(cert.order(), 3);
            assert_eq!(verify_minor_certificate(&c, &cert), Ok(()));
        }
        let pete = families::petersen();
        let cert = dense_minor_extract(&pete, Seed::new(2));
        assert_eq!(verify_minor_certificate(&pete, &cert), Ok(()));
        assert!(cert.order() <= exact_hadwiger_capped(&pete, 10).unwrap());
    }

    #[test]
    fn perturbed_complete_graph() {
        let g = Graph::complete(10);
        let out = find_minor_perturbed(&g, 0.5, Seed::new(3), &MinorOptions::new(1)).unwrap();
        assert!(out.certificate.order() >= 3);
        assert_eq!(verify_minor_certificate(&out.host, &out.certificate), Ok(()));
    }

    #[test]
    fn perturbed_cliques_certify() {
        let g = families::disjoint_cliques(2040, 50).unwrap();
        for s in 0..3 {
            let out = find_minor_perturbed(&g, 0.5, Seed::new(s), &MinorOptions::new(40)).unwrap();
            assert_eq!(verify_minor_certificate(&out.host, &out.certificate), Ok(()));
            let r = out.certificate.order();
            assert!(r * (r - 1) / 2 <= out.host.edge_count());
            assert!(out.metrics.k > 0, "{:?}", out.metrics);
        }
    }

    #[test]
    fn peel_cliques() {
        let g = families::disjoint_cliques(60, 5).unwrap();
        let peel = peel_disjoint_paths(&g, 5, 10).unwrap();
        assert_eq!(peel.paths.len(), 6);
        let mut seen = [false; 60];
        for p in &peel.paths {
            assert_eq!(p.len(), 5);
            for w in p.windows(2) {
                assert!(g.has_edge(w[0], w[1]));
            }
            for &v in p {
                assert!(!core::mem::replace(&mut seen[v as usize], true));
            }
        }
        assert!(peel.cores_min_degree_ok);
        assert_eq!(peel_disjoint_paths(&Graph::empty(10), 2, 10), Err(Error::CoreEmpty { round: 1, removed: 10 }));
    }

    #[test]
    fn sparse_pipeline_certifies() {
        let g = families::disjoint_cliques(2000, 10).unwrap();
        let out = find_minor_sparse(&g, 10, Seed::new(5), &MinorOptions::new(200)).unwrap();
        assert_eq!(verify_minor_certificate(&out.host, &out.certificate), Ok(()));
        assert_eq!(out.metrics.peeled_paths, 100);
    }
}
