//! Vertex connectivity and diameter of perturbed graphs: dense-part
//! decompositions, the A/B partitions they induce, cross matchings,
//! radius-2 partitions and the block-contraction diameter bound.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::connectivity::{vertex_connectivity_at_least, Connectivity};
use crate::diameter::exact_diameter;
use crate::error::Error;
use crate::families::disjoint_cliques;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::peeling::{degeneracy_order_within, Degeneracy};
use crate::random::{sample_gnp, Seed};
use crate::traversal::{components, Distance};

/// Smallest integer `≥ s/16`: the connectivity every part must certify.
pub fn part_connectivity(s: usize) -> usize {
    s.div_ceil(16)
}

/// Smallest integer `≥ s/4`: the residual must have no subgraph of this
/// minimum degree.
pub fn residual_threshold(s: usize) -> usize {
    s.div_ceil(4)
}

/// Disjoint highly connected parts plus a degenerate residual.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MaderDecomposition {
    pub s: usize,
    pub parts: Vec<VertexSet>,
    /// Residual vertices in degeneracy order: each has fewer than `⌈s/4⌉`
    /// neighbours later in the order.
    pub order: Vec<Vertex>,
    /// Every `w_i` has at least `3s/4` neighbours among the parts and
    /// `w_1..w_{i-1}`. Guaranteed when `δ ≥ s`.
    pub forward_degree_ok: bool,
}

impl MaderDecomposition {
    pub fn t(&self) -> usize {
        self.parts.len()
    }

    pub fn residual(&self) -> VertexSet {
        self.order.iter().copied().collect()
    }

    /// Part index of every vertex, `None` on the residual.
    pub fn part_of(&self, n: usize) -> Vec<Option<u32>> {
        let mut owner = vec![None; n];
        for (i, p) in self.parts.iter().enumerate() {
            for v in p.iter() {
                owner[v as usize] = Some(i as u32);
            }
        }
        owner
    }

    /// Rechecks every invariant against `g`.
    pub fn verify(&self, g: &Graph) -> Result<(), Error> {
        let n = g.n();
        let kappa = part_connectivity(self.s);
        let mut seen = vec![false; n];
        for p in &self.parts {
            for v in p.iter() {
                if core::mem::replace(&mut seen[v as usize], true) {
                    return Err(Error::BlockOverlap(v));
                }
            }
            if !vertex_connectivity_at_least(&g.induced(p.as_slice()), kappa).holds() {
                return Err(Error::DecompositionFailed("part below the required connectivity"));
            }
        }
        for &w in &self.order {
            if core::mem::replace(&mut seen[w as usize], true) {
                return Err(Error::BlockOverlap(w));
            }
        }
        if seen.iter().any(|&b| !b) {
            return Err(Error::DecompositionFailed("parts and residual do not cover the graph"));
        }
        if forward_degrees(g, self) != (true, self.forward_degree_ok) {
            return Err(Error::DecompositionFailed("residual order violates the degeneracy threshold"));
        }
        Ok(())
    }
}

/// (later-degree condition, forward-degree condition) of the residual order.
fn forward_degrees(g: &Graph, d: &MaderDecomposition) -> (bool, bool) {
    let mut position = vec![usize::MAX; g.n()];
    for (i, &w) in d.order.iter().enumerate() {
        position[w as usize] = i;
    }
    let threshold = residual_threshold(d.s);
    let (mut degenerate, mut forward) = (true, true);
    for (i, &w) in d.order.iter().enumerate() {
        let later = g.neighbors(w).iter().filter(|&&x| position[x as usize] != usize::MAX && position[x as usize] > i).count();
        degenerate &= later < threshold;
        forward &= 4 * (g.degree(w) - later) >= 3 * d.s;
    }
    (degenerate, forward)
}

/// Peels `g` at `⌈s/4⌉`; every nonempty core is searched for a part of
/// connectivity `⌈s/16⌉` by splitting along small separators and re-peeling.
/// Repeats until the remainder peels away completely.
pub fn mader_decompose(g: &Graph, s: usize) -> Result<MaderDecomposition, Error> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be positive"));
    }
    let n = g.n();
    let (kappa, threshold) = (part_connectivity(s), residual_threshold(s));
    let mut taken = vec![false; n];
    let mut parts = Vec::new();
    let order = loop {
        let remaining: Vec<Vertex> = g.vertices().filter(|&v| !taken[v as usize]).collect();
        let witness = match degeneracy_order_within(g, &remaining, threshold) {
            Degeneracy::Ordering(order) => break order,
            Degeneracy::Witness(z) => z,
        };
        let mut found = false;
        for piece in split_components(g, witness.as_slice()) {
            if let Some(part) = certified_part(g, piece, kappa, threshold) {
                for v in part.iter() {
                    taken[v as usize] = true;
                }
                parts.push(part);
                found = true;
            }
        }
        if !found {
            return Err(Error::DecompositionFailed("no certified part inside a dense core"));
        }
    };
    let mut d = MaderDecomposition { s, parts, order, forward_degree_ok: false };
    let (degenerate, forward) = forward_degrees(g, &d);
    debug_assert!(degenerate);
    d.forward_degree_ok = forward;
    if g.min_degree() >= s && !forward {
        return Err(Error::DecompositionFailed("forward degree below 3s/4 despite δ ≥ s"));
    }
    d.verify(g)?;
    Ok(d)
}

/// Depth-first search over shrinking candidates for one `kappa`-connected set.
fn certified_part(g: &Graph, start: Vec<Vertex>, kappa: usize, threshold: usize) -> Option<VertexSet> {
    let mut stack = vec![start];
    while let Some(cand) = stack.pop() {
        let sub = g.induced(&cand);
        let cut = match vertex_connectivity_at_least(&sub, kappa) {
            Connectivity::KConnected => return Some(VertexSet::from_vec(cand)),
            Connectivity::TooFewVertices => continue,
            Connectivity::Separator(cut) => cut,
        };
        let cut: Vec<Vertex> = cut.iter().map(|i| cand[i as usize]).collect();
        let mut inside = vec![false; g.n()];
        for &v in &cand {
            inside[v as usize] = true;
        }
        for &v in &cut {
            inside[v as usize] = false;
        }
        let rest: Vec<Vertex> = cand.iter().copied().filter(|&v| inside[v as usize]).collect();
        let mut sides = split_components(g, &rest);
        // Smallest sides last so they are tried first.
        sides.sort_by_key(|c| core::cmp::Reverse(c.len()));
        for mut side in sides {
            side.extend_from_slice(&cut);
            if let Degeneracy::Witness(core) = degeneracy_order_within(g, &side, threshold) {
                stack.extend(split_components(g, core.as_slice()));
            }
        }
    }
    None
}

/// Vertex sets of the components of `g[members]`.
fn split_components(g: &Graph, members: &[Vertex]) -> Vec<Vec<Vertex>> {
    let (comp, count) = components(&g.induced(members));
    let mut out = vec![Vec::new(); count];
    for (i, &v) in members.iter().enumerate() {
        out[comp[i] as usize].push(v);
    }
    out
}

/// The two sides `A_r`, `B_r` grown from a split of the parts.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ABPartition {
    pub a: VertexSet,
    pub b: VertexSet,
    pub i1: Vec<usize>,
    pub i2: Vec<usize>,
}

/// Seeds `A` with the parts in `i1` and `B` with the rest, then sends each
/// residual vertex, in order, to `A` iff it has at least `3s/8` neighbours
/// already in `A`.
pub fn ab_partition(g: &Graph, d: &MaderDecomposition, i1: &[usize]) -> Result<ABPartition, Error> {
    let t = d.t();
    let mut in_i1 = vec![false; t];
    for &i in i1 {
        if i >= t {
            return Err(Error::InvalidParameter("part index out of range"));
        }
        in_i1[i] = true;
    }
    let count = in_i1.iter().filter(|&&b| b).count();
    if count == 0 || count == t {
        return Err(Error::TrivialPartition);
    }
    let mut sides = Sides::new(g, d);
    sides.assign(g, d, &in_i1);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for v in g.vertices() {
        if sides.in_a(v) {
            a.push(v);
        } else {
            b.push(v);
        }
    }
    Ok(ABPartition {
        a: VertexSet::from_vec(a),
        b: VertexSet::from_vec(b),
        i1: (0..t).filter(|&i| in_i1[i]).collect(),
        i2: (0..t).filter(|&i| !in_i1[i]).collect(),
    })
}

/// Reusable side assignment; only the residual is recomputed per split.
struct Sides {
    part_of: Vec<Option<u32>>,
    part_in_a: Vec<bool>,
    residual_in_a: Vec<bool>,
}

impl Sides {
    fn new(g: &Graph, d: &MaderDecomposition) -> Self {
        Sides { part_of: d.part_of(g.n()), part_in_a: vec![false; d.t()], residual_in_a: vec![false; g.n()] }
    }

    fn in_a(&self, v: Vertex) -> bool {
        match self.part_of[v as usize] {
            Some(i) => self.part_in_a[i as usize],
            None => self.residual_in_a[v as usize],
        }
    }

    fn assign(&mut self, g: &Graph, d: &MaderDecomposition, in_i1: &[bool]) {
        self.part_in_a.copy_from_slice(in_i1);
        for &w in &d.order {
            self.residual_in_a[w as usize] = false;
        }
        for &w in &d.order {
            let to_a = g.neighbors(w).iter().filter(|&&x| self.in_a(x)).count();
            self.residual_in_a[w as usize] = 8 * to_a >= 3 * d.s;
        }
    }
}

/// Which splits of the parts [`check_matching_property`] examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PartitionSample {
    /// Enumerate all `2^{t-1} - 1` splits when `t` is at most this.
    pub exhaustive_up_to: usize,
    /// Number of uniformly random splits otherwise.
    pub samples: usize,
    pub seed: Seed,
    /// Stop growing a matching once it reaches this size; `None` computes
    /// maximum matchings outright.
    pub cap: Option<usize>,
}

impl PartitionSample {
    pub fn new(seed: Seed) -> Self {
        PartitionSample { exhaustive_up_to: 20, samples: 10_000, seed, cap: None }
    }
}

/// Cross-matching sizes over the examined splits.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MatchingReport {
    pub k: usize,
    pub t: usize,
    pub exhaustive: bool,
    /// Matching size per split; values equal to the cap mean "at least".
    pub sizes: Vec<usize>,
    pub min_size: Option<usize>,
    /// `i1` of a split attaining `min_size`.
    pub worst_split: Vec<usize>,
    /// Every examined split admits a cross matching of size `k`.
    pub pass: bool,
}

/// For each examined split `I_1 ∪ I_2`, the largest matching of `r` with one
/// end in `A_r` and the other in `B_r`.
pub fn check_matching_property(g: &Graph, r: &Graph, d: &MaderDecomposition, k: usize, spec: &PartitionSample) -> MatchingReport {
    let t = d.t();
    let mut report = MatchingReport { k, t, exhaustive: true, sizes: Vec::new(), min_size: None, worst_split: Vec::new(), pass: true };
    if t < 2 {
        return report;
    }
    let mut sides = Sides::new(g, d);
    let mut matcher = CrossMatcher::new(r.n());
    let mut in_i1 = vec![false; t];
    let mut examine = |in_i1: &[bool], report: &mut MatchingReport| {
        sides.assign(g, d, in_i1);
        let size = matcher.run(r, |v| sides.in_a(v), spec.cap);
        if report.min_size.is_none_or(|m| size < m) {
            report.min_size = Some(size);
            report.worst_split = (0..t).filter(|&i| in_i1[i]).collect();
        }
        report.pass &= size >= k;
        report.sizes.push(size);
    };
    if t - 1 <= spec.exhaustive_up_to.min(63) && t <= spec.exhaustive_up_to {
        // Part t-1 always sits in I_2, so each unordered split appears once.
        for mask in 1u64..(1u64 << (t - 1)) {
            for (i, slot) in in_i1.iter_mut().enumerate() {
                *slot = i < t - 1 && mask >> i & 1 == 1;
            }
            examine(&in_i1, &mut report);
        }
    } else {
        report.exhaustive = false;
        let mut rng = spec.seed.rng();
        for _ in 0..spec.samples {
            loop {
                for slot in in_i1.iter_mut() {
                    *slot = rng.random();
                }
                let ones = in_i1.iter().filter(|&&b| b).count();
                if ones != 0 && ones != t {
                    break;
                }
            }
            examine(&in_i1, &mut report);
        }
    }
    report
}

/// Greedy matching on the cross edges followed by Kuhn augmentation.
struct CrossMatcher {
    mate: Vec<Vertex>,
    stamp: Vec<u32>,
    round: u32,
    touched: Vec<Vertex>,
}

const UNMATCHED: Vertex = Vertex::MAX;

impl CrossMatcher {
    fn new(n: usize) -> Self {
        CrossMatcher { mate: vec![UNMATCHED; n], stamp: vec![0; n], round: 0, touched: Vec::new() }
    }

    fn run(&mut self, r: &Graph, in_a: impl Fn(Vertex) -> bool, cap: Option<usize>) -> usize {
        for &v in &self.touched {
            self.mate[v as usize] = UNMATCHED;
        }
        self.touched.clear();
        let cap = cap.unwrap_or(usize::MAX);
        let mut size = 0;
        'greedy: for u in r.vertices() {
            if !in_a(u) {
                continue;
            }
            for &v in r.neighbors(u) {
                if !in_a(v) && self.mate[v as usize] == UNMATCHED {
                    self.pair(u, v);
                    size += 1;
                    if size >= cap {
                        break 'greedy;
                    }
                    break;
                }
            }
        }
        if size < cap {
            for u in r.vertices() {
                if size >= cap {
                    break;
                }
                if in_a(u) && self.mate[u as usize] == UNMATCHED && r.degree(u) > 0 {
                    self.round += 1;
                    if self.augment(r, &in_a, u) {
                        size += 1;
                    }
                }
            }
        }
        size
    }

    fn pair(&mut self, u: Vertex, v: Vertex) {
        self.mate[u as usize] = v;
        self.mate[v as usize] = u;
        self.touched.push(u);
        self.touched.push(v);
    }

    /// Iterative alternating-path search from the free `A`-vertex `root`.
    fn augment(&mut self, r: &Graph, in_a: &impl Fn(Vertex) -> bool, root: Vertex) -> bool {
        // Stack of (A-vertex, next neighbour index); `via[i]` is the B-vertex
        // that led to stack entry i.
        let mut stack: Vec<(Vertex, usize)> = vec![(root, 0)];
        let mut via: Vec<Vertex> = vec![UNMATCHED];
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            let row = r.neighbors(u);
            if *next == row.len() {
                stack.pop();
                via.pop();
                continue;
            }
            let v = row[*next];
            *next += 1;
            if in_a(v) || self.stamp[v as usize] == self.round {
                continue;
            }
            self.stamp[v as usize] = self.round;
            let m = self.mate[v as usize];
            if m == UNMATCHED {
                // Flip the path: stack[i].0 takes via[i+1], ending with v.
                let mut target = v;
                for i in (0..stack.len()).rev() {
                    let a = stack[i].0;
                    self.pair(a, target);
                    target = via[i];
                }
                return true;
            }
            stack.push((m, 0));
            via.push(v);
        }
        false
    }
}

/// True when the matching property held exhaustively, the decomposition
/// meets the degree conditions for `k`, and yet a separator of size `< k`
/// was found: the two procedures contradict each other.
pub fn matching_alarm(d: &MaderDecomposition, report: &MatchingReport, verdict: &Connectivity) -> bool {
    let k = report.k;
    let applicable = report.exhaustive
        && report.pass
        && d.t() >= 1
        && d.forward_degree_ok
        && k <= part_connectivity(d.s)
        && 8 * k.saturating_sub(1) <= 3 * d.s;
    applicable && verdict.separator().is_some_and(|cut| cut.len() < k)
}

/// Outcome of one perturbed connectivity trial.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConnectivityTrial {
    pub seed: Seed,
    pub k_connected: bool,
    /// Separator of size `< k`, empty when the host is disconnected.
    pub separator: Option<VertexSet>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConnectivityReport {
    pub k: usize,
    pub p: f64,
    pub trials: Vec<ConnectivityTrial>,
    pub successes: usize,
}

impl ConnectivityReport {
    pub fn success_rate(&self) -> f64 {
        if self.trials.is_empty() {
            0.0
        } else {
            self.successes as f64 / self.trials.len() as f64
        }
    }
}

/// Whether `g ∪ G(n,p)` is `k`-connected, decided per trial.
pub fn connectivity_trial(g: &Graph, k: usize, p: f64, seed: Seed) -> ConnectivityTrial {
    let host = g.union(&sample_gnp(g.n(), p, seed)).expect("same vertex count");
    let verdict = vertex_connectivity_at_least(&host, k);
    ConnectivityTrial { seed, k_connected: verdict.holds(), separator: verdict.separator().cloned() }
}

/// Runs `trials` independent perturbations, trial `i` using `seed.fork(i)`.
/// Requires `k ≤ δ(g)/17` unless `allow_large_k`.
pub fn connectivity_experiment(
    g: &Graph,
    k: usize,
    p: f64,
    trials: usize,
    seed: Seed,
    allow_large_k: bool,
) -> Result<ConnectivityReport, Error> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter("p must lie in [0, 1]"));
    }
    if !allow_large_k && 17 * k > g.min_degree() {
        return Err(Error::MinDegreeTooLow { min_degree: g.min_degree(), required: 17 * k });
    }
    let trials: Vec<ConnectivityTrial> = (0..trials as u64).map(|i| connectivity_trial(g, k, p, seed.fork(i))).collect();
    let successes = trials.iter().filter(|t| t.k_connected).count();
    Ok(ConnectivityReport { k, p, trials, successes })
}

/// Disjoint balanced cliques of size at least `s + 1`, and the two
/// thresholds they witness.
#[derive(Clone, Debug)]
pub struct LowerBoundFamily {
    pub graph: Graph,
    pub n: usize,
    pub s: usize,
    /// Number of cliques `r = ⌊n/(s+1)⌋`.
    pub cliques: usize,
}

impl LowerBoundFamily {
    /// Any perturbation with fewer edges than this leaves `κ < k`.
    pub fn edge_obstruction(&self, k: usize) -> f64 {
        k as f64 * self.cliques as f64 / 2.0
    }

    /// `ln(n/s)/(n s)`: below a constant fraction of it some clique stays
    /// isolated.
    pub fn isolation_threshold(&self) -> f64 {
        libm::log(self.n as f64 / self.s as f64) / (self.n as f64 * self.s as f64)
    }
}

pub fn connectivity_lower_bound_family(n: usize, s: usize) -> Result<LowerBoundFamily, Error> {
    if s == 0 || s + 1 > n {
        return Err(Error::BadSpec("need 1 ≤ s and s + 1 ≤ n"));
    }
    let graph = disjoint_cliques(n, s)?;
    assert!(graph.min_degree() >= s);
    Ok(LowerBoundFamily { graph, n, s, cliques: n / (s + 1) })
}

/// Blocks of radius at most 2 around their centres.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Radius2Partition {
    pub blocks: Vec<VertexSet>,
    pub centres: Vec<Vertex>,
}

impl Radius2Partition {
    /// Checks exact cover, block sizes `≥ k+1` and radius `≤ 2` from the centre.
    pub fn verify(&self, g: &Graph, k: usize) -> bool {
        let n = g.n();
        let mut owner = vec![usize::MAX; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for v in b.iter() {
                if owner[v as usize] != usize::MAX {
                    return false;
                }
                owner[v as usize] = i;
            }
        }
        if owner.contains(&usize::MAX) || self.blocks.len() != self.centres.len() {
            return false;
        }
        self.blocks.iter().zip(&self.centres).enumerate().all(|(i, (b, &c))| {
            if b.len() < k + 1 || owner[c as usize] != i {
                return false;
            }
            let near: Vec<Vertex> = g.neighbors(c).iter().copied().filter(|&x| owner[x as usize] == i).collect();
            b.iter().all(|v| {
                v == c
                    || near.binary_search(&v).is_ok()
                    || g.neighbors(v).iter().any(|&x| near.binary_search(&x).is_ok())
            })
        })
    }
}

/// Greedy maximal family of disjoint stars with exactly `k` leaves, scanned
/// by vertex id; every leftover vertex joins the star of its first used
/// neighbour.
pub fn radius2_partition(g: &Graph, k: usize) -> Result<Radius2Partition, Error> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive"));
    }
    if g.min_degree() < k {
        return Err(Error::MinDegreeTooLow { min_degree: g.min_degree(), required: k });
    }
    let n = g.n();
    let mut owner = vec![u32::MAX; n];
    let mut blocks: Vec<Vec<Vertex>> = Vec::new();
    let mut centres = Vec::new();
    for v in g.vertices() {
        if owner[v as usize] != u32::MAX {
            continue;
        }
        let free: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&w| owner[w as usize] == u32::MAX).take(k).collect();
        if free.len() < k {
            continue;
        }
        let id = blocks.len() as u32;
        owner[v as usize] = id;
        for &w in &free {
            owner[w as usize] = id;
        }
        let mut block = vec![v];
        block.extend(free);
        blocks.push(block);
        centres.push(v);
    }
    let star_owner = owner.clone();
    for v in g.vertices() {
        if owner[v as usize] == u32::MAX {
            let &w = g
                .neighbors(v)
                .iter()
                .find(|&&w| star_owner[w as usize] != u32::MAX)
                .expect("maximal star family dominates every leftover vertex");
            owner[v as usize] = star_owner[w as usize];
            blocks[star_owner[w as usize] as usize].push(v);
        }
    }
    let out = Radius2Partition { blocks: blocks.into_iter().map(VertexSet::from_vec).collect(), centres };
    debug_assert!(out.verify(g, k));
    Ok(out)
}

/// Splits every block into `⌈|U|/2k⌉` chunks of near-equal size, each
/// between `k` and `2k` vertices when `|U| ≥ k`.
pub fn refine_blocks(blocks: &[VertexSet], k: usize) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for b in blocks {
        let members = b.as_slice();
        let m = members.len().div_ceil(2 * k).max(1);
        let (q, extra) = (members.len() / m, members.len() % m);
        let mut start = 0;
        for i in 0..m {
            let len = q + usize::from(i < extra);
            out.push(members[start..start + len].iter().copied().collect());
            start += len;
        }
    }
    out
}

/// `q = 1 - (1-p)^{k²}`: the chance that two sets of size `k` see an edge.
pub fn block_edge_probability(p: f64, k: usize) -> f64 {
    if p >= 1.0 {
        return 1.0;
    }
    let k2 = (k as f64) * (k as f64);
    -libm::expm1(k2 * libm::log1p(-p))
}

/// `ln(n/k) / ln(nq/k)`.
pub fn diameter_lower_formula(n: usize, k: usize, q: f64) -> f64 {
    libm::log(n as f64 / k as f64) / libm::log(n as f64 * q / k as f64)
}

/// `ln(n/k) / ln(nq/(2k))`.
pub fn diameter_upper_formula(n: usize, k: usize, q: f64) -> f64 {
    libm::log(n as f64 / k as f64) / libm::log(n as f64 * q / (2.0 * k as f64))
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiameterReport {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub q: f64,
    /// `p ≤ ln(n/k)/(nk)`: below the regime the bound speaks about.
    pub regime_warning: bool,
    pub blocks: usize,
    pub sub_blocks: usize,
    pub host_diameter: Distance,
    pub aux_diameter: Distance,
    pub lower_formula: f64,
    pub upper_formula: f64,
    /// `diam(G ∪ R) ≤ 5·diam(H) + 4`; `None` when `H` is disconnected.
    pub assembly_ok: Option<bool>,
}

/// Perturbs `g` with `R = G(n,p)` drawn from `seed`, measures the exact
/// diameter, and contracts radius-2 sub-blocks into the auxiliary graph
/// whose edges are the `R`-edges between sub-blocks.
pub fn diameter_upper_pipeline(g: &Graph, k: usize, p: f64, seed: Seed) -> Result<DiameterReport, Error> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter("p must lie in [0, 1]"));
    }
    let n = g.n();
    let partition = radius2_partition(g, k)?;
    let sub = refine_blocks(&partition.blocks, k);
    let mut owner = vec![0 as Vertex; n];
    for (i, b) in sub.iter().enumerate() {
        for v in b.iter() {
            owner[v as usize] = i as Vertex;
        }
    }
    let r = sample_gnp(n, p, seed);
    let aux_edges: Vec<(Vertex, Vertex)> = r
        .edges()
        .map(|(u, v)| (owner[u as usize], owner[v as usize]))
        .filter(|(a, b)| a != b)
        .collect();
    let aux = Graph::from_edge_vec(sub.len(), &aux_edges);
    let host = g.union(&r)?;
    let host_diameter = exact_diameter(&host);
    let aux_diameter = exact_diameter(&aux);
    let q = block_edge_probability(p, k);
    let assembly_ok = aux_diameter.finite().map(|h| match host_diameter {
        Distance::Finite(d) => d as u64 <= 5 * h as u64 + 4,
        Distance::Infinite => false,
    });
    Ok(DiameterReport {
        n,
        k,
        p,
        q,
        regime_warning: p * (n as f64) * (k as f64) <= libm::log(n as f64 / k as f64),
        blocks: partition.blocks.len(),
        sub_blocks: sub.len(),
        host_diameter,
        aux_diameter,
        lower_formula: diameter_lower_formula(n, k, q),
        upper_formula: diameter_upper_formula(n, k, q),
        assembly_ok,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GnpDiameterReport {
    pub n: usize,
    pub p: f64,
    /// `ln n / ln(np)`.
    pub formula: f64,
    /// `np ≤ ln n`: below the regime the formula speaks about.
    pub regime_warning: bool,
    pub diameters: Vec<Distance>,
    pub disconnected: usize,
    /// Mean over the connected samples only.
    pub mean_finite: Option<f64>,
}

/// Exact diameters of `trials` samples of `G(n,p)`, sample `i` from `seed.fork(i)`.
pub fn gnp_diameter_check(n: usize, p: f64, trials: usize, seed: Seed) -> GnpDiameterReport {
    let diameters: Vec<Distance> = (0..trials as u64).map(|i| exact_diameter(&sample_gnp(n, p, seed.fork(i)))).collect();
    let finite: Vec<u32> = diameters.iter().filter_map(|d| d.finite()).collect();
    let np = n as f64 * p;
    GnpDiameterReport {
        n,
        p,
        formula: libm::log(n as f64) / libm::log(np),
        regime_warning: np <= libm::log(n as f64),
        disconnected: diameters.len() - finite.len(),
        mean_finite: (!finite.is_empty()).then(|| finite.iter().map(|&d| d as f64).sum::<f64>() / finite.len() as f64),
        diameters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{self, clique_blocks};
    use crate::traversal::bfs_distances;

    #[test]
    fn cliques_decompose_into_themselves() {
        let g = disjoint_cliques(60, 11).unwrap();
        let d = mader_decompose(&g, 11).unwrap();
        assert!(d.order.is_empty());
        let mut parts = d.parts.clone();
        parts.sort();
        assert_eq!(parts, clique_blocks(60, 11).unwrap());
    }

    #[test]
    fn tree_is_all_residual() {
        let g = families::path(30);
        let d = mader_decompose(&g, 8).unwrap();
        assert_eq!(d.t(), 0);
        assert_eq!(d.order.len(), 30);
        assert!(!d.forward_degree_ok);
    }

    #[test]
    fn sparse_cut_splits_the_core() {
        // Two K_12 joined by a single edge: the core is connected but its
        // connectivity is 1.
        let mut edges = Vec::new();
        for off in [0u32, 12] {
            for u in 0..12 {
                for v in u + 1..12 {
                    edges.push((off + u, off + v));
                }
            }
        }
        edges.push((0, 12));
        let g = Graph::from_edges(24, edges).unwrap();
        let d = mader_decompose(&g, 40).unwrap();
        assert_eq!(d.t(), 2);
        d.verify(&g).unwrap();
    }

    fn two_cliques_and_pendant() -> (Graph, MaderDecomposition) {
        // K_8 on 0..8, K_8 on 8..16, vertex 16 adjacent to 0..6 only.
        let mut edges = Vec::new();
        for off in [0u32, 8] {
            for u in 0..8 {
                for v in u + 1..8 {
                    edges.push((off + u, off + v));
                }
            }
        }
        edges.extend((0..6).map(|u| (u, 16)));
        let g = Graph::from_edges(17, edges).unwrap();
        // Built by hand: the decomposer would absorb 16 into the first part.
        let d = MaderDecomposition {
            s: 8,
            parts: vec![(0..8).collect(), (8..16).collect()],
            order: vec![16],
            forward_degree_ok: true,
        };
        (g, d)
    }

    #[test]
    fn ab_partition_follows_the_threshold() {
        let (g, d) = two_cliques_and_pendant();
        d.verify(&g).unwrap();
        let first = 0;
        let ab = ab_partition(&g, &d, &[first]).unwrap();
        assert!(ab.a.contains(16));
        assert_eq!(ab.a.len(), 9);
        let other = ab_partition(&g, &d, &[1 - first]).unwrap();
        assert!(other.b.contains(16));
        assert_eq!(ab_partition(&g, &d, &[]), Err(Error::TrivialPartition));
        assert_eq!(ab_partition(&g, &d, &[0, 1]), Err(Error::TrivialPartition));
        assert_eq!(ab, ab_partition(&g, &d, &[first]).unwrap());
    }

    #[test]
    fn matching_extremes() {
        let g = disjoint_cliques(40, 7).unwrap();
        let d = mader_decompose(&g, 7).unwrap();
        let spec = PartitionSample::new(Seed::new(1));
        let full = check_matching_property(&g, &Graph::complete(40), &d, 1, &spec);
        assert!(full.pass && full.exhaustive);
        assert_eq!(full.sizes.len(), (1 << (d.t() - 1)) - 1);
        let none = check_matching_property(&g, &Graph::empty(40), &d, 1, &spec);
        assert_eq!(none.min_size, Some(0));
        assert!(!none.pass);
    }

    fn brute_cross_matching(r: &Graph, in_a: &[bool]) -> usize {
        let edges: Vec<(Vertex, Vertex)> = r.edges().filter(|&(u, v)| in_a[u as usize] != in_a[v as usize]).collect();
        fn go(edges: &[(Vertex, Vertex)], used: &mut Vec<bool>) -> usize {
            let Some((&(u, v), rest)) = edges.split_first() else { return 0 };
            let mut best = go(rest, used);
            if !used[u as usize] && !used[v as usize] {
                used[u as usize] = true;
                used[v as usize] = true;
                best = best.max(1 + go(rest, used));
                used[u as usize] = false;
                used[v as usize] = false;
            }
            best
        }
        go(&edges, &mut vec![false; r.n()])
    }

    #[test]
    fn kuhn_matches_brute_force() {
        for s in 0..40 {
            let r = sample_gnp(12, 0.2, Seed::new(s));
            let in_a: Vec<bool> = (0..12).map(|v| (v * 7 + s as usize) % 3 == 0).collect();
            let mut m = CrossMatcher::new(12);
            assert_eq!(m.run(&r, |v| in_a[v as usize], None), brute_cross_matching(&r, &in_a), "seed {s}");
            let capped = m.run(&r, |v| in_a[v as usize], Some(2));
            assert_eq!(capped, brute_cross_matching(&r, &in_a).min(2));
        }
    }

    #[test]
    fn connectivity_extremes() {
        let g = disjoint_cliques(200, 34).unwrap();
        let full = connectivity_experiment(&g, 2, 1.0, 3, Seed::new(0), false).unwrap();
        assert_eq!(full.successes, 3);
        let none = connectivity_experiment(&g, 2, 0.0, 3, Seed::new(0), false).unwrap();
        assert_eq!(none.successes, 0);
        assert!(none.trials.iter().all(|t| t.separator.as_ref().is_some_and(|s| s.is_empty())));
        assert!(connectivity_experiment(&g, 3, 0.5, 1, Seed::new(0), false).is_err());
    }

    #[test]
    fn lower_bound_family_shape() {
        let f = connectivity_lower_bound_family(12, 3).unwrap();
        assert_eq!(f.cliques, 3);
        assert_eq!(f.graph.edge_count(), 18);
        assert_eq!(f.edge_obstruction(2), 3.0);
    }

    #[test]
    fn star_is_one_block() {
        let g = families::star(9);
        let part = radius2_partition(&g, 1).unwrap();
        assert_eq!(part.blocks, vec![VertexSet::full(9)]);
        assert_eq!(part.centres, vec![0]);
    }

    #[test]
    fn cliques_are_blocks() {
        let g = disjoint_cliques(30, 4).unwrap();
        let part = radius2_partition(&g, 4).unwrap();
        assert_eq!(part.blocks, clique_blocks(30, 4).unwrap());
        assert!(part.verify(&g, 4));
        assert!(matches!(radius2_partition(&g, 5), Err(Error::MinDegreeTooLow { .. })));
    }

    #[test]
    fn radius_two_on_random_graph() {
        let g = families::random_regular(300, 6, Seed::new(3)).unwrap();
        let part = radius2_partition(&g, 6).unwrap();
        assert!(part.verify(&g, 6));
        for (b, &c) in part.blocks.iter().zip(&part.centres) {
            let sub = g.induced(b.as_slice());
            let local = b.as_slice().binary_search(&c).unwrap() as Vertex;
            assert!(bfs_distances(&sub, local).iter().all(|&d| d <= 2));
        }
    }

    #[test]
    fn refinement_sizes() {
        let blocks = vec![(0..7).collect::<VertexSet>(), (7..30).collect(), (30..33).collect()];
        let sub = refine_blocks(&blocks, 3);
        let sizes: Vec<usize> = sub.iter().map(|b| b.len()).collect();
        assert_eq!(sizes, vec![4, 3, 6, 6, 6, 5, 3]);
    }

    #[test]
    fn block_probability_matches_power() {
        let (p, k): (f64, usize) = (0.003, 7);
        let direct = 1.0 - (1.0 - p).powi((k * k) as i32);
        assert!((block_edge_probability(p, k) - direct).abs() < 1e-12);
        assert_eq!(block_edge_probability(1.0, 3), 1.0);
    }

    #[test]
    fn full_perturbation_has_diameter_one() {
        let g = disjoint_cliques(60, 4).unwrap();
        let rep = diameter_upper_pipeline(&g, 4, 1.0, Seed::new(0)).unwrap();
        assert_eq!(rep.host_diameter, Distance::Finite(1));
        assert_eq!(rep.assembly_ok, Some(true));
    }

    #[test]
    fn gnp_complete_and_empty() {
        let rep = gnp_diameter_check(30, 1.0, 3, Seed::new(0));
        assert!(rep.diameters.iter().all(|&d| d == Distance::Finite(1)));
        let rep = gnp_diameter_check(30, 0.0, 2, Seed::new(0));
        assert_eq!(rep.disconnected, 2);
        assert_eq!(rep.mean_finite, None);
    }
}
