//! Complete topological minors: cores of random graphs, star packings and
//! the pair-by-pair routing loop.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::certificate::{verify_subdivision_certificate, SubdivisionCertificate};
use crate::diameter::exact_diameter;
use crate::error::Error;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::oracles::max_clique_small;
use crate::peeling::Core;
use crate::random::{sample_gnp, sample_row, Seed};
use crate::traversal::{bfs_into, shortest_path_between, UNREACHABLE};

/// A peeled core and whether it meets the size and diameter targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiamCoreResult {
    pub core: VertexSet,
    pub removed: VertexSet,
    /// `|core| ≥ 0.8 n`.
    pub size_bound_met: bool,
    /// `diam(r[core]) ≤ 3 log₂ n`; false when the diameter was not examined.
    pub diameter_bound_met: bool,
    /// Best upper bound on `diam(r[core])` found, if it is finite.
    pub diameter_upper: Option<u32>,
}

/// `3 log₂ n`.
pub fn diameter_target(n: usize) -> f64 {
    3.0 * libm::log2(n.max(2) as f64)
}

/// Repeatedly removes vertices of `u` with fewer than `c_half` neighbours
/// among the survivors.
pub fn min_degree_core(r: &Graph, u: &VertexSet, c_half: usize) -> DiamCoreResult {
    let (core, removed) = Core::new(r, u.as_slice(), c_half);
    let core = core.members();
    DiamCoreResult {
        size_bound_met: 5 * core.len() >= 4 * r.n(),
        core,
        removed: VertexSet::from_vec(removed),
        diameter_bound_met: false,
        diameter_upper: None,
    }
}

/// Core of `r[u]` at degree `C/2`, plus a check of `diam(r[core]) ≤ 3 log₂ n`.
///
/// One BFS usually settles the check (`diam ≤ 2·ecc`); otherwise the exact
/// diameter of the core is computed.
pub fn diameter_core(r: &Graph, u: &VertexSet, c: usize) -> DiamCoreResult {
    let mut out = min_degree_core(r, u, c.div_ceil(2));
    let sub = r.induced(out.core.as_slice());
    out.diameter_upper = core_diameter_upper(&sub, diameter_target(r.n()));
    out.diameter_bound_met = out.diameter_upper.is_some_and(|d| d as f64 <= diameter_target(r.n()));
    out
}

fn core_diameter_upper(sub: &Graph, target: f64) -> Option<u32> {
    if sub.n() == 0 {
        return None;
    }
    let start = sub.vertices().max_by_key(|&v| (sub.degree(v), core::cmp::Reverse(v))).unwrap();
    let mut dist = vec![UNREACHABLE; sub.n()];
    let mut queue = Vec::new();
    let (ecc, reached) = bfs_into(sub, start, &mut dist, &mut queue);
    if reached < sub.n() {
        return None;
    }
    if (2 * ecc) as f64 <= target {
        return Some(2 * ecc);
    }
    exact_diameter(sub).finite()
}

/// `⌊n / e^10⌋`, the largest set size the span bound speaks about.
pub fn span_size_limit(n: usize) -> usize {
    libm::floor(n as f64 / libm::exp(10.0)) as usize
}

/// Looks for `X` with `|X| ≤ max_size` and `e(X) ≥ C|X|/8` among the
/// min-degree peeling suffixes of `r`. Returns the first violating set.
pub fn check_edge_span(r: &Graph, bound_c: usize, max_size: usize) -> Result<(), VertexSet> {
    use alloc::collections::BinaryHeap;
    use core::cmp::Reverse;
    let n = r.n();
    let mut deg: Vec<usize> = r.vertices().map(|v| r.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut heap: BinaryHeap<Reverse<(usize, Vertex)>> = r.vertices().map(|v| Reverse((deg[v as usize], v))).collect();
    let mut edges = r.edge_count();
    let mut size = n;
    let mut order = Vec::with_capacity(n);
    let violates = |size: usize, edges: usize| size > 0 && size <= max_size && 8 * edges >= bound_c * size;
    if violates(size, edges) {
        return Err(VertexSet::full(n));
    }
    while let Some(Reverse((d, v))) = heap.pop() {
        if !alive[v as usize] || d != deg[v as usize] {
            continue;
        }
        alive[v as usize] = false;
        order.push(v);
        size -= 1;
        edges -= d;
        for &w in r.neighbors(v) {
            if alive[w as usize] {
                deg[w as usize] -= 1;
                heap.push(Reverse((deg[w as usize], w)));
            }
        }
        if violates(size, edges) {
            let removed = VertexSet::from_vec(order);
            return Err(r.vertices().filter(|&w| !removed.contains(w)).collect());
        }
    }
    Ok(())
}

/// Vertex-disjoint stars of a spanning bipartite subgraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarPacking {
    /// `(centre, leaves)`; centres lie in `x_side`, leaves in `y_side`.
    pub stars: Vec<(Vertex, Vec<Vertex>)>,
    pub x_side: VertexSet,
    pub y_side: VertexSet,
}

/// Bipartition from single-vertex-flip local search: every vertex ends with
/// at least half its neighbours on the other side.
pub fn local_max_cut(g: &Graph) -> Vec<bool> {
    let n = g.n();
    let mut side: Vec<bool> = (0..n).map(|v| v % 2 == 1).collect();
    let mut same: Vec<usize> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().filter(|&&w| side[w as usize] == side[v as usize]).count())
        .collect();
    let mut queue: Vec<Vertex> = g.vertices().collect();
    let mut queued = vec![true; n];
    while let Some(v) = queue.pop() {
        let vi = v as usize;
        queued[vi] = false;
        if 2 * same[vi] <= g.degree(v) {
            continue;
        }
        side[vi] = !side[vi];
        same[vi] = g.degree(v) - same[vi];
        for &w in g.neighbors(v) {
            let wi = w as usize;
            if side[wi] == side[vi] {
                same[wi] += 1;
                if !queued[wi] && 2 * same[wi] > g.degree(w) {
                    queued[wi] = true;
                    queue.push(w);
                }
            } else {
                same[wi] -= 1;
            }
        }
    }
    side
}

/// A maximal family of disjoint stars `K_{1,⌈s/4⌉}` with centres in the
/// smaller side of a locally maximal cut. Fails unless at least `⌈s/8⌉`
/// stars are found.
pub fn pack_stars(g: &Graph, s: usize) -> Result<StarPacking, Error> {
    let side = local_max_cut(g);
    let ones = side.iter().filter(|&&b| b).count();
    let x_is = ones <= g.n() - ones;
    let in_x = |v: Vertex| side[v as usize] == x_is;
    let leaves_needed = s.div_ceil(4).max(1);
    let mut used = vec![false; g.n()];
    let mut stars = Vec::new();
    for x in g.vertices().filter(|&v| in_x(v)) {
        if used[x as usize] {
            continue;
        }
        let leaves: Vec<Vertex> = g
            .neighbors(x)
            .iter()
            .copied()
            .filter(|&y| !in_x(y) && !used[y as usize])
            .take(leaves_needed)
            .collect();
        if leaves.len() == leaves_needed {
            used[x as usize] = true;
            for &y in &leaves {
                used[y as usize] = true;
            }
            stars.push((x, leaves));
        }
    }
    let required = s.div_ceil(8);
    if stars.len() < required {
        return Err(Error::PackingShortfall { achieved: stars.len(), required });
    }
    Ok(StarPacking {
        stars,
        x_side: g.vertices().filter(|&v| in_x(v)).collect(),
        y_side: g.vertices().filter(|&v| !in_x(v)).collect(),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RouteOptions {
    /// Replaces `ℓ = min(δ/8, √(n / (60 log₂ n)))`.
    pub ell_override: Option<usize>,
    /// Core degree threshold is `C/2` with `C = p·n` unless set here.
    pub c: Option<f64>,
    /// Run even when `δ < 16`.
    pub allow_low_degree: bool,
}

/// `min(δ/8, √(n / (60 log₂ n)))`, rounded down.
pub fn paper_ell(n: usize, min_degree: usize) -> usize {
    let root = libm::sqrt(n as f64 / (60.0 * libm::log2(n.max(2) as f64)));
    (min_degree / 8).min(libm::floor(root) as usize)
}

/// Progress of the routing loop.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoutingState {
    /// Star centres, i.e. the branch vertices.
    pub centres: Vec<Vertex>,
    /// Unscanned leaves per star, in scan order.
    pub leaves: Vec<Vec<Vertex>>,
    /// Failed leaves per star.
    pub failures: Vec<usize>,
    /// Routed leaf-to-leaf paths by star pair.
    pub paths: BTreeMap<(u32, u32), Vec<Vertex>>,
    /// Pairs that could not be routed.
    pub unrouted: Vec<(u32, u32)>,
    /// `|Z_k|` after the last step.
    pub ambient: usize,
}

/// Measurements of a routing run.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RouteMetrics {
    pub n: usize,
    pub p: f64,
    pub c: f64,
    pub min_degree: usize,
    pub paper_ell: usize,
    pub ell: usize,
    pub stars: usize,
    pub pairs: usize,
    pub routed: usize,
    pub step1_failures: usize,
    pub leaf_failures: Vec<usize>,
    pub max_path_length: usize,
    pub consumed: usize,
    pub min_core_size: usize,
    pub order: usize,
    pub complete: bool,
    pub low_degree_warning: bool,
}

#[derive(Clone, Debug)]
pub struct RouteOutcome {
    pub certificate: SubdivisionCertificate,
    /// `G ∪ R` with every pair of `R` materialised.
    pub host: Graph,
    pub metrics: RouteMetrics,
    pub state: RoutingState,
}

/// Random graph of the routing loop, split by exposure.
///
/// Pairs inside `Z` come from one `G(|Z|, p)` sample; the pairs from a leaf
/// `y` to `Z` are the row `sample_row(Z, p, seed.fork(y))`; pairs inside
/// `M ∪ L` are never looked at and come from a third sample. Every pair is
/// decided exactly once, so the union is distributed as `G(n, p)` no matter
/// when each part is drawn.
pub struct DeferredPerturbation {
    z: Vec<Vertex>,
    outside: Vec<Vertex>,
    p: f64,
    seed: Seed,
    inner: Graph,
}

impl DeferredPerturbation {
    pub fn new(n: usize, outside: &VertexSet, p: f64, seed: Seed) -> Self {
        let z: Vec<Vertex> = (0..n as Vertex).filter(|&v| !outside.contains(v)).collect();
        let local = sample_gnp(z.len(), p, seed.fork(0));
        let edges: Vec<(Vertex, Vertex)> = local.edges().map(|(a, b)| (z[a as usize], z[b as usize])).collect();
        DeferredPerturbation { inner: Graph::from_edge_vec(n, &edges), z, outside: outside.as_slice().to_vec(), p, seed }
    }

    /// `R[Z]`.
    pub fn inner(&self) -> &Graph {
        &self.inner
    }

    /// The edges from `y ∉ Z` into `Z`.
    pub fn leaf_row(&self, y: Vertex) -> Vec<Vertex> {
        sample_row(&self.z, self.p, self.seed.fork(1 + y as u64))
    }

    /// Every pair at once.
    pub fn materialize(&self) -> Graph {
        let n = self.inner.n();
        let mut edges: Vec<(Vertex, Vertex)> = self.inner.edges().collect();
        for &y in &self.outside {
            edges.extend(self.leaf_row(y).into_iter().map(|z| (y, z)));
        }
        let out = sample_gnp(self.outside.len(), self.p, self.seed.fork(u64::MAX));
        edges.extend(out.edges().map(|(a, b)| (self.outside[a as usize], self.outside[b as usize])));
        Graph::from_edge_vec(n, &edges)
    }
}

/// Routes a subdivision of `K_ℓ` with the star centres as branch vertices
/// through `g ∪ R`, `R ~ G(n, p)`.
pub fn route_subdivision(g: &Graph, p: f64, seed: Seed, opts: &RouteOptions) -> RouteOutcome {
    let n = g.n();
    let c = opts.c.unwrap_or(p * n as f64);
    let delta = g.min_degree();
    let mut m = RouteMetrics {
        n,
        p,
        c,
        min_degree: delta,
        paper_ell: paper_ell(n, delta),
        low_degree_warning: delta < 64,
        ..Default::default()
    };
    let ell = opts.ell_override.unwrap_or(m.paper_ell);
    m.ell = ell;
    let mut state = RoutingState::default();
    let stars = if (delta >= 16 || opts.allow_low_degree) && ell >= 1 {
        match pack_stars(g, 8 * ell) {
            Ok(packing) => packing.stars,
            Err(_) => Vec::new(),
        }
    } else {
        Vec::new()
    };
    let stars: Vec<(Vertex, Vec<Vertex>)> = stars.into_iter().take(ell).collect();
    m.stars = stars.len();
    let mut outside = Vec::new();
    for (centre, leaves) in &stars {
        state.centres.push(*centre);
        state.leaves.push(leaves.clone());
        outside.push(*centre);
        outside.extend(leaves);
    }
    state.failures = vec![0; stars.len()];
    let outside = VertexSet::from_vec(outside);
    let perturbation = DeferredPerturbation::new(n, &outside, p.clamp(0.0, 1.0), seed);
    let r_z = perturbation.inner();
    let z: Vec<Vertex> = g.vertices().filter(|&v| !outside.contains(v)).collect();
    // Leaves scanned by position: `cursor[i]` is the next unscanned leaf.
    let mut cursor = vec![0usize; stars.len()];
    let threshold = libm::ceil(c / 2.0).max(0.0) as usize;
    let (mut core, _) = Core::new(r_z, &z, threshold);
    let mut ambient = vec![false; n];
    for &v in &z {
        ambient[v as usize] = true;
    }
    let mut ambient_size = z.len();
    m.min_core_size = core.len();
    let target = diameter_target(n);
    let mut rows: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    let count = stars.len();
    for i in 0..count {
        for j in i + 1..count {
            m.pairs += 1;
            // Step 1.
            m.min_core_size = m.min_core_size.min(core.len());
            let members = core.members();
            let sub = r_z.induced(members.as_slice());
            let ok = 5 * core.len() >= 4 * n && core_diameter_upper(&sub, target).is_some_and(|d| d as f64 <= target);
            if !ok {
                m.step1_failures += 1;
            }
            // Steps 2 and 3.
            let Some(yi) = scan(&stars, &mut state, &mut cursor, &mut rows, &perturbation, core.mask(), i) else {
                state.unrouted.push((i as u32, j as u32));
                continue;
            };
            let Some(yj) = scan(&stars, &mut state, &mut cursor, &mut rows, &perturbation, core.mask(), j) else {
                state.unrouted.push((i as u32, j as u32));
                continue;
            };
            // Step 4.
            let Some(path) = connect(g, r_z, &rows, core.mask(), yi, yj) else {
                state.unrouted.push((i as u32, j as u32));
                continue;
            };
            m.max_path_length = m.max_path_length.max(path.len() - 1);
            // Step 5.
            let interior = &path[1..path.len() - 1];
            for &v in interior {
                ambient[v as usize] = false;
            }
            ambient_size -= interior.len();
            m.consumed += interior.len();
            core.remove(r_z, interior);
            state.paths.insert((i as u32, j as u32), path);
        }
    }
    state.ambient = ambient_size;
    m.routed = state.paths.len();
    m.leaf_failures = state.failures.clone();
    let certificate = assemble(&stars, &state);
    m.order = certificate.order();
    m.complete = count >= 1 && m.routed == m.pairs && count == ell;
    let host = g.union(&perturbation.materialize()).expect("same vertex count");
    debug_assert_eq!(verify_subdivision_certificate(&host, &certificate), Ok(()));
    RouteOutcome { certificate, host, metrics: m, state }
}

/// Scans the leaves of star `i` for one with a random edge into the core.
fn scan(
    stars: &[(Vertex, Vec<Vertex>)],
    state: &mut RoutingState,
    cursor: &mut [usize],
    rows: &mut BTreeMap<Vertex, Vec<Vertex>>,
    perturbation: &DeferredPerturbation,
    in_core: &[bool],
    i: usize,
) -> Option<Vertex> {
    let leaves = &stars[i].1;
    while cursor[i] < leaves.len() {
        let y = leaves[cursor[i]];
        cursor[i] += 1;
        let row = rows.entry(y).or_insert_with(|| perturbation.leaf_row(y));
        if row.iter().any(|&z| in_core[z as usize]) {
            state.leaves[i] = leaves[cursor[i]..].to_vec();
            return Some(y);
        }
        state.failures[i] += 1;
    }
    state.leaves[i].clear();
    None
}

/// Shortest `yi`–`yj` path in `g ∪ R` with interior in the core.
fn connect(
    g: &Graph,
    r_z: &Graph,
    rows: &BTreeMap<Vertex, Vec<Vertex>>,
    in_core: &[bool],
    yi: Vertex,
    yj: Vertex,
) -> Option<Vec<Vertex>> {
    if g.has_edge(yi, yj) {
        return Some(vec![yi, yj]);
    }
    let exits = |y: Vertex| -> Vec<Vertex> {
        let mut out: Vec<Vertex> = g.neighbors(y).iter().copied().filter(|&w| in_core[w as usize]).collect();
        out.extend(rows[&y].iter().copied().filter(|&w| in_core[w as usize]));
        out
    };
    let mut goal = vec![false; g.n()];
    for w in exits(yj) {
        goal[w as usize] = true;
    }
    let mut middle = shortest_path_between(&[g, r_z], in_core, &exits(yi), &goal)?;
    let mut path = vec![yi];
    path.append(&mut middle);
    path.push(yj);
    Some(path)
}

/// Subdivision on the largest set of stars whose pairs were all routed.
fn assemble(stars: &[(Vertex, Vec<Vertex>)], state: &RoutingState) -> SubdivisionCertificate {
    let count = stars.len();
    let mut full = SubdivisionCertificate { branch_vertices: state.centres.clone(), paths: BTreeMap::new() };
    for (&(i, j), leaf_path) in &state.paths {
        let mut path = vec![stars[i as usize].0];
        path.extend(leaf_path);
        path.push(stars[j as usize].0);
        full.paths.insert((i, j), path);
    }
    if full.paths.len() == count * count.saturating_sub(1) / 2 {
        return full;
    }
    let keep: Vec<usize> = if count <= 64 {
        let routed = Graph::from_edges(count, state.paths.keys().map(|&(i, j)| (i, j))).expect("pairs are in range");
        max_clique_small(&routed).into_iter().map(|v| v as usize).collect()
    } else {
        vec![0]
    };
    full.restrict(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::random::sample_gnp;

    #[test]
    fn cores_of_simple_graphs() {
        let k = Graph::complete(10);
        let res = min_degree_core(&k, &VertexSet::full(10), 3);
        assert_eq!(res.core, VertexSet::full(10));
        let res = min_degree_core(&Graph::empty(10), &VertexSet::full(10), 1);
        assert!(res.core.is_empty());
        assert_eq!(res.removed.len(), 10);
        let d = diameter_core(&k, &VertexSet::full(10), 6);
        assert!(d.diameter_bound_met);
        assert_eq!(d.diameter_upper, Some(2));
        let split = families::disjoint_cliques(20, 9).unwrap();
        assert!(!diameter_core(&split, &VertexSet::full(20), 2).diameter_bound_met);
    }

    #[test]
    fn span_falsifier() {
        assert_eq!(check_edge_span(&Graph::empty(100), 8, 100), Ok(()));
        let mut edges: Vec<(Vertex, Vertex)> = sample_gnp(2000, 2.0 / 2000.0, Seed::new(1)).edges().collect();
        for u in 0..20 {
            for v in u + 1..20 {
                edges.push((u * 97, v * 97));
            }
        }
        let g = Graph::from_edges(2000, edges).unwrap();
        let x = check_edge_span(&g, 8, 40).unwrap_err();
        assert!(x.len() <= 40);
        let inside = g.edges().filter(|&(u, v)| x.contains(u) && x.contains(v)).count();
        assert!(8 * inside >= 8 * x.len());
    }

    #[test]
    fn max_cut_is_locally_optimal() {
        let g = sample_gnp(300, 0.1, Seed::new(4));
        let side = local_max_cut(&g);
        for v in g.vertices() {
            let cross = g.neighbors(v).iter().filter(|&&w| side[w as usize] != side[v as usize]).count();
            assert!(2 * cross >= g.degree(v));
        }
    }

    fn check_packing(g: &Graph, pack: &StarPacking, leaves: usize) {
        let mut used = vec![false; g.n()];
        for (c, ls) in &pack.stars {
            assert_eq!(ls.len(), leaves);
            assert!(pack.x_side.contains(*c));
            for &y in ls {
                assert!(g.has_edge(*c, y));
                assert!(pack.y_side.contains(y));
            }
            for v in core::iter::once(*c).chain(ls.iter().copied()) {
                assert!(!core::mem::replace(&mut used[v as usize], true));
            }
        }
    }

    #[test]
    fn star_packing_examples() {
        let g = families::circulant(64, &[1, 2, 3, 4]).unwrap();
        let pack = pack_stars(&g, 8).unwrap();
        assert!(!pack.stars.is_empty());
        check_packing(&g, &pack, 2);
        let g = crate::families::random_regular(256, 16, Seed::new(3)).unwrap();
        let pack = pack_stars(&g, 16).unwrap();
        assert!(pack.stars.len() >= 2);
        check_packing(&g, &pack, 4);
        assert!(matches!(pack_stars(&Graph::empty(64), 8), Err(Error::PackingShortfall { achieved: 0, required: 1 })));
    }

    #[test]
    fn complete_graph_without_noise_routes_nothing() {
        let g = Graph::complete(256);
        let opts = RouteOptions { ell_override: Some(2), ..Default::default() };
        let out = route_subdivision(&g, 0.0, Seed::new(1), &opts);
        assert_eq!(out.metrics.stars, 2);
        assert_eq!(out.metrics.routed, 0);
        assert_eq!(out.state.failures, vec![4, 0]);
        assert_eq!(out.certificate.order(), 1);
        assert_eq!(verify_subdivision_certificate(&out.host, &out.certificate), Ok(()));
    }

    #[test]
    fn routes_on_regular_graph() {
        let g = families::random_regular(3000, 32, Seed::new(9)).unwrap();
        let opts = RouteOptions { ell_override: Some(4), ..Default::default() };
        let out = route_subdivision(&g, 30.0 / 3000.0, Seed::new(2), &opts);
        assert_eq!(verify_subdivision_certificate(&out.host, &out.certificate), Ok(()));
        assert!(out.metrics.complete, "{:?}", out.metrics);
        assert_eq!(out.certificate.order(), 4);
        let exposed = DeferredPerturbation::new(3000, &VertexSet::new(), 0.01, Seed::new(2));
        assert_eq!(exposed.materialize().edge_count(), exposed.inner().edge_count());
    }
}
