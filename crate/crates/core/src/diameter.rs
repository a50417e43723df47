//! Exact diameter by eccentricity bounding and bit-parallel verification.
//!
//! A handful of BFS sweeps bound every eccentricity from both sides. The
//! vertices whose upper bound still exceeds the best known lower bound `D`
//! are then checked 64 at a time: a vertex has eccentricity at most `D` iff
//! every vertex lies in its `(D-1)`-ball or next to it.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::bits_of;
use crate::graph::{Graph, Vertex};
use crate::traversal::{bfs_into, Distance, UNREACHABLE};

/// Eccentricity of `v`, infinite when the graph is disconnected.
pub fn eccentricity(g: &Graph, v: Vertex) -> Distance {
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = Vec::new();
    let (ecc, reached) = bfs_into(g, v, &mut dist, &mut queue);
    if reached < g.n() {
        Distance::Infinite
    } else {
        Distance::Finite(ecc)
    }
}

/// Largest distance between two vertices; infinite if disconnected.
/// Graphs with at most one vertex have diameter 0.
pub fn exact_diameter(g: &Graph) -> Distance {
    match DiameterSearch::start(g) {
        None => Distance::Infinite,
        Some(mut s) => Distance::Finite(s.finish()),
    }
}

/// Two-sided bound on the diameter of a connected graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiameterBounds {
    pub lower: u32,
    pub upper: u32,
}

impl DiameterBounds {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// Bounds after at most `sweeps` BFS runs; `None` for disconnected graphs.
pub fn diameter_bounds(g: &Graph, sweeps: usize) -> Option<DiameterBounds> {
    let mut s = DiameterSearch::start(g)?;
    s.sweep(sweeps.saturating_sub(1));
    Some(DiameterBounds { lower: s.lower, upper: s.upper })
}

struct DiameterSearch<'g> {
    g: &'g Graph,
    lo: Vec<u32>,
    hi: Vec<u32>,
    candidates: Vec<Vertex>,
    lower: u32,
    upper: u32,
    dist: Vec<u32>,
    queue: Vec<Vertex>,
    sweeps: usize,
}

impl<'g> DiameterSearch<'g> {
    fn start(g: &'g Graph) -> Option<Self> {
        let n = g.n();
        let mut s = DiameterSearch {
            g,
            lo: vec![0; n],
            hi: vec![u32::MAX; n],
            candidates: g.vertices().collect(),
            lower: 0,
            upper: 0,
            dist: vec![UNREACHABLE; n],
            queue: Vec::with_capacity(n),
            sweeps: 0,
        };
        if n <= 1 {
            s.candidates.clear();
            return Some(s);
        }
        let first = g.vertices().max_by_key(|&v| (g.degree(v), core::cmp::Reverse(v))).unwrap();
        s.upper = u32::MAX;
        if !s.bfs_update(first) {
            return None;
        }
        Some(s)
    }

    /// Full BFS from `w`, tightening every bound. Returns false if some
    /// vertex was unreachable.
    fn bfs_update(&mut self, w: Vertex) -> bool {
        self.dist.fill(UNREACHABLE);
        let (ecc, reached) = bfs_into(self.g, w, &mut self.dist, &mut self.queue);
        self.sweeps += 1;
        if reached < self.g.n() {
            return false;
        }
        self.lower = self.lower.max(ecc);
        self.upper = self.upper.min(ecc.saturating_mul(2));
        for &v in &self.candidates {
            let (vi, d) = (v as usize, self.dist[v as usize]);
            self.lo[vi] = self.lo[vi].max(d.max(ecc - d));
            self.hi[vi] = self.hi[vi].min(ecc + d);
            self.lower = self.lower.max(self.lo[vi]);
        }
        self.prune();
        true
    }

    fn prune(&mut self) {
        let (lo, hi, lower) = (&self.lo, &self.hi, self.lower);
        self.candidates.retain(|&v| hi[v as usize] > lower && lo[v as usize] < hi[v as usize]);
        let cand_max = self.candidates.iter().map(|&v| self.hi[v as usize]).max().unwrap_or(0);
        self.upper = self.upper.min(self.lower.max(cand_max));
    }

    /// Alternates between the candidate with the largest upper bound and the
    /// one with the smallest lower bound.
    fn sweep(&mut self, budget: usize) {
        let mut history = Vec::new();
        for round in 0..budget {
            if self.candidates.is_empty() || self.lower == self.upper {
                return;
            }
            let g = self.g;
            let w = if round % 2 == 0 {
                *self
                    .candidates
                    .iter()
                    .max_by_key(|&&v| (self.hi[v as usize], g.degree(v), core::cmp::Reverse(v)))
                    .unwrap()
            } else {
                *self
                    .candidates
                    .iter()
                    .min_by_key(|&&v| (self.lo[v as usize], core::cmp::Reverse(g.degree(v)), v))
                    .unwrap()
            };
            self.bfs_update(w);
            history.push(self.candidates.len());
            // Stop sweeping once four sweeps remove under 1% of the candidates.
            if history.len() >= 5 {
                let before = history[history.len() - 5];
                if (before - self.candidates.len()) * 100 < before {
                    return;
                }
            }
        }
    }

    fn finish(&mut self) -> u32 {
        self.sweep(64);
        let n = self.g.n();
        let mut seen = vec![0u64; n];
        let mut frontier = vec![0u64; n];
        let mut next = vec![0u64; n];
        let mut sorted_at = usize::MAX;
        while !self.candidates.is_empty() && self.lower < self.upper {
            let g = self.g;
            if sorted_at != self.sweeps {
                let hi = &self.hi;
                self.candidates.sort_unstable_by_key(|&v| (core::cmp::Reverse(hi[v as usize]), v));
                sorted_at = self.sweeps;
            }
            let take = self.candidates.len().min(64);
            let block: Vec<Vertex> = self.candidates[self.candidates.len() - take..].to_vec();
            let failing = sources_beyond(g, &block, self.lower, &mut seen, &mut frontier, &mut next);
            let first_fail = bits_of(failing).next();
            let keep: Vec<Vertex> = bits_of(failing).map(|i| block[i]).collect();
            self.candidates.truncate(self.candidates.len() - take);
            self.candidates.extend(keep);
            if let Some(i) = first_fail {
                self.bfs_update(block[i]);
            }
        }
        self.lower
    }
}

/// Bit mask of the `sources` (at most 64) whose eccentricity exceeds
/// `radius` in the connected graph `g`.
pub(crate) fn sources_beyond(
    g: &Graph,
    sources: &[Vertex],
    radius: u32,
    seen: &mut [u64],
    frontier: &mut [u64],
    next: &mut [u64],
) -> u64 {
    let b = sources.len();
    debug_assert!((1..=64).contains(&b));
    let full = if b == 64 { u64::MAX } else { (1u64 << b) - 1 };
    seen.fill(0);
    frontier.fill(0);
    let arcs = 2 * g.edge_count();
    let mut layer: Vec<Vertex> = Vec::with_capacity(b);
    for (i, &s) in sources.iter().enumerate() {
        if seen[s as usize] == 0 {
            layer.push(s);
        }
        seen[s as usize] |= 1 << i;
        frontier[s as usize] |= 1 << i;
    }
    if radius == 0 {
        return if g.n() <= 1 { 0 } else { full };
    }
    let mut grown = Vec::new();
    for _ in 1..radius {
        grown.clear();
        let push_cost: usize = layer.iter().map(|&v| g.degree(v)).sum();
        if push_cost * 2 < arcs {
            for &v in &layer {
                let f = frontier[v as usize];
                for &w in g.neighbors(v) {
                    let new = f & !seen[w as usize];
                    if new != 0 {
                        if next[w as usize] == 0 {
                            grown.push(w);
                        }
                        next[w as usize] |= new;
                    }
                }
            }
        } else {
            for w in g.vertices() {
                let s = seen[w as usize];
                if s == full {
                    continue;
                }
                let mut acc = 0;
                for &v in g.neighbors(w) {
                    acc |= frontier[v as usize];
                }
                let new = acc & !s;
                if new != 0 {
                    next[w as usize] = new;
                    grown.push(w);
                }
            }
        }
        for &v in &layer {
            frontier[v as usize] = 0;
        }
        for &w in &grown {
            let wi = w as usize;
            seen[wi] |= next[wi];
            frontier[wi] = next[wi];
            next[wi] = 0;
        }
        core::mem::swap(&mut layer, &mut grown);
        if layer.is_empty() {
            break;
        }
    }
    let mut failing = 0;
    for y in g.vertices() {
        let mut acc = seen[y as usize];
        if acc == full {
            continue;
        }
        for &u in g.neighbors(y) {
            acc |= seen[u as usize];
            if acc == full {
                break;
            }
        }
        failing |= full & !acc;
        if failing == full {
            break;
        }
    }
    failing
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::random::{sample_gnp, Seed};

    fn floyd_warshall(g: &Graph) -> Distance {
        let n = g.n();
        let inf = u32::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for (v, row) in d.iter_mut().enumerate() {
            row[v] = 0;
        }
        for (u, v) in g.edges() {
            d[u as usize][v as usize] = 1;
            d[v as usize][u as usize] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        let worst = d.iter().flatten().copied().max().unwrap_or(0);
        if worst >= inf {
            Distance::Infinite
        } else {
            Distance::Finite(worst)
        }
    }

    #[test]
    fn small_families() {
        assert_eq!(exact_diameter(&families::cycle(10)), Distance::Finite(5));
        assert_eq!(exact_diameter(&Graph::complete(7)), Distance::Finite(1));
        assert_eq!(exact_diameter(&families::petersen()), Distance::Finite(2));
        assert_eq!(exact_diameter(&families::path(9)), Distance::Finite(8));
        assert_eq!(exact_diameter(&Graph::empty(1)), Distance::Finite(0));
        assert_eq!(exact_diameter(&Graph::empty(2)), Distance::Infinite);
    }

    #[test]
    fn agrees_with_floyd_warshall() {
        for s in 0..300u64 {
            let n = 2 + (s % 49) as usize;
            let p = [0.05, 0.1, 0.2, 0.4][(s % 4) as usize];
            let g = sample_gnp(n, p, Seed::new(s));
            assert_eq!(exact_diameter(&g), floyd_warshall(&g), "seed {s}");
        }
    }

    #[test]
    fn multi_source_check_matches_bfs() {
        let g = sample_gnp(300, 0.03, Seed::new(11));
        if exact_diameter(&g) == Distance::Infinite {
            return;
        }
        let sources: Vec<Vertex> = (0..64).collect();
        let n = g.n();
        let (mut a, mut b, mut c) = (vec![0; n], vec![0; n], vec![0; n]);
        for r in 0..8 {
            let mask = sources_beyond(&g, &sources, r, &mut a, &mut b, &mut c);
            for (i, &s) in sources.iter().enumerate() {
                let ecc = eccentricity(&g, s).finite().unwrap();
                assert_eq!(mask >> i & 1 == 1, ecc > r, "source {s} radius {r}");
            }
        }
    }

    #[test]
    fn bounds_bracket_the_diameter() {
        let g = families::cycle(31);
        let b = diameter_bounds(&g, 1).unwrap();
        assert!(b.lower <= 15 && 15 <= b.upper);
        assert!(diameter_bounds(&Graph::empty(3), 4).is_none());
    }
}
