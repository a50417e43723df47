//! Exact oracles for small graphs and cheap bounds for large ones.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::error::Error;
use crate::graph::{Graph, Vertex};
use crate::random::{uniform_permutation, Seed};

pub const INDEPENDENCE_CAP: usize = 60;
pub const HADWIGER_CAP: usize = 9;

/// Exact independence number for graphs with at most
/// [`INDEPENDENCE_CAP`] vertices.
pub fn exact_independence_number(g: &Graph) -> Result<usize, Error> {
    exact_independence_number_capped(g, INDEPENDENCE_CAP)
}

/// Branch and bound over 64-bit vertex masks; `cap` may be at most 64.
pub fn exact_independence_number_capped(g: &Graph, cap: usize) -> Result<usize, Error> {
    let cap = cap.min(64);
    if g.n() > cap {
        return Err(Error::OracleCapExceeded { n: g.n(), cap });
    }
    let adj = masks(g);
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let mut best = 0;
    mis(&adj, all, 0, &mut best);
    Ok(best as usize)
}

fn masks(g: &Graph) -> Vec<u64> {
    g.vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

fn mis(adj: &[u64], p: u64, size: u32, best: &mut u32) {
    if p == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + clique_cover(adj, p) <= *best {
        return;
    }
    // Some vertex of N[v] belongs to every maximal independent set of G[p].
    let v = crate::bits::bits_of(p)
        .min_by_key(|&v| (adj[v] & p).count_ones())
        .unwrap();
    let branch = (adj[v] | 1 << v) & p;
    for u in crate::bits::bits_of(branch) {
        mis(adj, p & !adj[u] & !(1 << u), size + 1, best);
    }
}

/// Number of cliques in a greedy clique cover of `p`; bounds α(G[p]).
fn clique_cover(adj: &[u64], mut p: u64) -> u32 {
    let mut count = 0;
    while p != 0 {
        let v = p.trailing_zeros() as usize;
        let mut cand = p & adj[v];
        p &= !(1 << v);
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            p &= !(1 << w);
            cand &= adj[w];
        }
        count += 1;
    }
    count
}

/// Size of a maximal independent set built by min-degree greedy, ties
/// broken by a seeded random priority. Always at most α(g).
pub fn greedy_independence_lower_bound(g: &Graph, seed: u64) -> usize {
    let rank = uniform_permutation(g.n(), Seed::new(seed));
    let mut alive = vec![true; g.n()];
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut heap: BinaryHeap<Reverse<(usize, Vertex, Vertex)>> =
        g.vertices().map(|v| Reverse((deg[v as usize], rank[v as usize], v))).collect();
    let mut size = 0;
    while let Some(Reverse((d, _, v))) = heap.pop() {
        if !alive[v as usize] || d != deg[v as usize] {
            continue;
        }
        size += 1;
        alive[v as usize] = false;
        for &w in g.neighbors(v) {
            if !core::mem::replace(&mut alive[w as usize], false) {
                continue;
            }
            for &x in g.neighbors(w) {
                if alive[x as usize] {
                    deg[x as usize] -= 1;
                    heap.push(Reverse((deg[x as usize], rank[x as usize], x)));
                }
            }
        }
    }
    size
}

/// Exact Hadwiger number for graphs with at most [`HADWIGER_CAP`] vertices.
pub fn exact_hadwiger(g: &Graph) -> Result<usize, Error> {
    exact_hadwiger_capped(g, HADWIGER_CAP)
}

/// Enumerates assignments of vertices to "unused" or to branch sets in
/// first-appearance order, pruning when too few vertices remain to beat
/// the best order found. `cap` may be at most 16.
pub fn exact_hadwiger_capped(g: &Graph, cap: usize) -> Result<usize, Error> {
    let cap = cap.min(16);
    if g.n() > cap {
        return Err(Error::OracleCapExceeded { n: g.n(), cap });
    }
    if g.n() == 0 {
        return Ok(0);
    }
    let adj = masks(g);
    let mut search = Hadwiger { adj: &adj, n: g.n(), blocks: Vec::new(), best: 1 };
    search.assign(0);
    Ok(search.best)
}

struct Hadwiger<'a> {
    adj: &'a [u64],
    n: usize,
    blocks: Vec<u64>,
    best: usize,
}

impl Hadwiger<'_> {
    fn assign(&mut self, v: usize) {
        if self.blocks.len() + (self.n - v) <= self.best {
            return;
        }
        if v == self.n {
            if self.is_clique_model() {
                self.best = self.blocks.len();
            }
            return;
        }
        for b in 0..self.blocks.len() {
            self.blocks[b] |= 1 << v;
            self.assign(v + 1);
            self.blocks[b] &= !(1 << v);
        }
        self.blocks.push(1 << v);
        self.assign(v + 1);
        self.blocks.pop();
        self.assign(v + 1);
    }

    fn is_clique_model(&self) -> bool {
        let reach: Vec<u64> = self.blocks.iter().map(|&b| self.neighborhood(b)).collect();
        for (i, &b) in self.blocks.iter().enumerate() {
            if !self.connected(b) {
                return false;
            }
            if self.blocks[i + 1..].iter().any(|&c| reach[i] & c == 0) {
                return false;
            }
        }
        true
    }

    fn neighborhood(&self, b: u64) -> u64 {
        crate::bits::bits_of(b).fold(0, |m, v| m | self.adj[v])
    }

    fn connected(&self, b: u64) -> bool {
        let mut seen = 1u64 << b.trailing_zeros();
        loop {
            let grown = seen | (self.neighborhood(seen) & b);
            if grown == seen {
                return seen == b;
            }
            seen = grown;
        }
    }
}

/// Colours vertices greedily in order of decreasing degree. Returns the
/// number of colours and the colour of every vertex.
pub fn greedy_coloring(g: &Graph) -> (usize, Vec<u32>) {
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.sort_unstable_by_key(|&v| (Reverse(g.degree(v)), v));
    let mut color = vec![u32::MAX; g.n()];
    let mut used = Vec::new();
    let mut colors = 0;
    for v in order {
        used.clear();
        used.resize(colors + 1, false);
        for &w in g.neighbors(v) {
            let c = color[w as usize];
            if (c as usize) < used.len() {
                used[c as usize] = true;
            }
        }
        let c = used.iter().position(|&u| !u).unwrap();
        color[v as usize] = c as u32;
        colors = colors.max(c + 1);
    }
    (colors, color)
}

/// Maximum clique of a graph with at most 64 vertices.
pub fn max_clique_small(g: &Graph) -> Vec<Vertex> {
    assert!(g.n() <= 64, "max_clique_small handles at most 64 vertices");
    let adj = masks(g);
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let mut best = 0u64;
    grow_clique(&adj, 0, all, &mut best);
    crate::bits::bits_of(best).map(|v| v as Vertex).collect()
}

fn grow_clique(adj: &[u64], current: u64, cand: u64, best: &mut u64) {
    if cand == 0 {
        if current.count_ones() > best.count_ones() {
            *best = current;
        }
        return;
    }
    if current.count_ones() + cand.count_ones() <= best.count_ones() {
        return;
    }
    let v = cand.trailing_zeros() as usize;
    grow_clique(adj, current | 1 << v, cand & adj[v], best);
    grow_clique(adj, current, cand & !(1 << v), best);
}
