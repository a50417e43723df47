//! Deterministic and seeded graph families.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::Error;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::random::{sample_gnp, Seed};

/// A named graph family, buildable into a concrete [`Graph`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "kebab-case"))]
pub enum Family {
    /// `⌊n/(k+1)⌋` disjoint cliques of balanced sizes, each of order ≥ k+1.
    DisjointCliques { n: usize, k: usize },
    CompleteBipartite { left: usize, right: usize },
    Complete { n: usize },
    Empty { n: usize },
    Path { n: usize },
    Cycle { n: usize },
    Star { n: usize },
    Petersen,
    Circulant { n: usize, offsets: Vec<usize> },
    RandomRegular { n: usize, d: usize, seed: u64 },
    Gnp { n: usize, p: f64, seed: u64 },
}

impl Family {
    pub fn build(&self) -> Result<Graph, Error> {
        match self {
            Family::DisjointCliques { n, k } => disjoint_cliques(*n, *k),
            Family::CompleteBipartite { left, right } => Ok(complete_bipartite(*left, *right)),
            Family::Complete { n } => Ok(Graph::complete(*n)),
            Family::Empty { n } => Ok(Graph::empty(*n)),
            Family::Path { n } => Ok(path(*n)),
            Family::Cycle { n } => {
                if *n < 3 {
                    return Err(Error::BadSpec("a cycle needs at least 3 vertices"));
                }
                Ok(cycle(*n))
            }
            Family::Star { n } => Ok(star(*n)),
            Family::Petersen => Ok(petersen()),
            Family::Circulant { n, offsets } => circulant(*n, offsets),
            Family::RandomRegular { n, d, seed } => random_regular(*n, *d, Seed::new(*seed)),
            Family::Gnp { n, p, seed } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::BadSpec("edge probability outside [0, 1]"));
                }
                Ok(sample_gnp(*n, *p, Seed::new(*seed)))
            }
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Family::DisjointCliques { n, .. }
            | Family::Complete { n }
            | Family::Empty { n }
            | Family::Path { n }
            | Family::Cycle { n }
            | Family::Star { n }
            | Family::Circulant { n, .. }
            | Family::RandomRegular { n, .. }
            | Family::Gnp { n, .. } => *n,
            Family::CompleteBipartite { left, right } => left + right,
            Family::Petersen => 10,
        }
    }

    /// A proven upper bound on the independence number, when one is known
    /// from the construction alone.
    pub fn independence_upper_bound(&self) -> Option<usize> {
        Some(match self {
            Family::DisjointCliques { n, k } => n / (k + 1),
            Family::CompleteBipartite { left, right } => *left.max(right),
            Family::Complete { n } => (*n).min(1),
            Family::Empty { n } => *n,
            Family::Path { n } => n.div_ceil(2),
            Family::Cycle { n } => n / 2,
            Family::Star { n } => n.saturating_sub(1).max((*n).min(1)),
            Family::Petersen => 4,
            // With offsets 1..=m, members of an independent set sit at cyclic
            // distance > m from each other.
            Family::Circulant { n, offsets } => {
                let mut sorted = offsets.clone();
                sorted.sort_unstable();
                if sorted.iter().copied().eq(1..=sorted.len()) {
                    n / (sorted.len() + 1)
                } else if sorted.is_empty() {
                    *n
                } else {
                    n / 2
                }
            }
            Family::RandomRegular { n, d, .. } if *d >= 1 => n / 2,
            Family::RandomRegular { n, .. } | Family::Gnp { n, .. } => *n,
        })
    }
}

/// `⌊n/(k+1)⌋` vertex-disjoint cliques whose sizes differ by at most one.
pub fn disjoint_cliques(n: usize, k: usize) -> Result<Graph, Error> {
    let blocks = clique_blocks(n, k)?;
    let mut edges = Vec::new();
    for b in &blocks {
        let b = b.as_slice();
        for (i, &u) in b.iter().enumerate() {
            edges.extend(b[i + 1..].iter().map(|&v| (u, v)));
        }
    }
    Ok(Graph::from_edge_vec(n, &edges))
}

/// Vertex blocks of [`disjoint_cliques`], consecutive ids, larger blocks first.
pub fn clique_blocks(n: usize, k: usize) -> Result<Vec<VertexSet>, Error> {
    let r = n / (k + 1);
    if r == 0 {
        return Err(Error::BadSpec("need n ≥ k + 1 for at least one clique"));
    }
    let (q, extra) = (n / r, n % r);
    let mut start = 0;
    Ok((0..r)
        .map(|i| {
            let len = q + usize::from(i < extra);
            let b = (start as Vertex..(start + len) as Vertex).collect();
            start += len;
            b
        })
        .collect())
}

/// `K_{left,right}` with the left side on `0..left`.
pub fn complete_bipartite(left: usize, right: usize) -> Graph {
    let edges: Vec<_> = (0..left as Vertex)
        .flat_map(|u| (left as Vertex..(left + right) as Vertex).map(move |v| (u, v)))
        .collect();
    Graph::from_edge_vec(left + right, &edges)
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
    Graph::from_edge_vec(n, &edges)
}

/// The cycle `C_n`; for `n < 3` this degenerates to a path.
pub fn cycle(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
    if n >= 3 {
        edges.push((0, n as Vertex - 1));
    }
    Graph::from_edge_vec(n, &edges)
}

/// `K_{1,n-1}` with hub 0.
pub fn star(n: usize) -> Graph {
    let edges: Vec<_> = (1..n as Vertex).map(|v| (0, v)).collect();
    Graph::from_edge_vec(n, &edges)
}

/// Outer 5-cycle on 0..5, inner pentagram on 5..10, spokes `i ~ i+5`.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, i + 5));
    }
    Graph::from_edge_vec(10, &edges)
}

/// Circulant graph: `i ~ i ± o (mod n)` for each offset `o` in `1..=n/2`.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<Graph, Error> {
    let mut seen = vec![false; n / 2 + 1];
    for &o in offsets {
        if o == 0 || o > n / 2 {
            return Err(Error::BadSpec("circulant offsets must lie in 1..=n/2"));
        }
        if core::mem::replace(&mut seen[o], true) {
            return Err(Error::BadSpec("repeated circulant offset"));
        }
    }
    let mut edges = Vec::with_capacity(n * offsets.len());
    for i in 0..n {
        for &o in offsets {
            let j = (i + o) % n;
            if 2 * o != n || i < j {
                edges.push((i as Vertex, j as Vertex));
            }
        }
    }
    Ok(Graph::from_edge_vec(n, &edges))
}

/// Uniform-ish simple `d`-regular graph from the pairing model.
///
/// Points are paired at random; a pair that would create a loop or a repeated
/// edge is redrawn, and the whole pairing restarts if no legal pair is left.
pub fn random_regular(n: usize, d: usize, seed: Seed) -> Result<Graph, Error> {
    if d >= n.max(1) && !(n == 0 && d == 0) {
        return Err(Error::BadSpec("random regular graph needs d < n"));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::BadSpec("random regular graph needs n·d even"));
    }
    let mut rng = seed.rng();
    'attempt: loop {
        let mut pool: Vec<Vertex> = (0..n as Vertex).flat_map(|v| core::iter::repeat_n(v, d)).collect();
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::with_capacity(d); n];
        let mut edges = Vec::with_capacity(n * d / 2);
        while !pool.is_empty() {
            let mut misses = 0u32;
            loop {
                let i = rng.random_range(0..pool.len());
                let j = rng.random_range(0..pool.len());
                let (u, v) = (pool[i], pool[j]);
                if i != j && u != v && !adj[u as usize].contains(&v) {
                    let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                    pool.swap_remove(hi);
                    pool.swap_remove(lo);
                    adj[u as usize].push(v);
                    adj[v as usize].push(u);
                    edges.push((u, v));
                    break;
                }
                misses += 1;
                if misses >= 256 {
                    if !has_legal_pair(&pool, &adj) {
                        continue 'attempt;
                    }
                    misses = 0;
                }
            }
        }
        return Ok(Graph::from_edge_vec(n, &edges));
    }
}

fn has_legal_pair(pool: &[Vertex], adj: &[Vec<Vertex>]) -> bool {
    let mut distinct: Vec<Vertex> = pool.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    distinct
        .iter()
        .enumerate()
        .any(|(i, &u)| distinct[i + 1..].iter().any(|v| !adj[u as usize].contains(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::exact_independence_number;

    #[test]
    fn disjoint_cliques_twelve_three() {
        let g = disjoint_cliques(12, 3).unwrap();
        assert_eq!(g.edge_count(), 3 * 6);
        assert_eq!(exact_independence_number(&g).unwrap(), 3);
        assert_eq!(g.min_degree(), 3);
    }

    #[test]
    fn uneven_cliques_are_balanced() {
        let blocks = clique_blocks(11, 2).unwrap();
        let sizes: Vec<_> = blocks.iter().map(VertexSet::len).collect();
        assert_eq!(sizes, vec![4, 4, 3]);
        assert!(disjoint_cliques(2, 2).is_err());
    }

    #[test]
    fn circulant_is_regular() {
        let g = circulant(10, &[1, 2]).unwrap();
        assert!(g.vertices().all(|v| g.degree(v) == 4));
        // Rotation by one is an automorphism.
        let perm: Vec<Vertex> = (0..10).map(|v| (v + 1) % 10).collect();
        assert_eq!(g.relabel(&perm), g);
        assert!(circulant(10, &[6]).is_err());
        let antipodal = circulant(10, &[5]).unwrap();
        assert!(antipodal.vertices().all(|v| antipodal.degree(v) == 1));
    }

    #[test]
    fn random_regular_is_simple_and_regular() {
        for s in 0..5 {
            let g = random_regular(100, 3, Seed::new(s)).unwrap();
            assert!(g.vertices().all(|v| g.degree(v) == 3));
            assert_eq!(g.edge_count(), 150);
        }
        assert!(random_regular(5, 3, Seed::new(0)).is_err());
    }

    #[test]
    fn petersen_shape() {
        let g = petersen();
        assert_eq!(g.edge_count(), 15);
        assert!(g.vertices().all(|v| g.degree(v) == 3));
    }
}
