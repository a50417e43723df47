//! Brute-force oracles written independently of the library, and the
//! small-graph corpus they are checked on.

use perturb_core::random::sample_gnp;
use perturb_core::traversal::Distance;
use perturb_core::{Graph, Seed, Vertex};
use rand::Rng;

pub fn corpus(count: u64, n_lo: usize, n_hi: usize, stream: u64) -> Vec<Graph> {
    (0..count)
        .map(|i| {
            let mut rng = Seed::with_stream(i, stream).rng();
            let n = rng.random_range(n_lo..=n_hi);
            let p = rng.random_range(0.1..0.9);
            sample_gnp(n, p, Seed::with_stream(i, stream + 1))
        })
        .collect()
}

pub fn floyd_warshall_diameter(g: &Graph) -> Distance {
    let n = g.n();
    const INF: u32 = u32::MAX / 2;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
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
    if worst >= INF {
        Distance::Infinite
    } else {
        Distance::from_hops(worst)
    }
}

pub fn connected_without(g: &Graph, removed: u32) -> bool {
    let n = g.n();
    let Some(start) = (0..n).find(|&v| removed >> v & 1 == 0) else { return true };
    let mut seen = 1u32 << start | removed;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v as Vertex) {
            if seen >> w & 1 == 0 {
                seen |= 1 << w;
                stack.push(w as usize);
            }
        }
    }
    seen.count_ones() as usize == n
}

/// `κ(G) ≥ k` by the definition: more than `k` vertices and no set of
/// fewer than `k` vertices whose removal disconnects the rest.
pub fn brute_connectivity_at_least(g: &Graph, k: usize) -> bool {
    let n = g.n();
    if n <= k {
        return false;
    }
    (0u32..1 << n).filter(|s| (s.count_ones() as usize) < k).all(|s| connected_without(g, s))
}

/// Largest `r` such that some assignment of vertices to `r` nonempty,
/// connected, pairwise adjacent sets exists; plain enumeration.
pub fn brute_hadwiger(g: &Graph) -> usize {
    let n = g.n();
    let mut best = usize::from(n > 0);
    let mut assign = vec![0usize; n];
    loop {
        let r = assign.iter().copied().max().unwrap_or(0);
        if r > best {
            let sets: Vec<Vec<Vertex>> = (1..=r).map(|b| (0..n).filter(|&v| assign[v] == b).map(|v| v as Vertex).collect()).collect();
            let ok = sets.iter().all(|s| !s.is_empty() && connected_without(g, !s.iter().fold(0u32, |m, &v| m | 1 << v) & ((1u32 << n) - 1)))
                && (0..r).all(|a| (a + 1..r).all(|b| sets[a].iter().any(|&x| sets[b].iter().any(|&y| g.has_edge(x, y)))));
            if ok {
                best = r;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            assign[i] += 1;
            if assign[i] <= n {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

