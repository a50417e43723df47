//! Deciding `κ(G) ≥ k` with unit-capacity vertex-split flows.
//!
//! Fix any `k` hub vertices. A separator of size `< k` misses at least one
//! hub `b`, so `κ ≥ k` iff no hub is separated from any other vertex by
//! fewer than `k` vertices. Per hub, a vertex with `k` neighbours already
//! known to be inseparable from the hub is inseparable too, so flows are
//! only run where this propagation stalls.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::traversal::components;

/// Verdict of [`vertex_connectivity_at_least`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Connectivity {
    /// No set of fewer than `k` vertices disconnects the graph.
    KConnected,
    /// Fewer than `k` vertices whose removal disconnects the graph.
    Separator(VertexSet),
    /// Complete graph on at most `k` vertices: no separator exists, yet
    /// `κ = n - 1 < k`.
    TooFewVertices,
}

impl Connectivity {
    pub fn holds(&self) -> bool {
        matches!(self, Connectivity::KConnected)
    }

    pub fn separator(&self) -> Option<&VertexSet> {
        match self {
            Connectivity::Separator(s) => Some(s),
            _ => None,
        }
    }
}

pub fn vertex_connectivity_at_least(g: &Graph, k: usize) -> Connectivity {
    let n = g.n();
    if k == 0 {
        return Connectivity::KConnected;
    }
    if g.edge_count() == n * n.saturating_sub(1) / 2 {
        return if n > k { Connectivity::KConnected } else { Connectivity::TooFewVertices };
    }
    if components(g).1 > 1 {
        return Connectivity::Separator(VertexSet::new());
    }
    let v = g.vertices().min_by_key(|&v| (g.degree(v), v)).expect("n ≥ 2 here");
    if g.degree(v) < k {
        // Not complete, so v misses some vertex and N(v) cuts it off.
        return Connectivity::Separator(g.neighbors(v).iter().copied().collect());
    }
    if g.edge_count() > 2 * k * n {
        // A cut found in the certificate may not cut g, so only trust "yes".
        if propagate(&sparse_certificate(g, k), k).is_none() {
            return Connectivity::KConnected;
        }
    }
    match propagate(g, k) {
        None => Connectivity::KConnected,
        Some(cut) => Connectivity::Separator(cut),
    }
}

/// Exact vertex connectivity (`n - 1` for complete graphs).
pub fn vertex_connectivity(g: &Graph) -> usize {
    let mut k = 0;
    while vertex_connectivity_at_least(g, k + 1).holds() {
        k += 1;
    }
    k
}

/// Union of `k` scan-first (BFS) forests, each grown in the graph minus
/// the previous forests. It is `k`-connected iff `g` is.
pub fn sparse_certificate(g: &Graph, k: usize) -> Graph {
    let n = g.n();
    let mut used = vec![false; 2 * g.edge_count()];
    let mut edges = Vec::new();
    let mut visited = vec![false; n];
    let mut queue = Vec::new();
    for _ in 0..k {
        visited.fill(false);
        for root in g.vertices() {
            if visited[root as usize] {
                continue;
            }
            visited[root as usize] = true;
            queue.clear();
            queue.push(root);
            let mut head = 0;
            while head < queue.len() {
                let v = queue[head];
                head += 1;
                let base = g.row_start(v);
                for (i, &w) in g.neighbors(v).iter().enumerate() {
                    if used[base + i] || visited[w as usize] {
                        continue;
                    }
                    visited[w as usize] = true;
                    queue.push(w);
                    used[base + i] = true;
                    used[g.arc_index(w, v).expect("symmetric")] = true;
                    edges.push((v, w));
                }
            }
        }
    }
    Graph::from_edge_vec(n, &edges)
}

/// Runs hub propagation on `h`; returns a separator of size `< k` if one
/// separates some hub from some vertex.
fn propagate(h: &Graph, k: usize) -> Option<VertexSet> {
    let n = h.n();
    let mut hubs: Vec<Vertex> = h.vertices().collect();
    hubs.sort_unstable_by_key(|&v| (core::cmp::Reverse(h.degree(v)), v));
    hubs.truncate(k);
    let mut net = SplitNetwork::new(h);
    let mut certified = vec![false; n];
    let mut count = vec![0usize; n];
    let mut stack = Vec::new();
    for &b in &hubs {
        certified.fill(false);
        count.fill(0);
        let certify = |x: Vertex, certified: &mut Vec<bool>, count: &mut Vec<usize>, stack: &mut Vec<Vertex>| {
            if certified[x as usize] {
                return;
            }
            certified[x as usize] = true;
            stack.push(x);
            while let Some(y) = stack.pop() {
                for &z in h.neighbors(y) {
                    let zi = z as usize;
                    count[zi] += 1;
                    if !certified[zi] && count[zi] >= k {
                        certified[zi] = true;
                        stack.push(z);
                    }
                }
            }
        };
        certify(b, &mut certified, &mut count, &mut stack);
        for &w in h.neighbors(b) {
            certify(w, &mut certified, &mut count, &mut stack);
        }
        for t in h.vertices() {
            if certified[t as usize] {
                continue;
            }
            let (flow, cut) = net.max_flow(b, t, k);
            if flow < k {
                return cut;
            }
            certify(t, &mut certified, &mut count, &mut stack);
        }
    }
    None
}

/// Number of internally disjoint `s`–`t` paths, capped at `cap`, for
/// non-adjacent `s != t`; with a minimum separator when below the cap.
pub fn local_connectivity(g: &Graph, s: Vertex, t: Vertex, cap: usize) -> (usize, Option<VertexSet>) {
    assert!(s != t && !g.has_edge(s, t), "local connectivity needs non-adjacent distinct vertices");
    SplitNetwork::new(g).max_flow(s, t, cap)
}

/// Residual network where vertex `v` becomes `2v` (in) and `2v+1` (out),
/// joined by a unit arc; each edge becomes two unbounded arcs out→in.
struct SplitNetwork<'g> {
    g: &'g Graph,
    head: Vec<usize>,
    to: Vec<u32>,
    cap: Vec<u32>,
    initial: Vec<u32>,
    rev: Vec<u32>,
    touched: Vec<u32>,
    parent: Vec<u32>,
    queue: Vec<u32>,
}

const UNBOUNDED: u32 = u32::MAX / 2;

impl<'g> SplitNetwork<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.n();
        let mut head = Vec::with_capacity(2 * n + 1);
        head.push(0);
        for v in g.vertices() {
            let d = g.degree(v);
            head.push(head.last().unwrap() + 1 + d);
            head.push(head.last().unwrap() + 1 + d);
        }
        let arcs = *head.last().unwrap();
        let (mut to, mut cap, mut rev) = (vec![0u32; arcs], vec![0u32; arcs], vec![0u32; arcs]);
        for v in g.vertices() {
            let (vin, vout) = (2 * v as usize, 2 * v as usize + 1);
            let (a_in, a_out) = (head[vin], head[vout]);
            to[a_in] = vout as u32;
            cap[a_in] = 1;
            rev[a_in] = a_out as u32;
            to[a_out] = vin as u32;
            rev[a_out] = a_in as u32;
            for (i, &w) in g.neighbors(v).iter().enumerate() {
                let back = g.arc_index(w, v).expect("symmetric") - g.row_start(w);
                let fwd = a_out + 1 + i;
                to[fwd] = 2 * w;
                cap[fwd] = UNBOUNDED;
                rev[fwd] = (head[2 * w as usize] + 1 + back) as u32;
                let bwd = a_in + 1 + i;
                to[bwd] = 2 * w + 1;
                rev[bwd] = (head[2 * w as usize + 1] + 1 + back) as u32;
            }
        }
        SplitNetwork {
            g,
            head,
            to,
            initial: cap.clone(),
            cap,
            rev,
            touched: Vec::new(),
            parent: vec![u32::MAX; 2 * n],
            queue: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &a in &self.touched {
            self.cap[a as usize] = self.initial[a as usize];
        }
        self.touched.clear();
    }

    fn max_flow(&mut self, s: Vertex, t: Vertex, limit: usize) -> (usize, Option<VertexSet>) {
        self.reset();
        let (src, sink) = (2 * s + 1, 2 * t);
        let mut flow = 0;
        while flow < limit && self.augment(src, sink) {
            flow += 1;
        }
        if flow >= limit {
            return (flow, None);
        }
        // Vertices whose in-node is reachable but out-node is not.
        let reach = &self.parent;
        let cut = self
            .g
            .vertices()
            .filter(|&v| v != s && v != t)
            .filter(|&v| reach[2 * v as usize] != u32::MAX && reach[2 * v as usize + 1] == u32::MAX)
            .collect();
        (flow, Some(cut))
    }

    /// One BFS augmentation; leaves `parent` marking the reachable set.
    fn augment(&mut self, src: u32, sink: u32) -> bool {
        self.parent.fill(u32::MAX);
        self.queue.clear();
        self.parent[src as usize] = src;
        self.queue.push(src);
        let mut head = 0;
        let mut found = false;
        'bfs: while head < self.queue.len() {
            let x = self.queue[head] as usize;
            head += 1;
            for a in self.head[x]..self.head[x + 1] {
                let y = self.to[a];
                if self.cap[a] == 0 || self.parent[y as usize] != u32::MAX {
                    continue;
                }
                // Terminal vertices carry unbounded internal capacity, so
                // never route back through the source's in-node.
                if y == src - 1 {
                    continue;
                }
                self.parent[y as usize] = a as u32;
                if y == sink {
                    found = true;
                    break 'bfs;
                }
                self.queue.push(y);
            }
        }
        if !found {
            return false;
        }
        let mut y = sink;
        while y != src {
            let a = self.parent[y as usize] as usize;
            let r = self.rev[a] as usize;
            if self.cap[a] != UNBOUNDED {
                self.cap[a] -= 1;
            }
            if self.cap[r] != UNBOUNDED {
                self.cap[r] += 1;
            }
            self.touched.push(a as u32);
            self.touched.push(r as u32);
            y = self.to[r];
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::random::{sample_gnp, Seed};

    #[test]
    fn complete_graphs() {
        for n in 1..7 {
            let g = Graph::complete(n);
            assert!(vertex_connectivity_at_least(&g, n - 1).holds());
            assert_eq!(vertex_connectivity_at_least(&g, n), Connectivity::TooFewVertices);
            assert_eq!(vertex_connectivity(&g), n - 1);
        }
    }

    #[test]
    fn disjoint_cliques_have_empty_separator() {
        let g = families::disjoint_cliques(12, 3).unwrap();
        assert_eq!(vertex_connectivity_at_least(&g, 1), Connectivity::Separator(VertexSet::new()));
    }

    #[test]
    fn petersen_is_three_connected() {
        let g = families::petersen();
        assert!(vertex_connectivity_at_least(&g, 3).holds());
        let Connectivity::Separator(s) = vertex_connectivity_at_least(&g, 4) else {
            panic!("Petersen is not 4-connected");
        };
        assert_eq!(s.len(), 3);
        let rest: Vec<Vertex> = g.vertices().filter(|&v| !s.contains(v)).collect();
        assert!(components(&g.induced(&rest)).1 > 1);
    }

    #[test]
    fn flow_separator_on_dense_graph() {
        // Two K_8 sharing exactly two vertices: κ = 2 with a unique cut.
        let mut edges = Vec::new();
        for block in [[0u32, 1, 2, 3, 4, 5, 6, 7], [6, 7, 8, 9, 10, 11, 12, 13]] {
            for i in 0..8 {
                for j in i + 1..8 {
                    edges.push((block[i], block[j]));
                }
            }
        }
        let g = Graph::from_edges(14, edges).unwrap();
        assert!(vertex_connectivity_at_least(&g, 2).holds());
        assert_eq!(
            vertex_connectivity_at_least(&g, 3),
            Connectivity::Separator(VertexSet::from_vec(vec![6, 7]))
        );
        assert_eq!(local_connectivity(&g, 0, 13, 5).0, 2);
    }

    #[test]
    fn sparse_certificate_preserves_verdict() {
        for s in 0..40 {
            let g = sample_gnp(40, 0.35, Seed::new(s));
            for k in 1..5 {
                let c = sparse_certificate(&g, k);
                assert!(c.edge_count() <= k * (g.n() - 1));
                assert_eq!(
                    vertex_connectivity_at_least(&c, k).holds(),
                    vertex_connectivity_at_least(&g, k).holds(),
                    "seed {s} k {k}"
                );
            }
        }
    }
}
