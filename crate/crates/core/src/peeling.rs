//! Minimum-degree peeling: degeneracy orderings and cores.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::graph::{Graph, Vertex, VertexSet};

/// Outcome of [`degeneracy_order`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// Every vertex has fewer than `threshold` neighbours later in the order.
    Ordering(Vec<Vertex>),
    /// Nonempty residue in which every vertex has at least `threshold`
    /// neighbours.
    Witness(VertexSet),
}

/// Repeatedly removes a minimum-degree vertex of degree below `threshold`,
/// breaking ties by lowest id.
pub fn degeneracy_order(g: &Graph, threshold: usize) -> Degeneracy {
    let members: Vec<Vertex> = g.vertices().collect();
    degeneracy_order_within(g, &members, threshold)
}

/// [`degeneracy_order`] on the subgraph induced by `members`.
pub fn degeneracy_order_within(g: &Graph, members: &[Vertex], threshold: usize) -> Degeneracy {
    let mut alive = vec![false; g.n()];
    for &v in members {
        alive[v as usize] = true;
    }
    let mut deg = vec![0usize; g.n()];
    let mut heap = BinaryHeap::with_capacity(members.len());
    for &v in members {
        deg[v as usize] = g.neighbors(v).iter().filter(|&&w| alive[w as usize]).count();
        heap.push(Reverse((deg[v as usize], v)));
    }
    let mut order = Vec::with_capacity(members.len());
    while let Some(Reverse((d, v))) = heap.pop() {
        if !alive[v as usize] || d != deg[v as usize] {
            continue;
        }
        if d >= threshold {
            break;
        }
        alive[v as usize] = false;
        order.push(v);
        for &w in g.neighbors(v) {
            if alive[w as usize] {
                deg[w as usize] -= 1;
                heap.push(Reverse((deg[w as usize], w)));
            }
        }
    }
    if order.len() == members.len() {
        Degeneracy::Ordering(order)
    } else {
        Degeneracy::Witness(members.iter().copied().filter(|&v| alive[v as usize]).collect())
    }
}

/// Incrementally maintained core: the largest subgraph of the live vertices
/// with every degree at least `min_degree` (counted in `layers` combined).
#[derive(Clone, Debug)]
pub struct Core {
    alive: Vec<bool>,
    deg: Vec<usize>,
    min_degree: usize,
    size: usize,
    stack: Vec<Vertex>,
}

impl Core {
    /// Core of the subgraph of `g` induced by `members`.
    pub fn new(g: &Graph, members: &[Vertex], min_degree: usize) -> (Self, Vec<Vertex>) {
        let mut alive = vec![false; g.n()];
        for &v in members {
            alive[v as usize] = true;
        }
        let mut deg = vec![0usize; g.n()];
        for &v in members {
            deg[v as usize] = g.neighbors(v).iter().filter(|&&w| alive[w as usize]).count();
        }
        let mut core = Core {
            alive,
            deg,
            min_degree,
            size: members.len(),
            stack: Vec::new(),
        };
        let mut removed = Vec::new();
        for &v in members {
            if core.alive[v as usize] && core.deg[v as usize] < min_degree {
                core.kill(g, v, &mut removed);
            }
        }
        (core, removed)
    }

    /// Deletes `vertices` and everything that drops below the degree bound.
    /// Returns the vertices that left the core because of the cascade.
    pub fn remove(&mut self, g: &Graph, vertices: &[Vertex]) -> Vec<Vertex> {
        let mut cascade = Vec::new();
        for &v in vertices {
            if self.alive[v as usize] {
                self.kill(g, v, &mut cascade);
            }
        }
        cascade.retain(|v| !vertices.contains(v));
        cascade
    }

    fn kill(&mut self, g: &Graph, v: Vertex, out: &mut Vec<Vertex>) {
        self.alive[v as usize] = false;
        self.size -= 1;
        out.push(v);
        self.stack.push(v);
        while let Some(u) = self.stack.pop() {
            for &w in g.neighbors(u) {
                let wi = w as usize;
                if self.alive[wi] {
                    self.deg[wi] -= 1;
                    if self.deg[wi] < self.min_degree {
                        self.alive[wi] = false;
                        self.size -= 1;
                        out.push(w);
                        self.stack.push(w);
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.alive[v as usize]
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn mask(&self) -> &[bool] {
        &self.alive
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.deg[v as usize]
    }

    pub fn members(&self) -> VertexSet {
        VertexSet::from_vec(
            self.alive
                .iter()
                .enumerate()
                .filter(|(_, &a)| a)
                .map(|(v, _)| v as Vertex)
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn tree_orders_fully() {
        let t = Graph::from_edges(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]).unwrap();
        let Degeneracy::Ordering(order) = degeneracy_order(&t, 2) else {
            panic!("trees are 1-degenerate");
        };
        // Leaves first, lowest id breaking ties.
        assert_eq!(order[0], 3);
        let pos: Vec<usize> = {
            let mut p = vec![0; 6];
            for (i, &v) in order.iter().enumerate() {
                p[v as usize] = i;
            }
            p
        };
        for v in t.vertices() {
            let later = t.neighbors(v).iter().filter(|&&w| pos[w as usize] > pos[v as usize]).count();
            assert!(later < 2);
        }
    }

    #[test]
    fn k5_is_its_own_witness() {
        assert_eq!(degeneracy_order(&Graph::complete(5), 3), Degeneracy::Witness(VertexSet::full(5)));
        assert!(matches!(degeneracy_order(&Graph::complete(5), 5), Degeneracy::Ordering(_)));
    }

    #[test]
    fn core_cascades() {
        // A triangle with a pendant path hanging off it.
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        let all: Vec<Vertex> = g.vertices().collect();
        let (mut core, removed) = Core::new(&g, &all, 2);
        assert_eq!(core.members(), VertexSet::from_vec(vec![0, 1, 2]));
        assert_eq!(removed.len(), 2);
        let cascade = core.remove(&g, &[0]);
        assert_eq!(cascade.len(), 2);
        assert!(core.is_empty());
    }

    #[test]
    fn witness_on_cliques_plus_tree() {
        let g = families::disjoint_cliques(12, 3).unwrap();
        match degeneracy_order(&g, 3) {
            Degeneracy::Witness(z) => assert_eq!(z.len(), 12),
            other => panic!("{other:?}"),
        }
    }
}
