//! Quotients of a graph over disjoint vertex blocks.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::Error;
use crate::graph::{block_index, Graph, Partition, Vertex, VertexSet};

/// Host edge realising each adjacent block pair `(i, j)`, `i < j`.
pub type Witnesses = BTreeMap<(u32, u32), (Vertex, Vertex)>;

/// Graph on the blocks with `i ~ j` iff some edge of `g` joins them.
pub fn contract_blocks(g: &Graph, p: &Partition) -> Result<Graph, Error> {
    contract_sets(g, p.blocks()).map(|(h, _)| h)
}

/// [`contract_blocks`] for unvalidated blocks, also returning for every
/// quotient edge the lexicographically first host edge realising it.
pub fn contract_sets(g: &Graph, blocks: &[VertexSet]) -> Result<(Graph, Witnesses), Error> {
    let owner = block_index(blocks, g.n())?;
    let mut cross: Vec<(u32, u32, Vertex, Vertex)> = Vec::new();
    for (u, v) in g.edges() {
        let (a, b) = (owner[u as usize], owner[v as usize]);
        if a != u32::MAX && b != u32::MAX && a != b {
            let (lo, hi, x, y) = if a < b { (a, b, u, v) } else { (b, a, v, u) };
            cross.push((lo, hi, x, y));
        }
    }
    cross.sort_unstable();
    cross.dedup_by_key(|c| (c.0, c.1));
    let h = Graph::from_edge_vec(blocks.len(), &cross.iter().map(|c| (c.0, c.1)).collect::<Vec<_>>());
    let witnesses = cross.into_iter().map(|(a, b, x, y)| ((a, b), (x, y))).collect();
    Ok((h, witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn partition(blocks: &[&[Vertex]], n: usize) -> Partition {
        Partition::new(blocks.iter().map(|b| VertexSet::from_vec(b.to_vec())).collect(), n).unwrap()
    }

    #[test]
    fn k4_to_k2() {
        let h = contract_blocks(&Graph::complete(4), &partition(&[&[0, 1], &[2, 3]], 4)).unwrap();
        assert_eq!(h, Graph::complete(2));
    }

    #[test]
    fn two_triangles_to_edgeless() {
        let g = families::disjoint_cliques(6, 2).unwrap();
        let h = contract_blocks(&g, &partition(&[&[0, 1, 2], &[3, 4, 5]], 6)).unwrap();
        assert_eq!(h, Graph::empty(2));
    }

    #[test]
    fn petersen_spokes_to_k5() {
        let g = families::petersen();
        let spokes: Vec<VertexSet> = (0..5).map(|i| VertexSet::from_vec(vec![i, i + 5])).collect();
        let (h, w) = contract_sets(&g, &spokes).unwrap();
        assert_eq!(h, Graph::complete(5));
        assert_eq!(w.len(), 10);
        for (&(a, b), &(x, y)) in &w {
            assert!(g.has_edge(x, y));
            assert!(spokes[a as usize].contains(x) && spokes[b as usize].contains(y));
        }
    }

    #[test]
    fn overlap_is_rejected() {
        let blocks = vec![VertexSet::from_vec(vec![0, 1]), VertexSet::from_vec(vec![1])];
        assert_eq!(contract_sets(&Graph::complete(3), &blocks).unwrap_err(), Error::BlockOverlap(1));
    }
}
