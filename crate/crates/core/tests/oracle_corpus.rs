//! Heuristics against exact oracles on small graphs. The oracles used for
//! cross-checking here are written out independently of the library.

mod common;

use common::oracles::{brute_hadwiger, corpus};
use perturb_core::contract::contract_blocks;
use perturb_core::oracles::exact_hadwiger;
use perturb_core::{Graph, Partition, Seed, Vertex, VertexSet};
use rand::Rng;

#[test]
fn exact_hadwiger_matches_enumeration() {
    for g in corpus(60, 1, 6, 10) {
        assert_eq!(exact_hadwiger(&g).unwrap(), brute_hadwiger(&g), "{:?}", g.edges().collect::<Vec<_>>());
    }
}

/// Blocks grown from random seeds along edges, so each one is connected.
fn connected_partition(g: &Graph, seed: Seed) -> Partition {
    let n = g.n();
    let mut rng = seed.rng();
    let mut owner = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<Vertex>> = Vec::new();
    for v in 0..n {
        if owner[v] != usize::MAX {
            continue;
        }
        owner[v] = blocks.len();
        let mut block = vec![v as Vertex];
        let target = rng.random_range(1..=3);
        let mut i = 0;
        while i < block.len() && block.len() < target {
            for &w in g.neighbors(block[i]) {
                if owner[w as usize] == usize::MAX && block.len() < target {
                    owner[w as usize] = blocks.len();
                    block.push(w);
                }
            }
            i += 1;
        }
        blocks.push(block);
    }
    Partition::new(blocks.into_iter().map(VertexSet::from_vec).collect(), n).unwrap()
}

#[test]
fn contraction_never_raises_hadwiger() {
    for (i, g) in corpus(100, 2, 9, 30).iter().enumerate() {
        let p = connected_partition(g, Seed::new(i as u64));
        let h = contract_blocks(g, &p).unwrap();
        assert!(exact_hadwiger(&h).unwrap() <= exact_hadwiger(g).unwrap());
    }
}

#[test]
fn heuristic_orders_stay_below_hadwiger() {
    let bad = common::checks::heuristic_orders();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn exact_diameter_matches_floyd_warshall() {
    let bad = common::checks::diameters();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn connectivity_matches_separator_enumeration() {
    let bad = common::checks::connectivity();
    assert!(bad.is_empty(), "{bad:#?}");
}
