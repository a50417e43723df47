//! Heuristics and exact routines against the brute-force oracles. Each
//! check returns a description of every disagreement.

use perturb_core::certificate::verify_minor_certificate;
use perturb_core::connectivity::{vertex_connectivity, vertex_connectivity_at_least, Connectivity};
use perturb_core::diameter::exact_diameter;
use perturb_core::minor::{dense_minor_extract, find_minor_with, MinorOptions};
use perturb_core::oracles::{exact_hadwiger, exact_independence_number};
use perturb_core::random::sample_gnp;
use perturb_core::{Graph, Seed};
use rand::Rng;

use super::oracles::{brute_connectivity_at_least, connected_without, corpus, floyd_warshall_diameter};

/// Dense extractor and full pipeline (with empty and random `R`) on 100
/// graphs with `n ≤ 9`: certificates verify and never exceed `h(G ∪ R)`.
pub fn heuristic_orders() -> Vec<String> {
    let mut bad = Vec::new();
    for (i, g) in corpus(100, 2, 9, 20).iter().enumerate() {
        let h = exact_hadwiger(g).unwrap();
        let dense = dense_minor_extract(g, Seed::new(i as u64));
        if let Err(e) = verify_minor_certificate(g, &dense) {
            bad.push(format!("graph {i}: dense certificate rejected: {e}"));
        }
        if dense.order() > h {
            bad.push(format!("graph {i}: dense order {} > h = {h}", dense.order()));
        }

        let alpha = exact_independence_number(g).unwrap() as u64;
        let rs = [Graph::empty(g.n()), sample_gnp(g.n(), 0.3, Seed::with_stream(i as u64, 21))];
        for r in &rs {
            let o = match find_minor_with(g, r, 0.5, Seed::new(i as u64), &MinorOptions::new(alpha)) {
                Ok(o) => o,
                Err(e) => {
                    bad.push(format!("graph {i}: pipeline failed: {e}"));
                    continue;
                }
            };
            if let Err(e) = verify_minor_certificate(&o.host, &o.certificate) {
                bad.push(format!("graph {i}: pipeline certificate rejected: {e}"));
            }
            let h = exact_hadwiger(&o.host).unwrap();
            if o.certificate.order() > h {
                bad.push(format!("graph {i}: pipeline order {} > h = {h}", o.certificate.order()));
            }
        }
    }
    bad
}

/// BFS diameter against Floyd–Warshall, on dense and on sparse graphs.
pub fn diameters() -> Vec<String> {
    let mut graphs = corpus(150, 1, 50, 40);
    // Sparse graphs, where disconnection and long paths are common.
    graphs.extend((0..100u64).map(|i| {
        let mut rng = Seed::with_stream(i, 50).rng();
        let n = rng.random_range(2..=50);
        sample_gnp(n, (rng.random_range(1.0..3.0) / n as f64).min(1.0), Seed::with_stream(i, 51))
    }));
    graphs
        .iter()
        .enumerate()
        .filter_map(|(i, g)| {
            let (a, b) = (exact_diameter(g), floyd_warshall_diameter(g));
            (a != b).then(|| format!("graph {i}: {a:?} vs {b:?}"))
        })
        .collect()
}

/// `κ ≥ k` for `k ≤ 4` and `κ` itself against separator enumeration.
pub fn connectivity() -> Vec<String> {
    let mut graphs = corpus(100, 1, 12, 60);
    graphs.extend([Graph::complete(5), Graph::complete(4), Graph::empty(3), perturb_core::families::petersen()]);
    let mut bad = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        for k in 0..=4 {
            let verdict = vertex_connectivity_at_least(g, k);
            if verdict.holds() != brute_connectivity_at_least(g, k) {
                bad.push(format!("graph {i}, k = {k}: {verdict:?}"));
            }
            if let Connectivity::Separator(s) = &verdict {
                let mask = s.iter().fold(0u32, |m, v| m | 1 << v);
                if s.len() >= k || connected_without(g, mask) {
                    bad.push(format!("graph {i}, k = {k}: bad separator {s:?}"));
                }
            }
        }
        let kappa = vertex_connectivity(g);
        if !(brute_connectivity_at_least(g, kappa) || g.n() <= 1) || brute_connectivity_at_least(g, kappa + 1) {
            bad.push(format!("graph {i}: κ = {kappa}"));
        }
    }
    bad
}
