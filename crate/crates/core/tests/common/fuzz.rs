//! Randomized trials over every certificate-emitting pipeline.

use perturb_core::certificate::{verify_minor_certificate, verify_subdivision_certificate};
use perturb_core::families::{circulant, disjoint_cliques, random_regular};
use perturb_core::minor::{dense_minor_extract, find_minor_perturbed, find_minor_sparse, MinorOptions};
use perturb_core::random::sample_gnp;
use perturb_core::topo::{route_subdivision, RouteOptions};
use perturb_core::{Graph, Seed};
use rand::Rng;

pub const TRIALS: u64 = 1200;

/// Sizes skewed towards the small end of `[10, 20000]`.
pub fn size(rng: &mut impl Rng) -> usize {
    let u: f64 = rng.random();
    (10.0 * 2000f64.powf(u * u * u)).round() as usize
}

pub fn seed_graph(rng: &mut impl Rng, n: usize, seed: Seed) -> (Graph, u64) {
    match rng.random_range(0..4) {
        0 => {
            let k = rng.random_range(1..=(n / 2).clamp(1, 60));
            let g = disjoint_cliques(n, k).unwrap();
            (g, (n / (k + 1)) as u64)
        }
        1 => {
            let m = rng.random_range(1..=((n - 1) / 2).clamp(1, 20));
            (circulant(n, &(1..=m).collect::<Vec<_>>()).unwrap(), n as u64)
        }
        2 => {
            let d = rng.random_range(1..=(n - 1).min(24));
            let d = if n * d % 2 == 1 { d - 1 } else { d };
            (random_regular(n, d, seed).unwrap(), n as u64)
        }
        _ => (sample_gnp(n, (rng.random_range(0.5..20.0) / n as f64).min(1.0), seed), n as u64),
    }
}

fn check_minor(host: &Graph, cert: &perturb_core::MinorCertificate) -> Result<(), String> {
    verify_minor_certificate(host, cert).map_err(|e| e.to_string())?;
    let r = cert.order();
    if r * r.saturating_sub(1) / 2 > host.edge_count() {
        return Err(format!("order {r} exceeds the edge budget of {} edges", host.edge_count()));
    }
    Ok(())
}

/// Trial `t`: pipeline `t mod 4` on a random seed graph. Returns `n`, or
/// why a certificate was rejected.
pub fn trial(t: u64) -> Result<usize, String> {
    let seed = Seed::with_stream(t, 0xf022);
    let mut rng = seed.rng();
    let n = size(&mut rng);
    let (g, alpha) = seed_graph(&mut rng, n, seed.fork(0));
    let opts = MinorOptions::new(alpha);
    let e = |e: perturb_core::Error| e.to_string();
    match t % 4 {
        0 => {
            let o = find_minor_perturbed(&g, rng.random_range(0.1..1.0), seed, &opts).map_err(e)?;
            check_minor(&o.host, &o.certificate)?;
        }
        1 => {
            let k = g.min_degree().clamp(1, (n / 64).max(1));
            if 64 * k > n {
                // Too small for the sparse pipeline; run the dense
                // extractor on the perturbed host instead.
                let host = g.union(&sample_gnp(n, 0.1, seed.fork(2))).map_err(e)?;
                check_minor(&host, &dense_minor_extract(&host, seed))?;
            } else {
                let o = find_minor_sparse(&g, k, seed, &opts).map_err(e)?;
                check_minor(&o.host, &o.certificate)?;
            }
        }
        2 => {
            let opts = RouteOptions {
                ell_override: Some(rng.random_range(2..=8)),
                allow_low_degree: true,
                ..RouteOptions::default()
            };
            let o = route_subdivision(&g, (rng.random_range(5.0..40.0) / n as f64).min(1.0), seed, &opts);
            verify_subdivision_certificate(&o.host, &o.certificate).map_err(|e| e.to_string())?;
            if o.metrics.order != o.certificate.order() {
                return Err(format!("reported order {} for a K_{} subdivision", o.metrics.order, o.certificate.order()));
            }
        }
        _ => {
            let host = g.union(&sample_gnp(n, (4.0 / n as f64).min(1.0), seed.fork(2))).map_err(e)?;
            check_minor(&host, &dense_minor_extract(&host, seed))?;
        }
    }
    Ok(n)
}
