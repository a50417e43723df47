//! Minor and subdivision certificates with independent verifiers.
//!
//! The verifiers only read the host graph and the certificate; they never
//! consult the code that produced the certificate.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::traversal::induces_connected;

/// Branch sets plus one host edge per adjacent branch-set pair.
///
/// For a complete minor every pair `(i, j)`, `i < j`, carries a witness.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinorCertificate {
    pub branch_sets: Vec<VertexSet>,
    pub witness_edges: BTreeMap<(u32, u32), (Vertex, Vertex)>,
}

impl MinorCertificate {
    pub fn order(&self) -> usize {
        self.branch_sets.len()
    }

    /// One branch set per vertex of `clique`, witnessed by its own edges.
    pub fn from_clique(g: &Graph, clique: &[Vertex]) -> Self {
        let mut cert = MinorCertificate {
            branch_sets: clique.iter().map(|&v| VertexSet::from_vec(vec![v])).collect(),
            witness_edges: BTreeMap::new(),
        };
        for i in 0..clique.len() {
            for j in i + 1..clique.len() {
                debug_assert!(g.has_edge(clique[i], clique[j]));
                cert.witness_edges.insert((i as u32, j as u32), (clique[i], clique[j]));
            }
        }
        cert
    }

    /// Keeps the branch sets listed in `keep`, renumbered in that order.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut out = MinorCertificate {
            branch_sets: keep.iter().map(|&i| self.branch_sets[i].clone()).collect(),
            witness_edges: BTreeMap::new(),
        };
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate().skip(a + 1) {
                let key = (i.min(j) as u32, i.max(j) as u32);
                if let Some(&e) = self.witness_edges.get(&key) {
                    out.witness_edges.insert((a as u32, b as u32), e);
                }
            }
        }
        out
    }

    /// Lifts `inner`, a certificate in the quotient whose vertices are the
    /// branch sets of `self`, back to the host of `self`.
    pub fn compose(&self, inner: &MinorCertificate) -> Self {
        let branch_sets = inner
            .branch_sets
            .iter()
            .map(|blk| blk.iter().flat_map(|q| self.branch_sets[q as usize].iter()).collect())
            .collect();
        let witness_edges = inner
            .witness_edges
            .iter()
            .filter_map(|(&pair, &(x, y))| {
                let key = (x.min(y), x.max(y));
                let &(a, b) = self.witness_edges.get(&key)?;
                Some((pair, if x < y { (a, b) } else { (b, a) }))
            })
            .collect();
        MinorCertificate { branch_sets, witness_edges }
    }
}

/// Branch vertices plus one path per pair `(i, j)`, `i < j`, running from
/// `branch_vertices[i]` to `branch_vertices[j]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubdivisionCertificate {
    pub branch_vertices: Vec<Vertex>,
    pub paths: BTreeMap<(u32, u32), Vec<Vertex>>,
}

impl SubdivisionCertificate {
    pub fn order(&self) -> usize {
        self.branch_vertices.len()
    }

    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut out = SubdivisionCertificate {
            branch_vertices: keep.iter().map(|&i| self.branch_vertices[i]).collect(),
            paths: BTreeMap::new(),
        };
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate().skip(a + 1) {
                let key = (i.min(j) as u32, i.max(j) as u32);
                if let Some(p) = self.paths.get(&key) {
                    let mut p = p.clone();
                    if i > j {
                        p.reverse();
                    }
                    out.paths.insert((a as u32, b as u32), p);
                }
            }
        }
        out
    }

    /// Number of interior vertices over all paths.
    pub fn interior_len(&self) -> usize {
        self.paths.values().map(|p| p.len().saturating_sub(2)).sum()
    }
}

/// First certificate clause found violated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    VertexOutOfRange(Vertex),
    EmptyBranchSet(usize),
    BranchSetsOverlap(Vertex),
    BranchSetNotConnected(usize),
    MissingWitness(u32, u32),
    WitnessNotAnEdge(u32, u32),
    WitnessMisplaced(u32, u32),
    UnknownPair(u32, u32),
    RepeatedBranchVertex(Vertex),
    MissingPath(u32, u32),
    PathEndpoints(u32, u32),
    PathNotInHost(u32, u32),
    InteriorOverlap(Vertex),
    InteriorHitsBranchVertex(Vertex),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexOutOfRange(v) => write!(f, "vertex out of range: {v}"),
            Violation::EmptyBranchSet(i) => write!(f, "branch set empty: {i}"),
            Violation::BranchSetsOverlap(v) => write!(f, "branch sets overlap at vertex {v}"),
            Violation::BranchSetNotConnected(i) => write!(f, "branch set not connected: {i}"),
            Violation::MissingWitness(i, j) => write!(f, "missing witness edge for pair ({i}, {j})"),
            Violation::WitnessNotAnEdge(i, j) => write!(f, "witness edge not in host for pair ({i}, {j})"),
            Violation::WitnessMisplaced(i, j) => write!(f, "witness edge misplaced for pair ({i}, {j})"),
            Violation::UnknownPair(i, j) => write!(f, "unknown pair ({i}, {j})"),
            Violation::RepeatedBranchVertex(v) => write!(f, "branch vertex repeated: {v}"),
            Violation::MissingPath(i, j) => write!(f, "missing path for pair ({i}, {j})"),
            Violation::PathEndpoints(i, j) => write!(f, "path endpoints wrong for pair ({i}, {j})"),
            Violation::PathNotInHost(i, j) => write!(f, "path not in host for pair ({i}, {j})"),
            Violation::InteriorOverlap(v) => write!(f, "interior overlap at vertex {v}"),
            Violation::InteriorHitsBranchVertex(v) => write!(f, "interior meets branch vertex {v}"),
        }
    }
}

/// Checks a complete-minor certificate against `g`.
pub fn verify_minor_certificate(g: &Graph, cert: &MinorCertificate) -> Result<(), Violation> {
    let r = cert.order();
    let pattern_pairs = (0..r as u32).flat_map(|i| (i + 1..r as u32).map(move |j| (i, j)));
    verify_model(g, cert, r, pattern_pairs)
}

/// Checks that `cert` models `pattern` as a minor of `g`: branch set `i`
/// stands for pattern vertex `i`, and every pattern edge has a witness.
pub fn verify_minor_model(g: &Graph, cert: &MinorCertificate, pattern: &Graph) -> Result<(), Violation> {
    if pattern.n() != cert.order() {
        return Err(Violation::UnknownPair(pattern.n() as u32, cert.order() as u32));
    }
    verify_model(g, cert, cert.order(), pattern.edges())
}

fn verify_model(
    g: &Graph,
    cert: &MinorCertificate,
    r: usize,
    required: impl Iterator<Item = (u32, u32)>,
) -> Result<(), Violation> {
    let n = g.n();
    let mut owner = vec![u32::MAX; n];
    for (i, set) in cert.branch_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Violation::EmptyBranchSet(i));
        }
        for v in set {
            let slot = owner.get_mut(v as usize).ok_or(Violation::VertexOutOfRange(v))?;
            if *slot != u32::MAX {
                return Err(Violation::BranchSetsOverlap(v));
            }
            *slot = i as u32;
        }
    }
    for (i, set) in cert.branch_sets.iter().enumerate() {
        if !induces_connected(g, set.as_slice()) {
            return Err(Violation::BranchSetNotConnected(i));
        }
    }
    for (&(i, j), &(x, y)) in &cert.witness_edges {
        if i >= j || j as usize >= r {
            return Err(Violation::UnknownPair(i, j));
        }
        if x as usize >= n || y as usize >= n {
            return Err(Violation::VertexOutOfRange(x.max(y)));
        }
        if !g.has_edge(x, y) {
            return Err(Violation::WitnessNotAnEdge(i, j));
        }
        let (ox, oy) = (owner[x as usize], owner[y as usize]);
        if !((ox, oy) == (i, j) || (ox, oy) == (j, i)) {
            return Err(Violation::WitnessMisplaced(i, j));
        }
    }
    for (i, j) in required {
        if !cert.witness_edges.contains_key(&(i, j)) {
            return Err(Violation::MissingWitness(i, j));
        }
    }
    Ok(())
}

/// Checks a subdivision certificate of `K_r` against `g`.
pub fn verify_subdivision_certificate(g: &Graph, cert: &SubdivisionCertificate) -> Result<(), Violation> {
    let n = g.n();
    let r = cert.order() as u32;
    // 0 = unused, 1 = branch vertex, 2 = interior vertex.
    let mut role = vec![0u8; n];
    for &b in &cert.branch_vertices {
        let slot = role.get_mut(b as usize).ok_or(Violation::VertexOutOfRange(b))?;
        if *slot != 0 {
            return Err(Violation::RepeatedBranchVertex(b));
        }
        *slot = 1;
    }
    for (&(i, j), path) in &cert.paths {
        if i >= j || j >= r {
            return Err(Violation::UnknownPair(i, j));
        }
        let (bi, bj) = (cert.branch_vertices[i as usize], cert.branch_vertices[j as usize]);
        if path.len() < 2 || path[0] != bi || path[path.len() - 1] != bj {
            return Err(Violation::PathEndpoints(i, j));
        }
        for w in path.windows(2) {
            if w[0] as usize >= n || w[1] as usize >= n {
                return Err(Violation::VertexOutOfRange(w[0].max(w[1])));
            }
            if !g.has_edge(w[0], w[1]) {
                return Err(Violation::PathNotInHost(i, j));
            }
        }
        for &v in &path[1..path.len() - 1] {
            match role[v as usize] {
                0 => role[v as usize] = 2,
                1 => return Err(Violation::InteriorHitsBranchVertex(v)),
                _ => return Err(Violation::InteriorOverlap(v)),
            }
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            if !cert.paths.contains_key(&(i, j)) {
                return Err(Violation::MissingPath(i, j));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn spoke_certificate() -> MinorCertificate {
        let g = families::petersen();
        let branch_sets: Vec<VertexSet> = (0..5).map(|i| VertexSet::from_vec(vec![i, i + 5])).collect();
        let (_, witness_edges) = crate::contract::contract_sets(&g, &branch_sets).unwrap();
        MinorCertificate { branch_sets, witness_edges }
    }

    #[test]
    fn singleton_k5() {
        let g = Graph::complete(5);
        let cert = MinorCertificate::from_clique(&g, &[0, 1, 2, 3, 4]);
        assert_eq!(verify_minor_certificate(&g, &cert), Ok(()));
    }

    #[test]
    fn petersen_spokes() {
        assert_eq!(verify_minor_certificate(&families::petersen(), &spoke_certificate()), Ok(()));
    }

    #[test]
    fn disconnected_branch_set() {
        let g = families::path(4);
        let mut cert = MinorCertificate::from_clique(&g, &[1, 2]);
        cert.branch_sets[0] = VertexSet::from_vec(vec![0, 1, 3]);
        let err = verify_minor_certificate(&g, &cert).unwrap_err();
        assert!(alloc::format!("{err}").starts_with("branch set not connected"), "{err}");
    }

    #[test]
    fn missing_and_misplaced_witnesses() {
        let g = Graph::complete(4);
        let mut cert = MinorCertificate::from_clique(&g, &[0, 1, 2, 3]);
        cert.witness_edges.remove(&(1, 3));
        assert_eq!(verify_minor_certificate(&g, &cert), Err(Violation::MissingWitness(1, 3)));
        let mut cert = MinorCertificate::from_clique(&g, &[0, 1, 2, 3]);
        cert.witness_edges.insert((0, 1), (2, 3));
        assert_eq!(verify_minor_certificate(&g, &cert), Err(Violation::WitnessMisplaced(0, 1)));
    }

    #[test]
    fn compose_lifts_through_quotient() {
        let outer = spoke_certificate();
        let quotient = Graph::complete(5);
        let inner = MinorCertificate {
            branch_sets: vec![VertexSet::from_vec(vec![0, 1]), VertexSet::from_vec(vec![2]), VertexSet::from_vec(vec![3, 4])],
            witness_edges: [((0, 1), (1, 2)), ((0, 2), (0, 3)), ((1, 2), (2, 4))].into_iter().collect(),
        };
        assert_eq!(verify_minor_certificate(&quotient, &inner), Ok(()));
        let lifted = outer.compose(&inner);
        assert_eq!(verify_minor_certificate(&families::petersen(), &lifted), Ok(()));
        // Inner witnesses pointing from a higher to a lower quotient vertex.
        let reversed = MinorCertificate {
            branch_sets: vec![VertexSet::from_vec(vec![3, 4]), VertexSet::from_vec(vec![2]), VertexSet::from_vec(vec![0, 1])],
            witness_edges: [((0, 1), (3, 2)), ((0, 2), (4, 0)), ((1, 2), (2, 1))].into_iter().collect(),
        };
        assert_eq!(verify_minor_certificate(&quotient, &reversed), Ok(()));
        let lifted = outer.compose(&reversed);
        assert_eq!(verify_minor_certificate(&families::petersen(), &lifted), Ok(()));
    }

    fn k4_direct() -> SubdivisionCertificate {
        let mut cert = SubdivisionCertificate { branch_vertices: vec![0, 1, 2, 3], paths: BTreeMap::new() };
        for i in 0..4u32 {
            for j in i + 1..4 {
                cert.paths.insert((i, j), vec![i, j]);
            }
        }
        cert
    }

    #[test]
    fn k4_subdivisions() {
        assert_eq!(verify_subdivision_certificate(&Graph::complete(4), &k4_direct()), Ok(()));
        // K_4 minus {0,1}, plus vertex 4 bridging 0 and 1.
        let mut edges: Vec<(Vertex, Vertex)> = Graph::complete(4).edges().filter(|&e| e != (0, 1)).collect();
        edges.extend([(0, 4), (4, 1)]);
        let g = Graph::from_edges(5, edges).unwrap();
        let mut cert = k4_direct();
        cert.paths.insert((0, 1), vec![0, 4, 1]);
        assert_eq!(verify_subdivision_certificate(&g, &cert), Ok(()));
    }

    #[test]
    fn shared_interior_is_rejected() {
        let g = Graph::complete(5);
        let mut cert = SubdivisionCertificate { branch_vertices: vec![0, 1, 2], paths: BTreeMap::new() };
        cert.paths.insert((0, 1), vec![0, 4, 1]);
        cert.paths.insert((0, 2), vec![0, 4, 2]);
        cert.paths.insert((1, 2), vec![1, 2]);
        let err = verify_subdivision_certificate(&g, &cert).unwrap_err();
        assert_eq!(alloc::format!("{err}"), "interior overlap at vertex 4");
    }

    #[test]
    fn restrict_keeps_witnesses() {
        let sub = k4_direct().restrict(&[3, 1]);
        assert_eq!(sub.paths[&(0, 1)], vec![1, 3].into_iter().rev().collect::<Vec<_>>());
        assert_eq!(verify_subdivision_certificate(&Graph::complete(4), &sub), Ok(()));
    }
}
