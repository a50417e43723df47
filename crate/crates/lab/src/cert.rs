//! JSON documents for minor and subdivision certificates.

use std::collections::BTreeMap;
use std::path::Path;

use perturb_core::certificate::{verify_minor_certificate, verify_subdivision_certificate};
use perturb_core::graph::fnv1a;
use perturb_core::{Graph, MinorCertificate, SubdivisionCertificate, Vertex, VertexSet};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub pair: [u32; 2],
    pub edge: [Vertex; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathEntry {
    pub pair: [u32; 2],
    pub path: Vec<Vertex>,
}

/// `host_digest` is the host graph's FNV-1a edge digest as 16 hex digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateDoc {
    Minor {
        order: usize,
        branch_sets: Vec<Vec<Vertex>>,
        witness_edges: Vec<WitnessEntry>,
        host_digest: String,
    },
    Subdivision {
        order: usize,
        branch_vertices: Vec<Vertex>,
        paths: Vec<PathEntry>,
        host_digest: String,
    },
}

pub fn hex_digest(x: u64) -> String {
    format!("{x:016x}")
}

impl CertificateDoc {
    pub fn from_minor(cert: &MinorCertificate, host: &Graph) -> Self {
        CertificateDoc::Minor {
            order: cert.order(),
            branch_sets: cert.branch_sets.iter().map(|b| b.as_slice().to_vec()).collect(),
            witness_edges: cert
                .witness_edges
                .iter()
                .map(|(&(i, j), &(u, v))| WitnessEntry { pair: [i, j], edge: [u, v] })
                .collect(),
            host_digest: hex_digest(host.digest()),
        }
    }

    pub fn from_subdivision(cert: &SubdivisionCertificate, host: &Graph) -> Self {
        CertificateDoc::Subdivision {
            order: cert.order(),
            branch_vertices: cert.branch_vertices.clone(),
            paths: cert.paths.iter().map(|(&(i, j), p)| PathEntry { pair: [i, j], path: p.clone() }).collect(),
            host_digest: hex_digest(host.digest()),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            CertificateDoc::Minor { order, .. } | CertificateDoc::Subdivision { order, .. } => *order,
        }
    }

    pub fn host_digest(&self) -> &str {
        match self {
            CertificateDoc::Minor { host_digest, .. } | CertificateDoc::Subdivision { host_digest, .. } => host_digest,
        }
    }

    pub fn to_minor(&self) -> Option<MinorCertificate> {
        let CertificateDoc::Minor { branch_sets, witness_edges, .. } = self else {
            return None;
        };
        Some(MinorCertificate {
            branch_sets: branch_sets.iter().map(|b| VertexSet::from_vec(b.clone())).collect(),
            witness_edges: witness_edges.iter().map(|w| ((w.pair[0], w.pair[1]), (w.edge[0], w.edge[1]))).collect(),
        })
    }

    pub fn to_subdivision(&self) -> Option<SubdivisionCertificate> {
        let CertificateDoc::Subdivision { branch_vertices, paths, .. } = self else {
            return None;
        };
        Some(SubdivisionCertificate {
            branch_vertices: branch_vertices.clone(),
            paths: paths.iter().map(|p| ((p.pair[0], p.pair[1]), p.path.clone())).collect::<BTreeMap<_, _>>(),
        })
    }

    /// Checks the host digest, the declared order and the certificate itself.
    pub fn verify(&self, host: &Graph) -> Result<()> {
        if self.host_digest() != hex_digest(host.digest()) {
            return Err(LabError::Rejected(format!(
                "host digest {} does not match graph {}",
                self.host_digest(),
                hex_digest(host.digest())
            )));
        }
        let (declared, checked) = match self {
            CertificateDoc::Minor { order, .. } => {
                let cert = self.to_minor().expect("minor document");
                verify_minor_certificate(host, &cert).map_err(|v| LabError::Rejected(v.to_string()))?;
                (*order, cert.order())
            }
            CertificateDoc::Subdivision { order, .. } => {
                let cert = self.to_subdivision().expect("subdivision document");
                verify_subdivision_certificate(host, &cert).map_err(|v| LabError::Rejected(v.to_string()))?;
                (*order, cert.order())
            }
        };
        if declared != checked {
            return Err(LabError::Rejected(format!("declared order {declared}, certificate has {checked}")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate documents always serialize")
    }

    /// FNV-1a over the compact JSON form.
    pub fn digest(&self) -> String {
        hex_digest(fnv1a(self.to_json().as_bytes()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use perturb_core::families;

    #[test]
    fn minor_document_round_trip() {
        let g = families::petersen();
        let cert = MinorCertificate::from_clique(&g, &[0, 1]);
        let doc = CertificateDoc::from_minor(&cert, &g);
        let json = doc.to_json();
        assert!(json.starts_with(r#"{"kind":"minor","order":2,"branch_sets":[[0],[1]]"#), "{json}");
        let back: CertificateDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
        back.verify(&g).unwrap();
        assert!(back.verify(&families::cycle(10)).is_err());
    }

    #[test]
    fn tampered_order_is_rejected() {
        let g = Graph::complete(4);
        let mut doc = CertificateDoc::from_minor(&MinorCertificate::from_clique(&g, &[0, 1, 2]), &g);
        if let CertificateDoc::Minor { order, .. } = &mut doc {
            *order = 4;
        }
        assert!(doc.verify(&g).is_err());
    }

    #[test]
    fn subdivision_round_trip() {
        let g = families::cycle(6);
        let cert = SubdivisionCertificate {
            branch_vertices: vec![0, 3],
            paths: [((0, 1), vec![0, 1, 2, 3])].into_iter().collect(),
        };
        let doc = CertificateDoc::from_subdivision(&cert, &g);
        let back: CertificateDoc = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(back.to_subdivision().unwrap(), cert);
        back.verify(&g).unwrap();
    }
}
