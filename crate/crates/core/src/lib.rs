//! Randomized constructions over randomly perturbed sparse graphs.
//!
//! Every construction in this crate emits a certificate (branch sets, witness
//! paths, separators) that can be re-checked by an independent verifier in
//! [`certificate`]. Sampling is driven by explicit [`random::Seed`] values, so a
//! run is a pure function of its inputs.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod certificate;
pub mod connectivity;
pub mod contract;
pub mod diameter;
pub mod error;
pub mod families;
pub mod graph;
pub mod minor;
pub mod oracles;
pub mod peeling;
pub mod random;
pub mod robust;
pub mod topo;
pub mod traversal;

mod bits;

pub use certificate::{MinorCertificate, SubdivisionCertificate, Violation};
pub use error::Error;
pub use graph::{Graph, Partition, Vertex, VertexSet};
pub use random::Seed;
pub use traversal::Distance;
