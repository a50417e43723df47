//! Harness around `perturb-core`: edge-list and certificate files, seeded
//! parallel experiment sweeps, scaling fits and table output.

pub mod analysis;
pub mod calibrate;
pub mod cert;
pub mod config;
pub mod error;
pub mod io;
pub mod run;
pub mod tables;

pub use cert::CertificateDoc;
pub use config::{ExperimentConfig, ExperimentKind, FamilySpec, Grid, PRule, Params};
pub use error::{LabError, Result};
pub use run::{run_experiment, RunOptions, TrialRecord};
