//! Numerical laboratory for Bayes-optimal low-rank matrix estimation in the
//! regime where the data matrix has many more columns than rows.
//!
//! The crate is organized around the pipeline used by the experiments:
//!
//! * [`numerics`] — deterministic RNG streams, dense symmetric eigensolver,
//!   Gauss–Hermite quadrature, PSD projection, label assignment.
//! * [`model`] — priors on factor rows and samplers for the spiked,
//!   symmetric (GOE) and Gaussian-mixture observation models.
//! * [`spectral`] — strong-signal estimation: top eigenspace of `A Aᵀ`,
//!   subspace loss, rotation alignment and posterior-mean denoising.
//! * [`replica`] — closed-form asymptotics: the scalar and simplex free
//!   energy, limiting MMSE / mutual information, clustering thresholds,
//!   state evolution and a finite-size enumeration oracle.
//! * [`amp`] — Bayes AMP with spectral initialization on symmetric or
//!   Gram-reduced matrices.
//! * [`cluster`] — k-means, spherical EM, agglomerative and spectral
//!   clustering baselines plus overlap metrics.
//! * [`bench`] — experiment orchestration: phase curves, equivalence and
//!   nullity studies, the split-half center-correlation protocol, CSV I/O.

pub mod amp;
pub mod bench;
pub mod cluster;
pub mod model;
pub mod numerics;
pub mod replica;
pub mod spectral;

/// Version string embedded in every experiment report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
