//! Copula entropy estimation and the correlation-entropy decomposition of
//! canonical-ensemble particle systems.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! everything else that touches the operating system live in the `copent`
//! companion crate.
//!
//! Layout:
//!
//! - [`sample`]: validated sample matrices and the rank (pseudo-observation)
//!   transform.
//! - [`kdtree`], [`knn`]: k-nearest-neighbour search and the
//!   Kozachenko–Leonenko differential entropy estimator.
//! - [`copula`]: copula entropy, mutual information and the
//!   joint = marginals + copula decomposition check.
//! - [`oracles`]: closed-form Gaussian references and brute-force quadrature
//!   of small periodic Boltzmann densities.
//! - [`ensemble`]: seeded Metropolis sampling of the canonical position
//!   distribution plus Maxwell–Boltzmann momenta.
//! - [`correlation`]: radial distribution functions, two-body entropy,
//!   configurational copula entropy and the assembled entropy budget.
//!
//! All entropies are in nats with `k_B = 1`.
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod copula;
pub mod correlation;
pub mod ensemble;
mod error;
pub mod kdtree;
pub mod knn;
pub mod oracles;
pub mod sample;
pub mod special;

pub use copula::{
    copula_entropy, copula_entropy_with, entropy_decomposition_check, mutual_information,
    CopulaEstimator, DecompositionReport,
};
pub use correlation::{
    assemble_budget, compute_rdf, configurational_ce, extractable_work, momentum_entropy,
    pair_entropy, EntropyBudget, PairVariant, RdfEstimate, WorkQuery,
};
pub use ensemble::{
    run_canonical, sample_momenta, total_potential, BoxSpec, PotentialSpec, SimParams, Trajectory,
    UnitsSpec,
};
pub use error::{Error, Result};
pub use knn::{knn_entropy, knn_entropy_bounded, EntropyEstimate, EstimateMethod, Metric};
pub use oracles::{
    gaussian_ce, gaussian_entropy, grid_boltzmann, grid_correlation_entropy, grid_marginalize,
    sample_gaussian, CorrelationMatrix, DensityGrid,
};
pub use sample::{rank_transform, PseudoObservations, SampleMatrix, TiePolicy};

/// Default neighbour rank for every kNN-based estimate.
pub const DEFAULT_K: usize = 3;
