//! Weighted-average aggregation on a compositional-geometry foundation.
//!
//! Two classic strategies assign worth when fusing evidence from multiple
//! sources: linear weights rate the *sources* (LWA) and order weights rate
//! the *evidence* by rank (OWA). This crate implements both, the two standard
//! output mixtures (OWAWA, SDOWA), and the joint weighted average (JWA),
//! which merges the weight vectors themselves: the rank-reordered linear
//! weights are perturbed by the order weights on the simplex, letting the two
//! schemes reinforce or cancel instead of merely averaging.
//!
//! The [`simulation`] module scores all operators against a jointly normal
//! source/criterion model with randomly injected evidence bias, reporting
//! mean MSE over seeded, reproducible replications.

pub mod composition;
pub mod error;
pub mod operators;
pub mod simulation;

pub use composition::Composition;
pub use error::{Error, Result};
pub use operators::{
    joint_weights, jwa, lwa, owa, owawa, population_sd, rank_permutation, sdowa,
    AggregationResult, Evidence, OperatorTag, RankPermutation,
};
pub use simulation::{
    build_covariance, derive_lwa_weights, derive_owa_weights, factorize, inject_bias, mse,
    replication_rng, run_experiment, run_replication, sample_trial, ExperimentConfig,
    ExperimentRow, ExperimentTable, ReplicationMse, TrialRecord, ValiditySet,
};
