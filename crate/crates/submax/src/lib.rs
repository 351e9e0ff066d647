//! Parallel (low-adaptivity) greedy algorithms for submodular set-function
//! maximization under matroid and matchoid constraints.
//!
//! The building blocks:
//!
//! - [`oracle`]: submodular function families, marginal views, call metering.
//! - [`matroid`] / [`matchoid`] / [`constraint`]: rank/span/independence
//!   oracles with contraction and restriction views.
//! - [`estimator`]: concentration-budgeted sampling estimators and the
//!   parallel grid search for the sampling rate.
//! - [`greedy_sample`]: randomized greedy blocks — sample at the chosen
//!   rate, prune to an independent certificate, report the residual.
//! - [`block_greedy`]: the threshold-descending outer loop.
//! - [`amplify`]: multilinear amplification for monotone and nonnegative
//!   functions, and the β-scaling scheme for matchoids.
//! - [`baseline`]: sequential greedy, brute-force optimum, swap rounding.
//! - [`meter`]: the batch engine that counts adaptive rounds and oracle
//!   calls.
//! - [`instance`] / [`experiment`]: benchmark generators, the seeded
//!   experiment runner, JSON and CSV reports.
//!
//! Every randomized routine takes an explicit seed and replays
//! bit-identically, including under a multi-worker engine. Start with the
//! examples: each one exercises a major capability end to end.

pub mod amplify;
pub mod baseline;
pub mod block_greedy;
pub mod constraint;
mod error;
pub mod estimator;
pub mod experiment;
pub mod greedy_sample;
pub mod instance;
pub mod matchoid;
pub mod matroid;
pub mod meter;
pub mod multilinear;
pub mod oracle;
pub mod reference;
pub mod rng;
pub mod set;

pub use amplify::{
    amplify_monotone, amplify_monotone_with, amplify_nonnegative, amplify_nonnegative_with,
    beta_scaled_solve, matchoid_constants, sample_union, AmplifyConfig, BetaScaledOutcome,
    FractionalSolution, MatchoidConstants,
};
pub use baseline::{brute_force_opt, sample_scaled, sequential_greedy, swap_round, OptCertificate};
pub use block_greedy::{block_greedy, threshold_schedule, BlockGreedyResult, LambdaFloor};
pub use constraint::{build_constraint, ConstraintHandle, IndependenceOracle, MatroidSpec};
pub use error::{Error, Result};
pub use estimator::{
    chernoff_samples, estimate_low_margin_fraction, estimate_span_fraction, find_delta,
    EstimatorConfig, SamplingRate,
};
pub use experiment::{
    csv_report, run_experiment, sweep_eps, Algorithm, ExperimentConfig, OptMode, RunReport,
};
pub use greedy_sample::{greedy_sample, prune, residual, GreedyBlock, ResidualReport};
pub use instance::{generate_instance, InstanceKind, InstanceSpec};
pub use matchoid::{build_matchoid, MatchoidOracle};
pub use matroid::{build_matroid, MatroidOracle};
pub use meter::{CallCounter, Engine, MeterSnapshot};
pub use multilinear::{
    aux_beta, aux_monotone, aux_nonnegative, multilinear_estimate, multilinear_exact,
    FractionalPoint, SampleBudget,
};
pub use oracle::{build_function, contract_function, marginal, FunctionSpec, SubmodularOracle};
pub use set::{ElementSet, GroundSet};
