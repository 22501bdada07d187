//! Score-based structure learning of linear-Gaussian Bayesian networks.
//!
//! The crate is organised around a handful of pieces:
//!
//! - [`dag`]: the graph representation, the `n²`-bit genome encoding and
//!   forward/backward adjacency lists used for incremental cycle checks.
//! - [`scoring`]: decomposable loglik / AIC / BIC scores with a per-search
//!   cache and delta-scoring for local moves.
//! - [`search`]: hill climbing, tabu search and an exhaustive oracle for
//!   small graphs.
//! - [`ga`]: a genetic algorithm whose crossover and mutation operators
//!   never produce cycles.
//! - [`evaluation`]: descendant-set AUROC and mean-rank aggregation.
//! - [`io`] and [`simulate`]: file formats and synthetic data.

pub mod dag;
pub mod error;
pub mod evaluation;
pub mod ga;
pub mod io;
pub mod rng;
pub mod scoring;
pub mod search;
pub mod simulate;

pub use dag::{Dag, Genome, NodeId, ReachabilityIndex};
pub use error::{Error, Result};
pub use scoring::{Dataset, ScoreKind, Scorer};
