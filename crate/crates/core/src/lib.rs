//! Dynamic multiobjective optimization with transfer-learning seeded populations.
//!
//! When the objectives of a dynamic problem change, the Pareto front found for the
//! previous environment is embedded, together with random samples of both
//! environments, into a latent space built by transfer component analysis. Each
//! embedded front point is then pulled back into decision space for the new
//! environment by a bounded local search, and the resulting individuals seed the
//! next run of an ordinary multiobjective optimizer.
//!
//! Modules:
//!
//! * [`bench`]: the twelve dynamic benchmark problems, the discrete time model and
//!   true-front samplers.
//! * [`tca`]: kernels, maximum mean discrepancy and transfer component analysis.
//! * [`ipg`]: the transfer-based initial population generator.
//! * [`moea`]: dominance, NSGA-II, MOPSO, RM-MEDA and the dynamic outer loop.
//! * [`metrics`]: IGD/MIGD/DMIGD, hypervolume, accuracy and reactivity.
//! * [`harness`]: run configuration, persisted run records, reports and batch runs.

pub mod bench;
pub mod error;
pub mod harness;
pub mod ipg;
pub mod metrics;
pub mod moea;
pub mod tca;

pub use error::{Error, Result};
