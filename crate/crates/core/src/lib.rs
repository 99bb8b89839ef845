//! GSEMO, the (1+(λ,λ)) GA and the (1+(λ,λ)) GSEMO on bitstrings, with
//! static, fitness-dependent, state-dependent and one-fifth-rule control of
//! the offspring population size λ.
//!
//! ```
//! use moea_lab::algorithms::{run_opll_gsemo, RunConfig, RunStatus};
//! use moea_lab::control::ControllerSpec;
//!
//! let cfg = RunConfig::opll_gsemo(20, ControllerSpec::static_lambda(2.0), 7);
//! let record = run_opll_gsemo(cfg).unwrap();
//! assert_eq!(record.status, RunStatus::Covered);
//! assert_eq!(record.evaluations, 3 * record.iterations * 2 + 1);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod bitcore;
pub mod control;
pub mod error;
pub mod harness;
pub mod objectives;
pub mod pareto;

pub use algorithms::{Algorithm, RunConfig, RunRecord, RunStatus};
pub use bitcore::{BitString, RandomSource};
pub use control::{ControllerSpec, IterationParams};
pub use error::{Error, Result};
pub use objectives::{Benchmark, ObjectivePair};
pub use pareto::{Individual, ParetoArchive};
