//! Non-stationary α-fractal interpolation.
//!
//! A [`Problem`] bundles a partition, a germ `f`, and a sequence of levels
//! `(α_r, b_r)`. Once validated it can be evaluated by backward
//! trajectories of Read–Bajraktarević operators ([`Problem::backward_trajectory`])
//! or by the self-referential series ([`Problem::series_eval`]). The
//! [`bounds`] and [`depend`] modules compare the closed-form error,
//! stability, sensitivity and dependence bounds with observed values.
//!
//! ```
//! use nsfif::{FunctionSpec, Level, LevelSequence, Partition, Problem, ProblemConfig, Strategy};
//!
//! let partition = Partition::new(vec![0.0, 0.5, 1.0]).unwrap();
//! let levels = LevelSequence::stationary(Level::uniform(
//!     FunctionSpec::constant(0.4),
//!     2,
//!     FunctionSpec::polynomial([0.0, 0.0, 1.0]),
//! ));
//! let germ = FunctionSpec::polynomial([0.0, 1.0]);
//! let problem = Problem::new(ProblemConfig::new(partition, germ, levels)).unwrap();
//! let y = problem.eval_interpolant(0.25, Strategy::Series).unwrap();
//! assert!((y - 0.35).abs() < 1e-9);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod config;
pub mod depend;
pub mod error;
pub mod export;
pub mod function;
pub mod ifs;
pub mod levels;
pub mod norms;
pub mod partition;
pub mod problem;
pub mod rb;
pub mod sampled;
pub mod trials;

pub use bounds::{BaseOperator, BaseOperatorSpec, BoundReport, Campaign};
pub use error::{Error, Result};
pub use function::{FunctionSpec, HostFunction, RealFunction};
pub use ifs::{AddressChain, PerturbationLevel, PerturbationSpec, PerturbedProblem};
pub use levels::{Level, LevelSequence};
pub use norms::NormEstimate;
pub use partition::{AffineMapSet, Partition};
pub use problem::{validate_level_sequence, DepthPolicy, Mode, Problem, ProblemConfig, ValidationReport};
pub use rb::{Interpolant, Strategy};
pub use sampled::{Grid, SampledFunction};
