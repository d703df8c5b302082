//! Coverage optimization on bipartite set/element graphs.
//!
//! The crate builds adaptive sampling sketches of coverage instances
//! (sample elements in hash order, cap element degrees) and solves
//! maximum k-cover and set cover with outliers on them. A deterministic
//! MapReduce simulator runs the four-round distributed pipeline and
//! accounts per-machine load.
//!
//! Modules:
//! * [`instance`]: data model, loaders, generators and reductions.
//! * [`sketch`]: hashing, parameters and sketch constructors.
//! * [`solvers`]: greedy family, set cover with outliers, exact oracles.
//! * [`distsim`]: simulated multi-machine executor.
//! * [`experiment`]: parameter sweeps producing CSV.

pub mod cli;
pub mod distsim;
mod error;
pub mod experiment;
pub mod instance;
pub mod sketch;
pub mod solvers;

pub use error::{Error, Result};
pub use instance::{CoverageInstance, FractionalInstance, InstanceStats, ProbabilisticInstance, WeightedInstance};
pub use sketch::{HashSource, PracticalParams, Sketch, SketchParams, TheoryParams};
pub use solvers::{CoverageTarget, EvaluatedOn, Solution};
