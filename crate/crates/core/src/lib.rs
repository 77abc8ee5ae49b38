//! C4.5-style decision tree induction with four split-selection policies,
//! an MDL-style penalty on continuous-attribute tests, global entropy
//! discretization, and a cross-validation harness for comparing them.
//!
//! The policies differ only in how tests on continuous attributes are formed
//! and ranked:
//!
//! | policy | threshold chosen by | penalty filters tests | penalty used in ranking |
//! |--------|---------------------|-----------------------|-------------------------|
//! | `Rel7` | gain ratio          | no                    | no                      |
//! | `7G`   | gain                | no                    | no                      |
//! | `7GS`  | gain                | yes                   | no                      |
//! | `Rel8` | gain                | yes                   | yes                     |
//!
//! The penalty charged to a test `A <= t` is `log2(N - 1) / |D|` bits per
//! case, where `N` is the number of distinct known values of `A` among the
//! `|D|` (weighted) known-value cases at the node.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod cli;
pub mod data;
pub mod discretize;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod policy;
pub mod rng;
pub mod synthetic;
pub mod tree;

pub use data::{Dataset, Schema};
pub use error::{Error, Result};
pub use policy::Policy;
pub use tree::{GrowParams, TreeNode};
