//! Steering witnesses and monogamy analysis for small multiparty quantum
//! systems.
//!
//! Two state families are covered:
//!
//! * finite-dimensional (qubit/qudit) density matrices, with spin-variance
//!   and correlation witnesses, and
//! * continuous-variable Gaussian states in the covariance-matrix
//!   formalism, with the conditional-variance product witness.
//!
//! On top of the witnesses sit the monogamy inequalities (products, sums and
//! group-sharing relations) and a steering-graph builder that records which
//! certified steering relations hold between parties.
//!
//! Everything is deterministic: random-state generators and optimizers are
//! seeded, and all values are immutable after construction, so parameter
//! sweeps parallelize safely.

pub mod discrete;
pub mod error;
pub mod gaussian;
pub mod graph;
pub mod inference;
pub mod linalg;
pub mod monogamy;
pub mod optim;
pub mod party;
pub mod witness;

pub use error::{Error, Result};
pub use party::Party;
