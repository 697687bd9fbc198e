//! Subcritical random `k`-uniform hypergraphs and their `j`-components.
//!
//! The crate samples `H^k(n, p)`, splits it into `j`-components, tells
//! hypertrees from components carrying a wheel, runs the component search and
//! the two-type branching process that dominates it, evaluates the exact
//! enumeration of rooted two-type trees, and drives Monte Carlo experiments on
//! the size of the largest components.

pub mod combinatorics;
pub mod enumeration;
pub mod error;
pub mod experiments;
pub mod hypergraph;
pub mod processes;
pub mod rng;

pub use combinatorics::TheoryParams;
pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use num_rational::BigRational;
