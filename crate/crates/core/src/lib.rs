//! Exact moment engine for central limit theorems of graph-independent
//! (epsilon-independent) noncommutative random variables.
//!
//! Limit moments are evaluated as pair-partition sums of (decorated) step
//! graphon homomorphism densities; finite-`n` moments are evaluated exactly
//! from the graph-independence moment-cumulant formula.

pub mod checks;
pub mod combinatorics;
pub mod cumulants;
pub mod decorated;
pub mod error;
pub mod finite_n;
pub mod graphon;
pub mod graphs;
pub mod io;
pub mod limit_laws;
pub mod scalar;
pub mod subset;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
