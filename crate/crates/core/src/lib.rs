//! Exact computations for hypergeometric monodromy groups of orthogonal type:
//! companion-matrix generators, invariant quadratic forms, signatures,
//! ℚ-rank certificates, unipotent witnesses and the padding construction.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod monodromy;
pub mod padtower;
pub mod polycore;
pub mod quadform;
pub mod witness;

pub use error::{Error, Result};
