//! GL-equivariant commutative algebra over F_p.

pub mod combinatorics;
pub mod descriptor;
pub mod dist;
pub mod error;
pub mod evaluation;
pub mod glideals;
pub mod harness;
pub mod homology;
pub mod limits;
pub mod linalg;
pub mod schur;

pub use error::{Error, Result};
