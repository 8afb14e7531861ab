//! Exact computer algebra for quadratic homogeneous polynomial maps whose
//! Jacobian has rank at most four, and for Keller maps x + H.

pub mod algebra;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod quadmap;
pub mod reduce;
pub mod symbolic;

pub use error::{Error, Result};
