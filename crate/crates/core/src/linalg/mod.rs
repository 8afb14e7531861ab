pub mod congruence;
pub mod matrix;

pub use congruence::{congruence_normalize, symmetric_diagonalize, CongruenceMode, CongruenceResult};
pub use matrix::Matrix;
