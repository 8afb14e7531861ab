//! Symbolic analysis of Jacobian matrices over K[x].

mod colspace;
mod elim;
mod exponents;
mod minors;
mod triangular;

pub use colspace::{constant_vectors_in_colspace, monomial_conditions};
pub use elim::{nullspace, poly_rank, solve, Elim};
pub use exponents::{
    exponent_report, generic_point, image_exponent, image_exponent_const, preimage_exponent, preimage_exponent_const,
    ExponentReport,
};
pub use minors::{all_principal_minors_zero, is_nilpotent, principal_minor_sum};
pub use triangular::{
    flag_triangularize, flag_triangularize_with_budget, permutation_triangularize, FlagMode, Method,
    TriangularityReport, Verdict, FLAG_BUDGET,
};
