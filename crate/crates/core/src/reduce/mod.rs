//! Normal forms for quadratic maps of low Jacobian rank, with certificates.

mod certificate;
mod classify;
mod displays;
mod invariants;
mod irlem;
mod pattern;
mod rk3;
mod rk3np;
mod rkr;

pub use invariants::{
    column_confinement, column_kernel, essential_vars, jacobian_table, nonzero_col_extent, nonzero_row_extent,
    projective_points, row_rank, row_reduction, rows_dependent_over_k, subspace_candidates,
};
pub use irlem::{find_point, irlem_normalize, irlem_normalize_with, ExtensionPolicy, IrlemResult, POINT_BUDGET};
pub use pattern::{conjugate_matches, find_transform, permutation_transform, search, signed_permutations, Budget, Pattern, SearchOutcome};
pub use certificate::{certificate_check, Certificate, Theorem};
pub use displays::{dim5_patterns, dim6_patterns, rk3np_pattern2, rk3np_pattern3};
pub use rk3::reduce_rk3;
pub use rkr::{reduce_rk4, reduce_rkr};
pub use rk3np::{reduce_rk3_nilpotent, reduce_rk3_nilpotent_with_budget, SEARCH_BUDGET};
pub use classify::{classify_dim5, classify_dim5_with_budget, classify_dim6, classify_dim6_with_budget, Classification};
