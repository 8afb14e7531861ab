pub mod map;
pub mod polymap;
pub mod polymatrix;

pub use map::{pair_index, table_len, QuadMap};
pub use polymap::{
    elementary_split, invert_triangular, tame_factor_triangular, ElementaryMap, ElementarySplit, PolyMap,
    TameFactorization,
};
pub use polymatrix::PolyMatrix;
