pub mod field;
pub mod poly;
pub mod text;

pub use field::{Elem, Embedding, Field, FieldDescriptor};
pub use poly::{Mono, Poly};
