//! Bit-packed linear algebra over F2.

mod linear_map;
mod matrix;
mod sample;
mod subspace;
mod vector;

pub use linear_map::{LinearMap, Nonsingular};
pub use matrix::F2Matrix;
pub use sample::{random_linear_map, random_nonsingular, random_point_span, random_subspace};
pub use subspace::{coset_transversal, AffineCoset, Subspace};
pub use vector::{lex_cmp_bits, low_mask, F2Vector, MAX_VECTOR_DIM};

pub(crate) use matrix::{reduce_against, rref_rows};
pub(crate) use subspace::check_ambient;

/// Largest ambient dimension for spaces whose points are enumerated.
pub const MAX_AMBIENT_DIM: usize = 24;
