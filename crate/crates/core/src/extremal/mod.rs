//! Turán- and Ramsey-type searches for subspaces of F2^n.

mod pointset;
mod search;

pub use pointset::{PointSet, MAX_SEARCH_N};
pub use search::{
    affine_ramsey_bound, find_subspace_in_set, general_linear_group, ramsey_find, ramsey_min_n,
    strict_affine_ramsey_find, turan_extremal_set, AffineCertificate, Color, MonochromeCertificate,
    RamseyMin, MAX_RAMSEY_N,
};
