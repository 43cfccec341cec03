//! Boolean functions on F2^n and their exact Fourier analysis.

mod anf;
mod fourier;
mod function;
mod nearest;

pub use anf::{algebraic_degree, anf_coefficients, anf_monomials, from_monomials};
pub use fourier::{
    distance_to_affine, is_uniform, max_nontrivial_coeff, wht, Dyadic, FourierSpectrum,
};
pub use function::{distance, BooleanFunction};
pub use nearest::{distance_to_family, MAX_EXHAUSTIVE_N};

pub(crate) use fourier::max_nontrivial_numerator;
