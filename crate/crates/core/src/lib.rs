//! Linear-invariant properties of Boolean functions over F2^n: exact Fourier
//! analysis, regularity partitions, forbidden induced linear systems and the
//! oblivious one-sided tester.

pub mod error;
pub mod extremal;
pub mod f2;
pub mod boolfn;
pub mod counting;
pub mod families;
pub mod regularity;
pub mod systems;
pub mod tester;

pub use error::{Error, Result};
