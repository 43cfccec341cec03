//! Forbidden induced linear systems and exact solution counting.

mod complexity;
mod count;
mod kernel;
mod pattern;
mod system;

pub use complexity::{complexity, MAX_COMPLEXITY_K};
pub use count::{
    count_induced, find_induced, induces_at, is_free, is_free_systems, pattern_counts, FreeReport,
    Witness,
};
pub use kernel::MAX_KERNEL_BITS;
pub use pattern::{partial_witness, partially_induces, psi, PartialPattern, MAX_PSI_R};
pub use system::{
    validate, Degeneracy, Family, Generator, InducedSystem, Reduction, Validated, MAX_SCAN_RANK,
};

pub(crate) use count::induces_at_bits;
pub(crate) use kernel::KernelWalk;
