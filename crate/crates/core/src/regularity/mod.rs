//! Regularity partitions of F2^n into cosets of a subspace `H`.
mod block;
mod functional;
mod partition;

pub use block::{block_search_dimension, find_structured_block, verify_block, StructuredBlock};
pub use functional::{
    defect_check, functional_regularize, index_gap_to_density, pick_uniform_transversal, DefectReport,
    FunctionalRegularity, GapReport, Guarantees, Schedule, UniformTransversal,
};
pub use partition::{
    analyze_cosets, coset_ones, green_regularize, index, refine_by_characters, CosetRecord, RegularityBudget,
    RegularityPartition, RoundRecord, WITNESS_POOL,
};
pub(crate) use partition::analyze_coset as partition_record;
