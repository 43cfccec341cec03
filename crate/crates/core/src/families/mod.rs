//! Generators of forbidden-system families.

mod obstruction;
mod reed_muller;

pub use obstruction::{
    family_from_oracle, obstruction_system, ObstructionSystem, OracleFamily, MAX_OBSTRUCTION_D,
    MAX_ORACLE_D,
};
pub use reed_muller::{
    rm_evaluation_matrix, rm_family, rm_matrix, rm_membership, rm_membership_identity,
    MAX_IDENTITY_BITS, MAX_RM_DEGREE,
};
