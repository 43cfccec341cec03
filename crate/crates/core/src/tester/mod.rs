//! The oblivious one-sided tester and the modification procedure behind its analysis.
mod modify;
mod oblivious;

pub use modify::{
    build_modified_function, initial_order, lift_block, modification_pipeline, pattern_of, Change, CosetRef,
    ModifiedFunction, PipelineConfig, PipelineReport, MAX_PATTERN_ORDER,
};
pub use oblivious::{
    canonical_wrap, decide, estimate_reject_prob, oblivious_test, trial_rng, wilson_interval, RejectEstimate,
    SampleMode, TestMode, TesterConfig, Verdict,
};
