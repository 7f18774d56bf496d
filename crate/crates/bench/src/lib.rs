//! Shared fixtures for the pipeline benchmarks.

use cut2tour::maxcut::MaxCutInstance;
use cut2tour::reduction::{build_reduction, ReductionArtifact};

/// Single edge of weight 5, the smallest interesting instance.
pub fn h1_artifact() -> ReductionArtifact {
    let h = MaxCutInstance::new(2, vec![(0, 1, 5)]).unwrap();
    build_reduction(&h, 3).unwrap()
}

/// Two-edge path with one negative weight: one strict and one flexible
/// gadget plus two XOR gadgets of order four.
pub fn h2_artifact() -> ReductionArtifact {
    let h = MaxCutInstance::new(3, vec![(0, 1, 3), (1, 2, -2)]).unwrap();
    build_reduction(&h, 7).unwrap()
}
