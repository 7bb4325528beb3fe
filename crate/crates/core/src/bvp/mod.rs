//! Exactly solvable elliptic boundary-value models on the unit disk.

pub mod apriori;
pub mod disk;
pub mod model;
pub mod prediction;
pub mod radial;

pub use apriori::{
    AprioriEvaluator, AprioriParts, IsomorphismBounds, SampleKind, apriori_ratio, apriori_ratio_surrogate, disk_mask,
    harmonic_surrogate_norm, isomorphism_condition, isomorphism_with, random_sample, sample_seed,
};
pub use disk::{BoundaryField, DiskField, gamma_norm, inner_gamma, inner_omega, l2_norm_omega};
pub use model::{
    BoundaryOperator, BvpModel, FredholmData, ModelKind, ProjectorPair, compatibility_defect, data_residual,
    fredholm_data, solve,
};
pub use prediction::{ClassicalPrediction, ck_prediction, classical_prediction, regularity_shift_exact};
pub use radial::{ModeData, ModeSolution, RadialGrid, solve_mode};
