//! Measurement-entropy statistics for multi-observable experiments.
//!
//! The crate covers the full analysis chain:
//!
//! - [`prob`] / [`entropy`]: validated outcome distributions, Shannon and
//!   Rényi entropies, and the closed-form entropy-sum curves of the two
//!   reference preparations.
//! - [`estimators`]: least-squares and James-Stein estimation of entropy
//!   vectors, including σ² resolution and positive-part clamping.
//! - [`quantum`] / [`sim`]: states, density matrices, projective
//!   measurement bases, Born-rule probabilities, depolarizing noise, and
//!   seeded finite-shot sampling.
//! - [`bounds`]: von Neumann entropy, the multi-observable entropic lower
//!   bound, and its shrinkage-adjusted variant.
//! - [`risk`]: Monte-Carlo verification that shrinkage reduces total
//!   squared risk in three or more dimensions.
//!
//! All values are immutable after construction and every function is a
//! pure map from inputs to outputs (sampling takes its seed explicitly),
//! so everything here is safe to use from concurrent contexts.

pub mod bounds;
pub mod entropy;
pub mod error;
pub mod estimators;
pub mod prob;
pub mod quantum;
pub mod risk;
pub mod sim;

pub use bounds::{
    check_relation, js_adjusted_sum, liu_bound, max_overlap_b, von_neumann_entropy, BoundReport,
    JsSumMode,
};
pub use entropy::{
    binary_entropy, entropy_vector, renyi_entropy, shannon_entropy, theory_sum, EntropyValue,
    EntropyVector, InitialState, MeasurementRecord,
};
pub use error::{Error, Result};
pub use estimators::{
    estimate_sigma2, james_stein, js_factor, least_squares, sum_entropies, ShrinkageConfig,
    ShrinkageResult, Sigma2Mode, Sigma2Source,
};
pub use prob::{NormalizationNote, ProbabilityDistribution};
pub use quantum::{DensityMatrix, MeasurementBasis, StateVector};
pub use risk::{
    dominance_sweep, simulate_risk, EstimatorKind, EstimatorRisk, RiskReport, RiskTrialConfig,
};
pub use sim::{
    apply_depolarizing, born_probabilities, generate_experiment, sample_counts, NoiseModel,
    ShotSample,
};
