//! Measurement-data generation: exact Born-rule probabilities, a
//! single-parameter depolarizing noise channel, and seeded finite-shot
//! sampling.
//!
//! Sampling is reproducible: the seed is an explicit argument and is
//! recorded in every sample. Determinism is guaranteed across runs of the
//! same build, not bit-for-bit across implementations.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::entropy::MeasurementRecord;
use crate::error::{Error, Result};
use crate::prob::{ProbabilityDistribution, DEFAULT_LENIENT_SUM_TOLERANCE};
use crate::quantum::{DensityMatrix, MeasurementBasis, StateVector, EIGENVALUE_TOLERANCE};

/// Depolarizing noise strength `p ∈ [0, 1]`: the state is replaced by the
/// maximally mixed state with probability `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    depolarizing_p: f64,
}

impl NoiseModel {
    pub fn new(depolarizing_p: f64) -> Result<Self> {
        if !depolarizing_p.is_finite() || !(0.0..=1.0).contains(&depolarizing_p) {
            return Err(Error::parameter(
                "depolarizing_p",
                format!("must lie in [0, 1], got {depolarizing_p}"),
            ));
        }
        Ok(Self { depolarizing_p })
    }

    pub fn noiseless() -> Self {
        Self { depolarizing_p: 0.0 }
    }

    pub fn depolarizing_p(self) -> f64 {
        self.depolarizing_p
    }
}

/// Outcome counts of a finite-shot run, with the seed that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotSample {
    pub counts: Vec<u64>,
    pub shots: u64,
    pub seed: u64,
}

impl ShotSample {
    /// Empirical outcome frequencies, `counts / shots`.
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.shots as f64)
            .collect()
    }
}

/// Born-rule outcome probabilities `p_i = ⟨v_i|ρ|v_i⟩`.
pub fn born_probabilities(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<ProbabilityDistribution> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: basis.dim(),
        });
    }
    let mut probs = Vec::with_capacity(basis.dim());
    for v in basis.vectors() {
        let value = rho.expectation(v);
        if value.im.abs() > EIGENVALUE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "expectation has imaginary part {:.3e}",
                value.im
            )));
        }
        // Round-off can leave a tiny negative where the true value is 0.
        probs.push(if value.re < 0.0 { 0.0 } else { value.re });
    }
    ProbabilityDistribution::new(probs)
}

/// Depolarizing channel `ρ → (1-p) ρ + p I/dim`.
pub fn apply_depolarizing(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    let noise = NoiseModel::new(p)?;
    let p = noise.depolarizing_p();
    let dim = rho.dim();
    let scale = Complex64::new(1.0 - p, 0.0);
    let mixed = Complex64::new(p / dim as f64, 0.0);
    let mat = DMatrix::from_fn(dim, dim, |i, j| {
        let base = rho.matrix()[(i, j)] * scale;
        if i == j {
            base + mixed
        } else {
            base
        }
    });
    DensityMatrix::new(mat)
}

/// Multinomial draw of `shots` outcomes, deterministic given `seed`.
pub fn sample_counts(
    dist: &ProbabilityDistribution,
    shots: u64,
    seed: u64,
) -> Result<ShotSample> {
    if shots == 0 {
        return Err(Error::parameter("shots", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs = dist.probs();
    let mut counts = vec![0u64; probs.len()];
    let mut remaining_shots = shots;
    let mut remaining_mass = 1.0f64;
    // Chained conditional binomials: category i receives
    // Binomial(remaining, p_i / remaining_mass).
    for (i, &p) in probs.iter().enumerate() {
        if remaining_shots == 0 {
            break;
        }
        if i + 1 == probs.len() {
            counts[i] = remaining_shots;
            break;
        }
        let conditional = if remaining_mass > 0.0 {
            (p / remaining_mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let draw = Binomial::new(remaining_shots, conditional)
            .expect("conditional probability clamped to [0, 1]")
            .sample(&mut rng);
        counts[i] = draw;
        remaining_shots -= draw;
        remaining_mass = (remaining_mass - p).max(0.0);
    }
    Ok(ShotSample {
        counts,
        shots,
        seed,
    })
}

/// Per-measurement seed derivation for [`generate_experiment`].
fn derive_seed(master: u64, index: usize) -> u64 {
    master ^ (index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Simulates one experiment: prepares `state`, applies depolarizing
/// noise, and measures each basis in turn. With `shots` set, exact
/// probabilities are degraded to empirical frequencies via seeded
/// sampling (one derived seed per basis); otherwise records hold the
/// exact Born distributions. Records are labeled by basis label.
pub fn generate_experiment(
    state: &StateVector,
    bases: &[MeasurementBasis],
    noise: &NoiseModel,
    shots: Option<u64>,
    seed: u64,
) -> Result<Vec<MeasurementRecord>> {
    if bases.is_empty() {
        return Err(Error::parameter("bases", "must be nonempty"));
    }
    for basis in bases {
        if basis.dim() != state.dim() {
            return Err(Error::DimensionMismatch {
                left: basis.dim(),
                right: state.dim(),
            });
        }
    }
    let rho = apply_depolarizing(&DensityMatrix::pure(state), noise.depolarizing_p())?;
    let mut records = Vec::with_capacity(bases.len());
    for (k, basis) in bases.iter().enumerate() {
        let exact = born_probabilities(&rho, basis)?;
        let distribution = match shots {
            None => exact,
            Some(shots) => {
                let sample = sample_counts(&exact, shots, derive_seed(seed, k))?;
                let (dist, _note) = ProbabilityDistribution::new_lenient(
                    sample.frequencies(),
                    DEFAULT_LENIENT_SUM_TOLERANCE,
                )?;
                dist
            }
        };
        records.push(MeasurementRecord::new(basis.label(), distribution)?);
    }
    Ok(records)
}
