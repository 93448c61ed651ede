//! Validated probability distributions over discrete measurement outcomes.

use crate::error::{Error, Result};

/// Sum-to-one tolerance for analytic (exact) probability inputs.
pub const STRICT_SUM_TOLERANCE: f64 = 1e-9;

/// Default sum-to-one tolerance for empirical (finite-shot) inputs.
pub const DEFAULT_LENIENT_SUM_TOLERANCE: f64 = 1e-3;

/// Nonnegative outcome probabilities summing to one.
///
/// Construction is the single validation point: every consumer may assume
/// the invariants hold.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    probs: Vec<f64>,
}

/// Record of a lenient-mode renormalization, surfaced in output metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationNote {
    /// The sum of the raw probabilities before rescaling.
    pub original_sum: f64,
}

impl ProbabilityDistribution {
    /// Builds a distribution under the strict tolerance
    /// ([`STRICT_SUM_TOLERANCE`]); intended for analytic inputs.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > STRICT_SUM_TOLERANCE {
            return Err(Error::ProbabilitySum {
                sum,
                tolerance: STRICT_SUM_TOLERANCE,
            });
        }
        Ok(Self { probs })
    }

    /// Builds a distribution from empirical data, accepting sums within
    /// `sum_tolerance` of one. Off-by-more-than-strict sums are rescaled
    /// to exactly one and reported through the returned note.
    pub fn new_lenient(
        probs: Vec<f64>,
        sum_tolerance: f64,
    ) -> Result<(Self, Option<NormalizationNote>)> {
        if !sum_tolerance.is_finite() || sum_tolerance < 0.0 {
            return Err(Error::parameter(
                "sum_tolerance",
                format!("must be finite and nonnegative, got {sum_tolerance}"),
            ));
        }
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() <= STRICT_SUM_TOLERANCE {
            // Close enough that rescaling would only add noise.
            let dist = Self { probs };
            dist.check_elements_at_most_one()?;
            return Ok((dist, None));
        }
        if (sum - 1.0).abs() > sum_tolerance {
            return Err(Error::ProbabilitySum {
                sum,
                tolerance: sum_tolerance,
            });
        }
        let rescaled: Vec<f64> = probs.iter().map(|p| p / sum).collect();
        let dist = Self { probs: rescaled };
        dist.check_elements_at_most_one()?;
        Ok((dist, Some(NormalizationNote { original_sum: sum })))
    }

    /// Uniform distribution over `n` outcomes.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDistribution);
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    fn check_elements_at_most_one(&self) -> Result<()> {
        for (index, &value) in self.probs.iter().enumerate() {
            if value > 1.0 {
                return Err(Error::InvalidProbability { index, value });
            }
        }
        Ok(())
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}
