//! Shannon and Rényi entropies of measurement outcome distributions, plus
//! the closed-form entropy-sum curves for the two reference preparations.
//!
//! All entropies are base-2 (bits). The `0 · log 0 = 0` convention is
//! applied by treating probabilities at or below
//! [`ZERO_PROBABILITY_CUTOFF`] as exact zeros.

use crate::error::{Error, Result};
use crate::prob::ProbabilityDistribution;

/// Probabilities at or below this cutoff contribute nothing to entropy sums.
pub const ZERO_PROBABILITY_CUTOFF: f64 = 1e-15;

/// A base-2 entropy, in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyValue {
    bits: f64,
}

impl EntropyValue {
    /// Wraps a finite, nonnegative number of bits.
    pub fn new(bits: f64) -> Result<Self> {
        if !bits.is_finite() || bits < 0.0 {
            return Err(Error::InvalidEntropyValue(bits));
        }
        Ok(Self { bits })
    }

    /// Internal constructor for shrinkage outputs, which may scale
    /// entries with a negative factor when positive-part clamping is
    /// disabled. Still requires finiteness.
    pub(crate) fn raw(bits: f64) -> Self {
        debug_assert!(bits.is_finite());
        Self { bits }
    }

    pub fn bits(self) -> f64 {
        self.bits
    }
}

fn entropy_term(p: f64) -> f64 {
    if p <= ZERO_PROBABILITY_CUTOFF {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Shannon entropy `H = -Σ p_i log2 p_i` of a validated distribution.
///
/// The result lies in `[0, log2 n]`: zero exactly for deterministic
/// outcomes, `log2 n` for the uniform distribution.
pub fn shannon_entropy(dist: &ProbabilityDistribution) -> EntropyValue {
    let bits: f64 = dist.probs().iter().copied().map(entropy_term).sum();
    // -p log2 p can round to -0.0 for p = 1.
    EntropyValue { bits: bits.max(0.0) }
}

/// Rényi entropy `H_α = (1/(1-α)) log2 Σ p_i^α` for `α > 0`, `α ≠ 1`.
///
/// Callers wanting the α → 1 limit use [`shannon_entropy`].
pub fn renyi_entropy(dist: &ProbabilityDistribution, alpha: f64) -> Result<EntropyValue> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::parameter(
            "alpha",
            format!("must be positive, got {alpha}"),
        ));
    }
    if alpha == 1.0 {
        return Err(Error::parameter(
            "alpha",
            "α = 1 is the Shannon limit; call shannon_entropy instead",
        ));
    }
    let power_sum: f64 = dist
        .probs()
        .iter()
        .filter(|&&p| p > ZERO_PROBABILITY_CUTOFF)
        .map(|&p| p.powf(alpha))
        .sum();
    let bits = power_sum.log2() / (1.0 - alpha);
    EntropyValue::new(bits.max(0.0))
}

/// Binary entropy `h(a) = -a log2 a - (1-a) log2 (1-a)` for `a ∈ [0, 1]`.
pub fn binary_entropy(a: f64) -> Result<EntropyValue> {
    if !a.is_finite() || !(0.0..=1.0).contains(&a) {
        return Err(Error::parameter(
            "a",
            format!("must lie in [0, 1], got {a}"),
        ));
    }
    Ok(EntropyValue {
        bits: (entropy_term(a) + entropy_term(1.0 - a)).max(0.0),
    })
}

/// The two reference preparations whose entropy-sum curves have closed
/// forms in terms of the sweep parameter `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialState {
    /// Curve `h(a)`.
    MinusOne,
    /// Curve `h(a) + 1`.
    Zero,
}

impl InitialState {
    pub fn label(self) -> &'static str {
        match self {
            InitialState::MinusOne => "minus1",
            InitialState::Zero => "zero",
        }
    }
}

/// Closed-form three-measurement entropy sum for a reference preparation,
/// as a function of the sweep parameter `a ∈ (0, 1)`.
///
/// Endpoints are rejected: the curves are defined there only by limits.
pub fn theory_sum(state: InitialState, a: f64) -> Result<EntropyValue> {
    if !a.is_finite() || a <= 0.0 || a >= 1.0 {
        return Err(Error::parameter(
            "a",
            format!("must lie strictly inside (0, 1), got {a}"),
        ));
    }
    let h = binary_entropy(a)?;
    let bits = match state {
        InitialState::MinusOne => h.bits(),
        InitialState::Zero => h.bits() + 1.0,
    };
    Ok(EntropyValue { bits })
}

/// One labeled measurement with its observed outcome distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub label: String,
    pub distribution: ProbabilityDistribution,
}

impl MeasurementRecord {
    pub fn new(label: impl Into<String>, distribution: ProbabilityDistribution) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::parameter("label", "must be nonempty"));
        }
        Ok(Self { label, distribution })
    }
}

/// Ordered entropies of the measurements performed on one prepared state.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyVector {
    entries: Vec<EntropyValue>,
    state_label: String,
    parameter_a: Option<f64>,
}

impl EntropyVector {
    pub fn new(
        entries: Vec<EntropyValue>,
        state_label: impl Into<String>,
        parameter_a: Option<f64>,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::parameter("entries", "must be nonempty"));
        }
        if let Some(a) = parameter_a {
            if !a.is_finite() || a <= 0.0 || a >= 1.0 {
                return Err(Error::parameter(
                    "parameter_a",
                    format!("must lie strictly inside (0, 1), got {a}"),
                ));
            }
        }
        Ok(Self {
            entries,
            state_label: state_label.into(),
            parameter_a,
        })
    }

    /// Convenience constructor from raw bit values.
    pub fn from_bits(
        bits: &[f64],
        state_label: impl Into<String>,
        parameter_a: Option<f64>,
    ) -> Result<Self> {
        let entries = bits
            .iter()
            .map(|&b| EntropyValue::new(b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries, state_label, parameter_a)
    }

    pub fn entries(&self) -> &[EntropyValue] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn state_label(&self) -> &str {
        &self.state_label
    }

    pub fn parameter_a(&self) -> Option<f64> {
        self.parameter_a
    }

    /// Sum of squared entries, `‖y‖²`.
    pub fn norm_squared(&self) -> f64 {
        self.entries.iter().map(|e| e.bits() * e.bits()).sum()
    }

    /// Entry-wise scaling. With a negative factor (unclamped shrinkage)
    /// the output entries are negative pseudo-entropies; every other path
    /// in the crate keeps entries nonnegative.
    pub(crate) fn scaled(&self, factor: f64) -> EntropyVector {
        EntropyVector {
            entries: self
                .entries
                .iter()
                .map(|e| EntropyValue::raw(factor * e.bits()))
                .collect(),
            state_label: self.state_label.clone(),
            parameter_a: self.parameter_a,
        }
    }
}

/// Computes the entropy of each measurement record, preserving order.
pub fn entropy_vector(
    records: &[MeasurementRecord],
    state_label: impl Into<String>,
    parameter_a: Option<f64>,
) -> Result<EntropyVector> {
    if records.is_empty() {
        return Err(Error::parameter("records", "must be nonempty"));
    }
    for (i, record) in records.iter().enumerate() {
        if records[..i].iter().any(|r| r.label == record.label) {
            return Err(Error::DuplicateLabel(record.label.clone()));
        }
    }
    let entries = records
        .iter()
        .map(|r| shannon_entropy(&r.distribution))
        .collect();
    EntropyVector::new(entries, state_label, parameter_a)
}
