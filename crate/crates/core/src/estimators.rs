//! Least-squares and James-Stein estimation of entropy vectors.
//!
//! The shrinkage factor is `1 - (n-2)σ² / ‖y‖²`, applied to the whole
//! observation vector. Positive-part clamping (factor floored at zero) is
//! the default; the unclamped factor is available for fidelity to the
//! plain formula.

use crate::entropy::EntropyVector;
use crate::error::{Error, Result};

/// How σ² is obtained when shrinking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sigma2Mode {
    /// Use this value directly.
    Provided(f64),
    /// Mean squared deviation from a supplied reference vector.
    FromReference,
    /// Mean squared deviation from the sample mean of the vector itself.
    SampleVariance,
}

/// Where a resolved σ² came from; recorded in every shrinkage result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sigma2Source {
    Provided,
    Reference,
    Sample,
}

impl Sigma2Source {
    pub fn label(self) -> &'static str {
        match self {
            Sigma2Source::Provided => "provided",
            Sigma2Source::Reference => "reference",
            Sigma2Source::Sample => "sample",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkageConfig {
    pub sigma2_mode: Sigma2Mode,
    /// Floor the factor at zero instead of letting it go negative and
    /// flip signs. Defaults to on in the convenience constructors.
    pub positive_part: bool,
}

impl ShrinkageConfig {
    pub fn provided(sigma2: f64) -> Self {
        Self {
            sigma2_mode: Sigma2Mode::Provided(sigma2),
            positive_part: true,
        }
    }

    pub fn from_reference() -> Self {
        Self {
            sigma2_mode: Sigma2Mode::FromReference,
            positive_part: true,
        }
    }

    pub fn sample_variance() -> Self {
        Self {
            sigma2_mode: Sigma2Mode::SampleVariance,
            positive_part: true,
        }
    }
}

/// A resolved shrinkage factor plus whether clamping fired.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JsFactor {
    pub factor: f64,
    pub clamped: bool,
}

/// Full output of one shrinkage application.
#[derive(Debug, Clone, PartialEq)]
pub struct ShrinkageResult {
    pub raw: EntropyVector,
    pub factor: f64,
    pub shrunk: EntropyVector,
    pub sum_raw: f64,
    pub sum_shrunk: f64,
    pub sigma2_used: f64,
    pub sigma2_source: Sigma2Source,
    pub clamped: bool,
}

/// The identity estimator: the best estimate of each parameter is the
/// observation itself.
pub fn least_squares(y: &EntropyVector) -> EntropyVector {
    y.clone()
}

/// Total entropy across measurements, `Σ_k y_k`.
pub fn sum_entropies(y: &EntropyVector) -> f64 {
    y.entries().iter().map(|e| e.bits()).sum()
}

/// Shrinkage factor `1 - (n-2)σ² / ‖y‖²`.
///
/// Rejects vectors shorter than three components (the inadmissibility
/// threshold) and the zero vector (shrinking it is a caller decision).
pub fn js_factor(y: &EntropyVector, sigma2: f64, positive_part: bool) -> Result<JsFactor> {
    let n = y.len();
    if n < 3 {
        return Err(Error::TooFewComponents { n });
    }
    if !sigma2.is_finite() || sigma2 < 0.0 {
        return Err(Error::parameter(
            "sigma2",
            format!("must be finite and nonnegative, got {sigma2}"),
        ));
    }
    let norm2 = y.norm_squared();
    if norm2 == 0.0 {
        return Err(Error::DegenerateInput(
            "cannot shrink the zero vector (‖y‖² = 0)".into(),
        ));
    }
    let raw = 1.0 - ((n - 2) as f64) * sigma2 / norm2;
    if positive_part && raw < 0.0 {
        Ok(JsFactor {
            factor: 0.0,
            clamped: true,
        })
    } else {
        Ok(JsFactor {
            factor: raw,
            clamped: false,
        })
    }
}

/// Mean squared deviation of `y` from `reference`, `(1/n) Σ (y_k - r_k)²`.
///
/// The divisor is `n` and no square root is taken: the shrinkage formula
/// consumes the squared scale directly.
pub fn estimate_sigma2(y: &EntropyVector, reference: &EntropyVector) -> Result<f64> {
    if y.len() != reference.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: reference.len(),
        });
    }
    let n = y.len() as f64;
    let ss: f64 = y
        .entries()
        .iter()
        .zip(reference.entries())
        .map(|(a, b)| {
            let d = a.bits() - b.bits();
            d * d
        })
        .sum();
    Ok(ss / n)
}

fn sample_variance(y: &EntropyVector) -> f64 {
    let n = y.len() as f64;
    let mean = sum_entropies(y) / n;
    y.entries()
        .iter()
        .map(|e| {
            let d = e.bits() - mean;
            d * d
        })
        .sum::<f64>()
        / n
}

/// Applies James-Stein shrinkage to an entropy vector.
///
/// σ² is resolved per `config.sigma2_mode`; `FromReference` requires a
/// reference vector of equal length.
pub fn james_stein(
    y: &EntropyVector,
    config: &ShrinkageConfig,
    reference: Option<&EntropyVector>,
) -> Result<ShrinkageResult> {
    let (sigma2, source) = match config.sigma2_mode {
        Sigma2Mode::Provided(v) => {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::parameter(
                    "sigma2",
                    format!("must be finite and nonnegative, got {v}"),
                ));
            }
            (v, Sigma2Source::Provided)
        }
        Sigma2Mode::FromReference => {
            let reference = reference.ok_or_else(|| {
                Error::parameter("reference", "required when sigma2_mode is FromReference")
            })?;
            (estimate_sigma2(y, reference)?, Sigma2Source::Reference)
        }
        Sigma2Mode::SampleVariance => (sample_variance(y), Sigma2Source::Sample),
    };
    let js = js_factor(y, sigma2, config.positive_part)?;
    let shrunk = y.scaled(js.factor);
    let sum_raw = sum_entropies(y);
    Ok(ShrinkageResult {
        raw: y.clone(),
        factor: js.factor,
        shrunk,
        sum_raw,
        sum_shrunk: js.factor * sum_raw,
        sigma2_used: sigma2,
        sigma2_source: source,
        clamped: js.clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ev(bits: &[f64]) -> EntropyVector {
        EntropyVector::from_bits(bits, "test", None).unwrap()
    }

    #[test]
    fn least_squares_is_identity() {
        for bits in [&[1.0286][..], &[0.0, 0.0, 0.0], &[1.0, 2.0, 3.0]] {
            let y = ev(bits);
            assert_eq!(least_squares(&y), y);
        }
    }

    #[test]
    fn sum_entropies_examples() {
        assert_eq!(sum_entropies(&ev(&[1.0, 1.0, 1.0])), 3.0);
        let h = 1.028587802408798;
        assert_abs_diff_eq!(sum_entropies(&ev(&[h, h, h])), 3.0 * h, epsilon = 1e-12);
        assert_abs_diff_eq!(sum_entropies(&ev(&[h, h, h])), 3.0858, epsilon = 5e-4);
    }

    #[test]
    fn empty_vector_rejected_at_construction() {
        assert!(EntropyVector::from_bits(&[], "s", None).is_err());
    }

    #[test]
    fn js_factor_unit_vector() {
        let js = js_factor(&ev(&[1.0, 1.0, 1.0]), 1.0, true).unwrap();
        assert_abs_diff_eq!(js.factor, 2.0 / 3.0, epsilon = 1e-15);
        assert!(!js.clamped);
    }

    #[test]
    fn js_factor_clamps_under_large_noise() {
        let js = js_factor(&ev(&[1.0, 1.0, 1.0]), 10.0, true).unwrap();
        assert_eq!(js.factor, 0.0);
        assert!(js.clamped);
        // Unclamped mode keeps the negative factor of the plain formula.
        let raw = js_factor(&ev(&[1.0, 1.0, 1.0]), 10.0, false).unwrap();
        assert_abs_diff_eq!(raw.factor, 1.0 - 10.0 / 3.0, epsilon = 1e-12);
        assert!(!raw.clamped);
    }

    #[test]
    fn js_factor_five_components() {
        let js = js_factor(&ev(&[3.0, 4.0, 0.0, 0.0, 0.0]), 2.0, true).unwrap();
        assert_abs_diff_eq!(js.factor, 0.76, epsilon = 1e-12);
        assert!(!js.clamped);
    }

    #[test]
    fn js_factor_rejects_small_dimension() {
        assert!(matches!(
            js_factor(&ev(&[1.0, 1.0]), 1.0, true),
            Err(Error::TooFewComponents { n: 2 })
        ));
    }

    #[test]
    fn js_factor_rejects_zero_vector() {
        assert!(matches!(
            js_factor(&ev(&[0.0, 0.0, 0.0]), 1.0, true),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn james_stein_provided_sigma() {
        let r = james_stein(&ev(&[1.0, 1.0, 1.0]), &ShrinkageConfig::provided(1.0), None).unwrap();
        assert_abs_diff_eq!(r.factor, 2.0 / 3.0, epsilon = 1e-15);
        for e in r.shrunk.entries() {
            assert_abs_diff_eq!(e.bits(), 2.0 / 3.0, epsilon = 1e-15);
        }
        assert_eq!(r.sum_shrunk, 2.0);
        assert_eq!(r.sigma2_source, Sigma2Source::Provided);
    }

    #[test]
    fn james_stein_zero_noise_is_identity() {
        let y = ev(&[1.0, 1.0, 1.0]);
        let r = james_stein(&y, &ShrinkageConfig::provided(0.0), None).unwrap();
        assert_eq!(r.factor, 1.0);
        assert_eq!(r.shrunk, y);
        assert_eq!(r.sum_shrunk, r.sum_raw);
    }

    #[test]
    fn james_stein_from_reference() {
        let y = ev(&[1.02, 1.01, 0.99]);
        let reference = ev(&[1.0, 1.0, 1.0]);
        let r = james_stein(&y, &ShrinkageConfig::from_reference(), Some(&reference)).unwrap();
        // Arithmetic oracle: σ² = (0.02² + 0.01² + 0.01²)/3 = 2e-4,
        // factor = 1 - 2e-4 / (1.02² + 1.01² + 0.99²).
        let norm2 = 1.02f64 * 1.02 + 1.01 * 1.01 + 0.99 * 0.99;
        let expected_factor = 1.0 - 2e-4 / norm2;
        assert_abs_diff_eq!(r.sigma2_used, 2e-4, epsilon = 1e-15);
        assert_abs_diff_eq!(r.factor, expected_factor, epsilon = 1e-12);
        assert_abs_diff_eq!(r.factor, 0.999934, epsilon = 1e-6);
        assert_abs_diff_eq!(r.sum_shrunk, 3.0198014, epsilon = 1e-6);
        assert_eq!(r.sigma2_source, Sigma2Source::Reference);
    }

    #[test]
    fn james_stein_reference_length_mismatch() {
        let y = ev(&[1.0, 1.0, 1.0]);
        let reference = ev(&[1.0, 1.0]);
        assert!(matches!(
            james_stein(&y, &ShrinkageConfig::from_reference(), Some(&reference)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn james_stein_missing_reference() {
        assert!(james_stein(&ev(&[1.0, 1.0, 1.0]), &ShrinkageConfig::from_reference(), None).is_err());
    }

    #[test]
    fn estimate_sigma2_examples() {
        let y = ev(&[1.0, 2.0, 3.0]);
        assert_eq!(estimate_sigma2(&y, &y).unwrap(), 0.0);
        assert_eq!(
            estimate_sigma2(&ev(&[2.0, 2.0, 2.0]), &ev(&[1.0, 1.0, 1.0])).unwrap(),
            1.0
        );
        assert_abs_diff_eq!(
            estimate_sigma2(&ev(&[1.02, 1.01, 0.99]), &ev(&[1.0, 1.0, 1.0])).unwrap(),
            2e-4,
            epsilon = 1e-15
        );
    }

    #[test]
    fn estimate_sigma2_length_mismatch() {
        assert!(estimate_sigma2(&ev(&[1.0]), &ev(&[1.0, 2.0])).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn entry() -> impl Strategy<Value = f64> {
            0.0..4.0f64
        }

        fn vector(min_len: usize) -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(entry(), min_len..8)
        }

        proptest! {
            #[test]
            fn shrunk_is_scalar_multiple(bits in vector(3), sigma2 in 0.0..2.0f64) {
                prop_assume!(bits.iter().any(|&b| b > 1e-6));
                let y = ev(&bits);
                let r = james_stein(&y, &ShrinkageConfig::provided(sigma2), None).unwrap();
                for (s, raw) in r.shrunk.entries().iter().zip(y.entries()) {
                    prop_assert!((s.bits() - r.factor * raw.bits()).abs() < 1e-12);
                }
                prop_assert!((r.sum_shrunk - r.factor * r.sum_raw).abs() <= 1e-12 * r.sum_raw.abs().max(1.0));
            }

            #[test]
            fn monotone_sum_under_positive_part(bits in vector(3), sigma2 in 0.0..2.0f64) {
                prop_assume!(bits.iter().any(|&b| b > 1e-6));
                let y = ev(&bits);
                let r = james_stein(&y, &ShrinkageConfig::provided(sigma2), None).unwrap();
                prop_assert!(r.factor >= 0.0 && r.factor <= 1.0);
                prop_assert!(r.sum_shrunk <= r.sum_raw + 1e-12);
                if r.factor == 1.0 {
                    prop_assert!((r.sum_shrunk - r.sum_raw).abs() < 1e-12);
                }
            }

            #[test]
            fn shrinkage_weakens_as_signal_grows(bits in vector(3), sigma2 in 0.0..2.0f64, c in 1.0..10.0f64) {
                prop_assume!(bits.iter().any(|&b| b > 1e-6));
                let y = ev(&bits);
                let scaled_bits: Vec<f64> = bits.iter().map(|b| b * c).collect();
                let yc = ev(&scaled_bits);
                let f1 = js_factor(&y, sigma2, true).unwrap().factor;
                let f2 = js_factor(&yc, sigma2, true).unwrap().factor;
                prop_assert!(f2 >= f1 - 1e-12);
            }

            #[test]
            fn sigma2_nonnegative_and_zero_iff_equal(a in vector(1), shift in -0.5..0.5f64) {
                let y = ev(&a);
                let shifted: Vec<f64> = a.iter().map(|v| (v + shift).max(0.0)).collect();
                let r = ev(&shifted);
                let s2 = estimate_sigma2(&y, &r).unwrap();
                prop_assert!(s2 >= 0.0);
                if y == r {
                    prop_assert!(s2 == 0.0);
                }
            }
        }
    }
}
