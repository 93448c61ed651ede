//! Multi-observable entropic lower bounds.
//!
//! The bound checked here is `Σ_k H(M_k) ≥ -log2 b + (n-1) S(ρ)`, where
//! `b` is the maximal squared overlap between vectors of distinct
//! measurement bases and `S(ρ)` is the von Neumann entropy of the state.
//! Reports carry the entropy sum both as observed and after James-Stein
//! shrinkage.

use crate::entropy::{EntropyVector, ZERO_PROBABILITY_CUTOFF};
use crate::error::{Error, Result};
use crate::estimators::{js_factor, sum_entropies};
use crate::quantum::{DensityMatrix, MeasurementBasis};

/// A sum satisfies the bound when its slack is at least `-SLACK_TOLERANCE`.
pub const SLACK_TOLERANCE: f64 = 1e-9;

/// Von Neumann entropy `S(ρ) = -Σ λ_i log2 λ_i` in bits, over the
/// (clamped) spectrum of the state.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|&l| l > ZERO_PROBABILITY_CUTOFF)
        .map(|l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Maximal squared overlap `max |⟨u|v⟩|²` over all vector pairs drawn
/// from distinct bases. This pairwise convention reduces to the standard
/// two-measurement overlap constant for `n = 2`.
pub fn max_overlap_b(bases: &[MeasurementBasis]) -> Result<f64> {
    if bases.len() < 2 {
        return Err(Error::parameter(
            "bases",
            format!("need at least 2 bases, got {}", bases.len()),
        ));
    }
    let dim = bases[0].dim();
    for basis in bases {
        if basis.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: basis.dim(),
            });
        }
    }
    let mut max = 0.0f64;
    for (r, lhs) in bases.iter().enumerate() {
        for rhs in bases.iter().skip(r + 1) {
            for u in lhs.vectors() {
                for v in rhs.vectors() {
                    max = max.max(u.dotc(v).norm_sqr());
                }
            }
        }
    }
    Ok(max)
}

/// The lower bound `-log2 b + (n-1) S(ρ)` for `n ≥ 2` measurements.
pub fn liu_bound(b: f64, n: usize, rho: &DensityMatrix) -> Result<f64> {
    if !b.is_finite() || b <= 0.0 || b > 1.0 {
        return Err(Error::parameter(
            "b",
            format!("overlap constant must lie in (0, 1], got {b}"),
        ));
    }
    if n < 2 {
        return Err(Error::parameter(
            "n",
            format!("bound is defined for n ≥ 2 measurements, got {n}"),
        ));
    }
    Ok(-b.log2() + (n - 1) as f64 * von_neumann_entropy(rho))
}

/// How the shrinkage-adjusted entropy sum is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JsSumMode {
    /// One factor from the whole vector: `(1 - (n-2)σ²/‖y‖²) Σ_k y_k`,
    /// positive-part clamped. Default, and the only mode used in reports.
    VectorShrinkage,
    /// The printed double sum `Σ_k Σ_r (1 - (n-2)σ²/|y_r|) y_k`, kept for
    /// inspection; it multiplies the total by n and uses per-component
    /// denominators, so it disagrees with the vector form.
    LiteralDoubleSum,
}

/// Shrinkage-adjusted total entropy under the chosen mode. Requires
/// `n ≥ 3` like every shrinkage path.
pub fn js_adjusted_sum(y: &EntropyVector, sigma2: f64, mode: JsSumMode) -> Result<f64> {
    let n = y.len();
    if n < 3 {
        return Err(Error::TooFewComponents { n });
    }
    match mode {
        JsSumMode::VectorShrinkage => {
            let js = js_factor(y, sigma2, true)?;
            Ok(js.factor * sum_entropies(y))
        }
        JsSumMode::LiteralDoubleSum => {
            if !sigma2.is_finite() || sigma2 < 0.0 {
                return Err(Error::parameter(
                    "sigma2",
                    format!("must be finite and nonnegative, got {sigma2}"),
                ));
            }
            let bits: Vec<f64> = y.entries().iter().map(|e| e.bits()).collect();
            if let Some(pos) = bits.iter().position(|&h| h.abs() == 0.0) {
                return Err(Error::DegenerateInput(format!(
                    "literal double sum divides by |H(M_{pos})| = 0"
                )));
            }
            let scale = (n - 2) as f64 * sigma2;
            let mut total = 0.0;
            for &h_k in &bits {
                for &h_r in &bits {
                    total += (1.0 - scale / h_r.abs()) * h_k;
                }
            }
            Ok(total)
        }
    }
}

/// Verdict of one bound check.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub bound_value: f64,
    pub b_used: f64,
    pub n: usize,
    pub von_neumann: f64,
    pub sum_raw: f64,
    pub sum_js: f64,
    pub satisfied_raw: bool,
    pub satisfied_js: bool,
    pub slack_raw: f64,
    pub slack_js: f64,
}

/// Builds a report directly from an overlap constant.
///
/// The shrinkage-adjusted sum uses [`JsSumMode::VectorShrinkage`]. For
/// `n < 3` the adjusted sum is defined only at σ² = 0 (where it equals
/// the raw sum); any other σ² propagates the dimension error.
pub fn bound_report(
    y: &EntropyVector,
    b: f64,
    rho: &DensityMatrix,
    sigma2: f64,
) -> Result<BoundReport> {
    let n = y.len();
    let bound_value = liu_bound(b, n, rho)?;
    let sum_raw = sum_entropies(y);
    let sum_js = if n >= 3 {
        js_adjusted_sum(y, sigma2, JsSumMode::VectorShrinkage)?
    } else if sigma2 == 0.0 {
        sum_raw
    } else {
        return Err(Error::TooFewComponents { n });
    };
    let slack_raw = sum_raw - bound_value;
    let slack_js = sum_js - bound_value;
    Ok(BoundReport {
        bound_value,
        b_used: b,
        n,
        von_neumann: von_neumann_entropy(rho),
        sum_raw,
        sum_js,
        satisfied_raw: slack_raw >= -SLACK_TOLERANCE,
        satisfied_js: slack_js >= -SLACK_TOLERANCE,
        slack_raw,
        slack_js,
    })
}

/// Checks the relation for a measured entropy vector against its
/// measurement set and state, resolving `b` from the bases unless
/// overridden.
pub fn check_relation(
    y: &EntropyVector,
    bases: &[MeasurementBasis],
    rho: &DensityMatrix,
    sigma2: f64,
    b_override: Option<f64>,
) -> Result<BoundReport> {
    if y.len() != bases.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: bases.len(),
        });
    }
    for basis in bases {
        if basis.dim() != rho.dim() {
            return Err(Error::DimensionMismatch {
                left: basis.dim(),
                right: rho.dim(),
            });
        }
    }
    let b = match b_override {
        Some(b) => b,
        None => max_overlap_b(bases)?,
    };
    bound_report(y, b, rho, sigma2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::binary_entropy;
    use crate::quantum::{presets, StateVector};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn pure_qubit_zero() -> DensityMatrix {
        DensityMatrix::pure(&StateVector::basis_state(2, 0).unwrap())
    }

    #[test]
    fn von_neumann_pure_is_zero() {
        assert_eq!(von_neumann_entropy(&pure_qubit_zero()), 0.0);
    }

    #[test]
    fn von_neumann_maximally_mixed_qubit_is_one() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&rho), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn von_neumann_matches_binary_entropy_of_spectrum() {
        let rho = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
        let oracle = binary_entropy(0.25).unwrap().bits();
        assert_abs_diff_eq!(von_neumann_entropy(&rho), oracle, epsilon = 1e-10);
    }

    #[test]
    fn max_overlap_identical_bases_is_one() {
        let bases = vec![presets::pauli_z(), presets::pauli_z()];
        assert_abs_diff_eq!(max_overlap_b(&bases).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn max_overlap_unbiased_pair_is_half() {
        let bases = vec![presets::pauli_z(), presets::pauli_x()];
        assert_abs_diff_eq!(max_overlap_b(&bases).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn max_overlap_three_mubs_brute_force() {
        // Independent enumeration of all 12 cross-basis pairs.
        let bases = presets::pauli_mubs();
        let mut expected = 0.0f64;
        let mut pairs = 0;
        for r in 0..bases.len() {
            for s in (r + 1)..bases.len() {
                for u in bases[r].vectors() {
                    for v in bases[s].vectors() {
                        let overlap: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                        expected = expected.max(overlap.norm_sqr());
                        pairs += 1;
                    }
                }
            }
        }
        assert_eq!(pairs, 12);
        assert_abs_diff_eq!(expected, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(max_overlap_b(&bases).unwrap(), expected, epsilon = 1e-15);
    }

    #[test]
    fn max_overlap_rejects_mismatched_dims() {
        let bases = vec![presets::pauli_z(), presets::sweep_basis_m2()];
        assert!(matches!(
            max_overlap_b(&bases),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn max_overlap_needs_two_bases() {
        assert!(max_overlap_b(&[presets::pauli_z()]).is_err());
    }

    #[test]
    fn liu_bound_values() {
        let pure = pure_qubit_zero();
        assert_abs_diff_eq!(liu_bound(0.5, 3, &pure).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(liu_bound(1.0, 2, &pure).unwrap(), 0.0, epsilon = 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert_abs_diff_eq!(liu_bound(0.5, 3, &mixed).unwrap(), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn liu_bound_monotonicity() {
        let rho = DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap();
        let s = von_neumann_entropy(&rho);
        let mut last = f64::INFINITY;
        for b in [0.1, 0.3, 0.5, 0.9, 1.0] {
            let bound = liu_bound(b, 3, &rho).unwrap();
            assert!(bound < last);
            last = bound;
        }
        for n in 2..6 {
            let lo = liu_bound(0.5, n, &rho).unwrap();
            let hi = liu_bound(0.5, n + 1, &rho).unwrap();
            assert_abs_diff_eq!(hi - lo, s, epsilon = 1e-12);
        }
    }

    #[test]
    fn liu_bound_rejects_bad_b() {
        let rho = pure_qubit_zero();
        assert!(liu_bound(0.0, 3, &rho).is_err());
        assert!(liu_bound(1.5, 3, &rho).is_err());
        assert!(liu_bound(-0.5, 3, &rho).is_err());
    }

    #[test]
    fn js_adjusted_sum_vector_mode() {
        let y = EntropyVector::from_bits(&[1.0, 1.0, 1.0], "s", None).unwrap();
        assert_abs_diff_eq!(
            js_adjusted_sum(&y, 1.0, JsSumMode::VectorShrinkage).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            js_adjusted_sum(&y, 0.0, JsSumMode::VectorShrinkage).unwrap(),
            sum_entropies(&y),
            epsilon = 1e-15
        );
    }

    #[test]
    fn js_adjusted_sum_literal_mode() {
        let y = EntropyVector::from_bits(&[1.0, 1.0, 1.0], "s", None).unwrap();
        // Direct evaluation of the double sum: nine terms, each
        // (1 - 1·1/1)·1 = 0.
        let mut oracle = 0.0;
        for _k in 0..3 {
            for _r in 0..3 {
                oracle += (1.0 - 1.0 / 1.0) * 1.0;
            }
        }
        assert_eq!(oracle, 0.0);
        assert_abs_diff_eq!(
            js_adjusted_sum(&y, 1.0, JsSumMode::LiteralDoubleSum).unwrap(),
            oracle,
            epsilon = 1e-12
        );
    }

    #[test]
    fn js_adjusted_sum_literal_rejects_zero_entry() {
        let y = EntropyVector::from_bits(&[1.0, 0.0, 1.0], "s", None).unwrap();
        assert!(matches!(
            js_adjusted_sum(&y, 0.5, JsSumMode::LiteralDoubleSum),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn js_adjusted_sum_rejects_small_n() {
        let y = EntropyVector::from_bits(&[1.0, 1.0], "s", None).unwrap();
        assert!(matches!(
            js_adjusted_sum(&y, 0.5, JsSumMode::VectorShrinkage),
            Err(Error::TooFewComponents { n: 2 })
        ));
    }

    #[test]
    fn check_relation_trivial_bound() {
        // b = 1 makes the pure-state bound zero, satisfied by any sum.
        let y = EntropyVector::from_bits(&[0.2, 0.9], "s", None).unwrap();
        let report = check_relation(
            &y,
            &[presets::pauli_z(), presets::pauli_x()],
            &pure_qubit_zero(),
            0.0,
            Some(1.0),
        )
        .unwrap();
        assert_abs_diff_eq!(report.bound_value, 0.0, epsilon = 1e-12);
        assert!(report.satisfied_raw);
        assert_eq!(report.sum_js, report.sum_raw);
    }

    #[test]
    fn check_relation_zero_sigma_keeps_sums_equal() {
        let y = EntropyVector::from_bits(&[1.0, 1.0, 0.5], "s", None).unwrap();
        let report = check_relation(
            &y,
            &presets::pauli_mubs(),
            &pure_qubit_zero(),
            0.0,
            None,
        )
        .unwrap();
        assert_abs_diff_eq!(report.b_used, 0.5, epsilon = 1e-12);
        assert_eq!(report.sum_js, report.sum_raw);
        assert_eq!(report.satisfied_js, report.satisfied_raw);
    }

    #[test]
    fn check_relation_rejects_mismatched_lengths() {
        let y = EntropyVector::from_bits(&[1.0, 1.0], "s", None).unwrap();
        assert!(matches!(
            check_relation(&y, &presets::pauli_mubs(), &pure_qubit_zero(), 0.0, None),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn report_slack_arithmetic() {
        let y = EntropyVector::from_bits(&[1.0, 1.0, 1.0], "s", None).unwrap();
        let report = bound_report(&y, 0.5, &pure_qubit_zero(), 0.25).unwrap();
        assert_abs_diff_eq!(report.slack_raw, report.sum_raw - report.bound_value, epsilon = 1e-15);
        assert_abs_diff_eq!(report.slack_js, report.sum_js - report.bound_value, epsilon = 1e-15);
        assert!(report.sum_js <= report.sum_raw);
    }
}
