//! The analysis pipeline: entropy vectors → James-Stein shrinkage →
//! comparison against the closed-form theory curves.

use std::cmp::Ordering;

use eshrink_core::entropy::{entropy_vector, theory_sum, EntropyVector, InitialState};
use eshrink_core::error::Error as CoreError;
use eshrink_core::estimators::{james_stein, ShrinkageConfig, ShrinkageResult, Sigma2Mode};

use crate::format::PreparedRecord;

/// How σ² is resolved for each record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaResolution {
    /// One value for every record.
    Provided(f64),
    /// Reference mode when the record has a theory curve, sample variance
    /// otherwise. This is the resolution precedence used by default.
    Auto,
    /// Deviations from the theory curve; records without one fail.
    ForceReference,
    /// Deviations from the sample mean of the record's own entropies.
    ForceSample,
}

/// Which theory curve a record is compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TheorySelection {
    /// Match on the record's state label (`zero`, `minus1`); records with
    /// other labels or no `parameter_a` get no theory columns.
    Auto,
    /// Suppress theory columns entirely.
    None,
    /// Compare every record against this curve (still needs `parameter_a`).
    Force(InitialState),
}

/// Maps a record's state label onto a theory curve.
pub fn state_for_label(label: &str) -> Option<InitialState> {
    match label.to_ascii_lowercase().as_str() {
        "zero" | "0" => Some(InitialState::Zero),
        "minus1" | "minus_one" | "minus-1" | "-1" => Some(InitialState::MinusOne),
        _ => None,
    }
}

/// One output row. Theory columns are `None` when the record does not
/// participate in theory comparison; they are never guessed.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub state_label: String,
    pub parameter_a: Option<f64>,
    pub sum_experimental: f64,
    pub sum_js: f64,
    pub sum_theory: Option<f64>,
    pub delta_raw: Option<f64>,
    pub delta_js: Option<f64>,
}

/// A record the pipeline had to skip, with the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordIssue {
    pub index: usize,
    pub state_label: String,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct PipelineOutput {
    pub rows: Vec<ComparisonRow>,
    pub issues: Vec<RecordIssue>,
}

/// Detail of one shrinkage application, for the `shrink` table.
#[derive(Debug, Clone)]
pub struct ShrinkRow {
    pub index: usize,
    pub state_label: String,
    pub parameter_a: Option<f64>,
    pub result: ShrinkageResult,
}

fn theory_for(
    record: &PreparedRecord,
    selection: TheorySelection,
) -> Option<f64> {
    let state = match selection {
        TheorySelection::None => return None,
        TheorySelection::Auto => state_for_label(&record.state_label)?,
        TheorySelection::Force(state) => state,
    };
    let a = record.parameter_a?;
    theory_sum(state, a).ok().map(|h| h.bits())
}

fn shrink_record(
    record: &PreparedRecord,
    y: &EntropyVector,
    sigma: SigmaResolution,
    positive_part: bool,
    theory: Option<f64>,
) -> Result<ShrinkageResult, CoreError> {
    let n = y.len();
    let reference_vector = |total: f64| -> Result<EntropyVector, CoreError> {
        // Per-measurement theory is not specified by the curves; the
        // reference splits the predicted total evenly across measurements.
        EntropyVector::from_bits(&vec![total / n as f64; n], record.state_label.clone(), None)
    };
    let (mode, reference) = match sigma {
        SigmaResolution::Provided(v) => (Sigma2Mode::Provided(v), None),
        SigmaResolution::ForceSample => (Sigma2Mode::SampleVariance, None),
        SigmaResolution::ForceReference => match theory {
            Some(total) => (Sigma2Mode::FromReference, Some(reference_vector(total)?)),
            None => {
                return Err(CoreError::InvalidParameter {
                    name: "sigma-mode",
                    reason: "reference mode needs a theory curve (mapped state label and parameter_a)"
                        .into(),
                })
            }
        },
        SigmaResolution::Auto => match theory {
            Some(total) => (Sigma2Mode::FromReference, Some(reference_vector(total)?)),
            None => (Sigma2Mode::SampleVariance, None),
        },
    };
    let config = ShrinkageConfig {
        sigma2_mode: mode,
        positive_part,
    };
    james_stein(y, &config, reference.as_ref())
}

/// Runs shrinkage per record, returning detail rows plus skipped records.
pub fn run_shrinkage(
    records: &[PreparedRecord],
    sigma: SigmaResolution,
    positive_part: bool,
    theory: TheorySelection,
) -> (Vec<ShrinkRow>, Vec<RecordIssue>) {
    let mut rows = Vec::new();
    let mut issues = Vec::new();
    for record in records {
        let issue = |message: String| RecordIssue {
            index: record.index,
            state_label: record.state_label.clone(),
            message,
        };
        if record.measurements.len() < 3 {
            issues.push(issue(format!(
                "has {} measurements; James-Stein needs at least 3",
                record.measurements.len()
            )));
            continue;
        }
        let y = match entropy_vector(
            &record.measurements,
            record.state_label.clone(),
            record.parameter_a,
        ) {
            Ok(y) => y,
            Err(e) => {
                issues.push(issue(e.to_string()));
                continue;
            }
        };
        let theory_total = theory_for(record, theory);
        match shrink_record(record, &y, sigma, positive_part, theory_total) {
            Ok(result) => rows.push(ShrinkRow {
                index: record.index,
                state_label: record.state_label.clone(),
                parameter_a: record.parameter_a,
                result,
            }),
            Err(e) => issues.push(issue(e.to_string())),
        }
    }
    (rows, issues)
}

/// Full pipeline: per record, entropies → shrinkage → sums, with theory
/// columns where available. Rows are sorted by `(state_label,
/// parameter_a)`; records that cannot be processed become issues and the
/// pipeline continues.
pub fn run_pipeline(
    records: &[PreparedRecord],
    sigma: SigmaResolution,
    positive_part: bool,
    theory: TheorySelection,
) -> PipelineOutput {
    let (shrunk, issues) = run_shrinkage(records, sigma, positive_part, theory);
    let mut rows: Vec<ComparisonRow> = shrunk
        .into_iter()
        .map(|row| {
            let record = records
                .iter()
                .find(|r| r.index == row.index)
                .expect("shrink rows come from these records");
            let sum_theory = theory_for(record, theory);
            ComparisonRow {
                state_label: row.state_label,
                parameter_a: row.parameter_a,
                sum_experimental: row.result.sum_raw,
                sum_js: row.result.sum_shrunk,
                sum_theory,
                delta_raw: sum_theory.map(|t| row.result.sum_raw - t),
                delta_js: sum_theory.map(|t| row.result.sum_shrunk - t),
            }
        })
        .collect();
    rows.sort_by(comparison_order);
    PipelineOutput { rows, issues }
}

fn comparison_order(a: &ComparisonRow, b: &ComparisonRow) -> Ordering {
    a.state_label
        .cmp(&b.state_label)
        .then_with(|| match (a.parameter_a, b.parameter_a) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(x), Some(y)) => x.partial_cmp(&y).unwrap_or(Ordering::Equal),
        })
}

/// One sampled point of a theory curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub a: f64,
    pub sum_theory: f64,
}

/// Samples the closed-form curve on the given grid; every grid value must
/// lie strictly inside (0, 1).
pub fn emit_curves(state: InitialState, a_grid: &[f64]) -> Result<Vec<CurveRow>, CoreError> {
    a_grid
        .iter()
        .map(|&a| {
            Ok(CurveRow {
                a,
                sum_theory: theory_sum(state, a)?.bits(),
            })
        })
        .collect()
}

/// Evenly spaced interior grid `i / (points + 1)`, `i = 1..=points`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    let denom = (points + 1) as f64;
    (1..=points).map(|i| i as f64 / denom).collect()
}
