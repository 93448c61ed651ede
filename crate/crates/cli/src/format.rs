//! Experiment file ingestion and emission.
//!
//! The canonical format is a TOML document:
//!
//! ```toml
//! format_version = "1"
//!
//! [metadata]
//! source = "lab-42"
//!
//! [[record]]
//! state_label = "zero"
//! parameter_a = 0.5
//!
//! [[record.measurement]]
//! label = "M1"
//! probabilities = [0.5496, 0.446, 0.0044]
//! ```
//!
//! A flat CSV alternative is accepted for `.csv` paths, with columns
//! `state_label, parameter_a, measurement_label, outcome_index,
//! probability`; consecutive rows sharing `(state_label, parameter_a)`
//! form one record.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use eshrink_core::entropy::MeasurementRecord;
use eshrink_core::prob::ProbabilityDistribution;

/// The only schema version this build reads or writes.
pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentFile {
    pub format_version: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
    #[serde(rename = "record", default)]
    pub records: Vec<RecordSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordSpec {
    pub state_label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter_a: Option<f64>,
    #[serde(rename = "measurement", default)]
    pub measurements: Vec<MeasurementSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSpec {
    pub label: String,
    pub probabilities: Vec<f64>,
}

impl ExperimentFile {
    pub fn new(metadata: BTreeMap<String, String>, records: Vec<RecordSpec>) -> Self {
        Self {
            format_version: FORMAT_VERSION.to_string(),
            metadata,
            records,
        }
    }
}

/// One record with validated distributions, ready for the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedRecord {
    pub index: usize,
    pub state_label: String,
    pub parameter_a: Option<f64>,
    pub measurements: Vec<MeasurementRecord>,
}

/// Parse result plus any lenient renormalizations that occurred.
#[derive(Debug, Clone)]
pub struct LoadedExperiment {
    pub file: ExperimentFile,
    pub records: Vec<PreparedRecord>,
    pub notes: Vec<String>,
}

/// Reads, parses, and validates an experiment file. `.csv` paths take the
/// flat tabular schema; everything else is parsed as TOML.
pub fn load_experiment(path: &Path, sum_tolerance: f64) -> Result<LoadedExperiment> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let file = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        parse_experiment_csv(&text)
    } else {
        parse_experiment_toml(&text)
    }
    .with_context(|| format!("while parsing {}", path.display()))?;
    let (records, notes) = prepare(&file, sum_tolerance)?;
    Ok(LoadedExperiment {
        file,
        records,
        notes,
    })
}

pub fn parse_experiment_toml(text: &str) -> Result<ExperimentFile> {
    let file: ExperimentFile = toml::from_str(text)?;
    Ok(file)
}

#[derive(Debug, Deserialize)]
struct FlatRow {
    state_label: String,
    parameter_a: Option<f64>,
    measurement_label: String,
    outcome_index: usize,
    probability: f64,
}

pub fn parse_experiment_csv(text: &str) -> Result<ExperimentFile> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut records: Vec<RecordSpec> = Vec::new();
    for (i, row) in reader.deserialize::<FlatRow>().enumerate() {
        let line = i + 2; // header occupies line 1
        let row = row.with_context(|| format!("line {line}"))?;
        let start_record = match records.last() {
            Some(r) => r.state_label != row.state_label || r.parameter_a != row.parameter_a,
            None => true,
        };
        if start_record {
            records.push(RecordSpec {
                state_label: row.state_label.clone(),
                parameter_a: row.parameter_a,
                measurements: Vec::new(),
            });
        }
        let record = records.last_mut().expect("just ensured");
        let start_measurement = match record.measurements.last() {
            Some(m) => m.label != row.measurement_label,
            None => true,
        };
        if start_measurement {
            record.measurements.push(MeasurementSpec {
                label: row.measurement_label.clone(),
                probabilities: Vec::new(),
            });
        }
        let measurement = record.measurements.last_mut().expect("just ensured");
        if row.outcome_index != measurement.probabilities.len() {
            bail!(
                "line {line}: outcome_index {} for measurement `{}`, expected {}",
                row.outcome_index,
                row.measurement_label,
                measurement.probabilities.len()
            );
        }
        measurement.probabilities.push(row.probability);
    }
    Ok(ExperimentFile {
        format_version: FORMAT_VERSION.to_string(),
        metadata: BTreeMap::new(),
        records,
    })
}

/// Canonical TOML rendering; floats use the shortest exact representation
/// so that write → load round-trips structurally.
pub fn to_toml_string(file: &ExperimentFile) -> Result<String> {
    Ok(toml::to_string(file)?)
}

pub fn write_experiment(file: &ExperimentFile, path: &Path) -> Result<()> {
    std::fs::write(path, to_toml_string(file)?)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Semantic validation: schema version, nonempty records, unique
/// measurement labels, parameter range, and lenient distribution checks.
/// Renormalizations are reported as human-readable notes.
pub fn prepare(
    file: &ExperimentFile,
    sum_tolerance: f64,
) -> Result<(Vec<PreparedRecord>, Vec<String>)> {
    if file.format_version != FORMAT_VERSION {
        bail!(
            "unsupported format_version `{}` (this build reads `{FORMAT_VERSION}`)",
            file.format_version
        );
    }
    if file.records.is_empty() {
        bail!("experiment holds no records");
    }
    let mut prepared = Vec::with_capacity(file.records.len());
    let mut notes = Vec::new();
    for (index, record) in file.records.iter().enumerate() {
        let context = |what: &str| format!("record {index} (state `{}`): {what}", record.state_label);
        if record.measurements.is_empty() {
            bail!("{}", context("no measurements"));
        }
        if let Some(a) = record.parameter_a {
            if !a.is_finite() || a <= 0.0 || a >= 1.0 {
                bail!("{}", context(&format!("parameter_a {a} outside (0, 1)")));
            }
        }
        let mut measurements = Vec::with_capacity(record.measurements.len());
        for m in &record.measurements {
            if record
                .measurements
                .iter()
                .filter(|other| other.label == m.label)
                .count()
                > 1
            {
                bail!("{}", context(&format!("duplicate measurement label `{}`", m.label)));
            }
            let (dist, note) =
                ProbabilityDistribution::new_lenient(m.probabilities.clone(), sum_tolerance)
                    .map_err(|e| {
                        anyhow::anyhow!("{}", context(&format!("measurement `{}`: {e}", m.label)))
                    })?;
            if let Some(note) = note {
                notes.push(format!(
                    "record {index} measurement `{}`: probabilities summed to {}, renormalized",
                    m.label, note.original_sum
                ));
            }
            measurements.push(
                MeasurementRecord::new(m.label.clone(), dist)
                    .map_err(|e| anyhow::anyhow!("{}", context(&e.to_string())))?,
            );
        }
        prepared.push(PreparedRecord {
            index,
            state_label: record.state_label.clone(),
            parameter_a: record.parameter_a,
            measurements,
        });
    }
    Ok((prepared, notes))
}

/// Density-matrix file: `dim`, row-major `re`, and optional row-major `im`.
#[derive(Debug, Deserialize)]
struct DensityMatrixSpec {
    dim: usize,
    re: Vec<f64>,
    #[serde(default)]
    im: Option<Vec<f64>>,
}

pub fn load_density_matrix(path: &Path) -> Result<eshrink_core::DensityMatrix> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let spec: DensityMatrixSpec =
        toml::from_str(&text).with_context(|| format!("while parsing {}", path.display()))?;
    Ok(eshrink_core::DensityMatrix::from_parts(
        spec.dim,
        &spec.re,
        spec.im.as_deref(),
    )?)
}
