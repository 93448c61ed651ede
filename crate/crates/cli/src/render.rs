//! Deterministic text rendering of result tables.
//!
//! Numbers default to 6 significant digits; `full` switches to Rust's
//! shortest exact representation. Absent values print as `NA`.

use eshrink_core::bounds::BoundReport;
use eshrink_core::risk::RiskReport;

use crate::pipeline::{ComparisonRow, CurveRow, ShrinkRow};

/// Marker for values a row legitimately does not have.
pub const ABSENT: &str = "NA";

/// `%g`-style formatting to `sig` significant digits: plain decimal
/// notation in a readable exponent range, e-notation outside it, and no
/// trailing zeros either way.
pub fn format_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if exp < -4 || exp >= sig as i32 {
        let s = format!("{:.*e}", sig - 1, x);
        trim_exponential(&s)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_decimal(&s)
    }
}

fn trim_decimal(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn trim_exponential(s: &str) -> String {
    match s.split_once('e') {
        Some((mantissa, exponent)) => {
            let mantissa = if mantissa.contains('.') {
                mantissa.trim_end_matches('0').trim_end_matches('.')
            } else {
                mantissa
            };
            format!("{mantissa}e{exponent}")
        }
        None => s.to_string(),
    }
}

/// Default precision or full shortest-exact rendering.
pub fn format_value(x: f64, full: bool) -> String {
    if full {
        format!("{x}")
    } else {
        format_sig(x, 6)
    }
}

pub fn format_opt(x: Option<f64>, full: bool) -> String {
    match x {
        Some(v) => format_value(v, full),
        None => ABSENT.to_string(),
    }
}

fn csv_from_rows(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// `report` output; the header matches the comparison-row field names.
pub fn comparison_table(rows: &[ComparisonRow], full: bool) -> String {
    csv_from_rows(
        &[
            "state_label",
            "parameter_a",
            "sum_experimental",
            "sum_js",
            "sum_theory",
            "delta_raw",
            "delta_js",
        ],
        rows.iter()
            .map(|r| {
                vec![
                    r.state_label.clone(),
                    format_opt(r.parameter_a, full),
                    format_value(r.sum_experimental, full),
                    format_value(r.sum_js, full),
                    format_opt(r.sum_theory, full),
                    format_opt(r.delta_raw, full),
                    format_opt(r.delta_js, full),
                ]
            })
            .collect(),
    )
}

/// `entropy` output: one row per measurement plus a TOTAL row per record.
pub fn entropy_table(rows: &[(String, Option<f64>, String, f64)], full: bool) -> String {
    csv_from_rows(
        &["state_label", "parameter_a", "measurement_label", "entropy_bits"],
        rows.iter()
            .map(|(state, a, label, bits)| {
                vec![
                    state.clone(),
                    format_opt(*a, full),
                    label.clone(),
                    format_value(*bits, full),
                ]
            })
            .collect(),
    )
}

/// `shrink` output, one row per record.
pub fn shrink_table(rows: &[ShrinkRow], full: bool) -> String {
    csv_from_rows(
        &[
            "state_label",
            "parameter_a",
            "n",
            "sigma2_source",
            "sigma2_used",
            "factor",
            "clamped",
            "sum_raw",
            "sum_shrunk",
        ],
        rows.iter()
            .map(|r| {
                vec![
                    r.state_label.clone(),
                    format_opt(r.parameter_a, full),
                    r.result.raw.len().to_string(),
                    r.result.sigma2_source.label().to_string(),
                    format_value(r.result.sigma2_used, full),
                    format_value(r.result.factor, full),
                    r.result.clamped.to_string(),
                    format_value(r.result.sum_raw, full),
                    format_value(r.result.sum_shrunk, full),
                ]
            })
            .collect(),
    )
}

/// `bound` output, one row per record.
pub fn bound_table(rows: &[(String, BoundReport)], full: bool) -> String {
    csv_from_rows(
        &[
            "state_label",
            "n",
            "b_used",
            "von_neumann",
            "bound_value",
            "sum_raw",
            "sum_js",
            "slack_raw",
            "slack_js",
            "satisfied_raw",
            "satisfied_js",
        ],
        rows.iter()
            .map(|(state, r)| {
                vec![
                    state.clone(),
                    r.n.to_string(),
                    format_value(r.b_used, full),
                    format_value(r.von_neumann, full),
                    format_value(r.bound_value, full),
                    format_value(r.sum_raw, full),
                    format_value(r.sum_js, full),
                    format_value(r.slack_raw, full),
                    format_value(r.slack_js, full),
                    r.satisfied_raw.to_string(),
                    r.satisfied_js.to_string(),
                ]
            })
            .collect(),
    )
}

/// `curves` output: columns `a, sum_theory`.
pub fn curves_table(rows: &[CurveRow], full: bool) -> String {
    csv_from_rows(
        &["a", "sum_theory"],
        rows.iter()
            .map(|r| vec![format_value(r.a, full), format_value(r.sum_theory, full)])
            .collect(),
    )
}

/// `risk` output, one row per (cell, estimator).
pub fn risk_table(reports: &[RiskReport], full: bool) -> String {
    let mut rows = Vec::new();
    for report in reports {
        for e in &report.estimators {
            rows.push(vec![
                report.dim.to_string(),
                format_value(report.theta_norm, full),
                format_value(report.sigma, full),
                report.trials.to_string(),
                report.seed.to_string(),
                e.estimator.label().to_string(),
                format_value(e.mean_risk, full),
                format_value(e.std_error, full),
                format_value(e.ratio_vs_ls, full),
                format_value(e.mean_diff_vs_ls, full),
                format_value(e.se_diff_vs_ls, full),
            ]);
        }
    }
    csv_from_rows(
        &[
            "dim",
            "theta_norm",
            "sigma",
            "trials",
            "seed",
            "estimator",
            "risk",
            "std_error",
            "ratio_vs_ls",
            "diff_vs_ls",
            "diff_se",
        ],
        rows,
    )
}
