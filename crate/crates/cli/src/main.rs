use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand, ValueEnum};

use eshrink_cli::format::{
    load_density_matrix, load_experiment, to_toml_string, write_experiment, ExperimentFile,
    MeasurementSpec, RecordSpec,
};
use eshrink_cli::pipeline::{
    emit_curves, run_pipeline, run_shrinkage, uniform_grid, SigmaResolution, TheorySelection,
};
use eshrink_cli::render;
use eshrink_core::bounds::{bound_report, check_relation, BoundReport};
use eshrink_core::entropy::{entropy_vector, shannon_entropy, InitialState};
use eshrink_core::prob::DEFAULT_LENIENT_SUM_TOLERANCE;
use eshrink_core::quantum::{presets, DensityMatrix, MeasurementBasis, StateVector};
use eshrink_core::risk::{simulate_risk, sweep_cell_seed, EstimatorKind, RiskTrialConfig};
use eshrink_core::sim::{generate_experiment, NoiseModel};

/// Measurement-entropy analysis: entropy sums, James-Stein shrinkage,
/// entropic lower bounds, simulation, and Monte-Carlo risk checks.
#[derive(Parser)]
#[command(name = "eshrink", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    Zero,
    Minus1,
}

impl From<StateArg> for InitialState {
    fn from(value: StateArg) -> Self {
        match value {
            StateArg::Zero => InitialState::Zero,
            StateArg::Minus1 => InitialState::MinusOne,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SigmaModeArg {
    /// Reference mode where a theory curve exists, sample variance otherwise.
    Auto,
    /// Deviations from the theory curve (requires mapped state + parameter_a).
    Reference,
    /// Deviations from the sample mean of each record's entropies.
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoryArg {
    /// Match records by state label.
    Auto,
    /// Emit no theory columns.
    None,
    /// Compare every record against the `zero` curve.
    Zero,
    /// Compare every record against the `minus1` curve.
    Minus1,
}

impl From<TheoryArg> for TheorySelection {
    fn from(value: TheoryArg) -> Self {
        match value {
            TheoryArg::Auto => TheorySelection::Auto,
            TheoryArg::None => TheorySelection::None,
            TheoryArg::Zero => TheorySelection::Force(InitialState::Zero),
            TheoryArg::Minus1 => TheorySelection::Force(InitialState::MinusOne),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BasesArg {
    /// The three mutually unbiased qubit bases Z, X, Y.
    Pauli,
    /// The dim-3 sweep family at each record's parameter_a.
    Sweep,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum EstimatorArg {
    Ls,
    Js,
    #[value(name = "js+", alias = "jspp")]
    JsPlus,
}

impl From<EstimatorArg> for EstimatorKind {
    fn from(value: EstimatorArg) -> Self {
        match value {
            EstimatorArg::Ls => EstimatorKind::LeastSquares,
            EstimatorArg::Js => EstimatorKind::JamesStein,
            EstimatorArg::JsPlus => EstimatorKind::JamesSteinPositivePart,
        }
    }
}

#[derive(Subcommand)]
enum Commands {
    /// Per-measurement Shannon entropies and per-record totals.
    Entropy {
        file: PathBuf,
        /// Lenient sum-to-one tolerance for empirical probabilities.
        #[arg(long, default_value_t = DEFAULT_LENIENT_SUM_TOLERANCE)]
        tolerance: f64,
        /// Print full float precision instead of 6 significant digits.
        #[arg(long)]
        full_precision: bool,
    },
    /// James-Stein shrinkage of each record's entropy vector.
    Shrink {
        file: PathBuf,
        /// Use this σ² directly (overrides --sigma-mode).
        #[arg(long, conflicts_with = "sigma_mode")]
        sigma2: Option<f64>,
        #[arg(long, value_enum, default_value_t = SigmaModeArg::Auto)]
        sigma_mode: SigmaModeArg,
        /// Allow the factor to go negative instead of clamping at zero.
        #[arg(long)]
        no_positive_part: bool,
        #[arg(long, default_value_t = DEFAULT_LENIENT_SUM_TOLERANCE)]
        tolerance: f64,
        #[arg(long)]
        full_precision: bool,
    },
    /// Check the entropic lower bound for each record.
    Bound {
        file: PathBuf,
        /// Overlap constant; overrides any value computed from --bases.
        #[arg(long)]
        b: Option<f64>,
        /// Compute the overlap constant from a measurement preset.
        #[arg(long, value_enum)]
        bases: Option<BasesArg>,
        /// Density-matrix TOML file (dim, row-major re, optional im).
        /// Without it a pure state (S = 0) is assumed.
        #[arg(long)]
        rho: Option<PathBuf>,
        /// σ² for the shrinkage-adjusted sum.
        #[arg(long, default_value_t = 0.0)]
        sigma2: f64,
        #[arg(long, default_value_t = DEFAULT_LENIENT_SUM_TOLERANCE)]
        tolerance: f64,
        #[arg(long)]
        full_precision: bool,
    },
    /// Generate simulated sweep-family data as an experiment file.
    Simulate {
        #[arg(long, value_enum)]
        state: StateArg,
        /// Sweep parameter(s) in (0, 1); one record per value.
        #[arg(long, required = true, value_delimiter = ',')]
        a: Vec<f64>,
        /// Depolarizing noise strength in [0, 1].
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Finite-shot sampling; omit for exact Born probabilities.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long)]
        seed: u64,
        /// Write to this path instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo risk comparison of estimators.
    Risk {
        /// Dimension(s) to simulate.
        #[arg(long, required = true, value_delimiter = ',')]
        n: Vec<usize>,
        /// Signal norm(s) ‖θ‖ along the uniform direction.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0])]
        theta_scale: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, value_delimiter = ',',
              default_values_t = vec![EstimatorArg::Ls, EstimatorArg::Js, EstimatorArg::JsPlus])]
        estimators: Vec<EstimatorArg>,
        #[arg(long)]
        full_precision: bool,
    },
    /// Full pipeline: entropies, shrinkage, and theory comparison.
    Report {
        file: PathBuf,
        #[arg(long, conflicts_with = "sigma_mode")]
        sigma2: Option<f64>,
        #[arg(long, value_enum, default_value_t = SigmaModeArg::Auto)]
        sigma_mode: SigmaModeArg,
        #[arg(long)]
        no_positive_part: bool,
        #[arg(long, value_enum, default_value_t = TheoryArg::Auto)]
        theory: TheoryArg,
        #[arg(long, default_value_t = DEFAULT_LENIENT_SUM_TOLERANCE)]
        tolerance: f64,
        #[arg(long)]
        full_precision: bool,
    },
    /// Sample the closed-form theory curves.
    Curves {
        #[arg(long, value_enum)]
        state: StateArg,
        /// Number of evenly spaced interior grid points i / (points + 1).
        #[arg(long, default_value_t = 99)]
        points: usize,
        /// Explicit grid values (overrides --points).
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<f64>>,
        #[arg(long)]
        full_precision: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn sigma_resolution(sigma2: Option<f64>, mode: SigmaModeArg) -> SigmaResolution {
    match (sigma2, mode) {
        (Some(v), _) => SigmaResolution::Provided(v),
        (None, SigmaModeArg::Auto) => SigmaResolution::Auto,
        (None, SigmaModeArg::Reference) => SigmaResolution::ForceReference,
        (None, SigmaModeArg::Sample) => SigmaResolution::ForceSample,
    }
}

fn report_issues(issues: &[eshrink_cli::pipeline::RecordIssue]) {
    for issue in issues {
        eprintln!(
            "warning: record {} (state `{}`): {} -- skipped",
            issue.index, issue.state_label, issue.message
        );
    }
}

fn report_notes(notes: &[String]) {
    for note in notes {
        eprintln!("note: {note}");
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Commands::Entropy {
            file,
            tolerance,
            full_precision,
        } => {
            let loaded = load_experiment(&file, tolerance)?;
            report_notes(&loaded.notes);
            let mut rows = Vec::new();
            for record in &loaded.records {
                let mut total = 0.0;
                for m in &record.measurements {
                    let bits = shannon_entropy(&m.distribution).bits();
                    total += bits;
                    rows.push((
                        record.state_label.clone(),
                        record.parameter_a,
                        m.label.clone(),
                        bits,
                    ));
                }
                rows.push((
                    record.state_label.clone(),
                    record.parameter_a,
                    "TOTAL".to_string(),
                    total,
                ));
            }
            print!("{}", render::entropy_table(&rows, full_precision));
            Ok(())
        }
        Commands::Shrink {
            file,
            sigma2,
            sigma_mode,
            no_positive_part,
            tolerance,
            full_precision,
        } => {
            let loaded = load_experiment(&file, tolerance)?;
            report_notes(&loaded.notes);
            let (rows, issues) = run_shrinkage(
                &loaded.records,
                sigma_resolution(sigma2, sigma_mode),
                !no_positive_part,
                TheorySelection::Auto,
            );
            report_issues(&issues);
            if rows.is_empty() {
                bail!("no record could be shrunk");
            }
            print!("{}", render::shrink_table(&rows, full_precision));
            Ok(())
        }
        Commands::Bound {
            file,
            b,
            bases,
            rho,
            sigma2,
            tolerance,
            full_precision,
        } => {
            if b.is_none() && bases.is_none() {
                bail!("pass --b or --bases to determine the overlap constant");
            }
            let loaded = load_experiment(&file, tolerance)?;
            report_notes(&loaded.notes);
            let rho = match &rho {
                Some(path) => Some(load_density_matrix(path)?),
                None => None,
            };
            if rho.is_none() {
                eprintln!("note: no --rho given; assuming a pure state (S = 0)");
            }
            let mut rows: Vec<(String, BoundReport)> = Vec::new();
            let mut skipped = 0usize;
            for record in &loaded.records {
                let result = bound_for_record(record, b, bases, rho.as_ref(), sigma2);
                match result {
                    Ok(report) => rows.push((record.state_label.clone(), report)),
                    Err(e) => {
                        skipped += 1;
                        eprintln!(
                            "warning: record {} (state `{}`): {e:#} -- skipped",
                            record.index, record.state_label
                        );
                    }
                }
            }
            if rows.is_empty() && skipped > 0 {
                bail!("no record could be checked");
            }
            print!("{}", render::bound_table(&rows, full_precision));
            Ok(())
        }
        Commands::Simulate {
            state,
            a,
            noise,
            shots,
            seed,
            out,
        } => {
            let file = simulate_file(state, &a, noise, shots, seed)?;
            match out {
                Some(path) => write_experiment(&file, &path)?,
                None => print!("{}", to_toml_string(&file)?),
            }
            Ok(())
        }
        Commands::Risk {
            n,
            theta_scale,
            sigma,
            trials,
            seed,
            estimators,
            full_precision,
        } => {
            let estimators: Vec<EstimatorKind> =
                estimators.into_iter().map(EstimatorKind::from).collect();
            let mut reports = Vec::new();
            let mut cell = 0usize;
            for &dim in &n {
                for &scale in &theta_scale {
                    let config = RiskTrialConfig::new(
                        dim,
                        eshrink_core::risk::theta_with_norm(dim, scale),
                        sigma,
                        trials,
                        sweep_cell_seed(seed, cell),
                        estimators.clone(),
                    );
                    reports.push(simulate_risk(&config)?);
                    cell += 1;
                }
            }
            print!("{}", render::risk_table(&reports, full_precision));
            Ok(())
        }
        Commands::Report {
            file,
            sigma2,
            sigma_mode,
            no_positive_part,
            theory,
            tolerance,
            full_precision,
        } => {
            let loaded = load_experiment(&file, tolerance)?;
            report_notes(&loaded.notes);
            let output = run_pipeline(
                &loaded.records,
                sigma_resolution(sigma2, sigma_mode),
                !no_positive_part,
                theory.into(),
            );
            report_issues(&output.issues);
            if output.rows.is_empty() {
                bail!("no record could be processed");
            }
            print!("{}", render::comparison_table(&output.rows, full_precision));
            Ok(())
        }
        Commands::Curves {
            state,
            points,
            a,
            full_precision,
        } => {
            if points == 0 && a.is_none() {
                bail!("--points must be at least 1");
            }
            let grid = match a {
                Some(values) => values,
                None => uniform_grid(points),
            };
            let rows = emit_curves(state.into(), &grid)?;
            print!("{}", render::curves_table(&rows, full_precision));
            Ok(())
        }
    }
}

fn bound_for_record(
    record: &eshrink_cli::format::PreparedRecord,
    b: Option<f64>,
    bases: Option<BasesArg>,
    rho: Option<&DensityMatrix>,
    sigma2: f64,
) -> Result<BoundReport> {
    let y = entropy_vector(
        &record.measurements,
        record.state_label.clone(),
        record.parameter_a,
    )?;
    let bases: Option<Vec<MeasurementBasis>> = match bases {
        None => None,
        Some(BasesArg::Pauli) => Some(presets::pauli_mubs()),
        Some(BasesArg::Sweep) => {
            let a = record
                .parameter_a
                .ok_or_else(|| anyhow!("sweep bases need the record's parameter_a"))?;
            Some(presets::sweep_family(a)?)
        }
    };
    let default_rho = |dim: usize| -> Result<DensityMatrix> {
        Ok(DensityMatrix::pure(&StateVector::basis_state(dim, 0)?))
    };
    match bases {
        Some(bases) => {
            let rho = match rho {
                Some(rho) => rho.clone(),
                None => default_rho(bases[0].dim())?,
            };
            Ok(check_relation(&y, &bases, &rho, sigma2, b)?)
        }
        None => {
            let b = b.expect("checked by caller");
            let rho = match rho {
                Some(rho) => rho.clone(),
                None => default_rho(2)?,
            };
            Ok(bound_report(&y, b, &rho, sigma2)?)
        }
    }
}

fn simulate_file(
    state: StateArg,
    a_values: &[f64],
    noise: f64,
    shots: Option<u64>,
    seed: u64,
) -> Result<ExperimentFile> {
    let noise_model = NoiseModel::new(noise)?;
    let initial: InitialState = state.into();
    let prepared = match initial {
        InitialState::Zero => presets::state_zero(),
        InitialState::MinusOne => presets::state_minus_one(),
    };
    let mut records = Vec::with_capacity(a_values.len());
    for (idx, &a) in a_values.iter().enumerate() {
        let bases = presets::sweep_family(a)?;
        let measurements = generate_experiment(
            &prepared,
            &bases,
            &noise_model,
            shots,
            sweep_cell_seed(seed, idx),
        )?;
        records.push(RecordSpec {
            state_label: initial.label().to_string(),
            parameter_a: Some(a),
            measurements: measurements
                .into_iter()
                .map(|m| MeasurementSpec {
                    label: m.label,
                    probabilities: m.distribution.probs().to_vec(),
                })
                .collect(),
        });
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("generator".to_string(), "eshrink simulate".to_string());
    metadata.insert("preset".to_string(), "sweep-family".to_string());
    metadata.insert("state".to_string(), initial.label().to_string());
    metadata.insert("depolarizing_p".to_string(), format!("{noise}"));
    metadata.insert(
        "shots".to_string(),
        shots.map_or_else(|| "exact".to_string(), |s| s.to_string()),
    );
    metadata.insert("seed".to_string(), seed.to_string());
    Ok(ExperimentFile::new(metadata, records))
}
