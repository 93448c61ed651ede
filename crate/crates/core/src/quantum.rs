//! Quantum state and measurement types: state vectors, density matrices,
//! and projective measurement bases, for dimensions 2 through 16.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Elementwise Hermiticity tolerance for density matrices.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
/// Trace-one tolerance for density matrices.
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Eigenvalues below `-EIGENVALUE_TOLERANCE` are rejected; values in
/// `[-EIGENVALUE_TOLERANCE, 0)` are clamped to zero.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-10;
/// Orthonormality tolerance for measurement bases and state norms.
pub const ORTHONORMALITY_TOLERANCE: f64 = 1e-10;

/// Smallest and largest supported Hilbert-space dimensions. The dense
/// Hermitian eigensolver is meant for small systems.
pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 16;

fn check_dim(dim: usize, what: &str) -> Result<()> {
    if !(MIN_DIM..=MAX_DIM).contains(&dim) {
        return Err(Error::parameter(
            "dim",
            format!("{what} dimension must lie in [{MIN_DIM}, {MAX_DIM}], got {dim}"),
        ));
    }
    Ok(())
}

/// A normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len(), "state")?;
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > ORTHONORMALITY_TOLERANCE {
            return Err(Error::InvalidStateVector(format!(
                "squared norm is {norm2}, not 1"
            )));
        }
        Ok(Self {
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    /// Computational basis state `|index⟩` in the given dimension.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim, "state")?;
        if index >= dim {
            return Err(Error::parameter(
                "index",
                format!("basis index {index} out of range for dimension {dim}"),
            ));
        }
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[index] = Complex64::ONE;
        Ok(Self {
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }
}

/// A Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and positive semidefiniteness
    /// (eigenvalues above `-EIGENVALUE_TOLERANCE`).
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::InvalidDensityMatrix(format!(
                "matrix is {}x{}, not square",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let dim = mat.nrows();
        check_dim(dim, "density matrix")?;
        for i in 0..dim {
            for j in i..dim {
                let delta = mat[(i, j)] - mat[(j, i)].conj();
                if delta.norm() > HERMITICITY_TOLERANCE {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({i}, {j}): asymmetry {:.3e}",
                        delta.norm()
                    )));
                }
            }
        }
        let trace: Complex64 = (0..dim).map(|i| mat[(i, i)]).sum();
        if (trace.re - 1.0).abs() > TRACE_TOLERANCE || trace.im.abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {trace}, not 1"
            )));
        }
        let rho = Self { dim, mat };
        let min = rho
            .eigenvalues_unclamped()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -EIGENVALUE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(rho)
    }

    /// Pure-state projector `|ψ⟩⟨ψ|`.
    pub fn pure(state: &StateVector) -> Self {
        let dim = state.dim();
        let psi = state.amplitudes();
        let mat = DMatrix::from_fn(dim, dim, |i, j| psi[i] * psi[j].conj());
        Self { dim, mat }
    }

    /// Builds and validates a matrix from row-major real and (optional)
    /// imaginary parts, each of length `dim * dim`.
    pub fn from_parts(dim: usize, re: &[f64], im: Option<&[f64]>) -> Result<Self> {
        if re.len() != dim * dim {
            return Err(Error::InvalidDensityMatrix(format!(
                "re has {} entries, expected {}",
                re.len(),
                dim * dim
            )));
        }
        if let Some(im) = im {
            if im.len() != dim * dim {
                return Err(Error::InvalidDensityMatrix(format!(
                    "im has {} entries, expected {}",
                    im.len(),
                    dim * dim
                )));
            }
        }
        let mat = DMatrix::from_fn(dim, dim, |i, j| {
            let idx = i * dim + j;
            Complex64::new(re[idx], im.map_or(0.0, |im| im[idx]))
        });
        Self::new(mat)
    }

    /// Diagonal density matrix from a real spectrum.
    pub fn from_diagonal(diagonal: &[f64]) -> Result<Self> {
        let mat = DMatrix::from_fn(diagonal.len(), diagonal.len(), |i, j| {
            if i == j {
                Complex64::new(diagonal[i], 0.0)
            } else {
                Complex64::ZERO
            }
        });
        Self::new(mat)
    }

    /// Maximally mixed state `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim, "density matrix")?;
        Self::from_diagonal(&vec![1.0 / dim as f64; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    fn eigenvalues_unclamped(&self) -> Vec<f64> {
        self.mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }

    /// Real spectrum with tiny negative noise clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues_unclamped()
            .into_iter()
            .map(|l| if l < 0.0 { 0.0 } else { l })
            .collect()
    }

    /// Quadratic form `⟨v|ρ|v⟩`.
    pub fn expectation(&self, v: &DVector<Complex64>) -> Complex64 {
        v.dotc(&(&self.mat * v))
    }
}

/// A complete projective measurement: `dim` orthonormal vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    label: String,
    vectors: Vec<DVector<Complex64>>,
}

impl MeasurementBasis {
    pub fn new(label: impl Into<String>, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::InvalidBasis {
                label,
                reason: "label must be nonempty".into(),
            });
        }
        let dim = vectors.first().map(Vec::len).unwrap_or(0);
        check_dim(dim, "basis").map_err(|_| Error::InvalidBasis {
            label: label.clone(),
            reason: format!("dimension must lie in [{MIN_DIM}, {MAX_DIM}], got {dim}"),
        })?;
        if vectors.len() != dim {
            return Err(Error::InvalidBasis {
                label,
                reason: format!(
                    "a complete projective measurement needs {dim} vectors, got {}",
                    vectors.len()
                ),
            });
        }
        let vectors: Vec<DVector<Complex64>> = vectors.into_iter().map(DVector::from_vec).collect();
        for (i, u) in vectors.iter().enumerate() {
            if u.len() != dim {
                return Err(Error::InvalidBasis {
                    label,
                    reason: format!("vector {i} has length {}, expected {dim}", u.len()),
                });
            }
            for (j, v) in vectors.iter().enumerate().skip(i) {
                let inner = u.dotc(v);
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                if (inner - expected).norm() > ORTHONORMALITY_TOLERANCE {
                    return Err(Error::InvalidBasis {
                        label,
                        reason: format!(
                            "vectors {i} and {j} have inner product {inner}, expected {expected}"
                        ),
                    });
                }
            }
        }
        Ok(Self { label, vectors })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[DVector<Complex64>] {
        &self.vectors
    }
}

/// Stock states and measurement bases used by the simulator and the CLI.
pub mod presets {
    use super::*;

    /// Computational-basis index carrying the `zero` preparation label.
    pub const ZERO_STATE_INDEX: usize = 0;
    /// Computational-basis index carrying the `minus1` preparation label.
    /// The labels-to-indices mapping is a convention of this crate.
    pub const MINUS_ONE_STATE_INDEX: usize = 2;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn im(x: f64) -> Complex64 {
        Complex64::new(0.0, x)
    }

    /// Computational basis of the given dimension, labeled `Z`.
    pub fn computational_basis(dim: usize) -> Result<MeasurementBasis> {
        let vectors = (0..dim)
            .map(|i| {
                let mut v = vec![Complex64::ZERO; dim];
                v[i] = Complex64::ONE;
                v
            })
            .collect();
        MeasurementBasis::new("Z", vectors)
    }

    /// Qubit X eigenbasis.
    pub fn pauli_x() -> MeasurementBasis {
        MeasurementBasis::new(
            "X",
            vec![
                vec![re(SQRT_HALF), re(SQRT_HALF)],
                vec![re(SQRT_HALF), re(-SQRT_HALF)],
            ],
        )
        .expect("static basis")
    }

    /// Qubit Y eigenbasis.
    pub fn pauli_y() -> MeasurementBasis {
        MeasurementBasis::new(
            "Y",
            vec![
                vec![re(SQRT_HALF), im(SQRT_HALF)],
                vec![re(SQRT_HALF), im(-SQRT_HALF)],
            ],
        )
        .expect("static basis")
    }

    /// Qubit Z eigenbasis.
    pub fn pauli_z() -> MeasurementBasis {
        computational_basis(2).expect("static basis")
    }

    /// The three mutually unbiased qubit bases Z, X, Y.
    pub fn pauli_mubs() -> Vec<MeasurementBasis> {
        vec![pauli_z(), pauli_x(), pauli_y()]
    }

    /// First measurement of the dim-3 sweep family: splits the `zero` /
    /// `minus1` pair with weights `(a, 1-a)`. At `a = 1/2` this is the
    /// balanced interference basis of the bundled reference record.
    pub fn sweep_basis_m1(a: f64) -> Result<MeasurementBasis> {
        if !a.is_finite() || a <= 0.0 || a >= 1.0 {
            return Err(Error::parameter(
                "a",
                format!("must lie strictly inside (0, 1), got {a}"),
            ));
        }
        let (ra, rb) = (a.sqrt(), (1.0 - a).sqrt());
        MeasurementBasis::new(
            "M1",
            vec![
                vec![re(ra), Complex64::ZERO, re(rb)],
                vec![re(rb), Complex64::ZERO, re(-ra)],
                vec![Complex64::ZERO, Complex64::ONE, Complex64::ZERO],
            ],
        )
    }

    /// Second measurement of the sweep family: balanced on `zero`,
    /// deterministic on `minus1`.
    pub fn sweep_basis_m2() -> MeasurementBasis {
        MeasurementBasis::new(
            "M2",
            vec![
                vec![re(SQRT_HALF), re(SQRT_HALF), Complex64::ZERO],
                vec![re(SQRT_HALF), re(-SQRT_HALF), Complex64::ZERO],
                vec![Complex64::ZERO, Complex64::ZERO, Complex64::ONE],
            ],
        )
        .expect("static basis")
    }

    /// Third measurement of the sweep family: the computational basis,
    /// deterministic on both reference preparations.
    pub fn sweep_basis_m3() -> MeasurementBasis {
        let mut basis = computational_basis(3).expect("static basis");
        basis.label = "M3".into();
        basis
    }

    /// The three-measurement sweep family. On the `zero` preparation the
    /// exact entropies are `(h(a), 1, 0)`; on `minus1` they are
    /// `(h(a), 0, 0)`, so the exact sums trace the two closed-form curves.
    pub fn sweep_family(a: f64) -> Result<Vec<MeasurementBasis>> {
        Ok(vec![sweep_basis_m1(a)?, sweep_basis_m2(), sweep_basis_m3()])
    }

    /// Dim-3 `zero` preparation.
    pub fn state_zero() -> StateVector {
        StateVector::basis_state(3, ZERO_STATE_INDEX).expect("static state")
    }

    /// Dim-3 `minus1` preparation.
    pub fn state_minus_one() -> StateVector {
        StateVector::basis_state(3, MINUS_ONE_STATE_INDEX).expect("static state")
    }
}
