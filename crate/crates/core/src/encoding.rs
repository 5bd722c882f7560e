//! Turning data into phase-estimation-ready operators.
//!
//! Gram matrices, Householder-sum decompositions, the linearized surrogate
//! `I - iH/k`, and the unitary backends whose controlled powers drive phase
//! estimation.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::graph::PointSet;
use crate::numerics::{hermitian_eig, matrix_1norm, proj_reflection, ComplexVector, DenseMatrix, OPERATOR_TOL};
use crate::qpea::RegisterState;
use crate::{Error, Result};

/// `X X^T` over the (optionally mean-centered) rows of `x`.
pub fn gram_matrix(x: &PointSet, centered: bool) -> DenseMatrix {
    let mean = x.mean();
    let rows: Vec<Vec<f64>> = x
        .points()
        .iter()
        .map(|p| {
            if centered {
                p.iter().zip(&mean).map(|(a, m)| a - m).collect()
            } else {
                p.clone()
            }
        })
        .collect();
    let n = rows.len();
    DenseMatrix::from_real_fn(n, n, |i, j| rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DecompositionMode {
    /// Rows of any length, carried as coefficient `‖x‖²` times a unit reflector.
    #[default]
    Weighted,
    /// Every row must already be unit norm; all coefficients are 1.
    Strict,
}

/// `Σ_j c_j x̂_j x̂_j^H`, each term realizable as `-½ c_j (R_j - I)` with the
/// Householder reflection `R_j = I - 2 x̂_j x̂_j^H`.
#[derive(Clone, Debug)]
pub struct HouseholderSum {
    pub reflectors: Vec<ComplexVector>,
    pub coefficients: Vec<f64>,
    pub dim: usize,
    /// Indices of input rows that were zero and therefore skipped.
    pub dropped: Vec<usize>,
}

impl HouseholderSum {
    pub fn len(&self) -> usize {
        self.reflectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reflectors.is_empty()
    }

    pub fn reflection(&self, j: usize) -> DenseMatrix {
        proj_reflection(&self.reflectors[j]).expect("reflectors are unit vectors")
    }

    /// `Σ_j c_j x̂_j x̂_j^H`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut acc = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for (x, &c) in self.reflectors.iter().zip(&self.coefficients) {
            let v = x.as_nalgebra();
            acc += (v * v.adjoint()) * Complex64::new(c, 0.0);
        }
        DenseMatrix::from_nalgebra(acc)
    }

    /// `-½ Σ_j c_j (R_j - I)`, built from the reflection matrices themselves.
    pub fn reconstruct_via_reflections(&self) -> DenseMatrix {
        let id = DenseMatrix::identity(self.dim);
        let mut acc = DenseMatrix::zeros(self.dim, self.dim);
        for (j, &c) in self.coefficients.iter().enumerate() {
            let term = (&self.reflection(j) - &id).scale_real(-0.5 * c);
            acc = &acc + &term;
        }
        acc
    }
}

/// Decomposes `Σ_rows x x^T` into Householder reflections.
///
/// Passing the columns of a data matrix `X` (see [`PointSet::transpose`])
/// therefore decomposes `X X^T`.
pub fn householder_decompose(rows: &[Vec<f64>], mode: DecompositionMode) -> Result<HouseholderSum> {
    let dim = rows.first().map(Vec::len).ok_or(Error::EmptyInput("no rows to decompose"))?;
    if dim == 0 {
        return Err(Error::EmptyInput("rows have zero length"));
    }
    let mut reflectors = Vec::new();
    let mut coefficients = Vec::new();
    let mut dropped = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
        }
        let sq: f64 = row.iter().map(|x| x * x).sum();
        if sq == 0.0 {
            log::warn!("row {i} is zero and was dropped from the decomposition");
            dropped.push(i);
            continue;
        }
        let norm = sq.sqrt();
        let coefficient = match mode {
            DecompositionMode::Weighted => sq,
            DecompositionMode::Strict => {
                if (norm - 1.0).abs() > 1e-10 {
                    return Err(Error::NotNormalized { norm });
                }
                1.0
            }
        };
        let unit: Vec<f64> = row.iter().map(|x| x / norm).collect();
        reflectors.push(ComplexVector::from_real(&unit));
        coefficients.push(coefficient);
    }
    if reflectors.is_empty() {
        return Err(Error::Degenerate("every row is zero".into()));
    }
    Ok(HouseholderSum { reflectors, coefficients, dim, dropped })
}

#[derive(Clone, Debug)]
pub struct Linearized {
    /// `I - iH/k`.
    pub htilde: DenseMatrix,
    /// `10 ‖H‖₁`.
    pub k: f64,
}

pub fn linearize(h: &DenseMatrix) -> Result<Linearized> {
    if !h.is_square() {
        return Err(Error::NotSquare { rows: h.rows(), cols: h.cols() });
    }
    let k = 10.0 * matrix_1norm(h);
    if k == 0.0 {
        return Err(Error::Degenerate("cannot linearize the zero matrix".into()));
    }
    let htilde = &DenseMatrix::identity(h.rows()) - &h.scale(Complex64::new(0.0, 1.0 / k));
    Ok(Linearized { htilde, k })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    /// `U = exp(2πi t H)` from the eigendecomposition.
    #[default]
    ExactExponential,
    /// Eigenvalues of `I - iH/k` normalized to unit modulus.
    Linearized,
}

#[derive(Clone, Debug)]
pub struct EvolutionOptions {
    pub backend: Backend,
    /// Eigenvalues with `|λ|` at or below this are treated as exactly zero.
    /// Defaults to `1e-8 ‖H‖₁`.
    pub zero_tol: Option<f64>,
    /// Phase scaling for the exact backend. Defaults to `1 / (2 max|λ|)`.
    pub time: Option<f64>,
    /// Reject nonzero eigenvalues whose phase lies within `2 / 2^m` of zero.
    pub check_resolution: bool,
}

impl Default for EvolutionOptions {
    fn default() -> Self {
        Self {
            backend: Backend::ExactExponential,
            zero_tol: None,
            time: None,
            check_resolution: true,
        }
    }
}

/// A unitary with known eigendecomposition `U = V diag(e^{2πiφ}) V^H`.
#[derive(Clone, Debug)]
pub struct EvolutionOperator {
    unitary: DenseMatrix,
    eigenvectors: DenseMatrix,
    eigenvalues: Vec<f64>,
    phases: Vec<f64>,
    zero_mask: Vec<bool>,
    scale: f64,
    time: f64,
    backend: Backend,
}

fn circular_distance(phase: f64) -> f64 {
    phase.min(1.0 - phase)
}

fn phases_to_unitary(v: &DMatrix<Complex64>, phases: &[f64]) -> DenseMatrix {
    let mut scaled = v.clone();
    for (j, &p) in phases.iter().enumerate() {
        let z = Complex64::from_polar(1.0, 2.0 * PI * p);
        for x in scaled.column_mut(j).iter_mut() {
            *x *= z;
        }
    }
    DenseMatrix::from_nalgebra(scaled * v.adjoint())
}

/// Builds the evolution operator of `h` for an `m`-bit phase register.
pub fn make_evolution(h: &DenseMatrix, m: u32, opts: &EvolutionOptions) -> Result<EvolutionOperator> {
    let eig = hermitian_eig(h, OPERATOR_TOL)?;
    let norm1 = matrix_1norm(h);
    let zero_tol = opts.zero_tol.unwrap_or(1e-8 * norm1);
    let eigenvalues: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l.abs() <= zero_tol { 0.0 } else { l })
        .collect();
    let zero_mask: Vec<bool> = eigenvalues.iter().map(|&l| l == 0.0).collect();
    let max_abs = eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));

    let (phases, scale, time): (Vec<f64>, f64, f64) = match opts.backend {
        Backend::ExactExponential => {
            let time = match opts.time {
                Some(t) if t > 0.0 && t.is_finite() => t,
                Some(t) => return Err(Error::InvalidParameter(format!("evolution time must be positive, got {t}"))),
                None if max_abs > 0.0 => 0.5 / max_abs,
                None => 1.0,
            };
            let phases = eigenvalues.iter().map(|&l| (time * l).rem_euclid(1.0)).collect();
            (phases, 1.0, time)
        }
        Backend::Linearized => {
            let k = 10.0 * norm1;
            let phases = eigenvalues
                .iter()
                .map(|&l| if l == 0.0 { 0.0 } else { (-(l / k).atan() / (2.0 * PI)).rem_euclid(1.0) })
                .collect();
            (phases, k, 1.0)
        }
    };

    if opts.check_resolution && opts.backend == Backend::ExactExponential {
        let floor = 2.0 / 2f64.powi(m as i32);
        for (&l, &p) in eigenvalues.iter().zip(&phases) {
            if l != 0.0 && circular_distance(p) < floor {
                return Err(Error::PhaseResolution { eigenvalue: l, phase: p, floor, bits: m as usize });
            }
        }
    }

    let v = eig.eigenvectors.into_nalgebra();
    let unitary = phases_to_unitary(&v, &phases);
    Ok(EvolutionOperator {
        unitary,
        eigenvectors: DenseMatrix::from_nalgebra(v),
        eigenvalues,
        phases,
        zero_mask,
        scale,
        time,
        backend: opts.backend,
    })
}

impl EvolutionOperator {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn unitary(&self) -> &DenseMatrix {
        &self.unitary
    }

    pub fn eigenvectors(&self) -> &DenseMatrix {
        &self.eigenvectors
    }

    /// Eigenvalues of the source matrix, ascending, with near-zero ones snapped to 0.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenphases in `[0, 1)`, aligned with [`Self::eigenvalues`].
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn zero_mask(&self) -> &[bool] {
        &self.zero_mask
    }

    pub fn rank(&self) -> usize {
        self.zero_mask.iter().filter(|z| !**z).count()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// `U^j`.
    pub fn power(&self, j: u64) -> DenseMatrix {
        let phases: Vec<f64> = self.phases.iter().map(|&p| power_phase(p, j)).collect();
        phases_to_unitary(self.eigenvectors.as_nalgebra(), &phases)
    }

    /// `V V^H y` over eigenvectors with nonzero eigenvalue.
    pub fn project_range(&self, y: &ComplexVector) -> Result<ComplexVector> {
        if y.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: y.dim() });
        }
        let v = self.eigenvectors.as_nalgebra();
        let mut coeffs = v.adjoint() * y.as_nalgebra();
        for (c, &z) in coeffs.iter_mut().zip(&self.zero_mask) {
            if z {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        Ok(ComplexVector::from_nalgebra(v * coeffs))
    }
}

/// `(p · j) mod 1` without losing precision for large `j`.
pub(crate) fn power_phase(p: f64, j: u64) -> f64 {
    let mut acc = 0.0;
    let mut base = p;
    let mut e = j;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc + base).rem_euclid(1.0);
        }
        base = (2.0 * base).rem_euclid(1.0);
        e >>= 1;
    }
    acc
}

/// Applies `U^{2^j}` to the system register of every basis component whose
/// phase qubit `control_qubit` is 1.
pub fn controlled_power_apply(
    u: &EvolutionOperator,
    j: u32,
    state: &RegisterState,
    control_qubit: usize,
) -> Result<RegisterState> {
    if state.system_dim() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: state.system_dim() });
    }
    if control_qubit >= state.m() as usize {
        return Err(Error::InvalidParameter(format!(
            "control qubit {control_qubit} is not in the {}-qubit phase register",
            state.m()
        )));
    }
    let phases: Vec<f64> = u.phases.iter().map(|&p| power_phase(p, 1u64 << j)).collect();
    let power = phases_to_unitary(u.eigenvectors.as_nalgebra(), &phases);
    let bit = state.m() as usize - 1 - control_qubit;
    let mut psi = state.to_blocks();
    for (k, mut col) in psi.column_iter_mut().enumerate() {
        if (k >> bit) & 1 == 1 {
            let next = power.as_nalgebra() * &col;
            col.copy_from(&next);
        }
    }
    RegisterState::from_blocks(psi, state.m(), state.n())
}

/// Gate-count bound `2^m · L · N`, or `2^m · L · ⌈log₂ N⌉` with simple unitaries.
pub fn gate_count_estimate(l: u64, n: u64, m: u32, simple_unitaries: bool) -> u128 {
    let width = if simple_unitaries {
        if n <= 1 { 0 } else { u128::from(64 - (n - 1).leading_zeros()) }
    } else {
        u128::from(n)
    };
    (1u128 << m) * u128::from(l) * width
}

/// Pads a square matrix with zeros up to the next power-of-two dimension.
/// Returns the padded matrix and its qubit count.
pub fn pad_to_qubits(h: &DenseMatrix) -> Result<(DenseMatrix, u32)> {
    if !h.is_square() {
        return Err(Error::NotSquare { rows: h.rows(), cols: h.cols() });
    }
    if h.rows() == 0 {
        return Err(Error::EmptyInput("empty matrix"));
    }
    let dim = h.rows().next_power_of_two();
    let qubits = dim.trailing_zeros();
    if dim == h.rows() {
        return Ok((h.clone(), qubits));
    }
    let n = h.rows();
    let padded = DenseMatrix::from_fn(dim, dim, |i, j| if i < n && j < n { h.get(i, j) } else { Complex64::new(0.0, 0.0) });
    Ok((padded, qubits))
}

/// Pads a vector with zeros to `dim`.
pub fn pad_vector(y: &ComplexVector, dim: usize) -> ComplexVector {
    let mut e = y.entries().to_vec();
    e.resize(dim.max(y.dim()), Complex64::new(0.0, 0.0));
    ComplexVector::new(e)
}
