//! Complex dense linear algebra.
//!
//! [`DenseMatrix`] and [`ComplexVector`] are thin newtypes over `nalgebra`
//! storage. They carry the handful of predicates the rest of the crate leans
//! on (Hermiticity, unitarity, normalization) plus the operator building
//! blocks used by the phase-estimation circuits: Kronecker products, outer
//! products and Householder reflections.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

/// Default tolerance for operator identities (unitarity, involution).
pub const OPERATOR_TOL: f64 = 1e-10;
/// Default tolerance for vector norms.
pub const VECTOR_TOL: f64 = 1e-12;
/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A column vector of complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector(DVector<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(DVector::from_vec(entries))
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(DVector::from_iterator(
            entries.len(),
            entries.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DVector::zeros(dim))
    }

    /// The computational basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = ONE;
        Self(v)
    }

    /// Uniform superposition `1/sqrt(dim) * (1, ..., 1)`.
    pub fn uniform(dim: usize) -> Self {
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self(DVector::from_element(dim, a))
    }

    pub fn from_nalgebra(v: DVector<Complex64>) -> Self {
        Self(v)
    }

    pub fn as_nalgebra(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DVector<Complex64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        self.0.as_mut_slice()
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.0[i]
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Errors unless `|‖v‖ - 1| <= tol`.
    pub fn ensure_normalized(&self, tol: f64) -> Result<()> {
        if self.is_normalized(tol) {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm: self.norm() })
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Degenerate(format!(
                "cannot normalize vector with norm {n}"
            )));
        }
        Ok(Self(&self.0 / Complex64::new(n, 0.0)))
    }

    /// Inner product `<self|other>`, conjugate-linear in `self`.
    pub fn dot(&self, other: &ComplexVector) -> Complex64 {
        self.0.dotc(&other.0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    pub fn kron(&self, other: &ComplexVector) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn max_abs_diff(&self, other: &ComplexVector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Squared magnitudes of the entries.
    pub fn probabilities(&self) -> Vec<f64> {
        self.0.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn to_real(&self) -> Vec<f64> {
        self.0.iter().map(|a| a.re).collect()
    }
}

impl Add for &ComplexVector {
    type Output = ComplexVector;
    fn add(self, rhs: &ComplexVector) -> ComplexVector {
        ComplexVector(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;
    fn sub(self, rhs: &ComplexVector) -> ComplexVector {
        ComplexVector(&self.0 - &rhs.0)
    }
}

/// A dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix(DMatrix<Complex64>);

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn from_real_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self(DMatrix::from_fn(rows, cols, |i, j| Complex64::new(f(i, j), 0.0)))
    }

    /// Builds a real matrix from equally sized rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(Self::from_real_fn(r, c, |i, j| rows[i][j]))
    }

    /// Row-major complex entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[Complex64]) -> Self {
        Self(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_real_fn(n, n, |i, j| if i == j { diag[i] } else { 0.0 })
    }

    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let rows = columns.first().map_or(0, ComplexVector::dim);
        if let Some(bad) = columns.iter().find(|c| c.dim() != rows) {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: bad.dim(),
            });
        }
        Ok(Self(DMatrix::from_fn(rows, columns.len(), |i, j| {
            columns[j].get(i)
        })))
    }

    pub fn from_nalgebra(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.0[(i, j)] = value;
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector(self.0.column(j).into_owned())
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        ComplexVector(&self.0 * &v.0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A - A^H|`; infinite for non-square matrices.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `max |A^H A - I| <= tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let g = self.0.adjoint() * &self.0;
        let id = DMatrix::<Complex64>::identity(self.rows(), self.rows());
        DenseMatrix(g).max_abs_diff(&DenseMatrix(id)) <= tol
    }

    /// `max |A^2 - I| <= tol`.
    pub fn is_involutory(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let sq = &self.0 * &self.0;
        let id = DMatrix::<Complex64>::identity(self.rows(), self.rows());
        DenseMatrix(sq).max_abs_diff(&DenseMatrix(id)) <= tol
    }

    /// Real parts, row by row.
    pub fn real_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)].re).collect())
            .collect()
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.rows().min(self.cols()))
            .map(|i| self.0[(i, i)].re)
            .collect()
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix(&self.0 - &rhs.0)
    }
}

/// Spectral decomposition `A = V diag(λ) V^H` of a Hermitian matrix, with
/// eigenvalues ascending and `V` unitary.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DenseMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, i: usize) -> ComplexVector {
        self.eigenvectors.column(i)
    }

    /// `V diag(f(λ)) V^H`.
    pub fn map_spectrum(&self, mut f: impl FnMut(f64) -> Complex64) -> DenseMatrix {
        let v = self.eigenvectors.as_nalgebra();
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let c = f(lambda);
            for x in scaled.column_mut(j).iter_mut() {
                *x *= c;
            }
        }
        DenseMatrix(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.map_spectrum(|l| Complex64::new(l, 0.0))
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is accepted when `max |A - A^H| <= 1e-12 * max(1, max |a_ij|)`
/// and is symmetrized before decomposition. After solving, every eigenpair
/// must satisfy `‖A v - λ v‖ <= tol * ‖A‖_1`, otherwise the solve is reported
/// as non-convergent.
pub fn hermitian_eig(a: &DenseMatrix, tol: f64) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Err(Error::EmptyInput("matrix has dimension 0"));
    }
    let deviation = a.hermitian_deviation();
    if deviation > HERMITIAN_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let sym = (&a.0 + a.0.adjoint()) * Complex64::new(0.5, 0.0);
    let max_iter = 1000 * n.max(4);
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, max_iter).ok_or_else(|| {
        Error::NoConvergence(format!("no convergence within {max_iter} iterations"))
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let scale = matrix_1norm(a).max(f64::MIN_POSITIVE);
    for (j, &lambda) in eigenvalues.iter().enumerate() {
        let v = eigenvectors.column(j);
        let residual = (&a.0 * v - v * Complex64::new(lambda, 0.0)).norm();
        if residual > tol * scale {
            return Err(Error::NoConvergence(format!(
                "eigenpair {j} residual {residual:e} exceeds {:e}",
                tol * scale
            )));
        }
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: DenseMatrix(eigenvectors),
    })
}

/// Induced 1-norm: the largest absolute column sum.
pub fn matrix_1norm(a: &DenseMatrix) -> f64 {
    a.0.column_iter()
        .map(|c| c.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    DenseMatrix(a.0.kronecker(&b.0))
}

/// `u v^H`.
pub fn outer(u: &ComplexVector, v: &ComplexVector) -> DenseMatrix {
    DenseMatrix(&u.0 * v.0.adjoint())
}

/// The Householder reflection `I - 2 u u^H` for a unit vector `u`.
pub fn proj_reflection(u: &ComplexVector) -> Result<DenseMatrix> {
    u.ensure_normalized(VECTOR_TOL)?;
    let n = u.dim();
    let mut r = DMatrix::<Complex64>::identity(n, n);
    r -= (&u.0 * u.0.adjoint()) * Complex64::new(2.0, 0.0);
    Ok(DenseMatrix(r))
}

/// Applies `I - 2 u u^H` to `v` without forming the matrix.
pub fn reflect(u: &ComplexVector, v: &ComplexVector) -> ComplexVector {
    let c = u.dot(v) * 2.0;
    ComplexVector(&v.0 - &u.0 * c)
}

/// Squared overlap `|<a|b>|^2` of two unit vectors.
pub fn fidelity(a: &ComplexVector, b: &ComplexVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    a.ensure_normalized(OPERATOR_TOL)?;
    b.ensure_normalized(OPERATOR_TOL)?;
    Ok(a.dot(b).norm_sqr().min(1.0))
}

/// Unit vector `u` such that `I - 2 u u^H` exchanges `e_0` and `y` up to a
/// global phase on `y`.
///
/// Returns `None` when `y` already equals `e_0` up to phase, in which case
/// the mapping is the identity.
pub fn reflector_to_zero(y: &ComplexVector) -> Result<Option<ComplexVector>> {
    y.ensure_normalized(VECTOR_TOL)?;
    let y0 = y.get(0);
    // Rotate y so that <e_0|y> is real and nonnegative.
    let phase = if y0.norm() > 0.0 {
        y0.conj() / y0.norm()
    } else {
        ONE
    };
    let mut u = y.scale(-phase);
    u.entries_mut()[0] += ONE;
    let n = u.norm();
    if n <= 1e-14 {
        return Ok(None);
    }
    Ok(Some(u.scale(Complex64::new(1.0 / n, 0.0))))
}

/// The reflection exchanging `e_0` and `y` (up to a global phase) as a matrix.
pub fn reflection_to_zero(y: &ComplexVector) -> Result<DenseMatrix> {
    match reflector_to_zero(y)? {
        Some(u) => proj_reflection(&u),
        None => Ok(DenseMatrix::identity(y.dim())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> DenseMatrix {
        let b = DenseMatrix::from_fn(n, n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        (&b + &b.adjoint()).scale_real(0.5)
    }

    fn random_unit(rng: &mut impl Rng, n: usize) -> ComplexVector {
        let v = ComplexVector::new(
            (0..n)
                .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect(),
        );
        v.normalized().unwrap()
    }

    #[test]
    fn eig_of_diagonal_sorts_and_permutes() {
        let a = DenseMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let e = hermitian_eig(&a, 1e-10).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
        let expected = [1usize, 2, 0];
        for (col, &row) in expected.iter().enumerate() {
            for r in 0..3 {
                let mag = e.eigenvectors.get(r, col).norm();
                let want = if r == row { 1.0 } else { 0.0 };
                assert!((mag - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eig_of_path_laplacian() {
        let a = DenseMatrix::from_real_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let e = hermitian_eig(&a, 1e-10).unwrap();
        assert!(e.eigenvalues[0].abs() < 1e-12);
        assert!((e.eigenvalues[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hermitian(&mut rng, 8);
        let e = hermitian_eig(&a, 1e-10).unwrap();
        assert!(e.reconstruct().max_abs_diff(&a) < 1e-10);
        assert!(e.eigenvectors.is_unitary(1e-10));
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let a = DenseMatrix::from_real_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(hermitian_eig(&a, 1e-10), Err(Error::NotHermitian { .. })));
        let rect = DenseMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&rect, 1e-10), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn one_norm_examples() {
        assert_eq!(matrix_1norm(&DenseMatrix::identity(4)), 1.0);
        let a = DenseMatrix::from_real_rows(&[vec![1.0, -2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(matrix_1norm(&a), 6.0);
        assert_eq!(matrix_1norm(&DenseMatrix::from_real_diagonal(&[2.0, 0.0])), 2.0);
    }

    #[test]
    fn reflection_examples() {
        let r = proj_reflection(&ComplexVector::basis(2, 0)).unwrap();
        assert_eq!(r, DenseMatrix::from_real_diagonal(&[-1.0, 1.0]));

        let s = 1.0 / 2f64.sqrt();
        let r = proj_reflection(&ComplexVector::from_real(&[s, s])).unwrap();
        let want = DenseMatrix::from_real_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(r.max_abs_diff(&want) < 1e-15);

        let bad = ComplexVector::from_real(&[1.0, 1.0]);
        assert!(matches!(proj_reflection(&bad), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn reflection_fixes_orthogonal_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 5, 16] {
            let u = random_unit(&mut rng, n);
            let w0 = random_unit(&mut rng, n);
            // Gram-Schmidt w against u.
            let w = (&w0 - &u.scale(u.dot(&w0))).normalized().unwrap();
            let r = proj_reflection(&u).unwrap();
            assert!(r.apply(&w).max_abs_diff(&w) < 1e-12);
            assert!(r.apply(&u).max_abs_diff(&u.scale(c(-1.0, 0.0))) < 1e-12);
            assert!(reflect(&u, &w).max_abs_diff(&w) < 1e-12);
        }
    }

    #[test]
    fn fidelity_examples() {
        let a = ComplexVector::from_real(&[1.0, 0.0]);
        let b = ComplexVector::from_real(&[0.0, 1.0]);
        let s = 1.0 / 2f64.sqrt();
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        let h = ComplexVector::from_real(&[s, s]);
        assert!((fidelity(&a, &h).unwrap() - 0.5).abs() < 1e-15);
        let short = ComplexVector::from_real(&[1.0]);
        assert!(matches!(fidelity(&a, &short), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn reflection_to_zero_maps_y_to_e0() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1, 2, 8] {
            let y = random_unit(&mut rng, n);
            let r = reflection_to_zero(&y).unwrap();
            let image = r.apply(&y);
            assert!((image.get(0).norm() - 1.0).abs() < 1e-12);
            let e0 = ComplexVector::basis(n, 0);
            assert!((r.apply(&e0).dot(&y).norm() - 1.0).abs() < 1e-12);
        }
        let e0 = ComplexVector::basis(4, 0);
        assert_eq!(reflection_to_zero(&e0).unwrap(), DenseMatrix::identity(4));
    }

    #[test]
    fn kron_and_outer_shapes() {
        let a = DenseMatrix::identity(2);
        let b = DenseMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let k = kron(&a, &b);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k.get(4, 4), c(2.0, 0.0));
        let u = ComplexVector::from_real(&[1.0, 0.0]);
        let v = ComplexVector::new(vec![c(0.0, 1.0), c(1.0, 0.0)]);
        let o = outer(&u, &v);
        assert_eq!(o.get(0, 0), c(0.0, -1.0));
        assert_eq!(o.get(1, 1), c(0.0, 0.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn reflections_are_unitary_hermitian_involutory(seed in any::<u64>(), n in 2usize..=64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = random_unit(&mut rng, n);
            let r = proj_reflection(&u).unwrap();
            prop_assert!(r.is_unitary(OPERATOR_TOL));
            prop_assert!(r.is_hermitian(OPERATOR_TOL));
            prop_assert!(r.is_involutory(OPERATOR_TOL));
        }

        #[test]
        fn eig_reconstruction_up_to_64(seed in any::<u64>(), n in 1usize..=64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_hermitian(&mut rng, n);
            let e = hermitian_eig(&a, 1e-10).unwrap();
            prop_assert!(e.reconstruct().max_abs_diff(&a) <= 1e-10);
            prop_assert!(e.eigenvectors.is_unitary(1e-10));
        }

        #[test]
        fn one_norm_homogeneous_and_submultiplicative(seed in any::<u64>(), n in 1usize..=12, s in -5.0f64..5.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_hermitian(&mut rng, n);
            let b = DenseMatrix::from_fn(n, n, |_, _| c(rng.random::<f64>(), rng.random::<f64>()));
            let na = matrix_1norm(&a);
            prop_assert!((matrix_1norm(&a.scale_real(s)) - s.abs() * na).abs() <= 1e-12 * (1.0 + na));
            prop_assert!(matrix_1norm(&(&a * &b)) <= na * matrix_1norm(&b) * (1.0 + 1e-12));
        }
    }
}
