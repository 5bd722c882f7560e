//! Seeded generators for test and experiment inputs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::classical::range_projection;
use crate::graph::PointSet;
use crate::numerics::{ComplexVector, DenseMatrix};
use crate::Result;

fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// Real orthonormal `n x k` matrix (Q factor of a Gaussian matrix).
pub fn random_orthonormal(rng: &mut impl Rng, n: usize, k: usize) -> DenseMatrix {
    let q = gaussian_matrix(rng, n, n).qr().q();
    DenseMatrix::from_real_fn(n, k, |i, j| q[(i, j)])
}

/// Real symmetric PSD matrix `Q diag(λ) Q^T` with `rank` eigenvalues drawn
/// uniformly from `range` and the rest exactly zero.
pub fn random_psd(rng: &mut impl Rng, n: usize, rank: usize, range: (f64, f64)) -> DenseMatrix {
    let q = gaussian_matrix(rng, n, n).qr().q();
    let lambdas: Vec<f64> = (0..n)
        .map(|i| if i < rank { rng.random_range(range.0..=range.1) } else { 0.0 })
        .collect();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (j, &l) in lambdas.iter().enumerate() {
        if l != 0.0 {
            let v = q.column(j);
            a += (v * v.transpose()) * l;
        }
    }
    let sym = (&a + a.transpose()) * 0.5;
    DenseMatrix::from_real_fn(n, n, |i, j| sym[(i, j)])
}

/// Complex Hermitian matrix with standard normal entries.
pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    let re = gaussian_matrix(rng, n, n);
    let im = gaussian_matrix(rng, n, n);
    let a = DenseMatrix::from_fn(n, n, |i, j| Complex64::new(re[(i, j)], im[(i, j)]));
    (&a + &a.adjoint()).scale_real(0.5)
}

/// Uniformly random unit vector, complex or real.
pub fn random_unit_vector(rng: &mut impl Rng, n: usize, complex: bool) -> ComplexVector {
    loop {
        let v = ComplexVector::new(
            (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = if complex { StandardNormal.sample(rng) } else { 0.0 };
                    Complex64::new(re, im)
                })
                .collect(),
        );
        if let Ok(u) = v.normalized() {
            return u;
        }
    }
}

/// Random unit vector with `‖V V^H y‖² >= min_weight` on the range of `h`.
pub fn random_overlapping_input(rng: &mut impl Rng, h: &DenseMatrix, min_weight: f64) -> Result<ComplexVector> {
    loop {
        let y = random_unit_vector(rng, h.rows(), true);
        if range_projection(h, &y, None)?.norm().powi(2) >= min_weight {
            return Ok(y);
        }
    }
}

/// A row of standard normal entries.
pub fn random_row(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| StandardNormal.sample(rng)).collect()
}

/// `n` standard normal points in `d` dimensions.
pub fn random_points(rng: &mut impl Rng, n: usize, d: usize) -> PointSet {
    PointSet::new((0..n).map(|_| random_row(rng, d)).collect()).expect("n >= 2 and d >= 1")
}

/// Gaussian blobs with per-axis standard deviations `sigma`, `per_cluster`
/// points around each center. Returns the points and their blob labels.
pub fn blobs(centers: &[Vec<f64>], per_cluster: usize, sigma: &[f64], seed: u64) -> (PointSet, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(centers.len() * per_cluster);
    let mut labels = Vec::with_capacity(points.capacity());
    for (c, center) in centers.iter().enumerate() {
        assert_eq!(center.len(), sigma.len(), "one standard deviation per axis");
        for _ in 0..per_cluster {
            let p = center
                .iter()
                .zip(sigma)
                .map(|(&m, &s)| Normal::new(m, s).expect("finite sigma").sample(&mut rng))
                .collect();
            points.push(p);
            labels.push(c);
        }
    }
    (PointSet::new(points).expect("at least two points"), labels)
}

/// Two interleaved half circles with Gaussian noise.
pub fn moons(per_moon: usize, noise: f64, seed: u64) -> (PointSet, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(2 * per_moon);
    let mut labels = Vec::with_capacity(2 * per_moon);
    let denom = per_moon.saturating_sub(1).max(1) as f64;
    for i in 0..per_moon {
        let t = std::f64::consts::PI * i as f64 / denom;
        points.push(vec![t.cos(), t.sin()]);
        labels.push(0);
        points.push(vec![1.0 - t.cos(), 0.5 - t.sin()]);
        labels.push(1);
    }
    if noise > 0.0 {
        let normal = Normal::new(0.0, noise).expect("finite noise");
        for p in &mut points {
            for x in p.iter_mut() {
                *x += normal.sample(&mut rng);
            }
        }
    }
    (PointSet::new(points).expect("at least two points"), labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::hermitian_eig;

    #[test]
    fn psd_has_requested_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let h = random_psd(&mut rng, 16, 6, (1.0, 10.0));
        assert!(h.is_hermitian(0.0));
        let eig = hermitian_eig(&h, 1e-10).unwrap();
        let nonzero = eig.eigenvalues.iter().filter(|l| l.abs() > 1e-8).count();
        assert_eq!(nonzero, 6);
        assert!(eig.eigenvalues.iter().all(|&l| l > -1e-10 && l < 10.0 + 1e-9));
    }

    #[test]
    fn generators_are_deterministic() {
        let a = blobs(&[vec![0.0], vec![5.0]], 4, &[1.0], 7);
        let b = blobs(&[vec![0.0], vec![5.0]], 4, &[1.0], 7);
        assert_eq!(a.0.points(), b.0.points());
        assert_eq!(a.1, vec![0, 0, 0, 0, 1, 1, 1, 1]);
        assert_eq!(moons(5, 0.1, 3).0.points(), moons(5, 0.1, 3).0.points());
    }

    #[test]
    fn unit_vectors_and_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((random_unit_vector(&mut rng, 9, true).norm() - 1.0).abs() < 1e-14);
        assert!(random_unit_vector(&mut rng, 4, false).entries().iter().all(|z| z.im == 0.0));
        assert!(random_hermitian(&mut rng, 5).is_hermitian(0.0));
        let q = random_orthonormal(&mut rng, 6, 3);
        assert!((&q.adjoint() * &q).max_abs_diff(&DenseMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn overlapping_input_meets_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = random_psd(&mut rng, 16, 6, (1.0, 10.0));
        let y = random_overlapping_input(&mut rng, &h, 0.1).unwrap();
        assert!(range_projection(&h, &y, None).unwrap().norm().powi(2) >= 0.1);
    }
}
