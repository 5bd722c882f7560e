//! Seeded fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qspectral_core::encoding::{make_evolution, EvolutionOptions};
use qspectral_core::{synth, ComplexVector, DenseMatrix, EvolutionOperator, PointSet};

/// A rank-`n/3` PSD matrix, its evolution operator for an `m`-qubit phase
/// register, and an input with weight at least 0.1 on its range.
pub struct Problem {
    pub h: DenseMatrix,
    pub u: EvolutionOperator,
    pub y: ComplexVector,
}

pub fn problem(n: usize, m: u32, seed: u64) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = synth::random_psd(&mut rng, n, (n / 3).max(1), (1.0, 4.0));
    let y = synth::random_overlapping_input(&mut rng, &h, 0.1).expect("a nonzero matrix has a range");
    let u = make_evolution(&h, m, &EvolutionOptions::default()).expect("fixture spectrum is resolvable");
    Problem { h, u, y }
}

pub fn hermitian(n: usize, seed: u64) -> DenseMatrix {
    synth::random_hermitian(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

/// Four isotropic blobs in the plane, `per_cluster` points each.
pub fn blob_points(per_cluster: usize, seed: u64) -> PointSet {
    let centers = [vec![-3.0, 0.0], vec![3.0, 0.0], vec![0.0, 3.0], vec![0.0, -3.0]];
    synth::blobs(&centers, per_cluster, &[0.5, 0.5], seed).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_formed() {
        let p = problem(16, 6, 1);
        assert_eq!(p.h.rows(), 16);
        assert!(p.y.is_normalized(1e-12));
        assert_eq!(blob_points(5, 0).len(), 20);
        assert!(hermitian(8, 0).is_hermitian(1e-12));
    }
}
