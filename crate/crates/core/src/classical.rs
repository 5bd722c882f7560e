//! Classical reference pipeline: Lloyd's k-means, spectral clustering,
//! eigengap selection, indicator vectors and the trace objective.
//!
//! Everything here is deterministic given its inputs (and seed), and serves as
//! the oracle the simulated quantum path is compared against.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{laplacian, normalized_laplacian, squared_euclidean, IsolatedVertices, PointSet, SimilarityGraph};
use crate::numerics::{hermitian_eig, matrix_1norm, ComplexVector, DenseMatrix, OPERATOR_TOL};
use crate::{Error, Result};

/// Result of a k-means run.
#[derive(Clone, Debug)]
pub struct ClusterAssignment {
    pub labels: Vec<usize>,
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    /// Sum of squared distances of every point to its centroid.
    pub objective: f64,
    /// Objective after each centroid update, in iteration order.
    pub objective_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `(iteration, cluster)` pairs where an empty cluster was re-seeded.
    pub reseeded: Vec<(usize, usize)>,
}

impl ClusterAssignment {
    pub fn members(&self, cluster: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i] == cluster).collect()
    }

    pub fn indicators(&self) -> Result<Vec<IndicatorVector>> {
        (0..self.k)
            .map(|c| IndicatorVector::new(self.members(c), self.labels.len()))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub enum KmeansInit {
    /// Seeded greedy farthest-point selection: a random first centroid, then
    /// repeatedly the point farthest from all chosen centroids.
    FarthestPoint { seed: u64 },
    Explicit(Vec<Vec<f64>>),
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, m) in centroids.iter().enumerate() {
        let d = squared_euclidean(point, m);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn farthest_point_init(ps: &PointSet, k: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = rng.random_range(0..ps.len());
    let mut centroids = vec![ps.point(first).to_vec()];
    while centroids.len() < k {
        let mut best = (0, -1.0);
        for i in 0..ps.len() {
            let d = nearest(ps.point(i), &centroids).1;
            if d > best.1 {
                best = (i, d);
            }
        }
        centroids.push(ps.point(best.0).to_vec());
    }
    centroids
}

/// Sum over points of the squared distance to the assigned centroid.
pub fn kmeans_objective(ps: &PointSet, labels: &[usize], centroids: &[Vec<f64>]) -> f64 {
    labels
        .iter()
        .enumerate()
        .map(|(i, &c)| squared_euclidean(ps.point(i), &centroids[c]))
        .sum()
}

/// Lloyd's algorithm.
///
/// Alternates nearest-centroid assignment (ties to the lower centroid index)
/// with mean updates until an assignment pass changes no label or `max_iter`
/// updates have been made. A cluster that becomes empty takes over the point
/// farthest from its current centroid.
pub fn kmeans(ps: &PointSet, k: usize, init: KmeansInit, max_iter: usize) -> Result<ClusterAssignment> {
    let n = ps.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k must satisfy 1 <= k <= N = {n}, got {k}")));
    }
    let mut centroids = match init {
        KmeansInit::FarthestPoint { seed } => farthest_point_init(ps, k, seed),
        KmeansInit::Explicit(c) => {
            if c.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: c.len() });
            }
            if let Some(bad) = c.iter().find(|m| m.len() != ps.dim()) {
                return Err(Error::DimensionMismatch { expected: ps.dim(), found: bad.len() });
            }
            c
        }
    };

    let assign = |centroids: &[Vec<f64>]| -> Vec<usize> {
        (0..n).map(|i| nearest(ps.point(i), centroids).0).collect()
    };

    let mut labels = assign(&centroids);
    let mut history = Vec::new();
    let mut reseeded = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        fill_empty_clusters(ps, k, &mut labels, &centroids, iterations, &mut reseeded);
        centroids = cluster_means(ps, k, &labels);
        history.push(kmeans_objective(ps, &labels, &centroids));
        let next = assign(&centroids);
        if next == labels {
            converged = true;
            break;
        }
        labels = next;
    }
    if !converged {
        // Leave centroids consistent with the returned labels.
        fill_empty_clusters(ps, k, &mut labels, &centroids, iterations, &mut reseeded);
        centroids = cluster_means(ps, k, &labels);
    }
    let objective = kmeans_objective(ps, &labels, &centroids);
    Ok(ClusterAssignment {
        labels,
        k,
        centroids,
        objective,
        objective_history: history,
        iterations,
        converged,
        reseeded,
    })
}

fn fill_empty_clusters(
    ps: &PointSet,
    k: usize,
    labels: &mut [usize],
    centroids: &[Vec<f64>],
    iteration: usize,
    reseeded: &mut Vec<(usize, usize)>,
) {
    loop {
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        // Farthest point among clusters that can spare one.
        let mut best: Option<(usize, f64)> = None;
        for (i, &l) in labels.iter().enumerate() {
            if sizes[l] < 2 {
                continue;
            }
            let d = squared_euclidean(ps.point(i), &centroids[l]);
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((i, d));
            }
        }
        let (i, _) = best.expect("k <= N guarantees a cluster with two members");
        labels[i] = empty;
        reseeded.push((iteration, empty));
    }
}

/// Mean of each cluster's points. Clusters must be nonempty.
pub fn cluster_means(ps: &PointSet, k: usize, labels: &[usize]) -> Vec<Vec<f64>> {
    let d = ps.dim();
    let mut sums = vec![vec![0.0; d]; k];
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(ps.point(i)) {
            *s += x;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        for x in s.iter_mut() {
            *x /= c as f64;
        }
    }
    sums
}

/// Picks `k` maximizing `|λ_k - λ_{k+1}|` (1-indexed) over
/// `1 <= k < min(k_max, len)`, smallest `k` on ties. Returns 1 when no gap is
/// available.
pub fn eigengap_select(eigenvalues: &[f64], k_max: usize) -> usize {
    let upper = k_max.min(eigenvalues.len());
    let mut best = (1, f64::NEG_INFINITY);
    for k in 1..upper {
        let gap = (eigenvalues[k - 1] - eigenvalues[k]).abs();
        if gap > best.1 {
            best = (k, gap);
        }
    }
    best.0
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SpectralVariant {
    /// k-means on rows of the eigenvectors of `L`.
    Unnormalized,
    /// k-means on rows of the eigenvectors of `I - D^{-1/2} W D^{-1/2}`.
    Normalized,
    /// As `Normalized`, with rows scaled to unit length first.
    #[default]
    RowNormalized,
}

#[derive(Clone, Debug)]
pub struct SpectralResult {
    pub assignment: ClusterAssignment,
    /// The `k` eigenvectors used, as columns.
    pub eigenvectors: DenseMatrix,
    /// Full ascending spectrum of the matrix that was decomposed.
    pub eigenvalues: Vec<f64>,
}

/// Spectral clustering into `k` groups.
pub fn spectral_cluster(
    g: &SimilarityGraph,
    k: usize,
    variant: SpectralVariant,
    seed: u64,
) -> Result<SpectralResult> {
    if k < 2 || k > g.len() {
        return Err(Error::InvalidParameter(format!(
            "spectral clustering needs 2 <= k <= N = {}, got {k}",
            g.len()
        )));
    }
    let matrix = match variant {
        SpectralVariant::Unnormalized => laplacian(g),
        SpectralVariant::Normalized | SpectralVariant::RowNormalized => {
            normalized_laplacian(g, IsolatedVertices::Reject)?
        }
    };
    let eig = hermitian_eig(&matrix, OPERATOR_TOL)?;
    let cols: Vec<ComplexVector> = (0..k).map(|j| eig.eigenvector(j)).collect();
    let v = DenseMatrix::from_columns(&cols)?;

    // Eigenvectors of a real symmetric matrix can carry a complex phase;
    // feed k-means the real and imaginary parts side by side.
    let mut rows: Vec<Vec<f64>> = (0..g.len())
        .map(|i| {
            let mut r: Vec<f64> = (0..k).map(|j| v.get(i, j).re).collect();
            r.extend((0..k).map(|j| v.get(i, j).im));
            r
        })
        .collect();
    if variant == SpectralVariant::RowNormalized {
        for r in &mut rows {
            let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 0.0 {
                r.iter_mut().for_each(|x| *x /= n);
            }
        }
    }
    let embedded = PointSet::new(rows)?;
    let assignment = kmeans(&embedded, k, KmeansInit::FarthestPoint { seed }, 300)?;
    Ok(SpectralResult {
        assignment,
        eigenvectors: v,
        eigenvalues: eig.eigenvalues,
    })
}

/// Unit vector that is constant on a cluster's members and zero elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorVector {
    members: Vec<usize>,
    dim: usize,
}

impl IndicatorVector {
    pub fn new(mut members: Vec<usize>, dim: usize) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptyInput("indicator vector needs at least one member"));
        }
        if let Some(&bad) = members.iter().find(|&&m| m >= dim) {
            return Err(Error::InvalidParameter(format!("member {bad} out of range for dimension {dim}")));
        }
        Ok(Self { members, dim })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn to_vector(&self) -> ComplexVector {
        let a = 1.0 / (self.members.len() as f64).sqrt();
        let mut v = vec![0.0; self.dim];
        for &m in &self.members {
            v[m] = a;
        }
        ComplexVector::from_real(&v)
    }
}

/// Columns `[y_1 ... y_k]`.
pub fn indicator_matrix(ys: &[IndicatorVector]) -> Result<DenseMatrix> {
    let cols: Vec<ComplexVector> = ys.iter().map(IndicatorVector::to_vector).collect();
    DenseMatrix::from_columns(&cols)
}

/// Default threshold below which an eigenvalue counts as zero.
pub fn default_zero_tol(h: &DenseMatrix) -> f64 {
    1e-8 * matrix_1norm(h)
}

/// `V V^H y` for `V` spanning the eigenvectors of `h` with `|λ| > zero_tol`.
pub fn range_projection(h: &DenseMatrix, y: &ComplexVector, zero_tol: Option<f64>) -> Result<ComplexVector> {
    if h.rows() != y.dim() {
        return Err(Error::DimensionMismatch { expected: h.rows(), found: y.dim() });
    }
    let tol = zero_tol.unwrap_or_else(|| default_zero_tol(h));
    let eig = hermitian_eig(h, OPERATOR_TOL)?;
    let mut out = ComplexVector::zeros(y.dim());
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() > tol {
            let v = eig.eigenvector(j);
            out = &out + &v.scale(v.dot(y));
        }
    }
    Ok(out)
}

/// Normalized `V V^H y` together with its pre-normalization norm.
#[derive(Clone, Debug)]
pub struct ProjectedTarget {
    pub vector: ComplexVector,
    pub norm: f64,
}

impl ProjectedTarget {
    /// `‖V V^H y‖²`, the probability weight of `y` on the range of `H`.
    pub fn weight(&self) -> f64 {
        self.norm * self.norm
    }
}

pub fn projector_target(h: &DenseMatrix, y: &ComplexVector, zero_tol: Option<f64>) -> Result<ProjectedTarget> {
    let p = range_projection(h, y, zero_tol)?;
    let norm = p.norm();
    if norm <= 1e-10 {
        return Err(Error::Degenerate(
            "input has no weight on the eigenvectors with nonzero eigenvalue".into(),
        ));
    }
    Ok(ProjectedTarget {
        vector: p.scale(Complex64::new(1.0 / norm, 0.0)),
        norm,
    })
}

/// `trace(Y^H V V^H Y) = Σ_j ‖V^H y_j‖²`.
pub fn trace_objective(y: &DenseMatrix, v: &DenseMatrix) -> Result<f64> {
    if y.rows() != v.rows() {
        return Err(Error::DimensionMismatch { expected: v.rows(), found: y.rows() });
    }
    let proj = &v.adjoint() * y;
    Ok(proj.frobenius_norm().powi(2))
}

/// Adjusted Rand index between two labelings of the same points.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings must have equal length");
    let n = a.len();
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut table = vec![vec![0u64; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1;
    }
    let c2 = |x: u64| (x * x.saturating_sub(1)) as f64 / 2.0;
    let sum_cells: f64 = table.iter().flatten().map(|&x| c2(x)).sum();
    let sum_rows: f64 = table.iter().map(|r| c2(r.iter().sum())).sum();
    let sum_cols: f64 = (0..kb).map(|j| c2(table.iter().map(|r| r[j]).sum())).sum();
    let total = c2(n as u64);
    let expected = sum_rows * sum_cols / total;
    let max = 0.5 * (sum_rows + sum_cols);
    if (max - expected).abs() < f64::EPSILON {
        return 1.0;
    }
    (sum_cells - expected) / (max - expected)
}

/// Fraction of points on which two labelings agree under the best one-to-one
/// relabeling of `b` (exhaustive for up to 8 labels, greedy beyond).
pub fn agreement_rate(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings must have equal length");
    if a.is_empty() {
        return 1.0;
    }
    let k = a.iter().chain(b).max().map_or(0, |m| m + 1);
    let mut table = vec![vec![0usize; k]; k];
    for (&x, &y) in a.iter().zip(b) {
        table[y][x] += 1;
    }
    let best = if k <= 8 {
        let mut perm: Vec<usize> = (0..k).collect();
        let mut best = 0;
        permutations(&mut perm, 0, &mut |p| {
            best = best.max((0..k).map(|y| table[y][p[y]]).sum());
        });
        best
    } else {
        let mut used = vec![false; k];
        let mut total = 0;
        for row in &table {
            let (x, c) = (0..k)
                .filter(|&x| !used[x])
                .map(|x| (x, row[x]))
                .max_by_key(|&(_, c)| c)
                .unwrap_or((0, 0));
            used[x] = true;
            total += c;
        }
        total
    };
    best as f64 / a.len() as f64
}

fn permutations(p: &mut Vec<usize>, at: usize, f: &mut impl FnMut(&[usize])) {
    if at == p.len() {
        f(p);
        return;
    }
    for i in at..p.len() {
        p.swap(at, i);
        permutations(p, at + 1, f);
        p.swap(at, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_full_graph, GraphKind, KernelNorm};
    use crate::synth;
    use proptest::prelude::*;
    use rand::Rng;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::new(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn kmeans_separable_line() {
        let ps = line(&[0.0, 1.0, 10.0, 11.0]);
        let r = kmeans(&ps, 2, KmeansInit::Explicit(vec![vec![0.0], vec![11.0]]), 100).unwrap();
        assert_eq!(r.labels, vec![0, 0, 1, 1]);
        assert_eq!(r.centroids, vec![vec![0.5], vec![10.5]]);
        assert!((r.objective - 1.0).abs() < 1e-12);
        assert!(r.converged);

        let r = kmeans(&ps, 2, KmeansInit::FarthestPoint { seed: 9 }, 100).unwrap();
        assert!((r.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kmeans_limits() {
        let ps = line(&[0.0, 1.0, 10.0, 11.0]);
        let r = kmeans(&ps, 4, KmeansInit::FarthestPoint { seed: 1 }, 100).unwrap();
        assert_eq!(r.objective, 0.0);
        let r = kmeans(&ps, 1, KmeansInit::FarthestPoint { seed: 1 }, 100).unwrap();
        assert_eq!(r.centroids, vec![vec![5.5]]);
        assert!(kmeans(&ps, 0, KmeansInit::FarthestPoint { seed: 1 }, 10).is_err());
        assert!(kmeans(&ps, 5, KmeansInit::FarthestPoint { seed: 1 }, 10).is_err());
    }

    #[test]
    fn kmeans_reseeds_empty_cluster() {
        let ps = line(&[0.0, 1.0, 2.0, 20.0]);
        // The centroid at 100 attracts nothing on the first pass.
        let init = KmeansInit::Explicit(vec![vec![1.0], vec![100.0]]);
        let r = kmeans(&ps, 2, init, 50).unwrap();
        assert!(!r.reseeded.is_empty());
        assert_eq!(r.labels, vec![0, 0, 0, 1]);
        for c in 0..2 {
            assert!(!r.members(c).is_empty());
        }
    }

    #[test]
    fn eigengap_examples() {
        assert_eq!(eigengap_select(&[0.0, 0.01, 0.02, 5.0, 5.1], 10), 3);
        assert_eq!(eigengap_select(&[2.0, 2.0, 2.0, 2.0], 10), 1);
        assert_eq!(eigengap_select(&[0.0, 0.0, 3.0], 10), 2);
        assert_eq!(eigengap_select(&[0.0, 0.0, 3.0], 2), 1);
        assert_eq!(eigengap_select(&[1.0], 5), 1);
    }

    fn two_cliques() -> SimilarityGraph {
        let block = |i: usize| usize::from(i >= 3);
        let w = DenseMatrix::from_real_fn(6, 6, |i, j| {
            if i != j && block(i) == block(j) { 1.0 } else { 0.0 }
        });
        SimilarityGraph::from_weights(w, GraphKind::MutualKnn { k: 2 }).unwrap()
    }

    #[test]
    fn spectral_splits_disjoint_cliques() {
        let g = two_cliques();
        for variant in [SpectralVariant::Unnormalized, SpectralVariant::Normalized, SpectralVariant::RowNormalized] {
            let r = spectral_cluster(&g, 2, variant, 3).unwrap();
            assert_eq!(adjusted_rand_index(&r.assignment.labels, &g.components()), 1.0);
        }
    }

    #[test]
    fn spectral_recovers_gaussian_blobs() {
        let spacing = 6.0;
        let (ps, truth) = synth::blobs(&[vec![0.0, 0.0], vec![spacing, 0.0]], 20, &[1.0, 1.0], 42);
        let g = build_full_graph(&ps, spacing / 3.0, KernelNorm::Squared).unwrap();
        let r = spectral_cluster(&g, 2, SpectralVariant::RowNormalized, 0).unwrap();
        assert_eq!(adjusted_rand_index(&r.assignment.labels, &truth), 1.0);
    }

    #[test]
    fn spectral_rejects_k_below_two() {
        assert!(spectral_cluster(&two_cliques(), 1, SpectralVariant::Unnormalized, 0).is_err());
    }

    #[test]
    fn indicator_vector_shape() {
        let y = IndicatorVector::new(vec![3, 1, 1], 4).unwrap();
        assert_eq!(y.members(), &[1, 3]);
        let v = y.to_vector();
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert!((v.get(1).re - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!(IndicatorVector::new(vec![], 4).is_err());
        assert!(IndicatorVector::new(vec![4], 4).is_err());
    }

    #[test]
    fn projector_target_examples() {
        let h = DenseMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let y = ComplexVector::from_real(&[0.6, 0.0, 0.8]);
        let t = projector_target(&h, &y, None).unwrap();
        assert!(t.vector.max_abs_diff(&y) < 1e-12);
        assert!((t.norm - 1.0).abs() < 1e-12);

        let h = DenseMatrix::from_real_diagonal(&[0.0, 2.0]);
        let e0 = ComplexVector::basis(2, 0);
        assert!(matches!(projector_target(&h, &e0, None), Err(Error::Degenerate(_))));
    }

    #[test]
    fn projector_target_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let h = synth::random_psd(&mut rng, 16, 6, (1.0, 5.0));
        let y = synth::random_unit_vector(&mut rng, 16, true);
        // Brute force: sum of v v^H y over nonzero eigenpairs.
        let eig = hermitian_eig(&h, 1e-10).unwrap();
        let mut direct = ComplexVector::zeros(16);
        for j in 0..16 {
            if eig.eigenvalues[j].abs() > 1e-6 {
                let v = eig.eigenvector(j);
                direct = &direct + &v.scale(v.dot(&y));
            }
        }
        let p = range_projection(&h, &y, None).unwrap();
        assert!(p.max_abs_diff(&direct) < 1e-10);
        // Idempotence.
        let pp = range_projection(&h, &p, None).unwrap();
        assert!(pp.max_abs_diff(&p) < 1e-12);
    }

    #[test]
    fn trace_objective_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = synth::random_orthonormal(&mut rng, 8, 3);
        assert!((trace_objective(&v, &v).unwrap() - 3.0).abs() < 1e-12);

        let ys = [IndicatorVector::new(vec![0, 1], 4).unwrap()];
        let y = indicator_matrix(&ys).unwrap();
        let v = DenseMatrix::from_columns(&[ComplexVector::from_real(&[0.0, 0.0, 1.0, 0.0])]).unwrap();
        assert_eq!(trace_objective(&y, &v).unwrap(), 0.0);
    }

    #[test]
    fn ari_and_agreement() {
        assert_eq!(adjusted_rand_index(&[0, 0, 1, 1], &[1, 1, 0, 0]), 1.0);
        assert!(adjusted_rand_index(&[0, 0, 1, 1], &[0, 1, 0, 1]) < 0.0);
        assert_eq!(agreement_rate(&[0, 0, 1, 1], &[1, 1, 0, 0]), 1.0);
        assert_eq!(agreement_rate(&[0, 0, 1, 1], &[1, 1, 0, 1]), 0.75);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn kmeans_objective_never_increases(seed in any::<u64>(), n in 3usize..30, k in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = k.min(n);
            let ps = PointSet::new((0..n).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]).collect()).unwrap();
            let r = kmeans(&ps, k, KmeansInit::FarthestPoint { seed }, 100).unwrap();
            for w in r.objective_history.windows(2) {
                prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12);
            }
            prop_assert!((r.objective - kmeans_objective(&ps, &r.labels, &r.centroids)).abs() < 1e-12);
            for c in 0..k {
                prop_assert!(r.labels.contains(&c));
            }
        }

        #[test]
        fn trace_identity_holds(seed in any::<u64>(), k in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = synth::random_orthonormal(&mut rng, 8, k);
            let y = synth::random_orthonormal(&mut rng, 8, k);
            let vv = &v * &v.adjoint();
            let yy = &y * &y.adjoint();
            let lhs = (&vv - &yy).frobenius_norm().powi(2);
            let rhs = 2.0 * k as f64 - 2.0 * trace_objective(&y, &v).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10);
        }
    }
}
