//! Similarity graphs built from point sets, and their Laplacians.

use num_complex::Complex64;

use crate::numerics::DenseMatrix;
use crate::{Error, Result};

/// `N >= 2` points of common dimension `d >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a point set needs at least 2 points, got {}",
                points.len()
            )));
        }
        let d = points[0].len();
        if d == 0 {
            return Err(Error::InvalidParameter("points must have dimension >= 1".into()));
        }
        for p in &points {
            if p.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter("point coordinates must be finite".into()));
            }
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// The columns of the data matrix, i.e. `d` vectors of length `N`.
    ///
    /// Only defined when `d >= 2`, since a point set needs two entries.
    pub fn transpose(&self) -> Result<PointSet> {
        let cols = (0..self.dim())
            .map(|j| self.points.iter().map(|p| p[j]).collect())
            .collect();
        PointSet::new(cols)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        euclidean(&self.points[i], &self.points[j])
    }

    /// Component-wise mean.
    pub fn mean(&self) -> Vec<f64> {
        let n = self.len() as f64;
        (0..self.dim())
            .map(|j| self.points.iter().map(|p| p[j]).sum::<f64>() / n)
            .collect()
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

pub(crate) fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// How the distance enters the Gaussian kernel exponent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KernelNorm {
    /// `exp(-‖x_i - x_j‖ / (2σ²))`.
    #[default]
    Unsquared,
    /// `exp(-‖x_i - x_j‖² / (2σ²))`, the conventional heat kernel.
    Squared,
}

/// Which side of the threshold an epsilon-neighborhood edge lives on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EpsilonRule {
    /// Connect `d_ij <= ε`.
    #[default]
    WithinThreshold,
    /// Connect `d_ij > ε`.
    BeyondThreshold,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GraphKind {
    Epsilon { eps: f64, rule: EpsilonRule },
    MutualKnn { k: usize },
    Full { sigma: f64, norm: KernelNorm },
}

/// Symmetric nonnegative weights with a zero diagonal.
#[derive(Clone, Debug)]
pub struct SimilarityGraph {
    weights: DenseMatrix,
    kind: GraphKind,
}

impl SimilarityGraph {
    /// Wraps an explicit weight matrix after checking symmetry, a zero
    /// diagonal and nonnegativity.
    pub fn from_weights(weights: DenseMatrix, kind: GraphKind) -> Result<Self> {
        if !weights.is_square() {
            return Err(Error::NotSquare {
                rows: weights.rows(),
                cols: weights.cols(),
            });
        }
        let n = weights.rows();
        for i in 0..n {
            for j in 0..n {
                let w = weights.get(i, j);
                if w.im != 0.0 || w.re < 0.0 || !w.re.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "weight ({i},{j}) = {w} is not a nonnegative real"
                    )));
                }
                if (w.re - weights.get(j, i).re).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "weights are not symmetric at ({i},{j})"
                    )));
                }
            }
            if weights.get(i, i).re != 0.0 {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {i}")));
            }
        }
        Ok(Self { weights, kind })
    }

    pub fn weights(&self) -> &DenseMatrix {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights.get(i, j).re
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.weights.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.weight(i, j)).sum())
            .collect()
    }

    /// Connected components as a label per vertex, numbered in order of
    /// their smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next;
            while let Some(v) = stack.pop() {
                let fresh: Vec<usize> = (0..n).filter(|&u| label[u] == usize::MAX && self.weight(v, u) > 0.0).collect();
                for u in fresh {
                    label[u] = next;
                    stack.push(u);
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }
}

pub fn gaussian_similarity(xi: &[f64], xj: &[f64], sigma: f64, norm: KernelNorm) -> Result<f64> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!("sigma must be > 0, got {sigma}")));
    }
    let d = match norm {
        KernelNorm::Unsquared => euclidean(xi, xj),
        KernelNorm::Squared => squared_euclidean(xi, xj),
    };
    Ok((-d / (2.0 * sigma * sigma)).exp())
}

fn unweighted(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> DenseMatrix {
    DenseMatrix::from_real_fn(n, n, |i, j| if i != j && edge(i, j) { 1.0 } else { 0.0 })
}

pub fn build_epsilon_graph(ps: &PointSet, eps: f64, rule: EpsilonRule) -> Result<SimilarityGraph> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("epsilon must be > 0, got {eps}")));
    }
    let w = unweighted(ps.len(), |i, j| {
        let d = ps.distance(i, j);
        match rule {
            EpsilonRule::WithinThreshold => d <= eps,
            EpsilonRule::BeyondThreshold => d > eps,
        }
    });
    Ok(SimilarityGraph {
        weights: w,
        kind: GraphKind::Epsilon { eps, rule },
    })
}

/// Indices of the `k` nearest neighbors of every point; self excluded,
/// distance ties broken by lower index.
fn nearest_neighbors(ps: &PointSet, k: usize) -> Vec<Vec<usize>> {
    (0..ps.len())
        .map(|i| {
            let mut others: Vec<(f64, usize)> = (0..ps.len())
                .filter(|&j| j != i)
                .map(|j| (ps.distance(i, j), j))
                .collect();
            others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            others.into_iter().take(k).map(|(_, j)| j).collect()
        })
        .collect()
}

/// Mutual k-nearest-neighbor graph: `i ~ j` iff each is among the other's
/// `k` nearest neighbors.
pub fn build_knn_graph(ps: &PointSet, k: usize) -> Result<SimilarityGraph> {
    let n = ps.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "k must satisfy 1 <= k < N = {n}, got {k}"
        )));
    }
    let nn = nearest_neighbors(ps, k);
    let w = unweighted(n, |i, j| nn[i].contains(&j) && nn[j].contains(&i));
    Ok(SimilarityGraph {
        weights: w,
        kind: GraphKind::MutualKnn { k },
    })
}

pub fn build_full_graph(ps: &PointSet, sigma: f64, norm: KernelNorm) -> Result<SimilarityGraph> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!("sigma must be > 0, got {sigma}")));
    }
    let n = ps.len();
    let mut w = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let s = gaussian_similarity(ps.point(i), ps.point(j), sigma, norm)?;
            w.set(i, j, Complex64::new(s, 0.0));
            w.set(j, i, Complex64::new(s, 0.0));
        }
    }
    Ok(SimilarityGraph {
        weights: w,
        kind: GraphKind::Full { sigma, norm },
    })
}

pub fn degree_matrix(g: &SimilarityGraph) -> DenseMatrix {
    DenseMatrix::from_real_diagonal(&g.degrees())
}

/// `L = D - W`.
pub fn laplacian(g: &SimilarityGraph) -> DenseMatrix {
    &degree_matrix(g) - g.weights()
}

/// Treatment of zero-degree vertices in the normalized Laplacian.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IsolatedVertices {
    #[default]
    Reject,
    /// Use `0` for `d^{-1/2}` of isolated vertices, leaving an identity row.
    Drop,
}

/// `I - D^{-1/2} W D^{-1/2}`.
pub fn normalized_laplacian(g: &SimilarityGraph, isolated: IsolatedVertices) -> Result<DenseMatrix> {
    let deg = g.degrees();
    let mut inv_sqrt = Vec::with_capacity(deg.len());
    for (i, &d) in deg.iter().enumerate() {
        if d > 0.0 {
            inv_sqrt.push(1.0 / d.sqrt());
        } else {
            match isolated {
                IsolatedVertices::Reject => return Err(Error::IsolatedVertex { index: i }),
                IsolatedVertices::Drop => inv_sqrt.push(0.0),
            }
        }
    }
    let n = g.len();
    Ok(DenseMatrix::from_real_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - inv_sqrt[i] * g.weight(i, j) * inv_sqrt[j]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::hermitian_eig;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::new(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn edges(g: &SimilarityGraph) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for i in 0..g.len() {
            for j in (i + 1)..g.len() {
                if g.weight(i, j) > 0.0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn point_set_validation() {
        assert!(PointSet::new(vec![vec![1.0]]).is_err());
        assert!(PointSet::new(vec![vec![], vec![]]).is_err());
        assert!(matches!(
            PointSet::new(vec![vec![1.0], vec![1.0, 2.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(PointSet::new(vec![vec![f64::NAN], vec![1.0]]).is_err());
    }

    #[test]
    fn gaussian_examples() {
        let s = gaussian_similarity(&[1.0, 2.0], &[1.0, 2.0], 0.7, KernelNorm::Unsquared).unwrap();
        assert_eq!(s, 1.0);
        // ‖x_i - x_j‖ = 2σ² with σ = 1.5 → distance 4.5.
        let s = gaussian_similarity(&[0.0], &[4.5], 1.5, KernelNorm::Unsquared).unwrap();
        assert!((s - (-1f64).exp()).abs() < 1e-15);
        assert!((s - 0.36788).abs() < 1e-5);
        // ‖x_i - x_j‖² = 2σ² with σ = 1 → distance sqrt(2).
        let s = gaussian_similarity(&[0.0, 0.0], &[1.0, 1.0], 1.0, KernelNorm::Squared).unwrap();
        assert!((s - (-1f64).exp()).abs() < 1e-15);
        assert!(gaussian_similarity(&[0.0], &[1.0], 0.0, KernelNorm::Squared).is_err());
        assert!(gaussian_similarity(&[0.0], &[1.0], -1.0, KernelNorm::Squared).is_err());
    }

    #[test]
    fn epsilon_graph_examples() {
        let ps = line(&[0.0, 1.0, 10.0]);
        let g = build_epsilon_graph(&ps, 2.0, EpsilonRule::WithinThreshold).unwrap();
        assert_eq!(edges(&g), vec![(0, 1)]);
        let g = build_epsilon_graph(&ps, 100.0, EpsilonRule::WithinThreshold).unwrap();
        assert_eq!(edges(&g), vec![(0, 1), (0, 2), (1, 2)]);
        let g = build_epsilon_graph(&ps, 0.5, EpsilonRule::WithinThreshold).unwrap();
        assert!(edges(&g).is_empty());
        let g = build_epsilon_graph(&ps, 2.0, EpsilonRule::BeyondThreshold).unwrap();
        assert_eq!(edges(&g), vec![(0, 2), (1, 2)]);
        assert!(build_epsilon_graph(&ps, 0.0, EpsilonRule::WithinThreshold).is_err());
    }

    #[test]
    fn knn_graph_examples() {
        let g = build_knn_graph(&line(&[0.0, 1.0, 10.0, 11.0]), 1).unwrap();
        assert_eq!(edges(&g), vec![(0, 1), (2, 3)]);
        let ps = line(&[0.0, 1.0, 10.0, 11.0]);
        let g = build_knn_graph(&ps, 3).unwrap();
        assert_eq!(edges(&g).len(), 6);
        // 1 is equidistant from 0 and 2; the tie goes to 0, so {1,2} is not mutual.
        let g = build_knn_graph(&line(&[0.0, 1.0, 2.0]), 1).unwrap();
        assert_eq!(edges(&g), vec![(0, 1)]);
        assert!(build_knn_graph(&ps, 0).is_err());
        assert!(build_knn_graph(&ps, 4).is_err());
    }

    #[test]
    fn full_graph_examples() {
        let ps = PointSet::new(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let g = build_full_graph(&ps, 1.0, KernelNorm::Unsquared).unwrap();
        assert_eq!(g.weight(0, 1), 1.0);
        assert_eq!(g.weight(0, 0), 0.0);
        let g = build_full_graph(&line(&[0.0, 2.0, 4.0]), 0.8, KernelNorm::Squared).unwrap();
        assert_eq!(g.weight(0, 1), g.weight(1, 2));
        assert!(g.weights().is_hermitian(1e-12));
    }

    #[test]
    fn degree_examples() {
        let w = DenseMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let g = SimilarityGraph::from_weights(w, GraphKind::MutualKnn { k: 1 }).unwrap();
        assert_eq!(degree_matrix(&g), DenseMatrix::identity(2));
        let z = SimilarityGraph::from_weights(DenseMatrix::zeros(3, 3), GraphKind::MutualKnn { k: 1 })
            .unwrap();
        assert_eq!(degree_matrix(&z), DenseMatrix::zeros(3, 3));
        let k3 = DenseMatrix::from_real_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 });
        let g = SimilarityGraph::from_weights(k3, GraphKind::MutualKnn { k: 2 }).unwrap();
        assert_eq!(degree_matrix(&g).diagonal_real(), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn laplacian_examples() {
        let w = DenseMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let g = SimilarityGraph::from_weights(w, GraphKind::MutualKnn { k: 1 }).unwrap();
        let l = laplacian(&g);
        assert_eq!(l.real_rows(), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
        let e = hermitian_eig(&l, 1e-10).unwrap();
        assert!(e.eigenvalues[0].abs() < 1e-12 && (e.eigenvalues[1] - 2.0).abs() < 1e-12);
        assert_eq!(normalized_laplacian(&g, IsolatedVertices::Reject).unwrap(), l);

        let g = build_knn_graph(&line(&[0.0, 1.0, 10.0, 11.0]), 1).unwrap();
        let e = hermitian_eig(&laplacian(&g), 1e-10).unwrap();
        let zeros = e.eigenvalues.iter().filter(|l| l.abs() < 1e-10).count();
        assert_eq!(zeros, 2);
    }

    #[test]
    fn normalized_laplacian_regular_graph_scales() {
        // 4-cycle is 2-regular.
        let w = DenseMatrix::from_real_fn(4, 4, |i, j| {
            if (i + 1) % 4 == j || (j + 1) % 4 == i { 1.0 } else { 0.0 }
        });
        let g = SimilarityGraph::from_weights(w, GraphKind::MutualKnn { k: 2 }).unwrap();
        let ln = normalized_laplacian(&g, IsolatedVertices::Reject).unwrap();
        assert!(ln.max_abs_diff(&laplacian(&g).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn isolated_vertex_policy() {
        let g = build_epsilon_graph(&line(&[0.0, 1.0, 10.0]), 2.0, EpsilonRule::WithinThreshold).unwrap();
        assert!(matches!(
            normalized_laplacian(&g, IsolatedVertices::Reject),
            Err(Error::IsolatedVertex { index: 2 })
        ));
        let ln = normalized_laplacian(&g, IsolatedVertices::Drop).unwrap();
        assert_eq!(ln.get(2, 2).re, 1.0);
        assert_eq!(ln.get(0, 2).re, 0.0);
    }

    #[test]
    fn from_weights_rejects_bad_input() {
        let asym = DenseMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]).unwrap();
        assert!(SimilarityGraph::from_weights(asym, GraphKind::MutualKnn { k: 1 }).is_err());
        let neg = DenseMatrix::from_real_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(SimilarityGraph::from_weights(neg, GraphKind::MutualKnn { k: 1 }).is_err());
        let looped = DenseMatrix::identity(2);
        assert!(SimilarityGraph::from_weights(looped, GraphKind::MutualKnn { k: 1 }).is_err());
    }

    fn random_points(rng: &mut impl Rng, n: usize, d: usize) -> PointSet {
        PointSet::new((0..n).map(|_| (0..d).map(|_| rng.random::<f64>() * 4.0).collect()).collect())
            .unwrap()
    }

    /// Disjoint union of random connected blocks with the given sizes.
    fn random_components(rng: &mut impl Rng, sizes: &[usize]) -> SimilarityGraph {
        let n: usize = sizes.iter().sum();
        let mut block = vec![0; n];
        let mut at = 0;
        for (b, &s) in sizes.iter().enumerate() {
            block[at..at + s].fill(b);
            at += s;
        }
        let mut w = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                // A path inside each block keeps it connected; other edges are random.
                let path = j == i + 1;
                if block[i] == block[j] && (path || rng.random::<f64>() < 0.4) {
                    let x = 0.2 + rng.random::<f64>();
                    w.set(i, j, Complex64::new(x, 0.0));
                    w.set(j, i, Complex64::new(x, 0.0));
                }
            }
        }
        SimilarityGraph::from_weights(w, GraphKind::MutualKnn { k: 1 }).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn constructed_graphs_are_valid(seed in any::<u64>(), n in 2usize..20, d in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ps = random_points(&mut rng, n, d);
            let graphs = [
                build_epsilon_graph(&ps, 1.5, EpsilonRule::WithinThreshold).unwrap(),
                build_knn_graph(&ps, 1 + (seed as usize) % (n - 1)).unwrap(),
                build_full_graph(&ps, 0.9, KernelNorm::Squared).unwrap(),
            ];
            for g in &graphs {
                prop_assert!(SimilarityGraph::from_weights(g.weights().clone(), g.kind()).is_ok());
                let l = laplacian(g);
                for i in 0..n {
                    let row: f64 = (0..n).map(|j| l.get(i, j).re).sum();
                    prop_assert!(row.abs() <= 1e-12);
                }
                let e = hermitian_eig(&l, 1e-10).unwrap();
                prop_assert!(e.eigenvalues[0] >= -1e-10);
            }
            let full = &graphs[2];
            let ln = normalized_laplacian(full, IsolatedVertices::Reject).unwrap();
            let e = hermitian_eig(&ln, 1e-10).unwrap();
            prop_assert!(e.eigenvalues[0].abs() <= 1e-10);
        }

        #[test]
        fn zero_multiplicity_counts_components(seed in any::<u64>(), k in 1usize..=4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sizes: Vec<usize> = (0..k).map(|_| rng.random_range(1..6)).collect();
            let g = random_components(&mut rng, &sizes);
            prop_assert_eq!(g.component_count(), k);
            let e = hermitian_eig(&laplacian(&g), 1e-10).unwrap();
            let zeros = e.eigenvalues.iter().filter(|l| l.abs() < 1e-9).count();
            prop_assert_eq!(zeros, k);
        }
    }
}
