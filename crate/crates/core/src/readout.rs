//! Reading clustering information out of the amplified state.
//!
//! Similarity of a candidate indicator is the probability of reading `|0>`
//! after a reflection that maps the indicator onto `|0>`. The `e^{iY}`
//! readout produces a distribution over system basis states.

use std::fmt;

use num_complex::Complex64;

use crate::classical::{range_projection, IndicatorVector};
use crate::encoding::EvolutionOperator;
use crate::numerics::{fidelity, kron, proj_reflection, reflect, reflector_to_zero, ComplexVector, DenseMatrix, OPERATOR_TOL};
use crate::qpea::{amplify_circuit, postselect_marked, AmplifyOptions, BpeaCircuit, PeaConfig, RegisterState};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReflectionKind {
    /// The reflection exchanging `|y>` and `|0>`.
    #[default]
    Mapping,
    /// `I - 2|y><y|` followed by a `|0>` measurement.
    Verbatim,
}

fn check_pair(psi: &ComplexVector, y: &ComplexVector) -> Result<()> {
    if psi.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: y.dim(), found: psi.dim() });
    }
    psi.ensure_normalized(OPERATOR_TOL)?;
    y.ensure_normalized(OPERATOR_TOL)
}

/// Probability of `|0>` after reflecting `psi` with the reflection built from `y`.
pub fn householder_similarity(psi: &ComplexVector, y: &ComplexVector, kind: ReflectionKind) -> Result<f64> {
    check_pair(psi, y)?;
    let out = match kind {
        ReflectionKind::Mapping => match reflector_to_zero(y)? {
            Some(u) => reflect(&u, psi),
            None => psi.clone(),
        },
        ReflectionKind::Verbatim => reflect(y, psi),
    };
    Ok(out.get(0).norm_sqr().min(1.0))
}

/// `<y| ρ_sys |y>` of a register state, measured through the mapping reflection
/// applied to every phase block.
pub fn register_similarity(state: &RegisterState, y: &ComplexVector) -> Result<f64> {
    if y.dim() != state.system_dim() {
        return Err(Error::DimensionMismatch { expected: state.system_dim(), found: y.dim() });
    }
    y.ensure_normalized(OPERATOR_TOL)?;
    let blocks = state.to_blocks();
    let u = reflector_to_zero(y)?;
    let mut p = 0.0;
    for col in blocks.column_iter() {
        let v = ComplexVector::new(col.iter().copied().collect());
        let out = match &u {
            Some(u) => reflect(u, &v),
            None => v,
        };
        p += out.get(0).norm_sqr();
    }
    Ok(p.min(1.0))
}

/// `<y| V V^H |y>` computed from the eigendecomposition.
pub fn direct_similarity(h: &DenseMatrix, y: &ComplexVector, zero_tol: Option<f64>) -> Result<f64> {
    y.ensure_normalized(OPERATOR_TOL)?;
    Ok(range_projection(h, y, zero_tol)?.norm().powi(2).min(1.0))
}

/// `exp(iY) = ⊗ (cos 1 · I + i sin 1 · σ_x)` over `n` qubits.
pub fn e_iy_operator(n: u32) -> DenseMatrix {
    let (s, c) = 1f64.sin_cos();
    let single = DenseMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(c, 0.0), Complex64::new(0.0, s), Complex64::new(0.0, s), Complex64::new(c, 0.0)],
    );
    (0..n).fold(DenseMatrix::identity(1), |acc, _| kron(&acc, &single))
}

/// What runs between the two `e^{iY}` applications.
#[derive(Clone, Debug)]
pub enum ReadoutPipeline<'a> {
    Identity,
    Amplified {
        cfg: PeaConfig,
        evolution: &'a EvolutionOperator,
        opts: AmplifyOptions,
    },
}

#[derive(Clone, Debug)]
pub struct ClusterReadout {
    /// Probability of each system basis outcome.
    pub distribution: Vec<f64>,
    pub argmax: usize,
}

/// Uniform superposition, `e^{iY}`, the pipeline, `e^{iY}` again, then a
/// computational-basis measurement of the system register.
pub fn e_iy_readout(pipeline: &ReadoutPipeline<'_>, n: u32) -> Result<ClusterReadout> {
    let e = e_iy_operator(n);
    let input = e.apply(&ComplexVector::uniform(1 << n));
    let distribution = match pipeline {
        ReadoutPipeline::Identity => e.apply(&input).probabilities(),
        ReadoutPipeline::Amplified { cfg, evolution, opts } => {
            let circuit = BpeaCircuit::new(*cfg, evolution, &input)?;
            let outcome = amplify_circuit(&circuit, opts)?;
            let blocks = outcome.peak_state.to_blocks();
            let rotated = e.as_nalgebra() * blocks;
            let mut dist = vec![0.0; 1 << n];
            for col in rotated.column_iter() {
                for (d, a) in dist.iter_mut().zip(col.iter()) {
                    *d += a.norm_sqr();
                }
            }
            dist
        }
    };
    let argmax = distribution
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 + 1e-12 { (i, p) } else { best })
        .0;
    Ok(ClusterReadout { distribution, argmax })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimilarityMethod {
    Householder,
    Direct,
}

impl fmt::Display for SimilarityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimilarityMethod::Householder => "householder",
            SimilarityMethod::Direct => "direct",
        })
    }
}

impl std::str::FromStr for SimilarityMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "householder" => Ok(SimilarityMethod::Householder),
            "direct" => Ok(SimilarityMethod::Direct),
            other => Err(Error::InvalidParameter(format!("unknown similarity method `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityReport {
    pub y_id: String,
    pub similarity: f64,
    pub method: SimilarityMethod,
    /// 1-based position in the descending ordering.
    pub rank: usize,
}

/// A named unit vector to be scored.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub id: String,
    pub vector: ComplexVector,
}

impl Candidate {
    pub fn new(id: impl Into<String>, vector: ComplexVector) -> Self {
        Self { id: id.into(), vector }
    }

    pub fn from_indicator(id: impl Into<String>, y: &IndicatorVector) -> Self {
        Self::new(id, y.to_vector())
    }
}

/// Settings for the amplified similarity pipeline.
#[derive(Clone, Copy, Debug)]
pub struct RankingOptions {
    pub cfg: PeaConfig,
    /// Extra iterations beyond the predicted optimum.
    pub margin: usize,
    /// Hard cap on iterations per candidate.
    pub max_iter: usize,
}

impl Default for RankingOptions {
    fn default() -> Self {
        Self { cfg: PeaConfig::qft(6), margin: 2, max_iter: 1024 }
    }
}

/// Outcome of the amplified readout for one candidate.
#[derive(Clone, Debug)]
pub struct CandidateRun {
    pub similarity: f64,
    /// Fidelity of the postselected system state with the projected target.
    pub fidelity: f64,
    /// Probability of the marked outcome at the chosen iteration.
    pub success_prob: f64,
    pub iterations: usize,
}

/// Runs amplification for `y` with an iteration budget set from the initial
/// marked-subspace weight, keeps the iteration with the largest marked
/// probability, postselects the phase register onto `f2` and scores the
/// remaining system state with [`householder_similarity`].
///
/// Inputs with no weight on the range of `H` score 0 without running.
pub fn amplified_similarity(u: &EvolutionOperator, y: &ComplexVector, opts: &RankingOptions) -> Result<CandidateRun> {
    let circuit = BpeaCircuit::new(opts.cfg, u, y)?;
    let none = CandidateRun { similarity: 0.0, fidelity: 1.0, success_prob: 0.0, iterations: 0 };
    if circuit.target_weight() <= 1e-20 {
        return Ok(none);
    }
    let mut state = circuit.prepare();
    let p0 = circuit.f2_probability(&state);
    let budget = if p0 > 0.0 {
        let theta = p0.min(1.0).sqrt().asin();
        ((std::f64::consts::PI / (4.0 * theta)).ceil() as usize + opts.margin).min(opts.max_iter)
    } else {
        opts.max_iter
    };
    let mut best = (0, p0, state.clone());
    for t in 1..=budget {
        state = circuit.step(&state);
        let p = circuit.f2_probability(&state);
        if p > best.1 {
            best = (t, p, state.clone());
        }
    }
    let Some((g, p)) = postselect_marked(&best.2) else {
        return Ok(none);
    };
    let y = y.normalized()?;
    Ok(CandidateRun {
        similarity: householder_similarity(&g, &y, ReflectionKind::Mapping)?,
        fidelity: fidelity(circuit.target(), &g)?,
        success_prob: p,
        iterations: best.0,
    })
}

fn ranked(mut scored: Vec<(String, f64)>, method: SimilarityMethod) -> Vec<SimilarityReport> {
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));
    scored
        .into_iter()
        .enumerate()
        .map(|(i, (y_id, similarity))| SimilarityReport { y_id, similarity, method, rank: i + 1 })
        .collect()
}

/// Scores every candidate through the amplified pipeline and sorts descending.
pub fn rank_indicators(u: &EvolutionOperator, candidates: &[Candidate], opts: &RankingOptions) -> Result<Vec<SimilarityReport>> {
    let scored = candidates
        .iter()
        .map(|c| amplified_similarity(u, &c.vector, opts).map(|r| (c.id.clone(), r.similarity)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ranked(scored, SimilarityMethod::Householder))
}

/// Scores every candidate by [`direct_similarity`] and sorts descending.
pub fn rank_indicators_direct(h: &DenseMatrix, candidates: &[Candidate], zero_tol: Option<f64>) -> Result<Vec<SimilarityReport>> {
    let scored = candidates
        .iter()
        .map(|c| direct_similarity(h, &c.vector, zero_tol).map(|s| (c.id.clone(), s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ranked(scored, SimilarityMethod::Direct))
}

/// The readout reflection for `y` as a matrix.
pub fn readout_reflection(y: &ComplexVector, kind: ReflectionKind) -> Result<DenseMatrix> {
    match kind {
        ReflectionKind::Mapping => crate::numerics::reflection_to_zero(y),
        ReflectionKind::Verbatim => proj_reflection(y),
    }
}
