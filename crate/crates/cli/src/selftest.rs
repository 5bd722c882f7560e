//! A fast invariant suite covering every module, for checking a build on a
//! new machine.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qspectral_core::classical::{adjusted_rand_index, spectral_cluster, SpectralVariant};
use qspectral_core::encoding::{householder_decompose, make_evolution, DecompositionMode, EvolutionOptions};
use qspectral_core::graph::{laplacian, GraphKind};
use qspectral_core::numerics::{hermitian_eig, proj_reflection, OPERATOR_TOL};
use qspectral_core::qpea::{grover_probability, stagnation_check, AmplifyOptions, BpeaCircuit};
use qspectral_core::readout::{amplified_similarity, direct_similarity, RankingOptions};
use qspectral_core::{io, synth, Complex64, DenseMatrix, PeaConfig, SimilarityGraph};

/// Outcome of one check: a detail line on success, a reason on failure.
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub outcome: Result<String, String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

type CheckFn = fn() -> Result<String, String>;

fn within(value: f64, tol: f64, what: &str) -> Result<String, String> {
    if value <= tol {
        Ok(format!("{what} {value:.3e}"))
    } else {
        Err(format!("{what} {value:.3e} exceeds {tol:.1e}"))
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn eig_residual() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h = synth::random_hermitian(&mut rng, 12);
    let eig = hermitian_eig(&h, OPERATOR_TOL).map_err(err)?;
    within(eig.reconstruct().max_abs_diff(&h), 1e-10, "reconstruction error")
}

fn reflection_involution() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let u = synth::random_unit_vector(&mut rng, 8, true);
    let r = proj_reflection(&u).map_err(err)?;
    within((&r * &r).max_abs_diff(&DenseMatrix::identity(8)), 1e-12, "R² - I")
}

fn two_cliques() -> SimilarityGraph {
    let w = DenseMatrix::from_real_fn(8, 8, |i, j| if i != j && (i < 4) == (j < 4) { 1.0 } else { 0.0 });
    SimilarityGraph::from_weights(w, GraphKind::Full { sigma: 1.0, norm: Default::default() }).expect("valid weights")
}

fn laplacian_rows() -> Result<String, String> {
    let g = two_cliques();
    let l = laplacian(&g);
    let worst = (0..8).map(|i| (0..8).map(|j| l.get(i, j)).sum::<Complex64>().norm()).fold(0.0, f64::max);
    if g.component_count() != 2 {
        return Err(format!("expected 2 components, found {}", g.component_count()));
    }
    within(worst, 1e-12, "max row sum")
}

fn cliques_split() -> Result<String, String> {
    let g = two_cliques();
    let r = spectral_cluster(&g, 2, SpectralVariant::RowNormalized, 0).map_err(err)?;
    let truth: Vec<usize> = (0..8).map(|i| usize::from(i >= 4)).collect();
    let ari = adjusted_rand_index(&truth, &r.assignment.labels);
    within(1.0 - ari, 1e-12, "1 - ARI")
}

fn householder_round_trip() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ps = synth::random_points(&mut rng, 6, 8);
    let hs = householder_decompose(ps.points(), DecompositionMode::Weighted).map_err(err)?;
    let direct = DenseMatrix::from_real_fn(8, 8, |i, j| ps.points().iter().map(|x| x[i] * x[j]).sum());
    within(hs.reconstruct_via_reflections().max_abs_diff(&direct), 1e-10, "reconstruction error")
}

fn evolution_unitary() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = synth::random_psd(&mut rng, 8, 3, (1.0, 4.0));
    let u = make_evolution(&h, 6, &EvolutionOptions::default()).map_err(err)?;
    let v = u.unitary();
    within((&v.adjoint() * v).max_abs_diff(&DenseMatrix::identity(8)), 1e-10, "U†U - I")
}

fn grover_law() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = synth::random_psd(&mut rng, 8, 3, (1.0, 4.0));
    let y = synth::random_overlapping_input(&mut rng, &h, 0.1).map_err(err)?;
    let u = make_evolution(&h, 5, &EvolutionOptions::default()).map_err(err)?;
    let circuit = BpeaCircuit::new(PeaConfig::biased(5, 2.0), &u, &y).map_err(err)?;
    let mut state = circuit.prepare();
    let p0 = circuit.f2_probability(&state);
    let mut worst: f64 = 0.0;
    for t in 0..12 {
        worst = worst.max((circuit.f2_probability(&state) - grover_probability(p0, t)).abs());
        worst = worst.max((state.norm() - 1.0).abs());
        state = circuit.step(&state);
    }
    within(worst, 1e-9, "max deviation from sin² law or unit norm")
}

fn stagnation() -> Result<String, String> {
    let m = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let h = synth::random_psd(&mut rng, 8, 3, (1.0, 4.0));
    let y = synth::random_overlapping_input(&mut rng, &h, 0.1).map_err(err)?;
    let u = make_evolution(&h, m, &EvolutionOptions::default()).map_err(err)?;
    let circuit = BpeaCircuit::new(PeaConfig::biased(m, stagnation_check(m)), &u, &y).map_err(err)?;
    let outcome = qspectral_core::qpea::amplify_circuit(&circuit, &AmplifyOptions::fixed(1)).map_err(err)?;
    let r = &outcome.trajectory.records;
    within((r[1].success_prob - r[0].success_prob).abs(), 1e-2, "success change at κ = √M")
}

fn similarity_bound() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = synth::random_psd(&mut rng, 8, 3, (1.0, 4.0));
    let y = synth::random_unit_vector(&mut rng, 8, true);
    let u = make_evolution(&h, 6, &EvolutionOptions::default()).map_err(err)?;
    let run = amplified_similarity(&u, &y, &RankingOptions::default()).map_err(err)?;
    let direct = direct_similarity(&h, &y, None).map_err(err)?;
    let excess = (run.similarity - direct).abs() - (1.0 - run.fidelity);
    within(excess.max(0.0), 1e-6, "similarity error beyond 1 - F")
}

fn csv_round_trip() -> Result<String, String> {
    let labels = vec![0, 1, 1, 0, 2];
    let mut buf = Vec::new();
    io::write_assignments(&mut buf, &labels).map_err(err)?;
    let back = io::read_assignments(buf.as_slice()).map_err(err)?;
    if back == labels {
        Ok("labels survive".into())
    } else {
        Err(format!("read back {back:?}"))
    }
}

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("numerics", "hermitian eigendecomposition", eig_residual),
    ("numerics", "reflection is an involution", reflection_involution),
    ("graph", "laplacian rows sum to zero", laplacian_rows),
    ("classical", "disjoint cliques split exactly", cliques_split),
    ("encoding", "householder sum reconstructs", householder_round_trip),
    ("encoding", "evolution operator is unitary", evolution_unitary),
    ("qpea", "marked probability follows sin² law", grover_law),
    ("qpea", "amplification stagnates at κ = √M", stagnation),
    ("readout", "amplified similarity within fidelity bound", similarity_bound),
    ("cli", "assignment csv round trip", csv_round_trip),
];

pub fn run_selftest() -> Vec<Check> {
    CHECKS
        .iter()
        .map(|&(module, name, f)| Check { module, name, outcome: f() })
        .collect()
}
