//! The batch commands. Each one reads an [`ExperimentConfig`], writes its
//! files under the configured output directory and returns their paths.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use log::{info, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qspectral_core::classical::{
    adjusted_rand_index, agreement_rate, cluster_means, eigengap_select, indicator_matrix, kmeans, kmeans_objective,
    spectral_cluster, trace_objective, KmeansInit, SpectralVariant,
};
use qspectral_core::encoding::{gate_count_estimate, gram_matrix, make_evolution, pad_to_qubits, pad_vector, EvolutionOptions};
use qspectral_core::graph::{
    build_epsilon_graph, build_full_graph, build_knn_graph, laplacian, GraphKind, normalized_laplacian, IsolatedVertices,
};
use qspectral_core::numerics::hermitian_eig;
use qspectral_core::qpea::{amplify, AmplifyOptions};
use qspectral_core::readout::{rank_indicators, rank_indicators_direct, Candidate, RankingOptions};
use qspectral_core::{io, synth, ClusterAssignment, DenseMatrix, IndicatorVector, PeaMode, PointSet, SimilarityGraph};

use crate::config::{Candidates, DataSource, ExperimentConfig, MatrixTarget, VariantName};

const EIG_TOL: f64 = 1e-10;

/// Points of the configured dataset, or an error for matrix-only sources.
pub fn load_points(cfg: &ExperimentConfig) -> Result<PointSet> {
    let d = &cfg.data;
    match d.source {
        DataSource::Csv => {
            let path = d.path.as_ref().context("data.path is required for csv input")?;
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            io::read_points(file).with_context(|| format!("reading points from {}", path.display()))
        }
        DataSource::Blobs => Ok(synth::blobs(&d.centers, d.per_cluster, &d.sigma, cfg.seed).0),
        DataSource::Moons => Ok(synth::moons(d.per_cluster, d.noise, cfg.seed).0),
        DataSource::RandomPsd => bail!("data.source = \"random-psd\" has no points; use csv, blobs or moons"),
    }
}

pub fn build_graph(cfg: &ExperimentConfig, ps: &PointSet) -> Result<SimilarityGraph> {
    Ok(match cfg.graph.kind() {
        GraphKind::Full { sigma, norm } => build_full_graph(ps, sigma, norm)?,
        GraphKind::Epsilon { eps, rule } => build_epsilon_graph(ps, eps, rule)?,
        GraphKind::MutualKnn { k } => build_knn_graph(ps, k)?,
    })
}

pub fn target_matrix(target: MatrixTarget, g: &SimilarityGraph, ps: &PointSet) -> Result<DenseMatrix> {
    Ok(match target {
        MatrixTarget::Laplacian => laplacian(g),
        MatrixTarget::NormalizedLaplacian => normalized_laplacian(g, IsolatedVertices::Reject)?,
        MatrixTarget::Gram => gram_matrix(ps, true),
    })
}

fn create(out: &Path, name: &str) -> Result<(BufWriter<File>, PathBuf)> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let path = out.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok((BufWriter::new(file), path))
}

fn write_text(out: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let (mut w, path) = create(out, name)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(path)
}

fn write_with(out: &Path, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> qspectral_core::Result<()>) -> Result<PathBuf> {
    let (mut w, path) = create(out, name)?;
    f(&mut w).with_context(|| format!("writing {}", path.display()))?;
    w.flush()?;
    Ok(path)
}

/// Writes `W.csv`, `laplacian_eigs.csv` and `eigengap.txt`.
pub fn cmd_graph(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let ps = load_points(cfg)?;
    let g = build_graph(cfg, &ps)?;
    let matrix = target_matrix(cfg.graph.target, &g, &ps)?;
    let eigs = hermitian_eig(&matrix, EIG_TOL)?.eigenvalues;
    let k = eigengap_select(&eigs, cfg.graph.k_max);
    info!("{} points, {} components, eigengap selects k = {k}", ps.len(), g.component_count());
    Ok(vec![
        write_with(&cfg.out, "W.csv", |w| io::write_matrix(w, g.weights()))?,
        write_with(&cfg.out, "laplacian_eigs.csv", |w| io::write_eigenvalues(w, &eigs))?,
        write_text(&cfg.out, "eigengap.txt", &format!("{k}\n"))?,
    ])
}

/// Spectral clustering of the configured dataset.
pub struct ClassicalRun {
    pub points: PointSet,
    pub graph: SimilarityGraph,
    pub assignment: ClusterAssignment,
    pub eigenvectors: DenseMatrix,
}

pub fn run_classical(cfg: &ExperimentConfig) -> Result<ClassicalRun> {
    let ps = load_points(cfg)?;
    let g = build_graph(cfg, &ps)?;
    let variant = SpectralVariant::from(cfg.classical.variant);
    let k = match cfg.classical.k {
        Some(k) => k,
        None => {
            let matrix = match cfg.classical.variant {
                VariantName::Unnormalized => laplacian(&g),
                _ => normalized_laplacian(&g, IsolatedVertices::Reject)?,
            };
            let k = eigengap_select(&hermitian_eig(&matrix, EIG_TOL)?.eigenvalues, cfg.graph.k_max);
            if k < 2 {
                warn!("eigengap selected k = {k}; clustering into 2 groups instead");
            }
            k.max(2)
        }
    };
    let result = spectral_cluster(&g, k, variant, cfg.seed)?;
    Ok(ClassicalRun { points: ps, graph: g, assignment: result.assignment, eigenvectors: result.eigenvectors })
}

/// Writes `labels_classical.csv`, `objective.txt` and `trace_objective.txt`.
pub fn cmd_cluster_classical(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let run = run_classical(cfg)?;
    let a = &run.assignment;
    let centroids = cluster_means(&run.points, a.k, &a.labels);
    let objective = kmeans_objective(&run.points, &a.labels, &centroids);
    let y = indicator_matrix(&a.indicators()?)?;
    let trace = trace_objective(&y, &run.eigenvectors)?;
    info!("k = {}, objective {objective}, trace objective {trace}", a.k);
    Ok(vec![
        write_with(&cfg.out, "labels_classical.csv", |w| io::write_cluster_assignment(w, a))?,
        write_text(&cfg.out, "objective.txt", &format!("{objective}\n"))?,
        write_text(&cfg.out, "trace_objective.txt", &format!("{trace}\n"))?,
    ])
}

/// The matrix `H` driven by the quantum commands, before padding.
pub fn hamiltonian(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<DenseMatrix> {
    let d = &cfg.data;
    if d.source == DataSource::RandomPsd {
        if d.rank == 0 || d.rank > d.n {
            bail!("data.rank must lie in 1..=n = {}, got {}", d.n, d.rank);
        }
        if !(d.eig_min > 0.0 && d.eig_min <= d.eig_max) {
            bail!("need 0 < data.eig_min <= data.eig_max");
        }
        return Ok(synth::random_psd(rng, d.n, d.rank, (d.eig_min, d.eig_max)));
    }
    let ps = load_points(cfg)?;
    let g = build_graph(cfg, &ps)?;
    target_matrix(cfg.quantum.matrix, &g, &ps)
}

fn trajectory_name(mode: PeaMode) -> String {
    match mode {
        PeaMode::Qft => "trajectory_qft_na.csv".into(),
        PeaMode::Biased { kappa } => format!("trajectory_biased_{kappa}.csv"),
    }
}

/// Writes one trajectory per configured run and `summary.csv`.
pub fn cmd_amplify_trace(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let h = hamiltonian(cfg, &mut rng)?;
    let y = synth::random_overlapping_input(&mut rng, &h, cfg.amplify.min_overlap)?;
    let (h, _) = pad_to_qubits(&h)?;
    let y = pad_vector(&y, h.rows());
    let opts = EvolutionOptions { backend: cfg.pea.backend(), time: cfg.pea.time, ..Default::default() };
    let u = make_evolution(&h, cfg.pea.m, &opts)?;
    let amp = AmplifyOptions { max_iter: cfg.amplify.max_iter, stop_tol: cfg.amplify.stop_tol, stop_qubit: 0 };

    let mut written = Vec::new();
    let mut summary = String::from("mode,kappa,peak_iteration,peak_fidelity,first_peak,first_step_gain\n");
    for run in cfg.pea.runs() {
        let outcome = amplify(&run, &u, &y, &amp)?;
        let t = &outcome.trajectory;
        let name = trajectory_name(run.mode);
        written.push(write_with(&cfg.out, &name, |w| io::write_trajectory(w, t))?);
        let (mode, kappa) = match run.mode {
            PeaMode::Qft => ("qft", String::new()),
            PeaMode::Biased { kappa } => ("biased", kappa.to_string()),
        };
        let peak = t.argmax_fidelity().unwrap_or(0);
        let first = t.first_peak().map(|p| p.to_string()).unwrap_or_default();
        let gain = match t.records.as_slice() {
            [a, b, ..] => (b.success_prob - a.success_prob).to_string(),
            _ => String::new(),
        };
        info!("{name}: peak fidelity {} at iteration {peak}", t.peak_fidelity());
        summary.push_str(&format!("{mode},{kappa},{peak},{},{first},{gain}\n", t.peak_fidelity()));
    }
    written.push(write_text(&cfg.out, "summary.csv", &summary)?);
    Ok(written)
}

fn candidates(cfg: &ExperimentConfig, run: &ClassicalRun) -> Result<Vec<(String, IndicatorVector)>> {
    let n = run.points.len();
    match &cfg.quantum.candidates {
        Candidates::Auto(_) => {
            // Clusters from every classical route, deduplicated, so the
            // readout has competing indicators to rank.
            let mut found: Vec<(String, IndicatorVector)> = Vec::new();
            let mut push = |id: String, y: IndicatorVector| {
                if !found.iter().any(|(_, z)| *z == y) {
                    found.push((id, y));
                }
            };
            for (c, y) in run.assignment.indicators()?.into_iter().enumerate() {
                push(format!("spectral{c}"), y);
            }
            for variant in [SpectralVariant::Unnormalized, SpectralVariant::Normalized, SpectralVariant::RowNormalized] {
                let other = spectral_cluster(&run.graph, run.assignment.k, variant, cfg.seed)?;
                for (c, y) in other.assignment.indicators()?.into_iter().enumerate() {
                    push(format!("{variant:?}{c}").to_lowercase(), y);
                }
            }
            let km = kmeans(&run.points, run.assignment.k, KmeansInit::FarthestPoint { seed: cfg.seed }, 300)?;
            for (c, y) in km.indicators()?.into_iter().enumerate() {
                push(format!("kmeans{c}"), y);
            }
            Ok(found)
        }
        Candidates::Explicit(lists) => lists
            .iter()
            .enumerate()
            .map(|(i, members)| {
                if let Some(&bad) = members.iter().find(|&&m| m >= n) {
                    bail!("candidate {i} names point {bad}, but the dataset has {n} points");
                }
                Ok((format!("y{i}"), IndicatorVector::new(members.clone(), n)?))
            })
            .collect(),
    }
}

/// Writes `similarity_ranking.csv`, `labels_quantum.csv` and `comparison.txt`.
pub fn cmd_cluster_quantum(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let run = run_classical(cfg)?;
    let cands = candidates(cfg, &run)?;
    if cands.is_empty() {
        bail!("no candidate indicators to rank");
    }
    let h = target_matrix(cfg.quantum.matrix, &run.graph, &run.points)?;
    let scale = hermitian_eig(&h, EIG_TOL)?.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let zero_tol = cfg.quantum.zero_tol_rel * scale;
    let (hp, qubits) = pad_to_qubits(&h)?;
    let opts = EvolutionOptions { backend: cfg.pea.backend(), zero_tol: Some(zero_tol), time: cfg.pea.time, ..Default::default() };
    let u = make_evolution(&hp, cfg.pea.m, &opts)?;
    let padded: Vec<Candidate> =
        cands.iter().map(|(id, y)| Candidate::new(id.clone(), pad_vector(&y.to_vector(), hp.rows()))).collect();

    let pea = cfg.pea.runs()[0];
    let ranking = RankingOptions { cfg: pea, margin: cfg.quantum.margin, max_iter: cfg.quantum.max_iter };
    let quantum = rank_indicators(&u, &padded, &ranking)?;
    let direct = rank_indicators_direct(&hp, &padded, Some(zero_tol))?;

    // Each point takes the best-ranked candidate that contains it; points in
    // no candidate form one extra group.
    let n = run.points.len();
    let mut chosen = vec![usize::MAX; n];
    for report in quantum.iter().rev() {
        let c = cands.iter().position(|(id, _)| *id == report.y_id).expect("ranked ids come from the candidates");
        for &i in cands[c].1.members() {
            chosen[i] = c;
        }
    }
    let uncovered = chosen.iter().filter(|&&c| c == usize::MAX).count();
    if uncovered > 0 {
        warn!("{uncovered} points lie in no candidate and share one extra label");
    }
    let mut order: Vec<usize> = Vec::new();
    let labels: Vec<usize> = chosen
        .iter()
        .map(|c| match order.iter().position(|o| o == c) {
            Some(p) => p,
            None => {
                order.push(*c);
                order.len() - 1
            }
        })
        .collect();

    let classical = &run.assignment.labels;
    let agreement = agreement_rate(classical, &labels);
    let ari = adjusted_rand_index(classical, &labels);
    let terms = u.rank() as u64;
    let dim = hp.rows() as u64;
    let report = format!(
        "agreement_rate {agreement}\nadjusted_rand_index {ari}\ncandidates {}\nmode {}\nphase_qubits {}\nsystem_qubits {qubits}\nunitary_terms {terms}\ngate_count_estimate {}\ngate_count_estimate_simple {}\n",
        cands.len(),
        pea.mode.label(),
        pea.m,
        gate_count_estimate(terms, dim, pea.m, false),
        gate_count_estimate(terms, dim, pea.m, true),
    );
    info!("agreement {agreement}, ARI {ari}, top candidate {}", quantum[0].y_id);

    let mut reports = quantum;
    reports.extend(direct);
    Ok(vec![
        write_with(&cfg.out, "similarity_ranking.csv", |w| io::write_similarity(w, &reports))?,
        write_with(&cfg.out, "labels_quantum.csv", |w| io::write_assignments(w, &labels))?,
        write_text(&cfg.out, "comparison.txt", &report)?,
    ])
}
