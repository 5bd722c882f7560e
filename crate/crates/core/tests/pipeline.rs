use std::fs::File;

use qspectral_core::classical::{adjusted_rand_index, spectral_cluster, SpectralVariant};
use qspectral_core::encoding::{gram_matrix, householder_decompose, make_evolution, DecompositionMode, EvolutionOptions};
use qspectral_core::graph::{build_full_graph, KernelNorm};
use qspectral_core::numerics::hermitian_eig;
use qspectral_core::qpea::{amplify, AmplifyOptions};
use qspectral_core::readout::{rank_indicators, rank_indicators_direct, Candidate, RankingOptions};
use qspectral_core::{io, synth, PeaConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

#[test]
fn blobs_cluster_and_rank_end_to_end() {
    let (ps, truth) = synth::blobs(&[vec![-1.5, 0.0], vec![1.5, 0.0]], 8, &[0.3, 0.3], 21);
    let g = build_full_graph(&ps, 1.0, KernelNorm::Squared).unwrap();
    let spectral = spectral_cluster(&g, 2, SpectralVariant::RowNormalized, 0).unwrap();
    assert_eq!(adjusted_rand_index(&truth, &spectral.assignment.labels), 1.0);

    let h = gram_matrix(&ps, true);
    let lmax = *hermitian_eig(&h, 1e-10).unwrap().eigenvalues.last().unwrap();
    let zero_tol = 0.2 * lmax;
    let opts = EvolutionOptions { zero_tol: Some(zero_tol), ..Default::default() };
    let u = make_evolution(&h, 6, &opts).unwrap();
    let mut candidates: Vec<Candidate> = spectral
        .assignment
        .indicators()
        .unwrap()
        .iter()
        .enumerate()
        .map(|(c, y)| Candidate::from_indicator(format!("c{c}"), y))
        .collect();
    let mixed = qspectral_core::IndicatorVector::new(vec![0, 1, 2, 8, 9], 16).unwrap();
    candidates.push(Candidate::from_indicator("mixed", &mixed));

    let quantum = rank_indicators(&u, &candidates, &RankingOptions::default()).unwrap();
    let direct = rank_indicators_direct(&h, &candidates, Some(zero_tol)).unwrap();
    assert_eq!(quantum[2].y_id, "mixed");
    assert_eq!(direct[2].y_id, "mixed");
    for q in &quantum {
        let d = direct.iter().find(|d| d.y_id == q.y_id).unwrap();
        assert!((q.similarity - d.similarity).abs() < 0.02, "{}: {} vs {}", q.y_id, q.similarity, d.similarity);
    }
}

#[test]
fn emitted_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let ps = synth::random_points(&mut rng, 6, 3);
    io::write_points(File::create(dir.path().join("p.csv")).unwrap(), &ps).unwrap();
    let back = io::read_points(File::open(dir.path().join("p.csv")).unwrap()).unwrap();
    assert_eq!(back.points(), ps.points());

    let h = synth::random_psd(&mut rng, 8, 3, (1.0, 4.0));
    io::write_matrix(File::create(dir.path().join("h.csv")).unwrap(), &h).unwrap();
    let back = io::read_matrix(File::open(dir.path().join("h.csv")).unwrap()).unwrap();
    assert_eq!(back.max_abs_diff(&h), 0.0);

    let y = synth::random_overlapping_input(&mut rng, &h, 0.1).unwrap();
    let u = make_evolution(&h, 5, &EvolutionOptions::default()).unwrap();
    let outcome = amplify(&PeaConfig::qft(5), &u, &y, &AmplifyOptions::fixed(6)).unwrap();
    io::write_trajectory(File::create(dir.path().join("t.csv")).unwrap(), &outcome.trajectory).unwrap();
    let rows = io::read_trajectory(File::open(dir.path().join("t.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 7);
    for (row, rec) in rows.iter().zip(&outcome.trajectory.records) {
        assert_eq!(row.iteration, rec.iteration);
        assert_eq!(row.fidelity, rec.fidelity);
        assert_eq!(row.success_prob, rec.success_prob);
        assert_eq!(row.qubit0_p0, rec.qubit0_p0());
    }

    let hs = householder_decompose(ps.transpose().unwrap().points(), DecompositionMode::Weighted).unwrap();
    io::write_decomposition(File::create(dir.path().join("d.csv")).unwrap(), &hs).unwrap();
    let terms = io::read_decomposition(File::open(dir.path().join("d.csv")).unwrap()).unwrap();
    assert_eq!(terms.len(), hs.len());
    for (j, (c, v)) in terms.iter().enumerate() {
        assert_eq!(*c, hs.coefficients[j]);
        assert_eq!(v.len(), hs.dim);
    }
}

#[test]
fn malformed_point_rows_report_their_line() {
    let err = io::read_points("x0,x1\n1,2\n3,oops\n".as_bytes()).unwrap_err();
    assert!(err.to_string().contains('3'), "{err}");
    assert!(io::read_points("".as_bytes()).is_err());
}
