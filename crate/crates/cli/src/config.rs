//! Experiment configuration, read from a TOML file.
//!
//! Every field has a default, so an empty file is a valid configuration. The
//! defaults are the figure-reproduction preset: a seeded 16×16 rank-6 random
//! PSD matrix, a 6-qubit phase register, and qft plus biased runs at κ = 1
//! and κ = 20.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use qspectral_core::classical::SpectralVariant;
use qspectral_core::graph::{EpsilonRule, GraphKind, KernelNorm};
use qspectral_core::{Backend, PeaConfig, PeaMode, QVariant};

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub data: DataConfig,
    pub graph: GraphConfig,
    pub classical: ClassicalConfig,
    pub pea: PeaSection,
    pub amplify: AmplifyConfig,
    pub quantum: QuantumConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            out: PathBuf::from("out"),
            data: DataConfig::default(),
            graph: GraphConfig::default(),
            classical: ClassicalConfig::default(),
            pea: PeaSection::default(),
            amplify: AmplifyConfig::default(),
            quantum: QuantumConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum DataSource {
    /// Points read from a CSV file.
    Csv,
    Blobs,
    Moons,
    /// A random PSD matrix used directly as `H`; there are no points.
    RandomPsd,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    pub source: DataSource,
    /// CSV path for `source = "csv"`, relative to the config file.
    pub path: Option<PathBuf>,
    /// Matrix dimension for `random-psd`.
    pub n: usize,
    pub rank: usize,
    pub eig_min: f64,
    pub eig_max: f64,
    /// Blob centers, one per cluster.
    pub centers: Vec<Vec<f64>>,
    /// Per-axis standard deviation of each blob.
    pub sigma: Vec<f64>,
    pub per_cluster: usize,
    pub noise: f64,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            source: DataSource::RandomPsd,
            path: None,
            n: 16,
            rank: 6,
            eig_min: 1.0,
            eig_max: 4.0,
            centers: vec![vec![-1.5, 0.0], vec![1.5, 0.0]],
            sigma: vec![0.3, 0.3],
            per_cluster: 8,
            noise: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKindName {
    Full,
    Epsilon,
    Knn,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum MatrixTarget {
    Laplacian,
    NormalizedLaplacian,
    Gram,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GraphConfig {
    pub kind: GraphKindName,
    pub sigma: f64,
    pub squared_norm: bool,
    pub eps: f64,
    pub k: usize,
    /// Matrix whose spectrum goes to `laplacian_eigs.csv`.
    pub target: MatrixTarget,
    /// Largest cluster count considered by the eigengap heuristic.
    pub k_max: usize,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self {
            kind: GraphKindName::Full,
            sigma: 1.0,
            squared_norm: true,
            eps: 1.0,
            k: 5,
            target: MatrixTarget::Laplacian,
            k_max: 8,
        }
    }
}

impl GraphConfig {
    pub fn kind(&self) -> GraphKind {
        match self.kind {
            GraphKindName::Full => GraphKind::Full {
                sigma: self.sigma,
                norm: if self.squared_norm { KernelNorm::Squared } else { KernelNorm::Unsquared },
            },
            GraphKindName::Epsilon => GraphKind::Epsilon { eps: self.eps, rule: EpsilonRule::WithinThreshold },
            GraphKindName::Knn => GraphKind::MutualKnn { k: self.k },
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum VariantName {
    Unnormalized,
    Normalized,
    RowNormalized,
}

impl From<VariantName> for SpectralVariant {
    fn from(v: VariantName) -> Self {
        match v {
            VariantName::Unnormalized => SpectralVariant::Unnormalized,
            VariantName::Normalized => SpectralVariant::Normalized,
            VariantName::RowNormalized => SpectralVariant::RowNormalized,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ClassicalConfig {
    /// Cluster count; the eigengap heuristic picks it when absent.
    pub k: Option<usize>,
    pub variant: VariantName,
}

impl Default for ClassicalConfig {
    fn default() -> Self {
        Self { k: None, variant: VariantName::RowNormalized }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Qft,
    Biased,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum VariantFlag {
    StandardGrover,
    Verbatim,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum BackendName {
    Exact,
    Linearized,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PeaSection {
    pub m: u32,
    pub modes: Vec<ModeName>,
    pub kappas: Vec<f64>,
    pub variant: VariantFlag,
    pub backend: BackendName,
    /// Evolution time for the exact backend; `1 / (2 max|λ|)` when absent.
    pub time: Option<f64>,
}

impl Default for PeaSection {
    fn default() -> Self {
        Self {
            m: 6,
            modes: vec![ModeName::Qft, ModeName::Biased],
            kappas: vec![1.0, 20.0],
            variant: VariantFlag::StandardGrover,
            backend: BackendName::Exact,
            time: None,
        }
    }
}

impl PeaSection {
    pub fn backend(&self) -> Backend {
        match self.backend {
            BackendName::Exact => Backend::ExactExponential,
            BackendName::Linearized => Backend::Linearized,
        }
    }

    pub fn variant(&self) -> QVariant {
        match self.variant {
            VariantFlag::StandardGrover => QVariant::StandardGrover,
            VariantFlag::Verbatim => QVariant::Verbatim,
        }
    }

    /// One configuration per qft run and per biased κ, in config order.
    pub fn runs(&self) -> Vec<PeaConfig> {
        let mut out = Vec::new();
        for mode in &self.modes {
            match mode {
                ModeName::Qft => out.push(PeaConfig { m: self.m, mode: PeaMode::Qft, variant: self.variant() }),
                ModeName::Biased => out.extend(
                    self.kappas
                        .iter()
                        .map(|&kappa| PeaConfig { m: self.m, mode: PeaMode::Biased { kappa }, variant: self.variant() }),
                ),
            }
        }
        out
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct AmplifyConfig {
    pub max_iter: usize,
    /// Stop once qubit 0 is within this distance of probability ½. Traces
    /// run the full `max_iter` when absent.
    pub stop_tol: Option<f64>,
    /// Minimum weight of the input on the range of `H`.
    pub min_overlap: f64,
}

impl Default for AmplifyConfig {
    fn default() -> Self {
        Self { max_iter: 30, stop_tol: None, min_overlap: 0.1 }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Candidates {
    /// `"auto"`: indicators of the classical clusters.
    Auto(String),
    /// Explicit member lists, one per candidate.
    Explicit(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct QuantumConfig {
    /// Matrix encoded as `H` for the similarity readout.
    pub matrix: MatrixTarget,
    /// Eigenvalues below this fraction of the largest `|λ|` count as zero.
    pub zero_tol_rel: f64,
    pub candidates: Candidates,
    /// Iterations beyond the predicted optimum.
    pub margin: usize,
    pub max_iter: usize,
}

impl Default for QuantumConfig {
    fn default() -> Self {
        Self {
            matrix: MatrixTarget::Gram,
            zero_tol_rel: 0.2,
            candidates: Candidates::Auto("auto".into()),
            margin: 2,
            max_iter: 1024,
        }
    }
}

impl ExperimentConfig {
    /// Parses a config file. Relative dataset paths are resolved against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg = Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))?;
        if let Some(p) = &cfg.data.path {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    cfg.data.path = Some(dir.join(p));
                }
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Candidates::Auto(s) = &self.quantum.candidates {
            if s != "auto" {
                bail!("quantum.candidates must be \"auto\" or a list of member lists, got {s:?}");
            }
        }
        if self.data.source == DataSource::Csv && self.data.path.is_none() {
            bail!("data.source = \"csv\" needs data.path");
        }
        if self.pea.modes.is_empty() {
            bail!("pea.modes must not be empty");
        }
        if self.pea.modes.contains(&ModeName::Biased) && self.pea.kappas.is_empty() {
            bail!("biased mode needs at least one entry in pea.kappas");
        }
        if !(self.quantum.zero_tol_rel >= 0.0 && self.quantum.zero_tol_rel < 1.0) {
            bail!("quantum.zero_tol_rel must lie in [0, 1), got {}", self.quantum.zero_tol_rel);
        }
        if !(self.amplify.min_overlap > 0.0 && self.amplify.min_overlap <= 1.0) {
            bail!("amplify.min_overlap must lie in (0, 1], got {}", self.amplify.min_overlap);
        }
        for run in self.pea.runs() {
            run.validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_figure_preset() {
        let cfg = ExperimentConfig::parse("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.pea.m, 6);
        assert_eq!(cfg.pea.kappas, vec![1.0, 20.0]);
        assert_eq!((cfg.data.n, cfg.data.rank), (16, 6));
        assert_eq!(cfg.pea.runs().len(), 3);
    }

    #[test]
    fn explicit_candidates_parse() {
        let cfg = ExperimentConfig::parse("[quantum]\ncandidates = [[0, 1], [2, 3]]\n").unwrap();
        assert_eq!(cfg.quantum.candidates, Candidates::Explicit(vec![vec![0, 1], vec![2, 3]]));
    }

    #[test]
    fn rejects_unknown_fields_and_bad_values() {
        assert!(ExperimentConfig::parse("bogus = 1\n").is_err());
        assert!(ExperimentConfig::parse("[quantum]\ncandidates = \"all\"\n").is_err());
        assert!(ExperimentConfig::parse("[pea]\nm = 0\n").is_err());
        assert!(ExperimentConfig::parse("[data]\nsource = \"csv\"\n").is_err());
    }

    #[test]
    fn kebab_case_enums() {
        let cfg = ExperimentConfig::parse(
            "[data]\nsource = \"blobs\"\n[graph]\nkind = \"knn\"\ntarget = \"normalized_laplacian\"\n[pea]\nmodes = [\"biased\"]\nvariant = \"verbatim\"\n",
        )
        .unwrap();
        assert_eq!(cfg.graph.kind(), GraphKind::MutualKnn { k: 5 });
        assert_eq!(cfg.pea.variant(), QVariant::Verbatim);
        assert_eq!(cfg.pea.runs().len(), 2);
    }
}
