//! Statevector-level simulation of spectral clustering through phase
//! estimation and amplitude amplification.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: complex dense linear algebra (Hermitian eigensolver,
//!   reflections, norms, tensor products).
//! - [`graph`]: similarity graphs and their Laplacians.
//! - [`classical`]: Lloyd's k-means, spectral clustering, eigengap selection,
//!   indicator vectors and the trace objective. This is the oracle the
//!   quantum path is checked against.
//! - [`encoding`]: Gram matrices, Householder-sum decompositions, the
//!   linearized surrogate `I - iH/k` and the unitary backends used for
//!   controlled powers.
//! - [`qpea`]: register states, standard and biased phase estimation and the
//!   amplitude amplification loop.
//! - [`readout`]: similarity measurements and the `e^{iY}` cluster readout.
//! - [`synth`] and [`io`]: seeded data generators and CSV formats.

pub mod classical;
pub mod encoding;
mod error;
pub mod graph;
pub mod io;
pub mod numerics;
pub mod qpea;
pub mod readout;
pub mod synth;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use classical::{ClusterAssignment, IndicatorVector};
pub use encoding::{Backend, EvolutionOperator, HouseholderSum};
pub use graph::{PointSet, SimilarityGraph};
pub use numerics::{ComplexVector, DenseMatrix};
pub use qpea::{PeaConfig, PeaMode, QVariant, RegisterState, Trajectory};
pub use readout::SimilarityReport;
