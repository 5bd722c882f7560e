//! Phase estimation and amplitude amplification on a two-register statevector.
//!
//! The register holds `m` phase qubits followed by `n` system qubits. The
//! phase register is the most significant block, so the full basis index is
//! `phase * 2^n + system`, and qubit `q` is bit `m + n - 1 - q` of that index.
//! Phase qubit 0 is therefore the most significant phase bit and controls
//! `U^{2^{m-1}}`.
//!
//! Internally a state is handled as an `N x M` block matrix whose column `j`
//! is the system vector attached to phase index `j`. Phase-register operators
//! act from the right and system operators from the left, so no operator on
//! the full `2^{m+n}` space is ever formed.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::encoding::{power_phase, EvolutionOperator};
use crate::numerics::{kron, reflector_to_zero, ComplexVector, DenseMatrix, OPERATOR_TOL};
use crate::{Error, Result};

/// Statevector of a phase register (`m` qubits) and a system register (`n` qubits).
#[derive(Clone, Debug, PartialEq)]
pub struct RegisterState {
    amplitudes: ComplexVector,
    m: u32,
    n: u32,
}

impl RegisterState {
    pub fn new(amplitudes: ComplexVector, m: u32, n: u32) -> Result<Self> {
        let dim = 1usize << (m + n);
        if amplitudes.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: amplitudes.dim() });
        }
        amplitudes.ensure_normalized(OPERATOR_TOL)?;
        Ok(Self { amplitudes, m, n })
    }

    /// `|0...0>|0...0>`.
    pub fn zero(m: u32, n: u32) -> Self {
        Self {
            amplitudes: ComplexVector::basis(1usize << (m + n), 0),
            m,
            n,
        }
    }

    /// `|phase> ⊗ |system>`; both dimensions must be powers of two.
    pub fn product(phase: &ComplexVector, system: &ComplexVector) -> Result<Self> {
        let m = qubits_for(phase.dim())?;
        let n = qubits_for(system.dim())?;
        Self::new(phase.kron(system), m, n)
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn phase_dim(&self) -> usize {
        1 << self.m
    }

    pub fn system_dim(&self) -> usize {
        1 << self.n
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Column `j` holds the system amplitudes for phase index `j`.
    pub fn to_blocks(&self) -> DMatrix<Complex64> {
        DMatrix::from_column_slice(self.system_dim(), self.phase_dim(), self.amplitudes.entries())
    }

    pub fn from_blocks(blocks: DMatrix<Complex64>, m: u32, n: u32) -> Result<Self> {
        Self::new(ComplexVector::new(blocks.as_slice().to_vec()), m, n)
    }

    fn from_blocks_unchecked(blocks: DMatrix<Complex64>, m: u32, n: u32) -> Self {
        Self {
            amplitudes: ComplexVector::new(blocks.as_slice().to_vec()),
            m,
            n,
        }
    }

    /// Probability of each phase-register basis state.
    pub fn phase_probabilities(&self) -> Vec<f64> {
        let n = self.system_dim();
        self.amplitudes
            .entries()
            .chunks(n)
            .map(|b| b.iter().map(Complex64::norm_sqr).sum())
            .collect()
    }

    /// Reduced density matrix of the system register.
    pub fn reduced_system_density(&self) -> DenseMatrix {
        let psi = self.to_blocks();
        DenseMatrix::from_nalgebra(&psi * psi.adjoint())
    }

    /// `<t| ρ_sys |t>`.
    pub fn system_fidelity(&self, target: &ComplexVector) -> Result<f64> {
        if target.dim() != self.system_dim() {
            return Err(Error::DimensionMismatch { expected: self.system_dim(), found: target.dim() });
        }
        let overlaps = self.to_blocks().adjoint() * target.as_nalgebra();
        Ok(overlaps.norm_squared().min(1.0))
    }

    /// `(P0, P1)` for qubit `q` across both registers.
    pub fn qubit_marginal(&self, q: usize) -> Result<(f64, f64)> {
        let total = (self.m + self.n) as usize;
        if q >= total {
            return Err(Error::InvalidParameter(format!("qubit {q} out of range for {total} qubits")));
        }
        let bit = total - 1 - q;
        let mut p1 = 0.0;
        let mut p0 = 0.0;
        for (i, a) in self.amplitudes.entries().iter().enumerate() {
            if (i >> bit) & 1 == 1 {
                p1 += a.norm_sqr();
            } else {
                p0 += a.norm_sqr();
            }
        }
        let s = p0 + p1;
        Ok((p0 / s, p1 / s))
    }
}

fn qubits_for(dim: usize) -> Result<u32> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PeaMode {
    /// Hadamard wall, controlled powers, inverse QFT.
    Qft,
    /// Bias reflection `U_f1`, controlled powers, `U_f1^H`.
    Biased { kappa: f64 },
}

impl PeaMode {
    pub fn label(&self) -> String {
        match self {
            PeaMode::Qft => "qft".into(),
            PeaMode::Biased { kappa } => format!("biased_{kappa}"),
        }
    }
}

/// Which operator drives the amplification loop.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum QVariant {
    /// `Q = A U_s A U_f2`, the forward circuit applied twice.
    Verbatim,
    /// `Q = A U_s A^H U_f2`.
    #[default]
    StandardGrover,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeaConfig {
    pub m: u32,
    pub mode: PeaMode,
    pub variant: QVariant,
}

impl PeaConfig {
    pub fn qft(m: u32) -> Self {
        Self { m, mode: PeaMode::Qft, variant: QVariant::StandardGrover }
    }

    pub fn biased(m: u32, kappa: f64) -> Self {
        Self { m, mode: PeaMode::Biased { kappa }, variant: QVariant::StandardGrover }
    }

    pub fn with_variant(mut self, variant: QVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m > 16 {
            return Err(Error::InvalidParameter(format!("phase register needs 1 <= m <= 16 qubits, got {}", self.m)));
        }
        if let PeaMode::Biased { kappa } = self.mode {
            if kappa.is_nan() || kappa < 0.0 {
                return Err(Error::InvalidParameter(format!("bias coefficient must be nonnegative, got {kappa}")));
            }
        }
        Ok(())
    }
}

/// `f1 = [κ, 1, ..., 1] / μ` with `μ = sqrt(κ² + M - 1)`. An infinite `κ`
/// gives `e_0`.
pub fn bias_vector(m: u32, kappa: f64) -> ComplexVector {
    let big_m = 1usize << m;
    if kappa.is_infinite() {
        return ComplexVector::basis(big_m, 0);
    }
    let mu = (kappa * kappa + (big_m - 1) as f64).sqrt();
    let mut v = vec![1.0 / mu; big_m];
    v[0] = kappa / mu;
    ComplexVector::from_real(&v)
}

/// `f2 = [0, 1, ..., 1] / sqrt(M - 1)`, the uniform vector over nonzero phases.
pub fn f2_vector(m: u32) -> ComplexVector {
    bias_vector(m, 0.0)
}

fn phase_reflection(f: &ComplexVector, n: u32) -> DenseMatrix {
    let r = crate::numerics::proj_reflection(f).expect("bias vectors are unit norm");
    kron(&r, &DenseMatrix::identity(1 << n))
}

/// `(I - 2 f1 f1^H) ⊗ I_n`.
pub fn u_f1(m: u32, n: u32, kappa: f64) -> DenseMatrix {
    phase_reflection(&bias_vector(m, kappa), n)
}

/// `(I - 2 f2 f2^H) ⊗ I_n`.
pub fn u_f2(m: u32, n: u32) -> DenseMatrix {
    phase_reflection(&f2_vector(m), n)
}

/// `I - 2|0...0><0...0|` over all `m + n` qubits.
pub fn u_s(m: u32, n: u32) -> DenseMatrix {
    let mut u = DenseMatrix::identity(1 << (m + n));
    u.set(0, 0, Complex64::new(-1.0, 0.0));
    u
}

/// `F_{jk} = e^{2πi jk / M} / sqrt(M)`.
pub fn qft_matrix(m: u32) -> DenseMatrix {
    let big_m = 1usize << m;
    let s = 1.0 / (big_m as f64).sqrt();
    DenseMatrix::from_fn(big_m, big_m, |j, k| {
        let e = ((j * k) % big_m) as f64 / big_m as f64;
        Complex64::from_polar(s, 2.0 * PI * e)
    })
}

/// `H^{⊗m}`.
pub fn hadamard_matrix(m: u32) -> DenseMatrix {
    let big_m = 1usize << m;
    let s = 1.0 / (big_m as f64).sqrt();
    DenseMatrix::from_real_fn(big_m, big_m, |j, k| if (j & k).count_ones() % 2 == 0 { s } else { -s })
}

/// `κ* = sqrt(2^m)`, the bias at which amplification stalls.
pub fn stagnation_check(m: u32) -> f64 {
    ((1u64 << m) as f64).sqrt()
}

/// Precomputed circuit `A = U_BPEA (I ⊗ U_input)` and the pieces of `Q`.
#[derive(Clone, Debug)]
pub struct BpeaCircuit {
    cfg: PeaConfig,
    n: u32,
    /// `V` and `V^H` of the evolution operator.
    v: DMatrix<Complex64>,
    vh: DMatrix<Complex64>,
    /// `phase_table[(l, j)] = e^{2πi φ_l j}`.
    phase_table: DMatrix<Complex64>,
    /// Phase-register operators applied as `Ψ ← Ψ Oᵀ`, stored pre-transposed.
    enter_t: DMatrix<Complex64>,
    exit_t: DMatrix<Complex64>,
    enter_adj_t: DMatrix<Complex64>,
    exit_adj_t: DMatrix<Complex64>,
    input_reflector: Option<ComplexVector>,
    f2: DVector<Complex64>,
    target: ComplexVector,
    target_weight: f64,
}

impl BpeaCircuit {
    pub fn new(cfg: PeaConfig, u: &EvolutionOperator, y: &ComplexVector) -> Result<Self> {
        cfg.validate()?;
        let n = qubits_for(u.dim())?;
        if y.dim() != u.dim() {
            return Err(Error::DimensionMismatch { expected: u.dim(), found: y.dim() });
        }
        y.ensure_normalized(OPERATOR_TOL)?;
        let m = cfg.m;
        let big_m = 1usize << m;
        let v = u.eigenvectors().as_nalgebra().clone();
        let vh = v.adjoint();
        let phase_table = DMatrix::from_fn(u.dim(), big_m, |l, j| {
            Complex64::from_polar(1.0, 2.0 * PI * power_phase(u.phases()[l], j as u64))
        });
        let (enter, exit) = match cfg.mode {
            PeaMode::Qft => (hadamard_matrix(m), qft_matrix(m).adjoint()),
            PeaMode::Biased { kappa } => {
                let r = crate::numerics::proj_reflection(&bias_vector(m, kappa))?;
                (r.clone(), r)
            }
        };
        let enter = enter.into_nalgebra();
        let exit = exit.into_nalgebra();
        let projected = u.project_range(y)?;
        let weight = projected.norm().powi(2);
        let target = if weight > 1e-20 {
            projected.scale(Complex64::new(1.0 / weight.sqrt(), 0.0))
        } else {
            projected
        };
        Ok(Self {
            cfg,
            n,
            v,
            vh,
            phase_table,
            enter_adj_t: enter.adjoint().transpose(),
            exit_adj_t: exit.adjoint().transpose(),
            enter_t: enter.transpose(),
            exit_t: exit.transpose(),
            input_reflector: reflector_to_zero(y)?,
            f2: f2_vector(m).into_nalgebra(),
            target,
            target_weight: weight,
        })
    }

    pub fn config(&self) -> &PeaConfig {
        &self.cfg
    }

    pub fn m(&self) -> u32 {
        self.cfg.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Normalized `V V^H y`; the zero vector when `y` has no weight on the range.
    pub fn target(&self) -> &ComplexVector {
        &self.target
    }

    /// `‖V V^H y‖²`.
    pub fn target_weight(&self) -> f64 {
        self.target_weight
    }

    fn apply_input(&self, psi: &mut DMatrix<Complex64>) {
        if let Some(u) = &self.input_reflector {
            let u = u.as_nalgebra();
            let w = u.adjoint() * &*psi;
            *psi -= (u * w) * Complex64::new(2.0, 0.0);
        }
    }

    fn ladder(&self, psi: &mut DMatrix<Complex64>, inverse: bool) {
        let mut c = &self.vh * &*psi;
        if inverse {
            c.zip_apply(&self.phase_table, |x, p| *x *= p.conj());
        } else {
            c.component_mul_assign(&self.phase_table);
        }
        *psi = &self.v * c;
    }

    /// `A`: input preparation followed by the phase-estimation circuit.
    pub fn forward(&self, psi: &mut DMatrix<Complex64>) {
        self.apply_input(psi);
        *psi = &*psi * &self.enter_t;
        self.ladder(psi, false);
        *psi = &*psi * &self.exit_t;
    }

    /// `A^H`.
    pub fn adjoint(&self, psi: &mut DMatrix<Complex64>) {
        *psi = &*psi * &self.exit_adj_t;
        self.ladder(psi, true);
        *psi = &*psi * &self.enter_adj_t;
        self.apply_input(psi);
    }

    pub fn apply_uf2(&self, psi: &mut DMatrix<Complex64>) {
        let w = &*psi * self.f2.map(|x| x.conj());
        *psi -= (w * self.f2.transpose()) * Complex64::new(2.0, 0.0);
    }

    pub fn apply_us(&self, psi: &mut DMatrix<Complex64>) {
        psi[(0, 0)] = -psi[(0, 0)];
    }

    /// One amplification step.
    pub fn apply_q(&self, psi: &mut DMatrix<Complex64>) {
        self.apply_uf2(psi);
        match self.cfg.variant {
            QVariant::Verbatim => self.forward(psi),
            QVariant::StandardGrover => self.adjoint(psi),
        }
        self.apply_us(psi);
        self.forward(psi);
    }

    /// `A |0>|0>`.
    pub fn prepare(&self) -> RegisterState {
        let mut psi = RegisterState::zero(self.cfg.m, self.n).to_blocks();
        self.forward(&mut psi);
        RegisterState::from_blocks_unchecked(psi, self.cfg.m, self.n)
    }

    pub fn step(&self, state: &RegisterState) -> RegisterState {
        let mut psi = state.to_blocks();
        self.apply_q(&mut psi);
        RegisterState::from_blocks_unchecked(psi, self.cfg.m, self.n)
    }

    /// Dense `Q`, built column by column. Only sensible for small registers.
    pub fn q_matrix(&self) -> DenseMatrix {
        let dim = 1usize << (self.cfg.m + self.n);
        let mut q = DMatrix::<Complex64>::zeros(dim, dim);
        for k in 0..dim {
            let mut e = DVector::<Complex64>::zeros(dim);
            e[k] = Complex64::new(1.0, 0.0);
            let mut psi = DMatrix::from_column_slice(1 << self.n, 1 << self.cfg.m, e.as_slice());
            self.apply_q(&mut psi);
            q.set_column(k, &DVector::from_column_slice(psi.as_slice()));
        }
        DenseMatrix::from_nalgebra(q)
    }

    /// Probability weight on `f2 ⊗ I`, the marked subspace of `U_f2`.
    pub fn f2_probability(&self, state: &RegisterState) -> f64 {
        f2_weight(&state.to_blocks(), &self.f2)
    }
}

fn f2_weight(psi: &DMatrix<Complex64>, f2: &DVector<Complex64>) -> f64 {
    (psi * f2.map(|x| x.conj())).norm_squared()
}

/// Runs the phase-estimation circuit once on `|0>|0>` with input `y`.
pub fn bpea_run(cfg: &PeaConfig, u: &EvolutionOperator, y: &ComplexVector) -> Result<RegisterState> {
    Ok(BpeaCircuit::new(*cfg, u, y)?.prepare())
}

/// `1 - P(phase register = |0...0>)`.
pub fn success_probability(s: &RegisterState) -> f64 {
    let marked: f64 = s.amplitudes().entries()[s.system_dim()..].iter().map(Complex64::norm_sqr).sum();
    marked.min(1.0)
}

/// System state left after projecting the phase register onto `f2`.
///
/// Returns the normalized system vector and the projection probability, or
/// `None` when the marked component vanishes.
pub fn postselect_marked(s: &RegisterState) -> Option<(ComplexVector, f64)> {
    let g = s.to_blocks() * f2_vector(s.m()).into_nalgebra().map(|x| x.conj());
    let p = g.norm_squared();
    if p <= 1e-300 {
        return None;
    }
    Some((ComplexVector::from_nalgebra(g.unscale(p.sqrt())), p))
}

/// Weight on `f2 ⊗ I`.
pub fn f2_probability(s: &RegisterState) -> f64 {
    f2_weight(&s.to_blocks(), &f2_vector(s.m()).into_nalgebra())
}

pub fn qubit_marginal(s: &RegisterState, q: usize) -> Result<(f64, f64)> {
    s.qubit_marginal(q)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub iteration: usize,
    pub success_prob: f64,
    pub fidelity: f64,
    pub f2_prob: f64,
    /// `P(0)` of every phase qubit, in qubit order.
    pub phase_p0: Vec<f64>,
}

impl TrajectoryRecord {
    pub fn qubit0_p0(&self) -> f64 {
        self.phase_p0[0]
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub records: Vec<TrajectoryRecord>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn fidelities(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.fidelity).collect()
    }

    pub fn success_probabilities(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.success_prob).collect()
    }

    /// First iteration whose fidelity is not exceeded by the next one.
    pub fn first_peak(&self) -> Option<usize> {
        let f = self.fidelities();
        if f.is_empty() {
            return None;
        }
        Some((0..f.len() - 1).find(|&t| f[t] >= f[t + 1]).unwrap_or(f.len() - 1))
    }

    /// Iteration of maximal fidelity, earliest on ties.
    pub fn argmax_fidelity(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in &self.records {
            if best.is_none_or(|(_, f)| r.fidelity > f) {
                best = Some((r.iteration, r.fidelity));
            }
        }
        best.map(|b| b.0)
    }

    pub fn peak_fidelity(&self) -> f64 {
        self.records.iter().map(|r| r.fidelity).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplifyOptions {
    /// Number of `Q` applications; 0 records only the prepared state.
    pub max_iter: usize,
    /// Stop once the marginal of `stop_qubit` satisfies `|P(0) - ½| <= tol`.
    pub stop_tol: Option<f64>,
    pub stop_qubit: usize,
}

impl Default for AmplifyOptions {
    fn default() -> Self {
        Self { max_iter: 30, stop_tol: Some(0.05), stop_qubit: 0 }
    }
}

impl AmplifyOptions {
    pub fn fixed(max_iter: usize) -> Self {
        Self { max_iter, stop_tol: None, stop_qubit: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct AmplifyOutcome {
    pub final_state: RegisterState,
    pub peak_state: RegisterState,
    pub peak_iteration: usize,
    pub trajectory: Trajectory,
    /// Iteration at which the stopping rule fired, if it did.
    pub stopped_at: Option<usize>,
    /// `‖V V^H y‖²`.
    pub target_weight: f64,
}

fn record(circuit: &BpeaCircuit, state: &RegisterState, iteration: usize) -> Result<TrajectoryRecord> {
    let phase_p0 = (0..circuit.m() as usize)
        .map(|q| state.qubit_marginal(q).map(|p| p.0))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrajectoryRecord {
        iteration,
        success_prob: success_probability(state),
        fidelity: state.system_fidelity(circuit.target())?,
        f2_prob: circuit.f2_probability(state),
        phase_p0,
    })
}

/// Amplitude amplification of the nonzero-phase component.
pub fn amplify(
    cfg: &PeaConfig,
    u: &EvolutionOperator,
    y: &ComplexVector,
    opts: &AmplifyOptions,
) -> Result<AmplifyOutcome> {
    let circuit = BpeaCircuit::new(*cfg, u, y)?;
    amplify_circuit(&circuit, opts)
}

pub fn amplify_circuit(circuit: &BpeaCircuit, opts: &AmplifyOptions) -> Result<AmplifyOutcome> {
    if circuit.target_weight() <= 1e-20 {
        return Err(Error::Degenerate("input has no weight on the range of H".into()));
    }
    if opts.stop_qubit >= circuit.m() as usize {
        return Err(Error::InvalidParameter(format!("stop qubit {} is not a phase qubit", opts.stop_qubit)));
    }
    let mut state = circuit.prepare();
    let mut trajectory = Trajectory::default();
    trajectory.records.push(record(circuit, &state, 0)?);
    let mut peak = (0, trajectory.records[0].fidelity, state.clone());
    let mut stopped_at = None;
    for t in 1..=opts.max_iter {
        state = circuit.step(&state);
        let r = record(circuit, &state, t)?;
        if r.fidelity > peak.1 {
            peak = (t, r.fidelity, state.clone());
        }
        let p0 = r.phase_p0[opts.stop_qubit];
        trajectory.records.push(r);
        if let Some(tol) = opts.stop_tol {
            if (p0 - 0.5).abs() <= tol {
                stopped_at = Some(t);
                break;
            }
        }
    }
    Ok(AmplifyOutcome {
        final_state: state,
        peak_state: peak.2,
        peak_iteration: peak.0,
        trajectory,
        stopped_at,
        target_weight: circuit.target_weight(),
    })
}

/// Closed-form `sin²((2t+1)θ)` with `θ = asin(sqrt(p0))`.
pub fn grover_probability(p0: f64, t: usize) -> f64 {
    let theta = p0.clamp(0.0, 1.0).sqrt().asin();
    ((2 * t + 1) as f64 * theta).sin().powi(2)
}

/// Iteration count that maximizes `sin²((2t+1)θ)`.
pub fn grover_schedule(p0: f64) -> usize {
    let theta = p0.clamp(0.0, 1.0).sqrt().asin();
    if theta <= 0.0 {
        return 0;
    }
    (PI / (4.0 * theta) - 0.5).round().max(0.0) as usize
}
