//! QAOA circuit compilation and execution.
//!
//! A step `k` applies one `exp(-i gamma_k C_ij Z_i Z_j)` per edge (edges in
//! ascending `(i, j)` order) followed by one `exp(+i beta_k X_q)` per qubit.
//! The `|+>^m` preparation is noiseless and not part of the gate list. Under
//! noise the channel acts after every gate, once on each qubit the gate touches.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maxcut::{exact_expectation, ProblemHamiltonian, WeightedGraph};
use crate::noise::NoiseChannel;
use crate::statevector::{DensityMatrix, GateOp, StateVector};

/// Angles `(gamma, beta)`, one pair per QAOA step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    gamma: Vec<f64>,
    beta: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if gamma.len() != beta.len() {
            return Err(Error::InvalidParams(format!(
                "gamma has {} entries but beta has {}",
                gamma.len(),
                beta.len()
            )));
        }
        if gamma.is_empty() {
            return Err(Error::InvalidParams("at least one QAOA step is required".into()));
        }
        if gamma.iter().chain(&beta).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("angles must be finite".into()));
        }
        Ok(Self { gamma, beta })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n], vec![0.0; n])
    }

    /// Inverse of [`QaoaParams::to_flat`].
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if !flat.len().is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "flat parameter vector has odd length {}",
                flat.len()
            )));
        }
        let n = flat.len() / 2;
        Self::new(flat[..n].to_vec(), flat[n..].to_vec())
    }

    pub fn steps(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// `[gamma_0 .. gamma_{n-1}, beta_0 .. beta_{n-1}]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.gamma.iter().chain(&self.beta).copied().collect()
    }
}

/// Which angle a gate is driven by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamRef {
    Gamma(usize),
    Beta(usize),
}

impl ParamRef {
    /// Position in [`QaoaParams::to_flat`] order.
    pub fn flat_index(&self, steps: usize) -> usize {
        match *self {
            ParamRef::Gamma(k) => k,
            ParamRef::Beta(k) => steps + k,
        }
    }
}

/// Pauli generator of a circuit gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    ZZ(usize, usize),
    X(usize),
}

/// One compiled gate `exp(-i angle * coeff * P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitGate {
    pub op: GateOp,
    pub generator: Generator,
    pub coeff: f64,
    pub angle: f64,
    pub param: ParamRef,
    pub step: usize,
}

impl CircuitGate {
    fn new(generator: Generator, coeff: f64, angle: f64, param: ParamRef, step: usize) -> Result<Self> {
        let theta = angle * coeff;
        let op = match generator {
            Generator::ZZ(i, j) => GateOp::zz_phase(i, j, theta)?,
            Generator::X(q) => GateOp::x_rotation(q, theta)?,
        };
        Ok(Self {
            op,
            generator,
            coeff,
            angle,
            param,
            step,
        })
    }

    /// Same gate at a different angle.
    pub fn with_angle(&self, angle: f64) -> Result<Self> {
        Self::new(self.generator, self.coeff, angle, self.param, self.step)
    }

    /// The inverse gate `exp(+i angle * coeff * P)`.
    pub(crate) fn inverse_op(&self) -> Result<GateOp> {
        Ok(self.with_angle(-self.angle)?.op)
    }
}

/// The compiled circuit `U(gamma, beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSequence {
    num_qubits: usize,
    steps: usize,
    gates: Vec<CircuitGate>,
}

impl GateSequence {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn gates(&self) -> &[CircuitGate] {
        &self.gates
    }

    /// Gate count `N = n (E + m)`.
    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Copy with gate `index` re-angled; every other gate is untouched.
    pub fn with_gate_angle(&self, index: usize, angle: f64) -> Result<Self> {
        let mut out = self.clone();
        let g = out.gates.get_mut(index).ok_or_else(|| {
            Error::InvalidParams(format!("gate index {index} out of range"))
        })?;
        *g = g.with_angle(angle)?;
        Ok(out)
    }
}

pub fn build_circuit(graph: &WeightedGraph, params: &QaoaParams) -> Result<GateSequence> {
    let m = graph.num_nodes();
    let n = params.steps();
    let mut gates = Vec::with_capacity(n * (graph.edges().len() + m));
    for k in 0..n {
        for e in graph.edges() {
            gates.push(CircuitGate::new(
                Generator::ZZ(e.i, e.j),
                e.weight,
                params.gamma[k],
                ParamRef::Gamma(k),
                k,
            )?);
        }
        for q in 0..m {
            gates.push(CircuitGate::new(
                Generator::X(q),
                -1.0,
                params.beta[k],
                ParamRef::Beta(k),
                k,
            )?);
        }
    }
    Ok(GateSequence {
        num_qubits: m,
        steps: n,
        gates,
    })
}

/// `U(gamma, beta) |+>^m`.
pub fn run_ideal(circuit: &GateSequence) -> Result<StateVector> {
    let mut psi = StateVector::plus_state(circuit.num_qubits)?;
    for g in &circuit.gates {
        psi.apply_gate(&g.op)?;
    }
    Ok(psi)
}

/// Exact mixed output state with the channel after every gate.
pub fn run_exact_noisy(circuit: &GateSequence, channel: &NoiseChannel) -> Result<DensityMatrix> {
    let mut rho = DensityMatrix::from_pure(&StateVector::plus_state(circuit.num_qubits)?)?;
    for g in &circuit.gates {
        rho.apply_gate(&g.op)?;
        for &q in g.op.targets() {
            rho.apply_kraus_exact(channel, q)?;
        }
    }
    Ok(rho)
}

/// One Monte-Carlo trajectory: after each gate a Kraus branch is drawn for
/// every touched qubit, in target order.
pub fn run_trajectory<R: Rng + ?Sized>(
    circuit: &GateSequence,
    channel: &NoiseChannel,
    rng: &mut R,
) -> Result<StateVector> {
    let mut psi = StateVector::plus_state(circuit.num_qubits)?;
    for g in &circuit.gates {
        psi.apply_gate(&g.op)?;
        for &q in g.op.targets() {
            psi.sample_kraus(channel, q, rng.random::<f64>())?;
        }
    }
    Ok(psi)
}

/// `<phi_ideal| rho |phi_ideal>`.
pub fn output_fidelity(ideal: &StateVector, noisy: &DensityMatrix) -> Result<f64> {
    Ok(noisy.expectation_pure(ideal)?.clamp(0.0, 1.0))
}

/// Cost `<H_p>` on the ideal output, or `Tr(rho H_p)` on the exact noisy output.
pub fn cost_exact(
    circuit: &GateSequence,
    h: &ProblemHamiltonian,
    channel: Option<&NoiseChannel>,
) -> Result<f64> {
    match channel {
        None => exact_expectation(&run_ideal(circuit)?, h),
        Some(ch) => exact_expectation(&run_exact_noisy(circuit, ch)?, h),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryEstimate {
    pub mean: f64,
    /// Sample standard deviation of the per-trajectory cost over `sqrt(T)`.
    pub std_error: f64,
}

/// Mean of `<psi_t| H_p |psi_t>` over `trajectories` independent trajectories.
pub fn cost_trajectory_mean<R: Rng + ?Sized>(
    circuit: &GateSequence,
    h: &ProblemHamiltonian,
    channel: &NoiseChannel,
    trajectories: usize,
    rng: &mut R,
) -> Result<TrajectoryEstimate> {
    if trajectories < 2 {
        return Err(Error::InvalidParams("at least two trajectories are required".into()));
    }
    let values = (0..trajectories)
        .map(|_| exact_expectation(&run_trajectory(circuit, channel, rng)?, h))
        .collect::<Result<Vec<f64>>>()?;
    let t = trajectories as f64;
    let mean = values.iter().sum::<f64>() / t;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (t - 1.0);
    Ok(TrajectoryEstimate {
        mean,
        std_error: (var / t).sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledCost {
    pub estimate: f64,
    /// Per term, the observed frequency of equal outcomes `p00 + p11`.
    pub p_same: Vec<f64>,
}

/// Shot-based cost estimate: for each term, `shots` independent trajectories,
/// each measured once on the term's two qubits.
pub fn cost_sampled<R: Rng + ?Sized>(
    circuit: &GateSequence,
    h: &ProblemHamiltonian,
    channel: &NoiseChannel,
    shots: usize,
    rng: &mut R,
) -> Result<SampledCost> {
    if h.num_qubits() != circuit.num_qubits {
        return Err(Error::DimensionMismatch {
            expected: circuit.num_qubits,
            got: h.num_qubits(),
        });
    }
    sampled_expectation(h, shots, rng, |r| run_trajectory(circuit, channel, r))
}

/// Estimates `<H_p>` from single two-qubit measurements of freshly prepared
/// states: `sum C_ij (2 p_ij - 1)` with `p_ij` the frequency of `00` or `11`.
pub fn sampled_expectation<R, F>(
    h: &ProblemHamiltonian,
    shots: usize,
    rng: &mut R,
    mut prepare: F,
) -> Result<SampledCost>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> Result<StateVector>,
{
    if shots == 0 {
        return Err(Error::InvalidParams("shots must be at least 1".into()));
    }
    let mut estimate = 0.0;
    let mut p_same = Vec::with_capacity(h.terms().len());
    for &(i, j, w) in h.terms() {
        let mut same = 0usize;
        for _ in 0..shots {
            let psi = prepare(rng)?;
            let probs = psi.measurement_probabilities(i, j)?;
            if sample_is_same(&probs, rng.random::<f64>()) {
                same += 1;
            }
        }
        let pij = same as f64 / shots as f64;
        estimate += w * (2.0 * pij - 1.0);
        p_same.push(pij);
    }
    Ok(SampledCost { estimate, p_same })
}

/// Draws an outcome from `(p00, p01, p10, p11)` and reports whether the two
/// bits agree.
fn sample_is_same(probs: &[f64; 4], r: f64) -> bool {
    let total: f64 = probs.iter().sum();
    let target = r * total;
    let mut acc = 0.0;
    for (k, p) in probs.iter().enumerate() {
        acc += p;
        if target < acc {
            return k == 0 || k == 3;
        }
    }
    probs[3] > 0.0 || probs[1] + probs[2] == 0.0
}
