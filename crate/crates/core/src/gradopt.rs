//! Cost gradients and vanilla gradient descent.
//!
//! Every circuit gate has the form `exp(-i theta c P)` with `P` a Pauli
//! string, so the cost restricted to one gate's angle is a sinusoid of
//! frequency `2c`. Its derivative is therefore exactly
//! `c * [f(theta + pi/(4c)) - f(theta - pi/(4c))]`, with or without noise after
//! the gate. [`shift_rule_gradient`] sums this over all gates sharing a
//! parameter. [`adjoint_gradient`] computes the same quantity from one
//! forward and one backward sweep and is used when many gradients are needed.

use std::cell::RefCell;
use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maxcut::{problem_hamiltonian, ProblemHamiltonian, WeightedGraph};
use crate::noise::NoiseChannel;
use crate::qaoa::{
    build_circuit, cost_exact, cost_sampled, run_ideal, CircuitGate, GateSequence, Generator,
    QaoaParams,
};
use crate::rng::{derive_stream, stream_rng, tag};
use crate::statevector::{DensityMatrix, StateVector};

/// Gradient norm below which a descent run is flagged as converged.
pub const CONVERGENCE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gradient {
    pub d_gamma: Vec<f64>,
    pub d_beta: Vec<f64>,
}

impl Gradient {
    fn from_flat(flat: Vec<f64>) -> Self {
        let n = flat.len() / 2;
        Self {
            d_gamma: flat[..n].to_vec(),
            d_beta: flat[n..].to_vec(),
        }
    }

    /// `[d_gamma .., d_beta ..]`, matching [`QaoaParams::to_flat`].
    pub fn to_flat(&self) -> Vec<f64> {
        self.d_gamma.iter().chain(&self.d_beta).copied().collect()
    }

    pub fn norm(&self) -> f64 {
        self.to_flat().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Gradient) -> f64 {
        self.to_flat()
            .iter()
            .zip(other.to_flat())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn cosine_similarity(&self, other: &Gradient) -> f64 {
        let dot: f64 = self
            .to_flat()
            .iter()
            .zip(other.to_flat())
            .map(|(a, b)| a * b)
            .sum();
        dot / (self.norm() * other.norm())
    }

    fn is_finite(&self) -> bool {
        self.to_flat().iter().all(|x| x.is_finite())
    }
}

/// How the cost of a circuit is obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluator {
    /// Noiseless pure-state expectation.
    Ideal,
    /// Exact `Tr(rho H_p)` from density-matrix evolution.
    ExactNoisy(NoiseChannel),
    /// Shot-based estimate from trajectories; each evaluation draws from its
    /// own stream derived from `seed`.
    Sampled {
        channel: NoiseChannel,
        shots: usize,
        seed: u64,
    },
}

impl Evaluator {
    /// Exact evaluator for `channel`; a channel that acts as the identity
    /// uses the pure-state path.
    pub fn exact(channel: NoiseChannel) -> Self {
        if channel.is_noiseless() {
            Evaluator::Ideal
        } else {
            Evaluator::ExactNoisy(channel)
        }
    }

    /// Cost of `circuit`. `stream` selects the random stream for sampled
    /// evaluation and is ignored otherwise.
    pub fn cost(&self, circuit: &GateSequence, h: &ProblemHamiltonian, stream: u64) -> Result<f64> {
        match self {
            Evaluator::Ideal => cost_exact(circuit, h, None),
            Evaluator::ExactNoisy(ch) => cost_exact(circuit, h, Some(ch)),
            Evaluator::Sampled {
                channel,
                shots,
                seed,
            } => {
                let mut rng = stream_rng(*seed, &[tag::NOISY_EVAL, stream]);
                Ok(cost_sampled(circuit, h, channel, *shots, &mut rng)?.estimate)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMethod {
    ShiftRule,
    /// Reverse-mode sweep; only for [`Evaluator::Ideal`] and [`Evaluator::ExactNoisy`].
    Adjoint,
}

fn shift(gate: &CircuitGate) -> f64 {
    FRAC_PI_4 / gate.coeff
}

/// Parameter-shift gradient with every shifted circuit evaluated by `evaluator`.
pub fn shift_rule_gradient(
    graph: &WeightedGraph,
    params: &QaoaParams,
    evaluator: &Evaluator,
) -> Result<Gradient> {
    shift_rule_gradient_stream(graph, params, evaluator, 0)
}

pub(crate) fn shift_rule_gradient_stream(
    graph: &WeightedGraph,
    params: &QaoaParams,
    evaluator: &Evaluator,
    stream: u64,
) -> Result<Gradient> {
    let circuit = build_circuit(graph, params)?;
    let h = problem_hamiltonian(graph);
    let n = params.steps();
    let terms: Vec<(usize, f64)> = circuit
        .gates()
        .par_iter()
        .enumerate()
        .map(|(g, gate)| {
            let s = shift(gate);
            let up = circuit.with_gate_angle(g, gate.angle + s)?;
            let down = circuit.with_gate_angle(g, gate.angle - s)?;
            let f_up = evaluator.cost(&up, &h, derive_stream(&[tag::SHIFT, stream, g as u64, 0]))?;
            let f_down =
                evaluator.cost(&down, &h, derive_stream(&[tag::SHIFT, stream, g as u64, 1]))?;
            Ok((gate.param.flat_index(n), gate.coeff * (f_up - f_down)))
        })
        .collect::<Result<_>>()?;
    let mut flat = vec![0.0; 2 * n];
    for (idx, v) in terms {
        flat[idx] += v;
    }
    Ok(Gradient::from_flat(flat))
}

/// Central differences of the exact ideal cost.
pub fn finite_difference_gradient(
    graph: &WeightedGraph,
    params: &QaoaParams,
    step: f64,
) -> Result<Gradient> {
    if !(step > 0.0) {
        return Err(Error::InvalidParams(format!("finite-difference step {step} must be positive")));
    }
    let h = problem_hamiltonian(graph);
    let base = params.to_flat();
    let eval = |flat: &[f64]| -> Result<f64> {
        let p = QaoaParams::from_flat(flat)?;
        cost_exact(&build_circuit(graph, &p)?, &h, None)
    };
    let flat = (0..base.len())
        .map(|k| {
            let mut up = base.clone();
            let mut down = base.clone();
            up[k] += step;
            down[k] -= step;
            Ok((eval(&up)? - eval(&down)?) / (2.0 * step))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Gradient::from_flat(flat))
}

/// Reverse-mode gradient and cost. With `None` the state-vector path is used;
/// with a channel, the density-matrix path.
pub fn adjoint_gradient(
    graph: &WeightedGraph,
    params: &QaoaParams,
    channel: Option<&NoiseChannel>,
) -> Result<(f64, Gradient)> {
    let circuit = build_circuit(graph, params)?;
    let h = problem_hamiltonian(graph);
    let (cost, per_gate) = match channel {
        None => adjoint_pure(&circuit, &h)?,
        Some(ch) => adjoint_density(&circuit, &h, ch)?,
    };
    let n = params.steps();
    let mut flat = vec![0.0; 2 * n];
    for (gate, d) in circuit.gates().iter().zip(per_gate) {
        flat[gate.param.flat_index(n)] += d;
    }
    Ok((cost, Gradient::from_flat(flat)))
}

/// `Im <a| P |b>` for the gate's Pauli generator.
fn im_pauli_pure(gen: Generator, a: &[Complex64], b: &[Complex64]) -> f64 {
    match gen {
        Generator::ZZ(i, j) => a
            .iter()
            .zip(b)
            .enumerate()
            .map(|(z, (x, y))| {
                let s = if ((z >> i) ^ (z >> j)) & 1 == 1 { -1.0 } else { 1.0 };
                s * (x.conj() * y).im
            })
            .sum(),
        Generator::X(q) => a
            .iter()
            .enumerate()
            .map(|(z, x)| (x.conj() * b[z ^ (1 << q)]).im)
            .sum(),
    }
}

fn adjoint_pure(circuit: &GateSequence, h: &ProblemHamiltonian) -> Result<(f64, Vec<f64>)> {
    let mut psi = run_ideal(circuit)?;
    let diag = h.diagonal();
    let cost: f64 = psi
        .amplitudes()
        .iter()
        .zip(&diag)
        .map(|(a, e)| a.norm_sqr() * e)
        .sum();
    let lambda_amps = psi
        .amplitudes()
        .iter()
        .zip(&diag)
        .map(|(a, e)| a * e)
        .collect::<Vec<_>>();
    let mut lambda = StateVector::raw(psi.num_qubits(), lambda_amps);
    let mut out = vec![0.0; circuit.gate_count()];
    for (k, gate) in circuit.gates().iter().enumerate().rev() {
        // d/dtheta <psi|H|psi> = 2 c Im <lambda| P |psi_k>
        out[k] = 2.0 * gate.coeff * im_pauli_pure(gate.generator, lambda.amplitudes(), psi.amplitudes());
        let inv = gate.inverse_op()?;
        psi.apply_gate(&inv)?;
        lambda.apply_gate(&inv)?;
    }
    Ok((cost, out))
}

/// `Im Tr(O P S)` for the gate's Pauli generator. `S` is Hermitian, so
/// `S[b][a]` is read as `conj(S[a][b])` to keep both walks row-major.
fn im_trace_pauli(gen: Generator, o: &DensityMatrix, s: &[Complex64]) -> f64 {
    let dim = o.dim();
    let rows = o.entries().chunks_exact(dim).zip(s.chunks_exact(dim));
    let mut acc = 0.0;
    match gen {
        Generator::ZZ(i, j) => {
            let mask = (1usize << i) | (1usize << j);
            for (orow, srow) in rows {
                for (b, (x, y)) in orow.iter().zip(srow).enumerate() {
                    // Im(x conj(y)) with the ZZ sign of column b
                    let v = y.re * x.im - y.im * x.re;
                    acc += if (b & mask).count_ones() == 1 { -v } else { v };
                }
            }
        }
        Generator::X(q) => {
            let bit = 1usize << q;
            for (orow, srow) in rows {
                for (b, x) in orow.iter().enumerate() {
                    let y = srow[b ^ bit];
                    acc += y.re * x.im - y.im * x.re;
                }
            }
        }
    }
    acc
}

thread_local! {
    /// Per-gate snapshots for the density-matrix sweep, reused across calls.
    static SNAPSHOTS: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

fn adjoint_density(
    circuit: &GateSequence,
    h: &ProblemHamiltonian,
    channel: &NoiseChannel,
) -> Result<(f64, Vec<f64>)> {
    let m = circuit.num_qubits();
    let mut rho = DensityMatrix::from_pure(&StateVector::plus_state(m)?)?;
    let size = rho.entries().len();
    SNAPSHOTS.with_borrow_mut(|buf| {
        let need = size * circuit.gate_count();
        if buf.len() < need {
            buf.resize(need, Complex64::new(0.0, 0.0));
        }
        let snaps = &mut buf[..need];
        // forward: keep the state right after each unitary, before its noise
        for (g, snap) in circuit.gates().iter().zip(snaps.chunks_exact_mut(size)) {
            rho.apply_gate(&g.op)?;
            snap.copy_from_slice(rho.entries());
            for &q in g.op.targets() {
                rho.apply_kraus_exact(channel, q)?;
            }
        }
        let diag = h.diagonal();
        let cost: f64 = rho.diagonal().iter().zip(&diag).map(|(p, e)| p * e).sum();

        // backward: Heisenberg-picture observable
        let mut obs = DensityMatrix::diagonal_operator(m, &diag);
        let mut out = vec![0.0; circuit.gate_count()];
        for (k, g) in circuit.gates().iter().enumerate().rev() {
            for &q in g.op.targets().iter().rev() {
                obs.apply_kraus_adjoint(channel, q);
            }
            let snap = &snaps[k * size..(k + 1) * size];
            out[k] = 2.0 * g.coeff * im_trace_pauli(g.generator, &obs, snap);
            obs.apply_gate(&g.inverse_op()?)?;
        }
        Ok((cost, out))
    })
}

impl Evaluator {
    /// Cost and gradient at `params`.
    pub fn cost_and_gradient(
        &self,
        graph: &WeightedGraph,
        params: &QaoaParams,
        method: GradientMethod,
        stream: u64,
    ) -> Result<(f64, Gradient)> {
        match (method, self) {
            (GradientMethod::Adjoint, Evaluator::Ideal) => adjoint_gradient(graph, params, None),
            (GradientMethod::Adjoint, Evaluator::ExactNoisy(ch)) => {
                adjoint_gradient(graph, params, Some(ch))
            }
            (GradientMethod::Adjoint, Evaluator::Sampled { .. }) => Err(Error::InvalidConfig(
                "the adjoint gradient needs an exact evaluator".into(),
            )),
            (GradientMethod::ShiftRule, _) => {
                let circuit = build_circuit(graph, params)?;
                let h = problem_hamiltonian(graph);
                let cost = self.cost(&circuit, &h, derive_stream(&[stream, u64::MAX]))?;
                let grad = shift_rule_gradient_stream(graph, params, self, stream)?;
                Ok((cost, grad))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Iterate {
    pub params: QaoaParams,
    pub cost: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrace {
    /// `(theta_t, f(theta_t), |grad f(theta_t)|)` for every executed step.
    pub iterations: Vec<Iterate>,
    /// Parameters after the last update.
    pub final_params: QaoaParams,
    pub learning_rate: f64,
    /// Last recorded gradient norm fell below [`CONVERGENCE_TOL`].
    pub converged: bool,
}

impl OptimizationTrace {
    /// The iterate with the largest gradient norm.
    pub fn max_gradient_iterate(&self) -> &Iterate {
        self.iterations
            .iter()
            .max_by(|a, b| a.grad_norm.total_cmp(&b.grad_norm))
            .expect("trace is never empty")
    }

    pub fn final_cost(&self) -> f64 {
        self.iterations.last().expect("trace is never empty").cost
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescentOptions {
    pub learning_rate: f64,
    pub iterations: usize,
    pub method: GradientMethod,
}

/// `theta <- theta - lr * grad f(theta)` for a fixed number of steps.
pub fn gradient_descent(
    graph: &WeightedGraph,
    init: &QaoaParams,
    evaluator: &Evaluator,
    options: &DescentOptions,
) -> Result<OptimizationTrace> {
    if !(options.learning_rate > 0.0 && options.learning_rate.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "learning rate {} must be positive",
            options.learning_rate
        )));
    }
    if options.iterations == 0 {
        return Err(Error::InvalidParams("at least one iteration is required".into()));
    }
    let mut theta = init.clone();
    let mut iterations = Vec::with_capacity(options.iterations);
    for t in 0..options.iterations {
        let (cost, grad) = evaluator.cost_and_gradient(graph, &theta, options.method, t as u64)?;
        if !cost.is_finite() || !grad.is_finite() {
            return Err(Error::NonFinite(format!(
                "iteration {t}: cost {cost}, gradient {:?}",
                grad.to_flat()
            )));
        }
        let grad_norm = grad.norm();
        let next: Vec<f64> = theta
            .to_flat()
            .iter()
            .zip(grad.to_flat())
            .map(|(x, g)| x - options.learning_rate * g)
            .collect();
        iterations.push(Iterate {
            params: theta,
            cost,
            grad_norm,
        });
        theta = QaoaParams::from_flat(&next)?;
    }
    let converged = iterations
        .last()
        .is_some_and(|it| it.grad_norm < CONVERGENCE_TOL);
    Ok(OptimizationTrace {
        iterations,
        final_params: theta,
        learning_rate: options.learning_rate,
        converged,
    })
}

/// Initial angles i.i.d. uniform on `[-0.01, 0.01]`.
pub fn random_init<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<QaoaParams> {
    let mut draw = || (0..n).map(|_| rng.random_range(-0.01..=0.01)).collect::<Vec<f64>>();
    let gamma = draw();
    let beta = draw();
    QaoaParams::new(gamma, beta)
}

/// Root-mean-square distance over all `2n` angles.
pub fn param_distance(a: &QaoaParams, b: &QaoaParams) -> Result<f64> {
    if a.steps() != b.steps() {
        return Err(Error::InvalidParams(format!(
            "step counts differ ({} vs {})",
            a.steps(),
            b.steps()
        )));
    }
    let sq: f64 = a
        .to_flat()
        .iter()
        .zip(b.to_flat())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok((sq / (2 * a.steps()) as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{make_channel, ChannelKind};
    use crate::rng::stream_rng;

    fn one_edge() -> WeightedGraph {
        WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn shift_rule_matches_finite_differences_at_origin() {
        let g = WeightedGraph::table1();
        for n in 1..=2 {
            let p = QaoaParams::zeros(n).unwrap();
            let sr = shift_rule_gradient(&g, &p, &Evaluator::Ideal).unwrap();
            let fd = finite_difference_gradient(&g, &p, 1e-5).unwrap();
            assert!(sr.max_abs_diff(&fd) < 1e-6);
        }
    }

    #[test]
    fn shift_rule_single_edge() {
        let g = one_edge();
        let mut rng = stream_rng(4, &[]);
        for _ in 0..5 {
            let p = QaoaParams::new(
                vec![rng.random_range(-1.5..1.5)],
                vec![rng.random_range(-1.5..1.5)],
            )
            .unwrap();
            let sr = shift_rule_gradient(&g, &p, &Evaluator::Ideal).unwrap();
            let fd = finite_difference_gradient(&g, &p, 1e-5).unwrap();
            assert!(sr.max_abs_diff(&fd) < 1e-6, "{sr:?} vs {fd:?}");
        }
    }

    #[test]
    fn negative_weights_use_negative_shift() {
        let g = WeightedGraph::new(3, [(0, 1, -0.6), (1, 2, 1.7)]).unwrap();
        let p = QaoaParams::new(vec![0.3, -0.8], vec![0.2, 0.9]).unwrap();
        let sr = shift_rule_gradient(&g, &p, &Evaluator::Ideal).unwrap();
        let fd = finite_difference_gradient(&g, &p, 1e-5).unwrap();
        assert!(sr.max_abs_diff(&fd) < 1e-6);
    }

    #[test]
    fn diagonal_circuit_has_flat_gamma_direction() {
        let g = WeightedGraph::table1();
        let h = problem_hamiltonian(&g);
        for gamma in [0.0, 0.4, -1.3] {
            let p = QaoaParams::new(vec![gamma, 0.5 * gamma], vec![0.0, 0.0]).unwrap();
            let c = build_circuit(&g, &p).unwrap();
            assert!(cost_exact(&c, &h, None).unwrap().abs() < 1e-12);
            let sr = shift_rule_gradient(&g, &p, &Evaluator::Ideal).unwrap();
            assert!(sr.d_gamma.iter().all(|d| d.abs() < 1e-12));
        }
    }

    #[test]
    fn adjoint_matches_shift_rule() {
        let g = WeightedGraph::table1();
        let p = QaoaParams::new(vec![0.31, -0.12], vec![0.44, 0.27]).unwrap();
        let (_, ideal) = adjoint_gradient(&g, &p, None).unwrap();
        let sr = shift_rule_gradient(&g, &p, &Evaluator::Ideal).unwrap();
        assert!(ideal.max_abs_diff(&sr) < 1e-11);

        let ch = make_channel(ChannelKind::Depolarizing, 0.02).unwrap();
        let (cost, noisy) = adjoint_gradient(&g, &p, Some(&ch)).unwrap();
        let sr = shift_rule_gradient(&g, &p, &Evaluator::ExactNoisy(ch.clone())).unwrap();
        assert!(noisy.max_abs_diff(&sr) < 1e-11);
        let c = build_circuit(&g, &p).unwrap();
        let exact = cost_exact(&c, &problem_hamiltonian(&g), Some(&ch)).unwrap();
        assert!((cost - exact).abs() < 1e-12);
    }

    #[test]
    fn finite_difference_is_second_order() {
        let g = one_edge();
        let p = QaoaParams::new(vec![0.7], vec![0.3]).unwrap();
        let exact = adjoint_gradient(&g, &p, None).unwrap().1;
        let coarse = finite_difference_gradient(&g, &p, 1e-2).unwrap().max_abs_diff(&exact);
        let fine = finite_difference_gradient(&g, &p, 5e-3).unwrap().max_abs_diff(&exact);
        // halving h divides the truncation error by ~4
        assert!(fine < coarse / 3.0, "coarse {coarse}, fine {fine}");
        assert!(finite_difference_gradient(&g, &p, 0.0).is_err());
    }

    #[test]
    fn constant_direction_has_zero_derivative() {
        // an isolated node's mixer angle never changes the cost
        let g = WeightedGraph::new(1, []).unwrap();
        let p = QaoaParams::new(vec![0.2], vec![0.9]).unwrap();
        let fd = finite_difference_gradient(&g, &p, 1e-5).unwrap();
        assert!(fd.norm() < 1e-12);
    }

    #[test]
    fn random_init_range_and_reproducibility() {
        let a = random_init(4, &mut stream_rng(3, &[1])).unwrap();
        let b = random_init(4, &mut stream_rng(3, &[1])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_flat().len(), 8);
        for _ in 0..50 {
            let p = random_init(4, &mut stream_rng(3, &[2])).unwrap();
            assert!(p.to_flat().iter().all(|x| (-0.01..=0.01).contains(x)));
        }
    }

    #[test]
    fn distance_cases() {
        let a = QaoaParams::new(vec![0.1], vec![0.2]).unwrap();
        assert_eq!(param_distance(&a, &a).unwrap(), 0.0);
        let d = 0.3;
        let b = QaoaParams::new(vec![0.1 + d], vec![0.2]).unwrap();
        assert!((param_distance(&a, &b).unwrap() - d / 2f64.sqrt()).abs() < 1e-15);
        let c = QaoaParams::new(vec![0.0, 0.0], vec![0.0, 0.0]).unwrap();
        let e = QaoaParams::new(vec![d, -d], vec![d, d]).unwrap();
        assert!((param_distance(&c, &e).unwrap() - d).abs() < 1e-15);
        assert!(param_distance(&a, &c).is_err());
    }

    #[test]
    fn stationary_start_barely_moves() {
        let g = WeightedGraph::table1();
        let init = QaoaParams::zeros(2).unwrap();
        let opts = DescentOptions {
            learning_rate: 0.05,
            iterations: 3,
            method: GradientMethod::Adjoint,
        };
        let trace = gradient_descent(&g, &init, &Evaluator::Ideal, &opts).unwrap();
        assert!(trace.iterations[0].grad_norm < 1e-8);
        for it in &trace.iterations {
            for (x, y) in it.params.to_flat().iter().zip(init.to_flat()) {
                assert!((x - y).abs() < opts.learning_rate * 1e-8);
            }
        }
        assert!(trace.converged);
    }

    #[test]
    fn descent_validation() {
        let g = one_edge();
        let init = QaoaParams::zeros(1).unwrap();
        let mut opts = DescentOptions {
            learning_rate: 0.0,
            iterations: 3,
            method: GradientMethod::Adjoint,
        };
        assert!(gradient_descent(&g, &init, &Evaluator::Ideal, &opts).is_err());
        opts.learning_rate = 0.1;
        opts.iterations = 0;
        assert!(gradient_descent(&g, &init, &Evaluator::Ideal, &opts).is_err());
        let sampled = Evaluator::Sampled {
            channel: make_channel(ChannelKind::BitFlip, 0.01).unwrap(),
            shots: 10,
            seed: 1,
        };
        opts.iterations = 1;
        assert!(matches!(
            gradient_descent(&g, &init, &sampled, &opts),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn noiseless_exact_evaluator_is_ideal() {
        let ch = make_channel(ChannelKind::Dephasing, 0.0).unwrap();
        assert_eq!(Evaluator::exact(ch), Evaluator::Ideal);
        let ch = make_channel(ChannelKind::Dephasing, 0.001).unwrap();
        assert!(matches!(Evaluator::exact(ch), Evaluator::ExactNoisy(_)));
    }
}
