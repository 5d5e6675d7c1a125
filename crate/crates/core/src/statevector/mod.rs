//! Dense pure-state and density-matrix kernels.
//!
//! Qubit `q` is bit `q` of the amplitude index (little-endian).

mod density;
mod gate;

pub use density::DensityMatrix;
pub use gate::GateOp;
pub(crate) use gate::{insert_two_zero_bits, insert_zero_bit};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::noise::{Mat2, NoiseChannel};

/// Largest register handled by the pure-state kernel.
pub const MAX_PURE_QUBITS: usize = 24;

pub(crate) const NORM_TOL: f64 = 1e-10;

/// Probabilities below this are treated as zero when selecting a Kraus branch.
const BRANCH_EPS: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

pub(crate) fn check_size(m: usize, max: usize) -> Result<()> {
    if m == 0 || m > max {
        Err(Error::Size { got: m, max })
    } else {
        Ok(())
    }
}

impl StateVector {
    /// `|+>^{(x) m}`.
    pub fn plus_state(m: usize) -> Result<Self> {
        check_size(m, MAX_PURE_QUBITS)?;
        let dim = 1usize << m;
        let a = (dim as f64).sqrt().recip();
        Ok(Self {
            num_qubits: m,
            amps: vec![Complex64::new(a, 0.0); dim],
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(m: usize, index: usize) -> Result<Self> {
        check_size(m, MAX_PURE_QUBITS)?;
        let dim = 1usize << m;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits: m, amps })
    }

    /// Wraps amplitudes as-is; used for unnormalized work vectors.
    pub(crate) fn raw(num_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        Self { num_qubits, amps }
    }

    /// Wraps an amplitude vector, normalizing it. Zero vectors are rejected.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two().max(2),
                got: dim,
            });
        }
        let m = dim.trailing_zeros() as usize;
        check_size(m, MAX_PURE_QUBITS)?;
        let mut s = Self { num_qubits: m, amps };
        let n = s.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NonFinite(format!("state norm {n}")));
        }
        s.scale(1.0 / n);
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn scale(&mut self, s: f64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    pub(crate) fn renormalize(&mut self) {
        let n = self.norm();
        if (n - 1.0).abs() > f64::EPSILON {
            self.scale(1.0 / n);
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_dim(other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            })
        } else {
            Ok(())
        }
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            Err(Error::InvalidQubit {
                index: q,
                num_qubits: self.num_qubits,
            })
        } else {
            Ok(())
        }
    }

    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.check_targets(self.num_qubits)?;
        let t = gate.targets();
        match (gate.arity(), gate.is_diagonal()) {
            (1, _) => self.apply_mat2(&gate.matrix_2x2(), t[0]),
            (2, true) => {
                let d = gate.diagonal_entries();
                let (ba, bb) = (t[0], t[1]);
                for (idx, a) in self.amps.iter_mut().enumerate() {
                    let local = ((idx >> ba) & 1) | (((idx >> bb) & 1) << 1);
                    *a *= d[local];
                }
            }
            _ => {
                let m = gate.matrix();
                let (qa, qb) = (t[0], t[1]);
                for k in 0..self.dim() / 4 {
                    let base = insert_two_zero_bits(k, qa, qb);
                    let idx = [
                        base,
                        base | (1 << qa),
                        base | (1 << qb),
                        base | (1 << qa) | (1 << qb),
                    ];
                    let v = idx.map(|i| self.amps[i]);
                    for r in 0..4 {
                        self.amps[idx[r]] = (0..4).map(|c| m[4 * r + c] * v[c]).sum();
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies an arbitrary 2x2 matrix to qubit `q` without renormalizing.
    pub(crate) fn apply_mat2(&mut self, m: &Mat2, q: usize) {
        let bit = 1usize << q;
        for k in 0..self.dim() / 2 {
            let i0 = insert_zero_bit(k, q);
            let i1 = i0 | bit;
            let (a0, a1) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = m[0] * a0 + m[1] * a1;
            self.amps[i1] = m[2] * a0 + m[3] * a1;
        }
    }

    /// `||K |phi>||^2` for `K` acting on qubit `q`.
    fn branch_weight(&self, k: &Mat2, q: usize) -> f64 {
        let bit = 1usize << q;
        (0..self.dim() / 2)
            .map(|j| {
                let i0 = insert_zero_bit(j, q);
                let (a0, a1) = (self.amps[i0], self.amps[i0 | bit]);
                (k[0] * a0 + k[1] * a1).norm_sqr() + (k[2] * a0 + k[3] * a1).norm_sqr()
            })
            .sum()
    }

    /// Branch probabilities `p_i = <phi| K_i^dagger K_i |phi>` on qubit `q`.
    pub fn kraus_probabilities(&self, channel: &NoiseChannel, qubit: usize) -> Result<Vec<f64>> {
        self.check_qubit(qubit)?;
        Ok(channel
            .kraus()
            .iter()
            .map(|k| self.branch_weight(k, qubit))
            .collect())
    }

    /// One stochastic channel application.
    ///
    /// Picks the branch `l` (0-based) with `sum_{i<l} p_i <= r < sum_{i<=l} p_i`
    /// and replaces the state by `K_l |phi> / sqrt(p_l)`. Returns `l`.
    pub fn sample_kraus(&mut self, channel: &NoiseChannel, qubit: usize, r: f64) -> Result<usize> {
        self.check_qubit(qubit)?;
        let probs = match channel.fixed_weights() {
            Some(w) => w.to_vec(),
            None => self.kraus_probabilities(channel, qubit)?,
        };
        let total: f64 = probs.iter().sum();
        if !(total > BRANCH_EPS) {
            return Err(Error::Degenerate);
        }
        let target = r * total;
        let mut acc = 0.0;
        let mut chosen = None;
        for (i, &pi) in probs.iter().enumerate() {
            acc += pi;
            if pi > BRANCH_EPS && target < acc {
                chosen = Some(i);
                break;
            }
        }
        // rounding can leave target == total; fall back to the last live branch
        let l = match chosen {
            Some(l) => l,
            None => probs
                .iter()
                .rposition(|&p| p > BRANCH_EPS)
                .ok_or(Error::Degenerate)?,
        };
        // a positive multiple of the identity leaves the normalized state unchanged
        if !channel.is_scalar_branch(l) {
            self.apply_mat2(&channel.kraus()[l], qubit);
            self.scale(1.0 / probs[l].sqrt());
            self.renormalize();
        }
        Ok(l)
    }

    /// Probabilities of every computational basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Marginal distribution `(p00, p01, p10, p11)` over qubits `(a, b)`;
    /// label `xy` means qubit `a` reads `x` and qubit `b` reads `y`.
    pub fn measurement_probabilities(&self, a: usize, b: usize) -> Result<[f64; 4]> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        marginal_pair(self.amps.iter().map(|z| z.norm_sqr()), a, b)
    }
}

pub(crate) fn marginal_pair(
    diag: impl Iterator<Item = f64>,
    a: usize,
    b: usize,
) -> Result<[f64; 4]> {
    if a == b {
        return Err(Error::InvalidQubit {
            index: b,
            num_qubits: 0,
        });
    }
    let mut out = [0.0; 4];
    for (idx, p) in diag.enumerate() {
        let x = (idx >> a) & 1;
        let y = (idx >> b) & 1;
        out[2 * x + y] += p;
    }
    Ok(out)
}

/// `|<a|b>|^2`.
pub fn pure_fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{make_channel, ChannelKind};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn plus_state_amplitudes() {
        let s = StateVector::plus_state(1).unwrap();
        assert!(s.amplitudes().iter().all(|a| close(*a, FRAC_1_SQRT_2.into())));
        let s = StateVector::plus_state(2).unwrap();
        assert!(s.amplitudes().iter().all(|a| close(*a, 0.5.into())));
        let s = StateVector::plus_state(7).unwrap();
        assert_eq!(s.dim(), 128);
        let expected = 2f64.powf(-3.5);
        assert!(s.amplitudes().iter().all(|a| close(*a, expected.into())));
        assert!((expected - 0.0883883).abs() < 1e-7);
    }

    #[test]
    fn plus_state_size_bounds() {
        assert!(matches!(StateVector::plus_state(0), Err(Error::Size { .. })));
        assert!(matches!(StateVector::plus_state(25), Err(Error::Size { .. })));
    }

    #[test]
    fn x_and_h_on_zero() {
        let mut s = StateVector::basis(1, 0).unwrap();
        s.apply_gate(&GateOp::pauli_x(0)).unwrap();
        assert!(close(s.amplitudes()[1], 1.0.into()));
        let mut s = StateVector::basis(1, 0).unwrap();
        s.apply_gate(&GateOp::hadamard(0)).unwrap();
        assert!(close(s.amplitudes()[0], FRAC_1_SQRT_2.into()));
        assert!(close(s.amplitudes()[1], FRAC_1_SQRT_2.into()));
    }

    #[test]
    fn zz_phase_on_zero_zero() {
        let mut s = StateVector::basis(2, 0).unwrap();
        s.apply_gate(&GateOp::zz_phase(0, 1, FRAC_PI_2).unwrap()).unwrap();
        assert!(close(s.amplitudes()[0], Complex64::new(0.0, -1.0)));
        for a in &s.amplitudes()[1..] {
            assert!(close(*a, 0.0.into()));
        }
    }

    #[test]
    fn gate_target_out_of_range() {
        let mut s = StateVector::basis(2, 0).unwrap();
        assert!(matches!(
            s.apply_gate(&GateOp::pauli_x(2)),
            Err(Error::InvalidQubit { .. })
        ));
    }

    #[test]
    fn generic_two_qubit_kernel() {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        // CNOT with control targets[0], target targets[1]
        let cnot = [[o, z, z, z], [z, z, z, o], [z, z, o, z], [z, o, z, z]];
        let g = GateOp::two(0, 2, cnot).unwrap();
        assert!(!g.is_diagonal());
        let mut s = StateVector::basis(3, 0b001).unwrap();
        s.apply_gate(&g).unwrap();
        assert!(close(s.amplitudes()[0b101], o));
        let mut s = StateVector::basis(3, 0b100).unwrap();
        s.apply_gate(&g).unwrap();
        assert!(close(s.amplitudes()[0b100], o));
        let g = GateOp::two(2, 0, cnot).unwrap();
        let mut s = StateVector::basis(3, 0b100).unwrap();
        s.apply_gate(&g).unwrap();
        assert!(close(s.amplitudes()[0b101], o));
    }

    #[test]
    fn fidelity_cases() {
        let z = StateVector::basis(1, 0).unwrap();
        let o = StateVector::basis(1, 1).unwrap();
        let p = StateVector::plus_state(1).unwrap();
        assert!((pure_fidelity(&z, &z).unwrap() - 1.0).abs() < 1e-15);
        assert!(pure_fidelity(&z, &o).unwrap().abs() < 1e-15);
        assert!((pure_fidelity(&z, &p).unwrap() - 0.5).abs() < 1e-15);
        let two = StateVector::plus_state(2).unwrap();
        assert!(pure_fidelity(&z, &two).is_err());
    }

    #[test]
    fn marginals() {
        let s = StateVector::basis(2, 0).unwrap();
        assert_eq!(s.measurement_probabilities(0, 1).unwrap(), [1.0, 0.0, 0.0, 0.0]);
        let s = StateVector::plus_state(2).unwrap();
        for p in s.measurement_probabilities(0, 1).unwrap() {
            assert!((p - 0.25).abs() < 1e-15);
        }
        let h = FRAC_1_SQRT_2;
        let bell = StateVector::from_amplitudes(vec![h.into(), 0.0.into(), 0.0.into(), h.into()])
            .unwrap();
        let m = bell.measurement_probabilities(0, 1).unwrap();
        assert!((m[0] - 0.5).abs() < 1e-15 && (m[3] - 0.5).abs() < 1e-15);
        assert_eq!((m[1], m[2]), (0.0, 0.0));
        assert!(bell.measurement_probabilities(1, 1).is_err());
    }

    #[test]
    fn marginal_labels_follow_argument_order() {
        // |q1 q0> = |01>: qubit 0 is 1, qubit 1 is 0
        let s = StateVector::basis(2, 0b01).unwrap();
        assert_eq!(s.measurement_probabilities(0, 1).unwrap(), [0.0, 0.0, 1.0, 0.0]);
        assert_eq!(s.measurement_probabilities(1, 0).unwrap(), [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn bit_flip_branches_on_zero() {
        let p = 0.3;
        let ch = make_channel(ChannelKind::BitFlip, p).unwrap();
        let s = StateVector::basis(1, 0).unwrap();
        let probs = s.kraus_probabilities(&ch, 0).unwrap();
        assert!((probs[0] - (1.0 - p)).abs() < 1e-15);
        assert!((probs[1] - p).abs() < 1e-15);

        let mut low = s.clone();
        assert_eq!(low.sample_kraus(&ch, 0, 0.0).unwrap(), 0);
        assert!(close(low.amplitudes()[0], 1.0.into()));

        let mut high = s.clone();
        assert_eq!(high.sample_kraus(&ch, 0, 0.95).unwrap(), 1);
        assert!(close(high.amplitudes()[1], 1.0.into()));
        assert!((high.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bit_flip_leaves_plus_invariant() {
        let ch = make_channel(ChannelKind::BitFlip, 0.4).unwrap();
        for r in [0.1, 0.9] {
            let mut s = StateVector::plus_state(1).unwrap();
            s.sample_kraus(&ch, 0, r).unwrap();
            let f = pure_fidelity(&s, &StateVector::plus_state(1).unwrap()).unwrap();
            assert!((f - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn branch_boundary_resolves_to_lower_branch() {
        // branch l owns [cdf_{l-1}, cdf_l)
        let ch = make_channel(ChannelKind::BitFlip, 0.5).unwrap();
        let mut s = StateVector::basis(1, 0).unwrap();
        assert_eq!(s.sample_kraus(&ch, 0, 0.49999).unwrap(), 0);
        let mut s = StateVector::basis(1, 0).unwrap();
        assert_eq!(s.sample_kraus(&ch, 0, 0.5).unwrap(), 1);
    }

    #[test]
    fn zero_strength_never_leaves_identity_branch() {
        let ch = make_channel(ChannelKind::Depolarizing, 0.0).unwrap();
        let mut s = StateVector::plus_state(2).unwrap();
        for r in [0.0, 0.5, 0.999_999_999] {
            assert_eq!(s.sample_kraus(&ch, 1, r).unwrap(), 0);
        }
    }
}
