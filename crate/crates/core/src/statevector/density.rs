use num_complex::Complex64;

use super::gate::insert_two_zero_bits;
use super::{check_size, marginal_pair, GateOp, StateVector, NORM_TOL};
use crate::error::{Error, Result};
use crate::noise::{BlockMap, NoiseChannel};

/// Largest register handled by the density-matrix kernel.
pub const MAX_DENSITY_QUBITS: usize = 12;

/// Row-major `2^m x 2^m` density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    dim: usize,
    data: Vec<Complex64>,
}


impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        check_size(state.num_qubits(), MAX_DENSITY_QUBITS)?;
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in amps {
            for c in amps {
                data.push(r * c.conj());
            }
        }
        Ok(Self {
            num_qubits: state.num_qubits(),
            dim,
            data,
        })
    }

    /// `I / 2^m`.
    pub fn maximally_mixed(m: usize) -> Result<Self> {
        check_size(m, MAX_DENSITY_QUBITS)?;
        let dim = 1usize << m;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self {
            num_qubits: m,
            dim,
            data,
        })
    }

    /// Wraps row-major entries after checking Hermiticity and unit trace.
    pub fn from_entries(m: usize, data: Vec<Complex64>) -> Result<Self> {
        check_size(m, MAX_DENSITY_QUBITS)?;
        let dim = 1usize << m;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        let rho = Self::from_entries_unchecked(m, data);
        if !rho.is_hermitian(NORM_TOL) {
            return Err(Error::InvalidParams("density matrix is not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr - 1.0).norm() > NORM_TOL {
            return Err(Error::InvalidParams(format!("density matrix trace {tr} != 1")));
        }
        Ok(rho)
    }

    /// Any square operator in the same layout; used for Heisenberg-picture
    /// observables and for linearity checks on non-physical inputs.
    pub fn from_entries_unchecked(m: usize, data: Vec<Complex64>) -> Self {
        let dim = 1usize << m;
        assert_eq!(data.len(), dim * dim, "operator size");
        Self {
            num_qubits: m,
            dim,
            data,
        }
    }

    /// Diagonal operator with the given real entries.
    pub(crate) fn diagonal_operator(m: usize, diag: &[f64]) -> Self {
        let dim = 1usize << m;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, d) in diag.iter().enumerate() {
            data[i * dim + i] = Complex64::new(*d, 0.0);
        }
        Self {
            num_qubits: m,
            dim,
            data,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re).collect()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim).all(|r| {
            (r..self.dim).all(|c| (self.get(r, c) - self.get(c, r).conj()).norm() <= tol)
        })
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

    /// `rho -> U rho U^dagger`.
    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.check_targets(self.num_qubits)?;
        let t = gate.targets();
        match (gate.arity(), gate.is_diagonal()) {
            (1, _) => self.conjugate_mat2(&gate.matrix_2x2(), t[0]),
            (2, true) => {
                let d = gate.diagonal_entries();
                let (qa, qb) = (t[0], t[1]);
                let local: Vec<usize> = (0..self.dim)
                    .map(|i| ((i >> qa) & 1) | (((i >> qb) & 1) << 1))
                    .collect();
                for (row, &lr) in self.data.chunks_exact_mut(self.dim).zip(&local) {
                    let prod: [Complex64; 4] = std::array::from_fn(|k| d[lr] * d[k].conj());
                    for (x, &lc) in row.iter_mut().zip(&local) {
                        *x *= prod[lc];
                    }
                }
            }
            _ => self.conjugate_generic_two(gate.matrix(), t[0], t[1]),
        }
        Ok(())
    }

    fn conjugate_mat2(&mut self, u: &[Complex64; 4], q: usize) {
        let ud = [u[0].conj(), u[2].conj(), u[1].conj(), u[3].conj()];
        self.for_each_block(q, |b| {
            let t = [
                u[0] * b[0] + u[1] * b[2],
                u[0] * b[1] + u[1] * b[3],
                u[2] * b[0] + u[3] * b[2],
                u[2] * b[1] + u[3] * b[3],
            ];
            *b = [
                t[0] * ud[0] + t[1] * ud[2],
                t[0] * ud[1] + t[1] * ud[3],
                t[2] * ud[0] + t[3] * ud[2],
                t[2] * ud[1] + t[3] * ud[3],
            ];
        });
    }

    /// Calls `f` on every 2x2 block `[r0c0, r0c1, r1c0, r1c1]` of qubit `q`.
    fn for_each_block(&mut self, q: usize, mut f: impl FnMut(&mut [Complex64; 4])) {
        let bit = 1usize << q;
        let dim = self.dim;
        for pair in self.data.chunks_exact_mut(2 * bit * dim) {
            let (upper, lower) = pair.split_at_mut(bit * dim);
            for (row0, row1) in upper.chunks_exact_mut(dim).zip(lower.chunks_exact_mut(dim)) {
                for (c0, c1) in row0.chunks_exact_mut(2 * bit).zip(row1.chunks_exact_mut(2 * bit)) {
                    let (a0, a1) = c0.split_at_mut(bit);
                    let (b0, b1) = c1.split_at_mut(bit);
                    for (((x00, x01), x10), x11) in a0.iter_mut().zip(a1).zip(b0).zip(b1) {
                        let mut blk = [*x00, *x01, *x10, *x11];
                        f(&mut blk);
                        [*x00, *x01, *x10, *x11] = blk;
                    }
                }
            }
        }
    }

    fn conjugate_generic_two(&mut self, u: &[Complex64], qa: usize, qb: usize) {
        let dim = self.dim;
        let groups: Vec<[usize; 4]> = (0..dim / 4)
            .map(|k| {
                let base = insert_two_zero_bits(k, qa, qb);
                [
                    base,
                    base | (1 << qa),
                    base | (1 << qb),
                    base | (1 << qa) | (1 << qb),
                ]
            })
            .collect();
        // left: columns are independent vectors over the row index
        for c in 0..dim {
            for idx in &groups {
                let v = idx.map(|r| self.data[r * dim + c]);
                for r in 0..4 {
                    self.data[idx[r] * dim + c] = (0..4).map(|k| u[4 * r + k] * v[k]).sum();
                }
            }
        }
        // right: multiply each row by U^dagger
        for r in 0..dim {
            let row = &mut self.data[r * dim..(r + 1) * dim];
            for idx in &groups {
                let v = idx.map(|c| row[c]);
                for i in 0..4 {
                    row[idx[i]] = (0..4).map(|k| v[k] * u[4 * i + k].conj()).sum();
                }
            }
        }
    }

    /// `rho -> sum_i (K_i (x) I) rho (K_i (x) I)^dagger` on `qubit`.
    pub fn apply_kraus_exact(&mut self, channel: &NoiseChannel, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        self.apply_block_map(channel.superop(), qubit);
        Ok(())
    }

    /// Heisenberg-picture channel `O -> sum_i K_i^dagger O K_i` on `qubit`.
    pub(crate) fn apply_kraus_adjoint(&mut self, channel: &NoiseChannel, qubit: usize) {
        self.apply_block_map(channel.adjoint_superop(), qubit);
    }

    fn apply_block_map(&mut self, map: &BlockMap, q: usize) {
        match map.real {
            Some([s00, s03, s30, s33, s11, s12, s21, s22]) => self.for_each_block(q, |b| {
                *b = [
                    b[0] * s00 + b[3] * s03,
                    b[1] * s11 + b[2] * s12,
                    b[1] * s21 + b[2] * s22,
                    b[0] * s30 + b[3] * s33,
                ];
            }),
            None => self.for_each_block(q, |b| {
                let mut out = [Complex64::new(0.0, 0.0); 4];
                for &(row, col, v) in &map.entries {
                    out[row] += v * b[col];
                }
                *b = out;
            }),
        }
    }

    /// `<phi| rho |phi>`; the imaginary residue is checked against 1e-10 in debug builds.
    pub fn expectation_pure(&self, phi: &StateVector) -> Result<f64> {
        if phi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: phi.dim(),
            });
        }
        let a = phi.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        for (r, row) in self.data.chunks_exact(self.dim).enumerate() {
            let inner: Complex64 = row.iter().zip(a).map(|(x, y)| x * y).sum();
            acc += a[r].conj() * inner;
        }
        debug_assert!(acc.im.abs() < 1e-10 * self.trace().norm().max(1.0));
        Ok(acc.re)
    }

    pub fn measurement_probabilities(&self, a: usize, b: usize) -> Result<[f64; 4]> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        marginal_pair(self.diagonal().into_iter(), a, b)
    }
}
