use num_complex::Complex64;

use crate::error::{Error, Result};

const UNITARY_TOL: f64 = 1e-10;

/// A one- or two-qubit unitary with its target qubits.
///
/// Two-qubit matrices are indexed little-endian over the targets: local basis
/// index `b0 + 2*b1`, where `b0` is the bit of `targets[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    targets: Vec<usize>,
    matrix: Vec<Complex64>,
    diagonal: bool,
}

impl GateOp {
    pub fn single(target: usize, matrix: [[Complex64; 2]; 2]) -> Result<Self> {
        let flat = matrix.iter().flatten().copied().collect();
        Self::build(vec![target], flat)
    }

    pub fn two(first: usize, second: usize, matrix: [[Complex64; 4]; 4]) -> Result<Self> {
        if first == second {
            return Err(Error::InvalidGate(format!(
                "two-qubit gate targets must differ (got {first} twice)"
            )));
        }
        let flat = matrix.iter().flatten().copied().collect();
        Self::build(vec![first, second], flat)
    }

    fn build(targets: Vec<usize>, matrix: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << targets.len();
        debug_assert_eq!(matrix.len(), dim * dim);
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidGate("non-finite matrix entry".into()));
        }
        // U U^dagger = I
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += matrix[r * dim + k] * matrix[c * dim + k].conj();
                }
                let expected = if r == c { 1.0 } else { 0.0 };
                if (acc - expected).norm() > UNITARY_TOL {
                    return Err(Error::InvalidGate(format!(
                        "matrix is not unitary (entry ({r},{c}) of U U^dagger is {acc})"
                    )));
                }
            }
        }
        let diagonal = (0..dim)
            .flat_map(|r| (0..dim).map(move |c| (r, c)))
            .all(|(r, c)| r == c || matrix[r * dim + c] == Complex64::new(0.0, 0.0));
        Ok(Self {
            targets,
            matrix,
            diagonal,
        })
    }

    /// `exp(-i theta Z_a Z_b)` = diag(e^{-i theta}, e^{i theta}, e^{i theta}, e^{-i theta}).
    pub fn zz_phase(a: usize, b: usize, theta: f64) -> Result<Self> {
        let z = Complex64::new(0.0, 0.0);
        let aligned = Complex64::from_polar(1.0, -theta);
        let anti = Complex64::from_polar(1.0, theta);
        Self::two(
            a,
            b,
            [
                [aligned, z, z, z],
                [z, anti, z, z],
                [z, z, anti, z],
                [z, z, z, aligned],
            ],
        )
    }

    /// `exp(-i theta X)`.
    pub fn x_rotation(target: usize, theta: f64) -> Result<Self> {
        let c = Complex64::new(theta.cos(), 0.0);
        let s = Complex64::new(0.0, -theta.sin());
        Self::single(target, [[c, s], [s, c]])
    }

    pub fn pauli_x(target: usize) -> Self {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        Self::single(target, [[z, o], [o, z]]).expect("Pauli X is unitary")
    }

    pub fn hadamard(target: usize) -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::single(target, [[h, h], [h, -h]]).expect("Hadamard is unitary")
    }

    pub fn identity(target: usize) -> Self {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        Self::single(target, [[o, z], [z, o]]).expect("identity is unitary")
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    pub(crate) fn check_targets(&self, num_qubits: usize) -> Result<()> {
        for &t in &self.targets {
            if t >= num_qubits {
                return Err(Error::InvalidQubit {
                    index: t,
                    num_qubits,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn matrix_2x2(&self) -> [Complex64; 4] {
        debug_assert_eq!(self.arity(), 1);
        [self.matrix[0], self.matrix[1], self.matrix[2], self.matrix[3]]
    }

    pub(crate) fn diagonal_entries(&self) -> Vec<Complex64> {
        let dim = 1usize << self.arity();
        (0..dim).map(|k| self.matrix[k * dim + k]).collect()
    }
}

/// Index of the `k`-th basis state whose bit `bit_pos` is zero.
#[inline]
pub(crate) fn insert_zero_bit(k: usize, bit_pos: usize) -> usize {
    let low = k & ((1usize << bit_pos) - 1);
    ((k >> bit_pos) << (bit_pos + 1)) | low
}

#[inline]
pub(crate) fn insert_two_zero_bits(k: usize, a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    insert_zero_bit(insert_zero_bit(k, lo), hi)
}
