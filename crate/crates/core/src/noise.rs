//! Single-qubit Kraus channels and the noise-strength grid used by the experiments.
//!
//! Every channel stores its Kraus operators in full. The first operator is the
//! identity branch `a0 * I`; at `p = 0` the remaining operators are kept as zero
//! matrices so that branch indices stay stable across strengths.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for `sum_i K_i^dagger K_i = I`.
pub const CPTP_TOL: f64 = 1e-12;

/// Row-major 2x2 complex matrix.
pub type Mat2 = [Complex64; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Dephasing,
    #[serde(alias = "bit-flip", alias = "bit_flip")]
    BitFlip,
    Depolarizing,
    Custom,
}

impl ChannelKind {
    /// The three named channels, in a fixed order.
    pub const NAMED: [ChannelKind; 3] = [
        ChannelKind::Dephasing,
        ChannelKind::BitFlip,
        ChannelKind::Depolarizing,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelKind::Dephasing => "dephasing",
            ChannelKind::BitFlip => "bitflip",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dephasing" => Ok(ChannelKind::Dephasing),
            "bitflip" | "bit-flip" | "bit_flip" => Ok(ChannelKind::BitFlip),
            "depolarizing" => Ok(ChannelKind::Depolarizing),
            other => Err(Error::InvalidChannel(format!(
                "unknown channel '{other}' (expected dephasing, bitflip or depolarizing)"
            ))),
        }
    }
}

/// Result of a completeness check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpReport {
    /// Largest entry magnitude of `sum K^dagger K - I`.
    pub residual: f64,
    pub pass: bool,
}

/// A single-qubit channel `rho -> sum_i K_i rho K_i^dagger`.
/// Linear map on a 2x2 block `[r00, r01, r10, r11]`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct BlockMap {
    /// Nonzero entries `(out, in, value)`.
    pub(crate) entries: Vec<(usize, usize, Complex64)>,
    /// Real coefficients `[s00, s03, s30, s33, s11, s12, s21, s22]` when the
    /// map only couples `r00 <-> r11` and `r01 <-> r10` (Pauli channels).
    pub(crate) real: Option<[f64; 8]>,
}

impl BlockMap {
    fn new(entries: Vec<(usize, usize, Complex64)>) -> Self {
        const SLOTS: [(usize, usize); 8] =
            [(0, 0), (0, 3), (3, 0), (3, 3), (1, 1), (1, 2), (2, 1), (2, 2)];
        let mut real = [0.0; 8];
        let fits = entries.iter().all(|&(r, c, v)| {
            match SLOTS.iter().position(|&slot| slot == (r, c)) {
                Some(k) if v.im == 0.0 => {
                    real[k] = v.re;
                    true
                }
                _ => false,
            }
        });
        Self {
            entries,
            real: fits.then_some(real),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseChannel {
    kind: ChannelKind,
    p: f64,
    kraus: Vec<Mat2>,
    superop: BlockMap,
    adjoint: BlockMap,
    /// `Some(c_i)` when every `K_i^dagger K_i = c_i I`, so branch weights do
    /// not depend on the state.
    fixed_weights: Option<Vec<f64>>,
    /// `K_i` is a positive real multiple of the identity.
    scalar_branch: Vec<bool>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn scaled(m: [[f64; 2]; 2], s: f64) -> Mat2 {
    [c(m[0][0] * s), c(m[0][1] * s), c(m[1][0] * s), c(m[1][1] * s)]
}

const ID: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];
const X: [[f64; 2]; 2] = [[0.0, 1.0], [1.0, 0.0]];
const Z: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, -1.0]];

/// Builds one of the named channels at strength `p`.
pub fn make_channel(kind: ChannelKind, p: f64) -> Result<NoiseChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidChannel(format!(
            "strength p = {p} outside [0, 1]"
        )));
    }
    let kraus = match kind {
        ChannelKind::Dephasing => vec![scaled(ID, (1.0 - p).sqrt()), scaled(Z, p.sqrt())],
        ChannelKind::BitFlip => vec![scaled(ID, (1.0 - p).sqrt()), scaled(X, p.sqrt())],
        ChannelKind::Depolarizing => {
            let a = p.sqrt() / 2.0;
            let y = [c(0.0), Complex64::new(0.0, -a), Complex64::new(0.0, a), c(0.0)];
            vec![
                scaled(ID, (1.0 - 0.75 * p).sqrt()),
                scaled(X, a),
                y,
                scaled(Z, a),
            ]
        }
        ChannelKind::Custom => {
            return Err(Error::InvalidChannel(
                "custom channels are built from explicit Kraus operators".into(),
            ))
        }
    };
    Ok(NoiseChannel::from_parts(kind, p, kraus))
}

/// Residual of the completeness relation for an arbitrary Kraus list.
pub fn validate_kraus(kraus: &[Mat2]) -> CptpReport {
    let mut sum = [c(0.0); 4];
    for k in kraus {
        for a in 0..2 {
            for b in 0..2 {
                for r in 0..2 {
                    sum[2 * a + b] += k[2 * r + a].conj() * k[2 * r + b];
                }
            }
        }
    }
    let residual = (0..4)
        .map(|i| {
            let id = if i == 0 || i == 3 { 1.0 } else { 0.0 };
            (sum[i] - id).norm()
        })
        .fold(0.0, f64::max);
    CptpReport {
        residual,
        pass: residual < CPTP_TOL,
    }
}

pub fn validate_cptp(channel: &NoiseChannel) -> CptpReport {
    validate_kraus(&channel.kraus)
}

/// The eleven strengths `p_i = 1e-4 * 200^(i/10)`, spanning `[1e-4, 2e-2]`.
pub fn noise_grid() -> Vec<f64> {
    (0..=10).map(|i| 1e-4 * 200f64.powf(0.1 * i as f64)).collect()
}

impl NoiseChannel {
    /// A channel from explicit Kraus operators, rejected unless complete.
    pub fn custom(kraus: Vec<Mat2>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidChannel("empty Kraus set".into()));
        }
        let report = validate_kraus(&kraus);
        if !report.pass {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators are not trace preserving (residual {:.3e})",
                report.residual
            )));
        }
        // weight carried outside the first branch, averaged over the basis
        let first = &kraus[0];
        let keep = (first[0].norm_sqr() + first[1].norm_sqr() + first[2].norm_sqr()
            + first[3].norm_sqr())
            / 2.0;
        Ok(Self::from_parts(ChannelKind::Custom, (1.0 - keep).max(0.0), kraus))
    }

    fn from_parts(kind: ChannelKind, p: f64, kraus: Vec<Mat2>) -> Self {
        let mut superop = Vec::new();
        let mut adjoint = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for cc in 0..2 {
                    for d in 0..2 {
                        let mut s = c(0.0);
                        let mut h = c(0.0);
                        for k in &kraus {
                            s += k[2 * a + cc] * k[2 * b + d].conj();
                            h += k[2 * cc + a].conj() * k[2 * d + b];
                        }
                        let (row, col) = (2 * a + b, 2 * cc + d);
                        if s != c(0.0) {
                            superop.push((row, col, s));
                        }
                        if h != c(0.0) {
                            adjoint.push((row, col, h));
                        }
                    }
                }
            }
        }
        let fixed_weights = kraus
            .iter()
            .map(|k| {
                let diag0 = k[0].norm_sqr() + k[2].norm_sqr();
                let diag1 = k[1].norm_sqr() + k[3].norm_sqr();
                let off = k[0].conj() * k[1] + k[2].conj() * k[3];
                let tol = 1e-15 * diag0.max(diag1).max(1.0);
                ((diag0 - diag1).abs() <= tol && off.norm() <= tol).then_some(diag0)
            })
            .collect();
        let scalar_branch = kraus
            .iter()
            .map(|k| k[1] == c(0.0) && k[2] == c(0.0) && k[0] == k[3] && k[0].im == 0.0 && k[0].re > 0.0)
            .collect();
        Self {
            kind,
            p,
            kraus,
            superop: BlockMap::new(superop),
            adjoint: BlockMap::new(adjoint),
            fixed_weights,
            scalar_branch,
        }
    }

    pub(crate) fn fixed_weights(&self) -> Option<&[f64]> {
        self.fixed_weights.as_deref()
    }

    pub(crate) fn is_scalar_branch(&self, i: usize) -> bool {
        self.scalar_branch[i]
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn kraus(&self) -> &[Mat2] {
        &self.kraus
    }

    /// Nonzero entries `(row, col, value)` of the 4x4 map acting on a 2x2
    /// block `[r00, r01, r10, r11]`.
    pub(crate) fn superop(&self) -> &BlockMap {
        &self.superop
    }

    /// Nonzero entries of the Heisenberg-picture map `O -> sum K^dagger O K`.
    pub(crate) fn adjoint_superop(&self) -> &BlockMap {
        &self.adjoint
    }

    /// True when the channel acts as the identity map.
    pub fn is_noiseless(&self) -> bool {
        let id = scaled(ID, 1.0);
        self.kraus[0] == id
            && self.kraus[1..]
                .iter()
                .all(|k| k.iter().all(|z| *z == c(0.0)))
    }
}
