//! Confidence-interval widths and decay fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maxcut::WeightedGraph;

fn check_shots(shots: usize) -> Result<()> {
    if shots == 0 {
        return Err(Error::InvalidParams("shots must be at least 1".into()));
    }
    Ok(())
}

/// Interval length `2 sqrt(sum C^2 / M)` for a shot-based cost estimate.
pub fn ci_cost(shots: usize, graph: &WeightedGraph) -> Result<f64> {
    check_shots(shots)?;
    Ok(2.0 * (graph.sum_squared_weights() / shots as f64).sqrt())
}

/// Interval lengths `(L_gamma, L_beta)` for shift-rule derivative estimates:
/// `L_gamma = 2 sqrt(2/M) sum C^2` and `L_beta = 2 sqrt(2 m sum C^2 / M)`.
pub fn ci_gradient(shots: usize, graph: &WeightedGraph, num_qubits: usize) -> Result<(f64, f64)> {
    check_shots(shots)?;
    let s2 = graph.sum_squared_weights();
    let m = shots as f64;
    let l_gamma = 2.0 * (2.0 / m).sqrt() * s2;
    let l_beta = 2.0 * (2.0 * num_qubits as f64 * s2 / m).sqrt();
    Ok((l_gamma, l_beta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// `c` in `y = (1 - p)^(c N)`.
    pub constant: f64,
    /// Centered coefficient of determination in log space.
    pub r_squared: f64,
    pub points_used: usize,
    pub points_dropped: usize,
}

/// Fits `y = (1 - p)^(c N)` for a single gate count `N`.
pub fn fit_decay(points: &[(f64, f64)], gate_count: usize) -> Result<DecayFit> {
    let pooled: Vec<(f64, usize, f64)> = points.iter().map(|&(p, y)| (p, gate_count, y)).collect();
    fit_decay_pooled(&pooled)
}

/// Fits one constant to `(p, N, y)` points with varying `N`: least squares of
/// `ln y = c N ln(1 - p)` through the origin.
pub fn fit_decay_pooled(points: &[(f64, usize, f64)]) -> Result<DecayFit> {
    let mut xs = Vec::with_capacity(points.len());
    let mut zs = Vec::with_capacity(points.len());
    let mut dropped = 0;
    for &(p, n, y) in points {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Fit(format!("noise strength {p} outside [0, 1)")));
        }
        if !(y > 0.0) || !y.is_finite() {
            log::warn!("dropping point p={p}, N={n}: y={y} is not positive");
            dropped += 1;
            continue;
        }
        xs.push(n as f64 * (-p).ln_1p());
        zs.push(y.ln());
    }
    if xs.len() < 2 {
        return Err(Error::Fit(format!(
            "{} usable points, at least 2 required",
            xs.len()
        )));
    }
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all points have p = 0".into()));
    }
    let sxz: f64 = xs.iter().zip(&zs).map(|(x, z)| x * z).sum();
    let c = sxz / sxx;
    let ss_res: f64 = xs.iter().zip(&zs).map(|(x, z)| (z - c * x).powi(2)).sum();
    let mean = zs.iter().sum::<f64>() / zs.len() as f64;
    let ss_tot: f64 = zs.iter().map(|z| (z - mean).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    Ok(DecayFit {
        constant: c,
        r_squared,
        points_used: xs.len(),
        points_dropped: dropped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub intercept_std_error: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = intercept + slope x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::Fit(format!("{n} points, at least 3 required")));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("regressor is constant".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let s2 = ss_res / (nf - 2.0);
    let sumx2: f64 = xs.iter().map(|x| x * x).sum();
    Ok(LinearFit {
        intercept,
        slope,
        intercept_std_error: (s2 * sumx2 / (nf * sxx)).sqrt(),
        r_squared: if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 },
    })
}
