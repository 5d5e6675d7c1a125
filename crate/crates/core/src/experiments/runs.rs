use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::stats::{ci_cost, ci_gradient, fit_decay, fit_decay_pooled, linear_fit};
use super::table::{Column, ResultTable};
use super::{EvalMode, ExperimentConfig};
use crate::error::{Error, Result};
use crate::gradopt::{
    gradient_descent, param_distance, random_init, DescentOptions, Evaluator, GradientMethod,
    OptimizationTrace,
};
use crate::maxcut::{problem_hamiltonian, WeightedGraph};
use crate::noise::make_channel;
use crate::qaoa::{build_circuit, cost_exact, output_fidelity, run_exact_noisy, run_ideal, run_trajectory, QaoaParams};
use crate::rng::{stream_rng, tag};
use crate::statevector::pure_fidelity;

/// Angles for the fidelity study are drawn uniformly from this interval.
pub const FIDELITY_PARAM_RANGE: (f64, f64) = (-FRAC_PI_2, FRAC_PI_2);

/// Cells in grid order: step counts outer, noise strengths inner.
fn grid(config: &ExperimentConfig) -> Vec<(usize, usize)> {
    (0..config.steps.len())
        .flat_map(|ni| (0..config.p_values.len()).map(move |pi| (ni, pi)))
        .collect()
}

fn gate_count(graph: &WeightedGraph, n: usize) -> usize {
    n * (graph.edges().len() + graph.num_nodes())
}

fn method_for(config: &ExperimentConfig) -> GradientMethod {
    match config.mode {
        EvalMode::Exact => GradientMethod::Adjoint,
        EvalMode::Sampled => GradientMethod::ShiftRule,
    }
}

fn fit_json<T: serde::Serialize>(fit: Result<T>) -> serde_json::Value {
    match fit {
        Ok(f) => json!(f),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// One random parameter set covering the largest requested `n`; smaller `n`
/// use its leading entries.
pub fn fidelity_params(config: &ExperimentConfig) -> Result<QaoaParams> {
    let n = config.steps.iter().copied().max().unwrap_or(1);
    let mut rng = stream_rng(config.seed, &[tag::FIDELITY_PARAMS]);
    let (lo, hi) = FIDELITY_PARAM_RANGE;
    let mut draw = || (0..n).map(|_| rng.random_range(lo..hi)).collect::<Vec<f64>>();
    let gamma = draw();
    let beta = draw();
    QaoaParams::new(gamma, beta)
}

fn truncate(params: &QaoaParams, n: usize) -> Result<QaoaParams> {
    QaoaParams::new(params.gamma()[..n].to_vec(), params.beta()[..n].to_vec())
}

/// Output-state fidelity `<phi|rho|phi>` over the `(n, p)` grid.
pub fn run_fidelity_experiment(config: &ExperimentConfig) -> Result<ResultTable> {
    config.validate()?;
    let graph = config.load_graph()?;
    let all = fidelity_params(config)?;
    let rows = grid(config)
        .into_par_iter()
        .map(|(ni, pi)| {
            let (n, p) = (config.steps[ni], config.p_values[pi]);
            let circuit = build_circuit(&graph, &truncate(&all, n)?)?;
            let ideal = run_ideal(&circuit)?;
            let channel = make_channel(config.channel, p)?;
            let f = match config.mode {
                _ if channel.is_noiseless() => 1.0,
                EvalMode::Exact => output_fidelity(&ideal, &run_exact_noisy(&circuit, &channel)?)?,
                EvalMode::Sampled => {
                    let mut rng =
                        stream_rng(config.seed, &[tag::TRAJECTORY, ni as u64, pi as u64]);
                    let mut acc = 0.0;
                    for _ in 0..config.trajectories {
                        acc += pure_fidelity(&ideal, &run_trajectory(&circuit, &channel, &mut rng)?)?;
                    }
                    acc / config.trajectories as f64
                }
            };
            Ok(vec![p, n as f64, circuit.gate_count() as f64, f])
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = ResultTable::new(
        "fidelity",
        vec![
            Column::new("p", "noise strength"),
            Column::new("n", "QAOA steps"),
            Column::new("N", "gate count n(E+m)"),
            Column::new("fidelity", "<phi_ideal|rho_noisy|phi_ideal>"),
        ],
    );
    for r in rows {
        table.push_row(r);
    }
    let per_n: Vec<_> = config
        .steps
        .iter()
        .map(|&n| {
            let pts: Vec<_> = table
                .rows
                .iter()
                .filter(|r| r[1] == n as f64)
                .map(|r| (r[0], r[3]))
                .collect();
            json!({ "n": n, "fit": fit_json(fit_decay(&pts, gate_count(&graph, n))) })
        })
        .collect();
    let pooled: Vec<_> = table.rows.iter().map(|r| (r[0], r[2] as usize, r[3])).collect();
    table.set_meta("config", config);
    table.set_meta("seed", config.seed);
    table.set_meta("params", &all);
    table.set_meta("param_range", FIDELITY_PARAM_RANGE);
    table.set_meta("delta_per_n", per_n);
    table.set_meta("delta_pooled", fit_json(fit_decay_pooled(&pooled)));
    Ok(table)
}

/// Ideal-evaluator descent for every `n` in `config.steps`, each from its own
/// seeded initial point.
pub fn ideal_optimizations(
    config: &ExperimentConfig,
    graph: &WeightedGraph,
) -> Result<Vec<OptimizationTrace>> {
    let options = DescentOptions {
        learning_rate: config.learning_rate,
        iterations: config.iterations,
        method: GradientMethod::Adjoint,
    };
    config
        .steps
        .par_iter()
        .map(|&n| {
            let init = initial_params(config, n)?;
            gradient_descent(graph, &init, &Evaluator::Ideal, &options)
        })
        .collect()
}

fn initial_params(config: &ExperimentConfig, n: usize) -> Result<QaoaParams> {
    random_init(n, &mut stream_rng(config.seed, &[tag::INIT, n as u64]))
}

/// Cost under noise relative to the ideal cost at fixed parameters
/// (one entry of `params` per entry of `config.steps`).
pub fn run_cost_experiment(config: &ExperimentConfig, params: &[QaoaParams]) -> Result<ResultTable> {
    config.validate()?;
    if params.len() != config.steps.len()
        || params.iter().zip(&config.steps).any(|(q, &n)| q.steps() != n)
    {
        return Err(Error::InvalidParams(
            "one parameter set per configured step count is required".into(),
        ));
    }
    let graph = config.load_graph()?;
    let h = problem_hamiltonian(&graph);
    let half = match config.mode {
        EvalMode::Exact => 0.0,
        EvalMode::Sampled => ci_cost(config.shots, &graph)? / 2.0,
    };
    let rows = grid(config)
        .into_par_iter()
        .map(|(ni, pi)| {
            let (n, p) = (config.steps[ni], config.p_values[pi]);
            let circuit = build_circuit(&graph, &params[ni])?;
            let f_ideal = cost_exact(&circuit, &h, None)?;
            let f_noise = config
                .evaluator(p, &[ni as u64, pi as u64])?
                .cost(&circuit, &h, 0)?;
            let defined = f_ideal.abs() > 1e-9;
            let y = if defined { f_noise / f_ideal } else { f64::NAN };
            Ok(vec![
                p,
                n as f64,
                circuit.gate_count() as f64,
                f_noise,
                f_ideal,
                y,
                half,
                defined as u8 as f64,
            ])
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = ResultTable::new(
        "cost",
        vec![
            Column::new("p", "noise strength"),
            Column::new("n", "QAOA steps"),
            Column::new("N", "gate count n(E+m)"),
            Column::new("f_noise", "cost under noise"),
            Column::new("f_ideal", "noiseless cost"),
            Column::new("y", "f_noise / f_ideal (NaN when f_ideal is ~0)"),
            Column::new("ci_half_width", "half of the shot-noise interval on f_noise (0 in exact mode)"),
            Column::new("y_defined", "1 if |f_ideal| > 1e-9"),
        ],
    );
    for r in rows {
        table.push_row(r);
    }
    let l = ci_cost(config.shots, &graph)?;
    let mut fits = Vec::new();
    let (mut xs_all, mut ys_all) = (Vec::new(), Vec::new());
    for &n in &config.steps {
        let rows: Vec<&Vec<f64>> = table.rows.iter().filter(|r| r[1] == n as f64).collect();
        let big_n = gate_count(&graph, n);
        let pts: Vec<_> = rows.iter().filter(|r| r[7] == 1.0).map(|r| (r[0], r[5])).collect();
        let alpha = fit_decay(&pts, big_n);
        let intercept = alpha.as_ref().map_err(|e| Error::Fit(e.to_string())).and_then(|a| {
            let xs: Vec<f64> = rows
                .iter()
                .map(|r| (1.0 - r[0]).powf(a.constant * big_n as f64) * r[4])
                .collect();
            let ys: Vec<f64> = rows.iter().map(|r| r[3]).collect();
            xs_all.extend_from_slice(&xs);
            ys_all.extend_from_slice(&ys);
            linear_fit(&xs, &ys)
        });
        fits.push(json!({
            "n": n,
            "alpha": fit_json(alpha),
            "intercept": fit_json(intercept),
        }));
    }
    let pooled = linear_fit(&xs_all, &ys_all);
    table.set_meta("config", config);
    table.set_meta("seed", config.seed);
    table.set_meta("params", params);
    table.set_meta("ci_cost", l);
    table.set_meta("alpha_per_n", fits);
    table.set_meta(
        "intercept_pooled",
        json!({
            "fit": fit_json(pooled.as_ref().map(|f| *f).map_err(|e| Error::Fit(e.to_string()))),
            "within_two_ci": pooled.as_ref().map(|f| f.intercept.abs() <= 2.0 * l).unwrap_or(false),
        }),
    );
    Ok(table)
}

/// Per-parameter derivative ratios `noisy / ideal` at fixed parameters.
pub fn run_gradient_experiment(config: &ExperimentConfig, params: &QaoaParams) -> Result<ResultTable> {
    config.validate()?;
    let graph = config.load_graph()?;
    let n = params.steps();
    let big_n = gate_count(&graph, n);
    let (_, ideal) = Evaluator::Ideal.cost_and_gradient(&graph, params, GradientMethod::Adjoint, 0)?;
    let ideal = ideal.to_flat();
    let (l_gamma, l_beta) = ci_gradient(config.shots, &graph, graph.num_nodes())?;
    let method = method_for(config);
    let noisy = config
        .p_values
        .par_iter()
        .enumerate()
        .map(|(pi, &p)| {
            let ev = config.evaluator(p, &[n as u64, pi as u64])?;
            Ok(ev.cost_and_gradient(&graph, params, method, pi as u64)?.1.to_flat())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = ResultTable::new(
        "gradient",
        vec![
            Column::new("p", "noise strength"),
            Column::new("n", "QAOA steps"),
            Column::new("N", "gate count n(E+m)"),
            Column::new("param", "flat parameter index: gamma_0..gamma_{n-1}, beta_0..beta_{n-1}"),
            Column::new("is_beta", "1 for a mixer angle"),
            Column::new("ideal_derivative", "noiseless partial derivative"),
            Column::new("noisy_derivative", "partial derivative under noise"),
            Column::new("y", "noisy_derivative / ideal_derivative"),
            Column::new("reliable", "1 if |ideal_derivative| exceeds half the shot-noise interval"),
        ],
    );
    let reliable: Vec<bool> = (0..2 * n)
        .map(|k| ideal[k].abs() >= if k < n { l_gamma } else { l_beta } / 2.0)
        .collect();
    for (pi, &p) in config.p_values.iter().enumerate() {
        for k in 0..2 * n {
            table.push_row(vec![
                p,
                n as f64,
                big_n as f64,
                k as f64,
                (k >= n) as u8 as f64,
                ideal[k],
                noisy[pi][k],
                noisy[pi][k] / ideal[k],
                reliable[k] as u8 as f64,
            ]);
        }
    }
    let alpha: Vec<_> = (0..2 * n)
        .map(|k| {
            let pts: Vec<_> = config
                .p_values
                .iter()
                .zip(&noisy)
                .map(|(&p, g)| (p, g[k] / ideal[k]))
                .collect();
            json!({ "param": k, "fit": fit_json(fit_decay(&pts, big_n)) })
        })
        .collect();
    let per_p: Vec<_> = config
        .p_values
        .iter()
        .zip(&noisy)
        .map(|(&p, g)| {
            let ratios: Vec<f64> = g.iter().zip(&ideal).map(|(a, b)| a / b).collect();
            let dot: f64 = g.iter().zip(&ideal).map(|(a, b)| a * b).sum();
            let na = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nb = ideal.iter().map(|x| x * x).sum::<f64>().sqrt();
            json!({
                "p": p,
                "cosine_similarity": dot / (na * nb),
                "relative_spread": relative_spread(&ratios),
            })
        })
        .collect();
    table.set_meta("config", config);
    table.set_meta("seed", config.seed);
    table.set_meta("params", params);
    table.set_meta("ci_gradient", json!({ "L_gamma": l_gamma, "L_beta": l_beta }));
    table.set_meta("alpha_per_param", alpha);
    table.set_meta("per_p", per_p);
    Ok(table)
}

/// `(max - min) / mean` of a set of ratios.
pub(crate) fn relative_spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (max - min) / mean
}

/// Distance between noisy and ideal descent results from a shared start.
pub fn run_optimization_experiment(config: &ExperimentConfig) -> Result<ResultTable> {
    config.validate()?;
    let graph = config.load_graph()?;
    let ideal = ideal_optimizations(config, &graph)?;
    let options = DescentOptions {
        learning_rate: config.learning_rate,
        iterations: config.iterations,
        method: method_for(config),
    };
    let rows = grid(config)
        .into_par_iter()
        .map(|(ni, pi)| {
            let (n, p) = (config.steps[ni], config.p_values[pi]);
            let ev = config.evaluator(p, &[ni as u64, pi as u64])?;
            let noisy = gradient_descent(&graph, &initial_params(config, n)?, &ev, &options)?;
            let big_n = gate_count(&graph, n) as f64;
            let dist = param_distance(&noisy.final_params, &ideal[ni].final_params)?;
            Ok(vec![
                p,
                n as f64,
                big_n,
                big_n * p,
                dist,
                ideal[ni].final_cost(),
                noisy.final_cost(),
                (big_n * p < 0.5) as u8 as f64,
            ])
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = ResultTable::new(
        "optimization",
        vec![
            Column::new("p", "noise strength"),
            Column::new("n", "QAOA steps"),
            Column::new("N", "gate count n(E+m)"),
            Column::new("Np", "N * p"),
            Column::new("distance", "RMS distance between noisy and ideal optimized angles"),
            Column::new("ideal_final_cost", "ideal-run cost at its last iterate"),
            Column::new("noisy_final_cost", "noisy-run cost at its last iterate"),
            Column::new("in_scope", "1 if Np < 0.5"),
        ],
    );
    for r in rows {
        table.push_row(r);
    }
    let optima: Vec<_> = config
        .steps
        .iter()
        .zip(&ideal)
        .map(|(n, t)| {
            json!({
                "n": n,
                "init": t.iterations[0].params,
                "final": t.final_params,
                "final_cost": t.final_cost(),
                "converged": t.converged,
            })
        })
        .collect();
    table.set_meta("config", config);
    table.set_meta("seed", config.seed);
    table.set_meta("ideal_optima", optima);
    Ok(table)
}

/// `k` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, k: usize) -> Vec<f64> {
    match k {
        0 => vec![],
        1 => vec![a],
        _ => (0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect(),
    }
}

/// Single-step cost over a `(gamma, beta)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Landscape {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Row-major: `values[g * betas.len() + b]`.
    pub values: Vec<f64>,
}

impl Landscape {
    pub fn get(&self, g: usize, b: usize) -> f64 {
        self.values[g * self.betas.len() + b]
    }

    /// Grid cell `(g, b)` of the smallest value; the first one on ties.
    pub fn argmin(&self) -> (usize, usize) {
        let k = self
            .values
            .iter()
            .enumerate()
            .fold(0, |best, (k, v)| if *v < self.values[best] { k } else { best });
        (k / self.betas.len(), k % self.betas.len())
    }
}

pub fn landscape(
    graph: &WeightedGraph,
    evaluator: &Evaluator,
    gammas: &[f64],
    betas: &[f64],
) -> Result<Landscape> {
    let h = problem_hamiltonian(graph);
    let values = (0..gammas.len() * betas.len())
        .into_par_iter()
        .map(|k| {
            let (g, b) = (gammas[k / betas.len()], betas[k % betas.len()]);
            let circuit = build_circuit(graph, &QaoaParams::new(vec![g], vec![b])?)?;
            evaluator.cost(&circuit, &h, k as u64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Landscape {
        gammas: gammas.to_vec(),
        betas: betas.to_vec(),
        values,
    })
}
