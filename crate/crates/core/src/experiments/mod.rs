//! Batch studies of noise effects on the QAOA pipeline.
//!
//! Each study sweeps a grid of noise strengths `p` and step counts `n` and
//! returns a [`ResultTable`]. Cells run in parallel; rows always come back in
//! grid order and every random draw is keyed by the master seed and the cell
//! index, so a table depends only on its configuration.

mod runs;
mod stats;
mod table;

use serde::{Deserialize, Serialize};

pub use runs::{
    fidelity_params, ideal_optimizations, landscape, linspace, run_cost_experiment,
    run_fidelity_experiment, run_gradient_experiment, run_optimization_experiment, Landscape,
    FIDELITY_PARAM_RANGE,
};
pub use stats::{
    ci_cost, ci_gradient, fit_decay, fit_decay_pooled, linear_fit, DecayFit, LinearFit,
};
pub use table::{Column, ResultTable};

use crate::error::{Error, Result};
use crate::gradopt::Evaluator;
use crate::io;
use crate::maxcut::WeightedGraph;
use crate::noise::{make_channel, noise_grid, ChannelKind};
use crate::rng::{derive_stream, tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// Density-matrix evolution.
    Exact,
    /// Monte-Carlo trajectories with shot-based estimates.
    Sampled,
}

impl std::str::FromStr for EvalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(EvalMode::Exact),
            "sampled" => Ok(EvalMode::Sampled),
            other => Err(Error::InvalidConfig(format!(
                "unknown mode {other:?} (expected exact or sampled)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// `"table1"` or a path to a graph file.
    pub graph: String,
    pub channel: ChannelKind,
    pub p_values: Vec<f64>,
    pub steps: Vec<usize>,
    /// Shots per measured term in sampled mode.
    pub shots: usize,
    /// Trajectories per fidelity estimate in sampled mode.
    pub trajectories: usize,
    pub seed: u64,
    pub mode: EvalMode,
    pub learning_rate: f64,
    pub iterations: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            graph: io::BUILTIN_GRAPH.into(),
            channel: ChannelKind::Depolarizing,
            p_values: noise_grid(),
            steps: vec![1, 2, 3, 4],
            shots: 5000,
            trajectories: 1000,
            seed: 7,
            mode: EvalMode::Exact,
            learning_rate: 0.02,
            iterations: 400,
        }
    }
}

impl ExperimentConfig {
    /// Parses a flat JSON document; missing keys take the defaults above.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = io::parse_json(text).map_err(|e| match e {
            Error::Parse { line, column, msg } => Error::Parse {
                line,
                column,
                msg: format!("config: {msg}"),
            },
            other => other,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.shots == 0 {
            return bad("shots must be at least 1".into());
        }
        if self.trajectories == 0 {
            return bad("trajectories must be at least 1".into());
        }
        if self.p_values.is_empty() {
            return bad("p_values is empty".into());
        }
        if let Some(p) = self.p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return bad(format!("noise strength {p} outside [0, 1]"));
        }
        if self.steps.is_empty() || self.steps.contains(&0) {
            return bad("steps must be a non-empty list of positive integers".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning rate {} must be positive", self.learning_rate));
        }
        if self.iterations == 0 {
            return bad("iterations must be at least 1".into());
        }
        if self.channel == ChannelKind::Custom {
            return bad("experiments need a named channel".into());
        }
        Ok(())
    }

    pub fn load_graph(&self) -> Result<WeightedGraph> {
        io::load_graph(&self.graph)
    }

    /// Evaluator for noise strength `p`; `cell` keys the sampling streams.
    pub fn evaluator(&self, p: f64, cell: &[u64]) -> Result<Evaluator> {
        let channel = make_channel(self.channel, p)?;
        Ok(match self.mode {
            EvalMode::Exact => Evaluator::exact(channel),
            EvalMode::Sampled => {
                let mut path = vec![tag::NOISY_EVAL];
                path.extend_from_slice(cell);
                Evaluator::Sampled {
                    channel,
                    shots: self.shots,
                    seed: self.seed ^ derive_stream(&path),
                }
            }
        })
    }
}
