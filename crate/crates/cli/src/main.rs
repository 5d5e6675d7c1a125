use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qnoise::experiments::{
    fit_decay, fit_decay_pooled, ideal_optimizations, run_cost_experiment,
    run_fidelity_experiment, run_gradient_experiment, run_optimization_experiment, EvalMode,
    ExperimentConfig, ResultTable,
};
use qnoise::gradopt::{gradient_descent, random_init, DescentOptions, GradientMethod};
use qnoise::io::load_graph;
use qnoise::rng::{stream_rng, tag};
use qnoise::{
    brute_force_ground, make_channel, noise_grid, validate_cptp, ChannelKind, Error,
    WeightedGraph,
};

#[derive(Parser, Debug)]
#[command(name = "qnoise", version, about = "Noisy QAOA simulation for weighted Max-Cut")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalArgs {
    /// Graph file, or "table1" for the bundled instance.
    #[arg(long, global = true)]
    graph: Option<String>,

    #[arg(long, global = true, value_enum)]
    channel: Option<Channel>,

    /// Noise strengths, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    p: Option<Vec<f64>>,

    /// Use the standard 11-point noise grid.
    #[arg(long, global = true)]
    grid: bool,

    /// Step counts, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    steps: Option<Vec<usize>>,

    #[arg(long, global = true)]
    shots: Option<usize>,

    #[arg(long, global = true)]
    trajectories: Option<usize>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,

    #[arg(long = "lr", global = true)]
    learning_rate: Option<f64>,

    #[arg(long = "iters", global = true)]
    iterations: Option<usize>,

    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output CSV path (a JSON sidecar is written next to it).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads.
    #[arg(long, global = true, env = "QNOISE_THREADS")]
    threads: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Channel {
    Dephasing,
    Bitflip,
    Depolarizing,
}

impl From<Channel> for ChannelKind {
    fn from(c: Channel) -> Self {
        match c {
            Channel::Dephasing => ChannelKind::Dephasing,
            Channel::Bitflip => ChannelKind::BitFlip,
            Channel::Depolarizing => ChannelKind::Depolarizing,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum Study {
    Fidelity,
    Cost,
    Gradient,
    Optimization,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check channel completeness and the graph.
    Validate,
    /// Enumerate all assignments and print the ground energy and optima.
    BruteForce {
        /// Graph file or "table1".
        source: Option<String>,
    },
    /// Run gradient descent and print the trace.
    Optimize,
    /// Run one of the batch studies and write CSV plus JSON sidecar.
    Experiment {
        #[arg(value_enum)]
        study: Study,
    },
    /// Fit y = (1-p)^(c N) to an existing result CSV.
    Fit {
        csv: PathBuf,
        /// Column holding y; defaults to "fidelity" or "y".
        #[arg(long)]
        column: Option<String>,
    },
}

enum Failure {
    Validation(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

type CliResult = Result<(), Failure>;

/// Unreadable graph files are input errors, not runtime failures.
fn read_graph(source: &str) -> Result<WeightedGraph, Failure> {
    load_graph(source).map_err(|e| match e {
        Error::Io(io) => Failure::Validation(format!("{source}: {io}")),
        other => other.into(),
    })
}

fn build_config(g: &GlobalArgs) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(s) = &g.graph {
        cfg.graph = s.clone();
    }
    if let Some(c) = g.channel {
        cfg.channel = c.into();
    }
    if g.grid {
        cfg.p_values = noise_grid();
    } else if let Some(p) = &g.p {
        cfg.p_values = p.clone();
    }
    if let Some(s) = &g.steps {
        cfg.steps = s.clone();
    }
    if let Some(x) = g.shots {
        cfg.shots = x;
    }
    if let Some(x) = g.trajectories {
        cfg.trajectories = x;
    }
    if let Some(x) = g.seed {
        cfg.seed = x;
    }
    if let Some(m) = g.mode {
        cfg.mode = match m {
            Mode::Exact => EvalMode::Exact,
            Mode::Sampled => EvalMode::Sampled,
        };
    }
    if let Some(x) = g.learning_rate {
        cfg.learning_rate = x;
    }
    if let Some(x) = g.iterations {
        cfg.iterations = x;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn validate(g: &GlobalArgs) -> CliResult {
    let kinds: Vec<ChannelKind> = match g.channel {
        Some(c) => vec![c.into()],
        None => ChannelKind::NAMED.to_vec(),
    };
    let ps = match (&g.p, g.grid) {
        (Some(p), false) => p.clone(),
        _ => noise_grid(),
    };
    let mut failed = 0;
    for &kind in &kinds {
        for &p in &ps {
            let ch = make_channel(kind, p)?;
            let report = validate_cptp(&ch);
            println!(
                "cptp {kind} p={p}: residual {:.3e} {}",
                report.residual,
                if report.pass { "ok" } else { "FAIL" }
            );
            failed += usize::from(!report.pass);
        }
    }
    let source = g.graph.as_deref().unwrap_or("table1");
    let graph = read_graph(source)?;
    println!(
        "graph {source}: {} nodes, {} edges, total weight {}",
        graph.num_nodes(),
        graph.edges().len(),
        tidy(graph.total_weight())
    );
    if failed > 0 {
        return Err(Failure::Validation(format!("{failed} channel checks failed")));
    }
    Ok(())
}

/// Drops summation noise below 1e-9 for display.
fn tidy(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

fn print_partition(graph: &WeightedGraph, source: Option<&str>) -> CliResult {
    let ground = brute_force_ground(graph)?;
    println!("graph: {}", source.unwrap_or("table1"));
    println!("min energy: {}", tidy(ground.energy));
    println!("max cut: {}", tidy(ground.cut_value(graph)));
    for &idx in &ground.optima {
        let (zeros, ones) = ground.partition(idx);
        println!("optimum {idx:0width$b}: {zeros:?} | {ones:?}", width = graph.num_nodes());
    }
    Ok(())
}

fn optimize(g: &GlobalArgs) -> CliResult {
    let cfg = build_config(g)?;
    let graph = read_graph(&cfg.graph)?;
    let n = *cfg.steps.first().expect("validated non-empty");
    let p = if g.p.is_some() { cfg.p_values[0] } else { 0.0 };
    let evaluator = cfg.evaluator(p, &[0])?;
    let method = match cfg.mode {
        EvalMode::Exact => GradientMethod::Adjoint,
        EvalMode::Sampled => GradientMethod::ShiftRule,
    };
    let init = random_init(n, &mut stream_rng(cfg.seed, &[tag::INIT, n as u64]))?;
    let options = DescentOptions {
        learning_rate: cfg.learning_rate,
        iterations: cfg.iterations,
        method,
    };
    let trace = gradient_descent(&graph, &init, &evaluator, &options)?;
    println!("iter,cost,grad_norm");
    for (t, it) in trace.iterations.iter().enumerate() {
        println!("{t},{},{}", it.cost, it.grad_norm);
    }
    println!("# gamma {:?}", trace.final_params.gamma());
    println!("# beta {:?}", trace.final_params.beta());
    println!("# converged {}", trace.converged);
    Ok(())
}

fn experiment(g: &GlobalArgs, study: Study) -> CliResult {
    let cfg = build_config(g)?;
    let table = match study {
        Study::Fidelity => run_fidelity_experiment(&cfg)?,
        Study::Cost => {
            let graph = read_graph(&cfg.graph)?;
            let params: Vec<_> = ideal_optimizations(&cfg, &graph)?
                .into_iter()
                .map(|t| t.final_params)
                .collect();
            run_cost_experiment(&cfg, &params)?
        }
        Study::Gradient => {
            let graph = read_graph(&cfg.graph)?;
            let n = *cfg.steps.iter().max().expect("validated non-empty");
            let single = ExperimentConfig {
                steps: vec![n],
                ..cfg.clone()
            };
            let trace = ideal_optimizations(&single, &graph)?.remove(0);
            run_gradient_experiment(&cfg, &trace.max_gradient_iterate().params)?
        }
        Study::Optimization => run_optimization_experiment(&cfg)?,
    };
    let out = g
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", table.experiment)));
    table.write_files(&out)?;
    eprintln!("wrote {} rows to {}", table.rows.len(), out.display());
    Ok(())
}

fn fit(path: &PathBuf, column: Option<&str>) -> CliResult {
    let file = std::fs::File::open(path)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    let table = ResultTable::read_csv(file)?;
    let name = match column {
        Some(c) => c.to_string(),
        None => ["fidelity", "y"]
            .into_iter()
            .find(|c| table.column_index(c).is_ok())
            .ok_or_else(|| Failure::Validation("no fidelity or y column; pass --column".into()))?
            .to_string(),
    };
    let (p, big_n, y) = (table.column("p")?, table.column("N")?, table.column(&name)?);
    let mut groups: Vec<usize> = big_n.iter().map(|&x| x as usize).collect();
    groups.sort_unstable();
    groups.dedup();
    for &n in &groups {
        let pts: Vec<_> = p
            .iter()
            .zip(&big_n)
            .zip(&y)
            .filter(|((_, &nn), _)| nn as usize == n)
            .map(|((&p, _), &y)| (p, y))
            .collect();
        match fit_decay(&pts, n) {
            Ok(f) => println!("N={n}: constant {:.6} r2 {:.6}", f.constant, f.r_squared),
            Err(e) => println!("N={n}: {e}"),
        }
    }
    let pooled: Vec<_> = (0..p.len()).map(|k| (p[k], big_n[k] as usize, y[k])).collect();
    let f = fit_decay_pooled(&pooled)?;
    println!("pooled: constant {:.6} r2 {:.6}", f.constant, f.r_squared);
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    if let Some(t) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    match &cli.command {
        Command::Validate => validate(&cli.global),
        Command::BruteForce { source } => {
            let src = source.as_deref().or(cli.global.graph.as_deref());
            let graph = read_graph(src.unwrap_or("table1"))?;
            print_partition(&graph, src)
        }
        Command::Optimize => optimize(&cli.global),
        Command::Experiment { study } => experiment(&cli.global, *study),
        Command::Fit { csv, column } => fit(csv, column.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
