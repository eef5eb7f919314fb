use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use alps_core::cover::{is_robust, is_with_predictions, vc_robust, vc_with_predictions, VertexWeightedGraph};
use alps_core::experiment::{
    draw_samples, run_learned_on, run_synthetic, LearnedConfig, SyntheticConfig, SyntheticInput,
};
use alps_core::io::{
    format_sig6, load_stp, parse_edge_set, parse_id_set, parse_knapsack, parse_stp_graph, parse_weights,
    read_file, write_csv, write_edge_set, write_file, write_id_set, write_stp, SteinerInstance,
};
use alps_core::knapsack::{knapsack_robust, knapsack_with_predictions, KnapsackInstance};
use alps_core::lab::{erm_majority, random_steiner_instance, synth_noise, CoreMode, NoiseParam};
use alps_core::oracles::{exact_is, exact_knapsack, exact_steiner, exact_vc};
use alps_core::steiner::{alpha_search_with, alps_robust, alps_with, tight_example, AlphaParam, Pruning};
use alps_core::{Error, ItemSet, Result};

/// Learning-augmented approximation algorithms: solvers, predictions and experiments.
#[derive(Parser)]
#[command(name = "alps", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance, optionally guided by a prediction.
    Solve(SolveArgs),
    /// Solve one instance exactly (small instances only).
    Oracle(OracleArgs),
    /// Generate predictions.
    #[command(subcommand)]
    Predict(PredictCommand),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run an experiment and write CSV.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemKind {
    Steiner,
    Vc,
    Is,
    Knapsack,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file: `.stp` for graph problems, `n c` + `w s` lines for knapsack.
    #[arg(long)]
    instance: PathBuf,
    /// Vertex weights for vc/is, one per line (default: unit weights).
    #[arg(long)]
    weights: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(value_enum)]
    problem: ProblemKind,
    #[command(flatten)]
    input: InstanceArgs,
    /// Prediction file (edge pairs for steiner, 1-based ids otherwise).
    #[arg(long)]
    pred: Option<PathBuf>,
    /// ALPS confidence α ≥ 1, or `inf` (default: inf).
    #[arg(long, conflicts_with = "epsilon")]
    alpha: Option<AlphaParam>,
    /// Run the α search with this ε instead of a fixed α.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Also run the plain algorithm and keep the better solution.
    #[arg(long)]
    robust: bool,
    /// Keep non-terminal leaves of the Steiner tree.
    #[arg(long)]
    no_prune: bool,
    /// Solution file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(value_enum)]
    problem: ProblemKind,
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PredictCommand {
    /// Perturb a reference solution by swapping a p-fraction of its items.
    Synth(SynthArgs),
    /// Majority vote over several solutions.
    Erm(ErmArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum, default_value = "steiner")]
    problem: ProblemKind,
    #[command(flatten)]
    input: InstanceArgs,
    /// Reference solution file.
    #[arg(long)]
    reference: PathBuf,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ErmArgs {
    #[arg(long, value_enum, default_value = "steiner")]
    problem: ProblemKind,
    #[command(flatten)]
    input: InstanceArgs,
    /// Solution files to vote over.
    #[arg(required = true)]
    solutions: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// The tight ALPS instance and its prediction.
    TightExample(TightArgs),
    /// A random connected Steiner instance with integer weights.
    Random(RandomArgs),
}

#[derive(Args)]
struct TightArgs {
    #[arg(long, default_value_t = 6)]
    k: usize,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 6.0)]
    beta: f64,
    /// Instance output (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Prediction output.
    #[arg(long)]
    pred_out: Option<PathBuf>,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    extra_edges: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    max_weight: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Noisy predictions around reference solutions.
    Synthetic(SyntheticArgs),
    /// Leave-one-out majority-vote predictions over sampled instances.
    Learned(LearnedArgs),
}

#[derive(Args)]
struct SyntheticArgs {
    /// Directory of `.stp` files; `<stem>.sol` next to an instance is used
    /// as its reference solution.
    #[arg(long)]
    instances: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,0.75,1")]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1.1,1.4,2,inf")]
    alpha: Vec<AlphaParam>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    seeds: Vec<u64>,
    /// ε of the α-search rows.
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    /// Optimum values, one `name value` pair per line.
    #[arg(long)]
    opt_file: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LearnedArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "fixed-core")]
    mode: CoreMode,
    #[arg(long)]
    p: f64,
    /// Number of sampled instances.
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "1.1,1.4,2,inf")]
    alpha: Vec<AlphaParam>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write each sample's optimal edge set to `<dir>/<base>.<index>.sol`.
    #[arg(long)]
    solutions_dir: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Loaded {
    Steiner(SteinerInstance),
    Vertex(VertexWeightedGraph),
    Knapsack(KnapsackInstance),
}

impl Loaded {
    fn load(problem: ProblemKind, args: &InstanceArgs) -> Result<Self> {
        match problem {
            ProblemKind::Steiner => Ok(Loaded::Steiner(load_stp(&args.instance)?)),
            ProblemKind::Vc | ProblemKind::Is => {
                let graph = parse_stp_graph(&read_file(&args.instance)?)?;
                let g = match &args.weights {
                    Some(path) => {
                        let weights = parse_weights(&read_file(path)?, graph.vertex_count())?;
                        VertexWeightedGraph::new(graph, weights)?
                    }
                    None => VertexWeightedGraph::unit(graph),
                };
                Ok(Loaded::Vertex(g))
            }
            ProblemKind::Knapsack => Ok(Loaded::Knapsack(parse_knapsack(&read_file(&args.instance)?)?)),
        }
    }

    fn read_set(&self, path: &Path) -> Result<ItemSet> {
        let text = read_file(path)?;
        match self {
            Loaded::Steiner(inst) => parse_edge_set(&inst.graph, &text),
            Loaded::Vertex(g) => parse_id_set(&text, g.graph.vertex_count()),
            Loaded::Knapsack(k) => parse_id_set(&text, k.len()),
        }
    }

    fn write_set(&self, set: &ItemSet) -> String {
        match self {
            Loaded::Steiner(inst) => write_edge_set(&inst.graph, set),
            _ => write_id_set(set),
        }
    }

    fn ground_size(&self) -> usize {
        match self {
            Loaded::Steiner(inst) => inst.graph.edge_count(),
            Loaded::Vertex(g) => g.graph.vertex_count(),
            Loaded::Knapsack(k) => k.len(),
        }
    }

    fn weight(&self, set: &ItemSet) -> f64 {
        match self {
            Loaded::Steiner(inst) => inst.graph.weight_of(set),
            Loaded::Vertex(g) => g.weight_of(set),
            Loaded::Knapsack(k) => k.worth_of(set),
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let loaded = Loaded::load(args.problem, &args.input)?;
    let predicted = match &args.pred {
        Some(path) => loaded.read_set(path)?,
        None => ItemSet::new(),
    };
    let mut summary = String::new();
    let solution = match (&loaded, args.problem) {
        (Loaded::Steiner(inst), _) => {
            let pruning = if args.no_prune { Pruning::Keep } else { Pruning::Prune };
            if let Some(eps) = args.epsilon {
                let found = alpha_search_with(inst, &predicted, eps, pruning)?;
                let mut sol = found.solution;
                if args.robust {
                    let robust = alps_robust(inst, &predicted, found.alpha, pruning)?;
                    if robust.weight_original < sol.weight_original {
                        sol = robust;
                    }
                }
                let _ = write!(summary, " alpha={}", found.alpha);
                sol.edges
            } else {
                let alpha = args.alpha.unwrap_or(AlphaParam::INFINITY);
                let sol = if args.robust {
                    alps_robust(inst, &predicted, alpha, pruning)?
                } else {
                    alps_with(inst, &predicted, alpha, pruning)?
                };
                sol.edges
            }
        }
        (Loaded::Vertex(g), ProblemKind::Vc) => {
            if args.robust {
                vc_robust(g, &predicted)?
            } else {
                vc_with_predictions(g, &predicted)?
            }
        }
        (Loaded::Vertex(g), _) => {
            if args.robust {
                is_robust(g, &predicted)?
            } else {
                is_with_predictions(g, &predicted)?
            }
        }
        (Loaded::Knapsack(k), _) => {
            if args.robust {
                knapsack_robust(k, &predicted)?
            } else {
                knapsack_with_predictions(k, &predicted)?
            }
        }
    };
    emit(args.out.as_deref(), &loaded.write_set(&solution))?;
    println!("cost={}{summary}", format_sig6(loaded.weight(&solution)));
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let loaded = Loaded::load(args.problem, &args.input)?;
    let solution = match (&loaded, args.problem) {
        (Loaded::Steiner(inst), _) => exact_steiner(inst)?,
        (Loaded::Vertex(g), ProblemKind::Vc) => exact_vc(g)?,
        (Loaded::Vertex(g), _) => exact_is(g)?,
        (Loaded::Knapsack(k), _) => exact_knapsack(k)?,
    };
    emit(args.out.as_deref(), &loaded.write_set(&solution))?;
    println!("cost={}", format_sig6(loaded.weight(&solution)));
    Ok(())
}

fn cmd_predict(cmd: PredictCommand) -> Result<()> {
    match cmd {
        PredictCommand::Synth(args) => {
            let loaded = Loaded::load(args.problem, &args.input)?;
            let reference = loaded.read_set(&args.reference)?;
            let pred = synth_noise(loaded.ground_size(), &reference, NoiseParam::new(args.p, args.seed)?)?;
            emit(args.out.as_deref(), &loaded.write_set(&pred.items))
        }
        PredictCommand::Erm(args) => {
            let loaded = Loaded::load(args.problem, &args.input)?;
            let sets = args
                .solutions
                .iter()
                .map(|p| loaded.read_set(p))
                .collect::<Result<Vec<_>>>()?;
            let pred = erm_majority(&sets)?;
            emit(args.out.as_deref(), &loaded.write_set(&pred.items))
        }
    }
}

fn cmd_gen(cmd: GenCommand) -> Result<()> {
    match cmd {
        GenCommand::TightExample(args) => {
            let (inst, pred) = tight_example(args.k, args.epsilon, args.beta)?;
            emit(args.out.as_deref(), &write_stp(&inst))?;
            if let Some(path) = &args.pred_out {
                write_file(path, &write_edge_set(&inst.graph, &pred))?;
            }
            Ok(())
        }
        GenCommand::Random(args) => {
            let inst = random_steiner_instance(args.n, args.extra_edges, args.k, args.max_weight, args.seed)?;
            emit(args.out.as_deref(), &write_stp(&inst))
        }
    }
}

fn parse_opt_file(text: &str) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty());
        let (Some(name), Some(value), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(Error::Parse {
                line: idx + 1,
                message: "expected `name value`".into(),
            });
        };
        let value: f64 = value.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("invalid optimum `{value}`"),
        })?;
        out.push((name.to_string(), value));
    }
    Ok(out)
}

fn stp_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|source| Error::File {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("stp")) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn cmd_experiment(cmd: ExperimentCommand) -> Result<()> {
    match cmd {
        ExperimentCommand::Synthetic(args) => {
            let opts = match &args.opt_file {
                Some(path) => parse_opt_file(&read_file(path)?)?,
                None => Vec::new(),
            };
            let mut inputs = Vec::new();
            for path in stp_files(&args.instances)? {
                let instance = load_stp(&path)?;
                let sol = path.with_extension("sol");
                let reference = if sol.exists() {
                    Some(parse_edge_set(&instance.graph, &read_file(&sol)?)?)
                } else {
                    None
                };
                let opt_override = opts
                    .iter()
                    .find(|(name, _)| *name == instance.name)
                    .map(|&(_, v)| v);
                inputs.push(SyntheticInput {
                    instance,
                    reference,
                    opt_override,
                });
            }
            let cfg = SyntheticConfig {
                p_grid: args.p,
                alpha_grid: args.alpha,
                seeds: args.seeds,
                epsilon: args.epsilon,
                threads: args.threads,
            };
            for &p in &cfg.p_grid {
                NoiseParam::new(p, 0)?;
            }
            emit(args.out.as_deref(), &write_csv(&run_synthetic(&inputs, &cfg))?)
        }
        ExperimentCommand::Learned(args) => {
            let base = load_stp(&args.instance)?;
            let cfg = LearnedConfig {
                mode: args.mode,
                p: args.p,
                samples: args.k,
                seed: args.seed,
                alpha_grid: args.alpha,
                threads: args.threads,
            };
            cfg.check()?;
            let samples = draw_samples(&base, &cfg)?;
            if let Some(dir) = &args.solutions_dir {
                std::fs::create_dir_all(dir).map_err(|source| Error::File {
                    path: dir.clone(),
                    source,
                })?;
                for s in &samples {
                    let path = dir.join(format!("{}.sol", s.instance.name));
                    write_file(&path, &write_edge_set(&s.instance.graph, &s.solution))?;
                }
            }
            emit(args.out.as_deref(), &write_csv(&run_learned_on(&samples, &cfg))?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Predict(cmd) => cmd_predict(cmd),
        Command::Gen(cmd) => cmd_gen(cmd),
        Command::Experiment(cmd) => cmd_experiment(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_solver_error() { 1 } else { 2 })
        }
    }
}
