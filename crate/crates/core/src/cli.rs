//! The `bridgq` command line.
//!
//! Exit codes: 0 on success, 1 for domain errors (bad circuits, failed
//! runs, unreadable files), 2 for usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{parse_qasm, CircuitTemplate, GateRole};
use crate::harness::{
    export_results, filter_by_baseline, generate_synthetic, load_instances, paired_summary, read_runs_csv,
    run_benchmark, run_instance, BenchConfig, Instance, PairedSummary,
};
use crate::init::{initialize, InitVariant, Method, DEFAULT_ENTANGLER_SCALE, DEFAULT_MIXTURE_LAMBDA};
use crate::optim::OptimConfig;
use crate::problem::FeatureVector;

#[derive(Debug, Parser)]
#[command(name = "bridgq", version, about = "Beta-prior initialisation and paired VQE benchmarking")]
struct Cli {
    /// Random seed for initialisation and instance generation.
    #[arg(long, global = true, env = "BRIDGQ_SEED", default_value_t = 42)]
    seed: u64,
    /// Worker threads for `bench` [default: available parallelism].
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a QASM circuit (or an instance file) and report its structure.
    Parse {
        file: PathBuf,
    },
    /// Produce initial parameters for an instance.
    Init {
        /// Instance JSON file, or a bare .qasm file for non-Beta methods.
        instance: PathBuf,
        #[arg(long, default_value = "beta-stratified")]
        variant: Method,
        #[command(flatten)]
        variant_args: VariantArgs,
    },
    /// Initialise and optimise one instance; prints the run record as JSON.
    Run {
        instance: PathBuf,
        #[arg(long, default_value = "beta-stratified")]
        variant: Method,
        #[command(flatten)]
        variant_args: VariantArgs,
        #[command(flatten)]
        optim: OptimArgs,
    },
    /// Run the paired benchmark over an instance directory or synthetic set.
    Bench {
        /// Directory of instance JSON files (or a single file).
        #[arg(required_unless_present = "synthetic", conflicts_with = "synthetic")]
        instances: Option<PathBuf>,
        /// Generate this many synthetic instances from `--seed` instead.
        #[arg(long)]
        synthetic: Option<usize>,
        /// Node-count range for synthetic instances, `min-max` or a single value.
        #[arg(long, default_value = "3-8", value_parser = parse_nodes)]
        nodes: RangeInclusive<usize>,
        /// Comma-separated methods, or `all`. The baseline `agentq` is required.
        #[arg(long, default_value = "all")]
        methods: String,
        /// Comma-separated run seeds [default: the global seed].
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        /// Output directory for runs.csv, summary.csv and trajectories.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        variant_args: VariantArgs,
        #[command(flatten)]
        optim: OptimArgs,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Write synthetic Max-Cut instances as JSON files.
    Gen {
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Node-count range, `min-max` or a single value, within 3-12.
        #[arg(long, default_value = "3-8", value_parser = parse_nodes)]
        nodes: RangeInclusive<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute the paired summary from an exported runs.csv.
    Report {
        /// Benchmark output directory (or the runs.csv file itself).
        dir: PathBuf,
        #[command(flatten)]
        eval: EvalArgs,
    },
}

#[derive(Debug, Args)]
struct VariantArgs {
    /// Mixture weight of the uniform component (beta-mixture).
    #[arg(long, default_value_t = DEFAULT_MIXTURE_LAMBDA)]
    lambda: f64,
    /// Width of the near-identity range for non-driver slots (beta-stratified).
    #[arg(long, default_value_t = DEFAULT_ENTANGLER_SCALE)]
    epsilon: f64,
}

#[derive(Debug, Args)]
struct OptimArgs {
    /// Iteration budget T_max.
    #[arg(long, default_value_t = 400)]
    max_iterations: usize,
    /// Convergence tolerance on the energy gap.
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
    /// Adam learning rate.
    #[arg(long, default_value_t = 0.05)]
    learning_rate: f64,
    #[arg(long, default_value_t = 0.9)]
    adam_beta1: f64,
    #[arg(long, default_value_t = 0.999)]
    adam_beta2: f64,
    #[arg(long, default_value_t = 1e-8)]
    adam_eps: f64,
}

impl OptimArgs {
    fn config(&self) -> OptimConfig {
        OptimConfig {
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            learning_rate: self.learning_rate,
            adam_beta1: self.adam_beta1,
            adam_beta2: self.adam_beta2,
            adam_eps: self.adam_eps,
        }
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Instances whose baseline gap exceeds this are excluded.
    #[arg(long, default_value_t = 5.0)]
    exclusion_threshold: f64,
    /// A run succeeds when its final gap is at most this.
    #[arg(long, default_value_t = 0.05)]
    success_threshold: f64,
    /// Floor on the baseline gap in the relative-improvement denominator.
    #[arg(long, default_value_t = 1e-6)]
    denom_floor: f64,
}

fn parse_nodes(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let (lo, hi) = match s.split_once('-') {
        Some((a, b)) => (num(a)?, num(b)?),
        None => {
            let n = num(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}-{hi}"));
    }
    Ok(lo..=hi)
}

fn parse_methods(s: &str) -> Result<Vec<Method>, CliError> {
    if s.trim() == "all" {
        return Ok(Method::RUNNABLE.to_vec());
    }
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let m: Method = part.parse().map_err(CliError::Usage)?;
        if m == Method::BetaBest {
            return Err(CliError::Usage("beta-best is computed from the Beta variants, not run".into()));
        }
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if !out.contains(&Method::AgentQ) {
        return Err(CliError::Usage("baseline required for pairing: add `agentq` to --methods".into()));
    }
    Ok(out)
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn domain(e: impl std::fmt::Display) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// Binary entry point: initialises logging and runs with the process
/// arguments. Returns the exit code.
pub fn main() -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_from(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line in-process, writing to the given streams.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(CliError::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn io_fail(e: std::io::Error) -> CliError {
    CliError::domain(e)
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let seed = cli.seed;
    let workers = cli.workers.map(|w| w as usize);
    match cli.command {
        Command::Parse { file } => cmd_parse(&file, out),
        Command::Init {
            instance,
            variant,
            variant_args,
        } => cmd_init(&instance, variant, &variant_args, seed, out),
        Command::Run {
            instance,
            variant,
            variant_args,
            optim,
        } => cmd_run(&instance, variant, &variant_args, &optim, seed, out),
        Command::Bench {
            instances,
            synthetic,
            nodes,
            methods,
            seeds,
            out: out_dir,
            variant_args,
            optim,
            eval,
        } => {
            let methods = parse_methods(&methods)?;
            let instances = match (instances, synthetic) {
                (Some(path), _) => {
                    let report = load_instances(&path).map_err(CliError::domain)?;
                    for w in &report.warnings {
                        writeln!(err, "warning: {w}").map_err(io_fail)?;
                    }
                    report.instances
                }
                (None, Some(n)) => generate_synthetic(n, nodes, seed).map_err(|e| CliError::Usage(e.to_string()))?,
                (None, None) => return Err(CliError::Usage("give an instance directory or --synthetic N".into())),
            };
            let defaults = BenchConfig::default();
            let cfg = BenchConfig {
                optim: optim.config(),
                methods,
                seeds: if seeds.is_empty() { vec![seed] } else { seeds },
                workers: workers.unwrap_or(defaults.workers),
                lambda: variant_args.lambda,
                epsilon: variant_args.epsilon,
                exclusion_threshold: eval.exclusion_threshold,
                success_threshold: eval.success_threshold,
                denom_floor: eval.denom_floor,
            };
            cfg.optim.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            InitVariant::BetaMixture { lambda: cfg.lambda }
                .validate()
                .and(InitVariant::BetaStratified { epsilon: cfg.epsilon }.validate())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let total = instances.len();
            let outcome = run_benchmark(&instances, &cfg).map_err(CliError::domain)?;
            for w in &outcome.warnings {
                writeln!(err, "warning: {w}").map_err(io_fail)?;
            }
            if let Some(dir) = out_dir {
                export_results(&dir, &outcome.records, &outcome.summary).map_err(CliError::domain)?;
            }
            writeln!(out, "kept {} of {} instances", outcome.kept.len(), total).map_err(io_fail)?;
            write_table(out, &outcome.summary).map_err(io_fail)
        }
        Command::Gen { count, nodes, out: dir } => {
            let instances = generate_synthetic(count, nodes, seed).map_err(|e| CliError::Usage(e.to_string()))?;
            for inst in &instances {
                inst.write(&dir).map_err(CliError::domain)?;
            }
            if instances.is_empty() {
                fs::create_dir_all(&dir).map_err(io_fail)?;
            }
            writeln!(out, "wrote {} instances to {}", instances.len(), dir.display()).map_err(io_fail)
        }
        Command::Report { dir, eval } => {
            let runs = if dir.is_dir() { dir.join("runs.csv") } else { dir };
            let records = read_runs_csv(&runs).map_err(CliError::domain)?;
            let kept = filter_by_baseline(&records, eval.exclusion_threshold);
            let summary = paired_summary(&records, &kept, eval.success_threshold, eval.denom_floor)
                .map_err(CliError::domain)?;
            let total = records
                .iter()
                .map(|r| r.instance_id.as_str())
                .collect::<std::collections::BTreeSet<_>>()
                .len();
            writeln!(out, "kept {} of {} instances", kept.len(), total).map_err(io_fail)?;
            write_table(out, &summary).map_err(io_fail)
        }
    }
}

fn load_circuit(path: &Path) -> Result<(CircuitTemplate, Option<Instance>), CliError> {
    if path.extension().is_some_and(|x| x == "json") {
        let inst = Instance::read(path).map_err(CliError::domain)?;
        Ok((inst.template.clone(), Some(inst)))
    } else {
        let text = fs::read_to_string(path).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
        let template = parse_qasm(&text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
        Ok((template, None))
    }
}

fn cmd_parse(file: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let (t, _) = load_circuit(file)?;
    writeln!(
        out,
        "qubits={} gates={} slots={} drivers={} entanglers={}",
        t.num_qubits,
        t.gates.len(),
        t.slot_count(),
        t.count_role(GateRole::Driver),
        t.count_role(GateRole::Entangler)
    )
    .map_err(io_fail)?;
    let hist: Vec<String> = t
        .gate_histogram()
        .iter()
        .map(|(k, n)| format!("{k}={n}"))
        .collect();
    writeln!(out, "histogram {}", hist.join(" ")).map_err(io_fail)?;
    writeln!(
        out,
        "conservative={} stripped={}",
        t.count_role(GateRole::ConservativeSingle),
        t.is_stripped()
    )
    .map_err(io_fail)
}

fn variant_for(method: Method, args: &VariantArgs) -> Result<InitVariant, CliError> {
    let v = InitVariant::for_method(method, args.lambda, args.epsilon)
        .ok_or_else(|| CliError::Usage(format!("`{method}` cannot be requested directly")))?;
    v.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(v)
}

fn cmd_init(path: &Path, method: Method, args: &VariantArgs, seed: u64, out: &mut dyn Write) -> Result<(), CliError> {
    let variant = variant_for(method, args)?;
    let (template, instance) = load_circuit(path)?;
    let features: Option<FeatureVector> = match &instance {
        Some(inst) if method.is_beta() => Some(inst.features().map_err(CliError::domain)?),
        _ => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init = initialize(&template, features.as_ref(), &variant, &mut rng).map_err(CliError::domain)?;
    let doc = serde_json::json!({
        "variant": method,
        "seed": seed,
        "params": init.params,
        "alpha": init.prior.map(|p| p.alpha),
        "beta": init.prior.map(|p| p.beta),
        "fallback_used": init.prior.map(|p| p.fallback_used),
    });
    writeln!(out, "{doc:#}").map_err(io_fail)
}

fn cmd_run(
    path: &Path,
    method: Method,
    args: &VariantArgs,
    optim: &OptimArgs,
    seed: u64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    variant_for(method, args)?;
    let cfg = BenchConfig {
        optim: optim.config(),
        lambda: args.lambda,
        epsilon: args.epsilon,
        ..BenchConfig::default()
    };
    cfg.optim.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let inst = Instance::read(path).map_err(CliError::domain)?;
    let exact = inst.reference_energy().map_err(CliError::domain)?;
    let record = run_instance(&inst, exact, method, seed, seed, &cfg).map_err(CliError::domain)?;
    let text = serde_json::to_string_pretty(&record).map_err(CliError::domain)?;
    writeln!(out, "{text}").map_err(io_fail)
}

fn write_table(out: &mut dyn Write, summary: &PairedSummary) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<16} {:>12} {:>12} {:>14} {:>9} {:>10} {:>10} {:>8}",
        "method", "mean_gap", "std_gap", "median_impr_%", "success", "latency", "time_s", "n"
    )?;
    for r in &summary.rows {
        let median = r
            .median_improvement_pct
            .map_or_else(|| "-".to_string(), |m| format!("{m:.2}"));
        writeln!(
            out,
            "{:<16} {:>12.4} {:>12.4} {:>14} {:>9.3} {:>10.1} {:>10.3} {:>8}",
            r.method.as_str(),
            r.mean_residual,
            r.std_residual,
            median,
            r.success_prob,
            r.mean_conv_latency,
            r.mean_time_s,
            r.n_paired
        )?;
    }
    Ok(())
}
