use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{filter_by_baseline, oracle_best, paired_summary, HarnessError, Instance, PairedSummary};
use crate::init::{initialize, InitVariant, Method, DEFAULT_ENTANGLER_SCALE, DEFAULT_MIXTURE_LAMBDA};
use crate::optim::{run_vqe, OptimConfig, RunRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub optim: OptimConfig,
    pub methods: Vec<Method>,
    pub seeds: Vec<u64>,
    pub workers: usize,
    pub lambda: f64,
    pub epsilon: f64,
    /// Instances whose baseline gap exceeds this are dropped.
    pub exclusion_threshold: f64,
    pub success_threshold: f64,
    pub denom_floor: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            optim: OptimConfig::default(),
            methods: Method::RUNNABLE.to_vec(),
            seeds: vec![42],
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            lambda: DEFAULT_MIXTURE_LAMBDA,
            epsilon: DEFAULT_ENTANGLER_SCALE,
            exclusion_threshold: 5.0,
            success_threshold: 0.05,
            denom_floor: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchOutcome {
    /// Executed runs plus the derived beta-best records, sorted by
    /// `(instance, method, seed)`.
    pub records: Vec<RunRecord>,
    pub kept: BTreeSet<String>,
    pub summary: PairedSummary,
    /// Runs or instances that failed and were left out.
    pub warnings: Vec<String>,
}

/// Stable per-run RNG seed derived from the user seed, instance id and
/// method (64-bit FNV-1a).
pub fn run_seed(seed: u64, instance_id: &str, method: Method) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let bytes = seed
        .to_le_bytes()
        .into_iter()
        .chain(instance_id.bytes())
        .chain([0])
        .chain(method.as_str().bytes());
    for b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(PRIME);
    }
    h
}

/// Initialises and optimises one `(instance, method)` pair. `rng_seed`
/// drives the initialiser; `seed` is the label stored in the record.
pub fn run_instance(
    instance: &Instance,
    exact: f64,
    method: Method,
    seed: u64,
    rng_seed: u64,
    cfg: &BenchConfig,
) -> Result<RunRecord, HarnessError> {
    let fail = |reason: String| HarnessError::Instance {
        id: instance.id.clone(),
        reason: format!("{method}: {reason}"),
    };
    let variant = InitVariant::for_method(method, cfg.lambda, cfg.epsilon)
        .ok_or_else(|| fail("method cannot be executed".into()))?;
    let features = if method.is_beta() {
        Some(instance.features().map_err(|e| fail(e.to_string()))?)
    } else {
        None
    };
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let init = initialize(&instance.template, features.as_ref(), &variant, &mut rng)
        .map_err(|e| fail(e.to_string()))?;
    let run = run_vqe(&instance.template, &instance.hamiltonian, exact, &init.params, &cfg.optim)
        .map_err(|e| fail(e.to_string()))?;
    Ok(RunRecord::from_run(&instance.id, method, seed, init.prior, run))
}

/// Runs every requested method on every instance for every seed on a pool
/// of `cfg.workers` threads, then filters, pairs and summarises.
pub fn run_benchmark(instances: &[Instance], cfg: &BenchConfig) -> Result<BenchOutcome, HarnessError> {
    if !cfg.methods.contains(&Method::AgentQ) {
        return Err(HarnessError::BaselineRequired);
    }
    if cfg.methods.contains(&Method::BetaBest) {
        return Err(HarnessError::InvalidArgument(
            "beta-best is derived from the Beta variants and cannot be run".into(),
        ));
    }
    if cfg.seeds.is_empty() {
        return Err(HarnessError::InvalidArgument("at least one seed is required".into()));
    }
    if cfg.workers == 0 {
        return Err(HarnessError::InvalidArgument("workers must be at least 1".into()));
    }
    cfg.optim
        .validate()
        .map_err(|e| HarnessError::InvalidArgument(e.to_string()))?;
    let methods: BTreeSet<Method> = cfg.methods.iter().copied().collect();
    let seeds: BTreeSet<u64> = cfg.seeds.iter().copied().collect();

    let mut warnings = Vec::new();
    let mut targets = Vec::new();
    for inst in instances {
        match inst.reference_energy() {
            Ok(e) => targets.push((inst, e)),
            Err(e) => warnings.push(format!("instance `{}` skipped: {e}", inst.id)),
        }
    }
    let mut jobs: Vec<(&Instance, f64, Method, u64)> = Vec::new();
    for &(inst, e) in &targets {
        for &m in &methods {
            for &s in &seeds {
                jobs.push((inst, e, m, s));
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| HarnessError::InvalidArgument(format!("worker pool: {e}")))?;
    let results: Vec<Result<RunRecord, HarnessError>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(inst, exact, method, seed)| {
                run_instance(inst, exact, method, seed, run_seed(seed, &inst.id, method), cfg)
            })
            .collect()
    });

    let mut records = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => warnings.push(e.to_string()),
        }
    }
    let best = oracle_best(&records);
    records.extend(best);
    records.sort_by(|a, b| (&a.instance_id, a.method, a.seed).cmp(&(&b.instance_id, b.method, b.seed)));
    for w in &warnings {
        log::warn!("{w}");
    }

    let kept = filter_by_baseline(&records, cfg.exclusion_threshold);
    let summary = paired_summary(&records, &kept, cfg.success_threshold, cfg.denom_floor)?;
    Ok(BenchOutcome {
        records,
        kept,
        summary,
        warnings,
    })
}
