use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::init::Method;
use crate::optim::RunRecord;

/// Reporting order for summary rows.
pub(crate) const REPORT_ORDER: [Method; 7] = [
    Method::AgentQ,
    Method::Random,
    Method::Uniform,
    Method::BetaPure,
    Method::BetaMixture,
    Method::BetaStratified,
    Method::BetaBest,
];

/// Instances whose baseline runs are all valid with final gap at most
/// `threshold`. Instances without a baseline record are excluded.
pub fn filter_by_baseline(records: &[RunRecord], threshold: f64) -> BTreeSet<String> {
    let mut verdict: BTreeMap<&str, bool> = BTreeMap::new();
    for r in records.iter().filter(|r| r.method == Method::AgentQ) {
        let ok = r.is_valid() && r.final_gap <= threshold;
        verdict
            .entry(r.instance_id.as_str())
            .and_modify(|v| *v &= ok)
            .or_insert(ok);
    }
    verdict
        .into_iter()
        .filter(|&(_, ok)| ok)
        .map(|(id, _)| id.to_string())
        .collect()
}

fn tie_rank(m: Method) -> usize {
    Method::BETA_VARIANTS.iter().position(|&x| x == m).unwrap_or(usize::MAX)
}

/// Per `(instance, seed)`, the Beta run with the smallest final gap, then
/// the shortest wall-clock time, then pure before mixture before
/// stratified. The chosen record is relabelled [`Method::BetaBest`].
pub fn oracle_best(records: &[RunRecord]) -> Vec<RunRecord> {
    let mut best: BTreeMap<(&str, u64), &RunRecord> = BTreeMap::new();
    for r in records.iter().filter(|r| r.method.is_beta() && r.is_valid()) {
        let key = (r.instance_id.as_str(), r.seed);
        let better = match best.get(&key) {
            None => true,
            Some(cur) => {
                (r.final_gap, r.t_conv_ms, tie_rank(r.method))
                    .partial_cmp(&(cur.final_gap, cur.t_conv_ms, tie_rank(cur.method)))
                    == Some(std::cmp::Ordering::Less)
            }
        };
        if better {
            best.insert(key, r);
        }
    }
    best.into_values()
        .map(|r| RunRecord {
            method: Method::BetaBest,
            ..r.clone()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: Method,
    pub mean_residual: f64,
    /// Sample standard deviation; 0 for a single pair.
    pub std_residual: f64,
    /// Median relative improvement over the baseline, in percent. `None`
    /// for the baseline row.
    pub median_improvement_pct: Option<f64>,
    pub success_prob: f64,
    pub mean_conv_latency: f64,
    pub mean_time_s: f64,
    pub n_paired: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedSummary {
    pub rows: Vec<SummaryRow>,
    pub success_threshold: f64,
    pub denom_floor: f64,
    pub kept_instances: usize,
}

impl PairedSummary {
    pub fn row(&self, method: Method) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.method == method)
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

pub(crate) fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Aggregates every method present in `records` over the kept instances.
///
/// A record counts when it is valid, its instance is in `kept`, and a valid
/// baseline record exists for the same `(instance, seed)`. The relative
/// improvement of a pair is `100 (b - m) / max(b, denom_floor)`.
pub fn paired_summary(
    records: &[RunRecord],
    kept: &BTreeSet<String>,
    success_threshold: f64,
    denom_floor: f64,
) -> Result<PairedSummary, HarnessError> {
    let baseline: BTreeMap<(&str, u64), f64> = records
        .iter()
        .filter(|r| r.method == Method::AgentQ && r.is_valid() && kept.contains(&r.instance_id))
        .map(|r| ((r.instance_id.as_str(), r.seed), r.final_gap))
        .collect();
    if !records.is_empty() && !records.iter().any(|r| r.method == Method::AgentQ) {
        return Err(HarnessError::BaselineRequired);
    }
    let present: BTreeSet<Method> = records.iter().map(|r| r.method).collect();

    let mut rows = Vec::new();
    for method in REPORT_ORDER.into_iter().filter(|m| present.contains(m)) {
        let mut gaps = Vec::new();
        let mut improvements = Vec::new();
        let mut latencies = Vec::new();
        let mut times = Vec::new();
        for r in records.iter().filter(|r| r.method == method && r.is_valid()) {
            let Some(&b) = baseline.get(&(r.instance_id.as_str(), r.seed)) else {
                continue;
            };
            gaps.push(r.final_gap);
            improvements.push(100.0 * (b - r.final_gap) / b.max(denom_floor));
            latencies.push(r.t_conv as f64);
            times.push(r.t_conv_ms / 1e3);
        }
        if gaps.is_empty() {
            return Err(HarnessError::EmptyPairing { method });
        }
        rows.push(SummaryRow {
            method,
            mean_residual: mean(&gaps),
            std_residual: sample_std(&gaps),
            median_improvement_pct: (method != Method::AgentQ).then(|| median(&mut improvements)),
            success_prob: gaps.iter().filter(|&&g| g <= success_threshold).count() as f64 / gaps.len() as f64,
            mean_conv_latency: mean(&latencies),
            mean_time_s: mean(&times),
            n_paired: gaps.len(),
        });
    }
    Ok(PairedSummary {
        rows,
        success_threshold,
        denom_floor,
        kept_instances: kept.len(),
    })
}
