use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::Deserialize;

use super::eval::REPORT_ORDER;
use super::{HarnessError, PairedSummary};
use crate::circuit::fmt_f64;
use crate::init::Method;
use crate::optim::RunRecord;
use crate::prior::BetaParams;

pub const SUMMARY_HEADER: &str =
    "method,mean_residual,std_residual,median_improvement_pct,success_prob,mean_conv_latency,mean_time_s,n_paired";

const RUNS_HEADER: [&str; 12] = [
    "instance_id",
    "method",
    "seed",
    "final_gap",
    "t_conv",
    "converged",
    "iterations_executed",
    "aborted",
    "prior_alpha",
    "prior_beta",
    "prior_fallback",
    "t_conv_ms",
];

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> HarnessError + '_ {
    move |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `runs.csv`, `summary.csv`, `summary_meta.json` and one
/// trajectory file per instance (per instance and seed when several seeds
/// were run) under `out_dir`.
pub fn export_results(out_dir: &Path, records: &[RunRecord], summary: &PairedSummary) -> Result<(), HarnessError> {
    fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;
    write_runs(&out_dir.join("runs.csv"), records)?;
    write_summary(&out_dir.join("summary.csv"), summary)?;

    let meta_path = out_dir.join("summary_meta.json");
    let meta = serde_json::json!({
        "success_threshold": summary.success_threshold,
        "denom_floor": summary.denom_floor,
        "kept_instances": summary.kept_instances,
    });
    fs::write(&meta_path, format!("{meta:#}\n")).map_err(|e| HarnessError::io(&meta_path, e))?;

    write_trajectories(&out_dir.join("trajectories"), records)
}

fn write_runs(path: &Path, records: &[RunRecord]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(RUNS_HEADER).map_err(csv_err(path))?;
    for r in records {
        let (alpha, beta, fallback) = match &r.fitted_prior {
            Some(p) => (fmt_f64(p.alpha), fmt_f64(p.beta), p.fallback_used.to_string()),
            None => (String::new(), String::new(), String::new()),
        };
        w.write_record([
            r.instance_id.clone(),
            r.method.to_string(),
            r.seed.to_string(),
            fmt_f64(r.final_gap),
            r.t_conv.to_string(),
            r.converged.to_string(),
            r.iterations_executed.to_string(),
            r.aborted.to_string(),
            alpha,
            beta,
            fallback,
            fmt_f64(r.t_conv_ms),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

fn write_summary(path: &Path, summary: &PairedSummary) -> Result<(), HarnessError> {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for row in &summary.rows {
        let median = row.median_improvement_pct.map(fmt_f64).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.method,
            fmt_f64(row.mean_residual),
            fmt_f64(row.std_residual),
            median,
            fmt_f64(row.success_prob),
            fmt_f64(row.mean_conv_latency),
            fmt_f64(row.mean_time_s),
            row.n_paired
        ));
    }
    fs::write(path, out).map_err(|e| HarnessError::io(path, e))
}

fn write_trajectories(dir: &Path, records: &[RunRecord]) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let seeds: BTreeSet<u64> = records.iter().map(|r| r.seed).collect();
    let mut groups: BTreeMap<(&str, u64), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.instance_id.as_str(), r.seed)).or_default().push(r);
    }
    for ((id, seed), mut group) in groups {
        group.sort_by_key(|r| REPORT_ORDER.iter().position(|&m| m == r.method));
        let name = if seeds.len() > 1 {
            format!("{id}.seed{seed}.csv")
        } else {
            format!("{id}.csv")
        };
        let rows = group.iter().map(|r| r.gap_trajectory.len()).max().unwrap_or(0);
        let mut out = String::from("iteration");
        for r in &group {
            out.push(',');
            out.push_str(r.method.as_str());
        }
        out.push('\n');
        for t in 0..rows {
            out.push_str(&t.to_string());
            for r in &group {
                out.push(',');
                if let Some(&g) = r.gap_trajectory.get(t).or(r.gap_trajectory.last()) {
                    out.push_str(&fmt_f64(g));
                }
            }
            out.push('\n');
        }
        out.push_str("# converged_at");
        for r in &group {
            let at = if r.converged {
                r.iterations_executed.to_string()
            } else {
                "none".to_string()
            };
            out.push_str(&format!(" {}={at}", r.method));
        }
        out.push('\n');
        let path = dir.join(name);
        fs::write(&path, out).map_err(|e| HarnessError::io(&path, e))?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct RunRow {
    instance_id: String,
    method: Method,
    seed: u64,
    final_gap: f64,
    t_conv: usize,
    converged: bool,
    iterations_executed: usize,
    aborted: bool,
    prior_alpha: Option<f64>,
    prior_beta: Option<f64>,
    prior_fallback: Option<bool>,
    t_conv_ms: f64,
}

/// Reads a `runs.csv` written by [`export_results`]. Trajectories are not
/// stored there, so each record's `gap_trajectory` holds only its final gap.
pub fn read_runs_csv(path: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let mut reader = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let mut records = Vec::new();
    for row in reader.deserialize::<RunRow>() {
        let row = row.map_err(csv_err(path))?;
        let fitted_prior = match (row.prior_alpha, row.prior_beta) {
            (Some(alpha), Some(beta)) => Some(BetaParams {
                alpha,
                beta,
                fallback_used: row.prior_fallback.unwrap_or(false),
            }),
            _ => None,
        };
        records.push(RunRecord {
            instance_id: row.instance_id,
            method: row.method,
            seed: row.seed,
            gap_trajectory: if row.final_gap.is_finite() {
                vec![row.final_gap]
            } else {
                Vec::new()
            },
            final_gap: row.final_gap,
            t_conv: row.t_conv,
            t_conv_ms: row.t_conv_ms,
            converged: row.converged,
            iterations_executed: row.iterations_executed,
            fitted_prior,
            aborted: row.aborted,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{filter_by_baseline, paired_summary};

    fn rec(id: &str, method: Method, seed: u64, traj: Vec<f64>) -> RunRecord {
        let final_gap = *traj.last().unwrap();
        RunRecord {
            instance_id: id.into(),
            method,
            seed,
            converged: final_gap <= 0.05,
            iterations_executed: traj.len() - 1,
            t_conv: if final_gap <= 0.05 { traj.len() - 1 } else { 400 },
            gap_trajectory: traj,
            final_gap,
            t_conv_ms: 12.5,
            fitted_prior: method.is_beta().then(|| BetaParams::new(2.5, 1.25)),
            aborted: false,
        }
    }

    fn sample() -> Vec<RunRecord> {
        vec![
            rec("inst-a", Method::AgentQ, 1, vec![1.0, 0.5, 0.3]),
            rec("inst-a", Method::BetaPure, 1, vec![0.9, 0.04]),
        ]
    }

    #[test]
    fn writes_expected_files() {
        let dir = tempfile::tempdir().unwrap();
        let records = sample();
        let kept = filter_by_baseline(&records, 5.0);
        let summary = paired_summary(&records, &kept, 0.05, 1e-6).unwrap();
        export_results(dir.path(), &records, &summary).unwrap();

        let summary_csv = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        let mut lines = summary_csv.lines();
        assert_eq!(lines.next(), Some(SUMMARY_HEADER));
        let base: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(base[0], "agentq");
        assert_eq!(base[3], "");
        assert_eq!(base[7], "1");

        let runs = fs::read_to_string(dir.path().join("runs.csv")).unwrap();
        assert!(runs.starts_with("instance_id,method,seed,"));
        assert!(runs.lines().next().unwrap().ends_with(",t_conv_ms"));

        let traj = fs::read_to_string(dir.path().join("trajectories/inst-a.csv")).unwrap();
        let lines: Vec<&str> = traj.lines().collect();
        assert_eq!(lines[0], "iteration,agentq,beta-pure");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[3], format!("2,{},{}", fmt_f64(0.3), fmt_f64(0.04)));
        assert_eq!(lines[4], "# converged_at agentq=none beta-pure=1");
    }

    #[test]
    fn runs_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let records = sample();
        let kept = filter_by_baseline(&records, 5.0);
        let summary = paired_summary(&records, &kept, 0.05, 1e-6).unwrap();
        export_results(dir.path(), &records, &summary).unwrap();
        let back = read_runs_csv(&dir.path().join("runs.csv")).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in records.iter().zip(&back) {
            assert_eq!(a.final_gap, b.final_gap);
            assert_eq!(a.fitted_prior, b.fitted_prior);
            assert_eq!(a.t_conv, b.t_conv);
            assert_eq!(a.method, b.method);
        }
        let again = paired_summary(&back, &filter_by_baseline(&back, 5.0), 0.05, 1e-6).unwrap();
        assert_eq!(again, summary);
    }

    #[test]
    fn multiple_seeds_get_separate_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut records = sample();
        records.push(rec("inst-a", Method::AgentQ, 2, vec![0.2]));
        records.push(rec("inst-a", Method::BetaPure, 2, vec![0.1]));
        let summary = paired_summary(&records, &filter_by_baseline(&records, 5.0), 0.05, 1e-6).unwrap();
        export_results(dir.path(), &records, &summary).unwrap();
        assert!(dir.path().join("trajectories/inst-a.seed1.csv").exists());
        assert!(dir.path().join("trajectories/inst-a.seed2.csv").exists());
    }
}
