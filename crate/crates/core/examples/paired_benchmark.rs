// A small paired benchmark on synthetic instances, exported to CSV.

use bridgq::harness::{export_results, generate_synthetic, run_benchmark, BenchConfig};
use bridgq::optim::OptimConfig;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let instances = generate_synthetic(6, 3..=5, 11)?;
    let cfg = BenchConfig {
        optim: OptimConfig {
            max_iterations: 100,
            ..OptimConfig::default()
        },
        seeds: vec![1, 2],
        ..BenchConfig::default()
    };
    let outcome = run_benchmark(&instances, &cfg)?;
    println!("kept {} of {} instances", outcome.kept.len(), instances.len());
    for row in &outcome.summary.rows {
        println!(
            "{:<16} mean gap {:.4}  success {:.2}  median improvement {}",
            row.method.as_str(),
            row.mean_residual,
            row.success_prob,
            row.median_improvement_pct
                .map_or("-".to_string(), |m| format!("{m:+.1}%"))
        );
    }

    let out = std::env::temp_dir().join(format!("bridgq-example-{}", std::process::id()));
    export_results(&out, &outcome.records, &outcome.summary)?;
    println!("results written to {}", out.display());
    std::fs::remove_dir_all(&out)?;
    Ok(())
}

fn main() {
    run_example().unwrap();
}
