// Optimise one instance from a stratified Beta initialisation.

use bridgq::harness::Instance;
use bridgq::init::{initialize, InitVariant};
use bridgq::optim::{run_vqe, OptimConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let instance = Instance::read(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/maxcut4.json").as_ref())?;
    let exact = instance.reference_energy()?;
    let features = instance.features()?;
    let cfg = OptimConfig::default();

    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let init = initialize(
            &instance.template,
            Some(&features),
            &InitVariant::BetaStratified { epsilon: 0.4 },
            &mut rng,
        )?;
        let run = run_vqe(&instance.template, &instance.hamiltonian, exact, &init.params, &cfg)?;
        println!(
            "seed {seed}: gap {:.4} -> {:.4} after {} steps (converged: {})",
            run.gap_trajectory[0], run.final_gap, run.iterations_executed, run.converged
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
