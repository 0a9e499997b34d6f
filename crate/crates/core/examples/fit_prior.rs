// Fit a Beta prior to problem features and sample from it.

use bridgq::harness::Instance;
use bridgq::prior::{fit_beta_mle, log_likelihood, sample_beta};
use bridgq::problem::normalize_features;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let weights = normalize_features(&[0.7, 0.3, 0.9, 0.5])?;
    let prior = fit_beta_mle(&weights);
    println!(
        "edge weights only: Beta({:.4}, {:.4}), log-likelihood {:.4}",
        prior.alpha,
        prior.beta,
        log_likelihood(weights.values(), &prior)?
    );

    let instance = Instance::read(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/maxcut4.json").as_ref())?;
    let features = instance.features()?;
    let prior = fit_beta_mle(&features);
    println!(
        "weights and coefficients ({} values): Beta({:.4}, {:.4}), mean {:.4}",
        features.len(),
        prior.alpha,
        prior.beta,
        prior.mean()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let draws = sample_beta(&prior, 5, &mut rng);
    println!("five draws: {draws:.4?}");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
