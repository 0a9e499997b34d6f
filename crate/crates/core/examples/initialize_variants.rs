// Every initialisation scheme on the same circuit.

use bridgq::harness::Instance;
use bridgq::init::{initialize, InitVariant, Method, DEFAULT_ENTANGLER_SCALE, DEFAULT_MIXTURE_LAMBDA};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let instance = Instance::read(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/maxcut4.json").as_ref())?;
    let features = instance.features()?;

    for method in Method::RUNNABLE {
        let variant = InitVariant::for_method(method, DEFAULT_MIXTURE_LAMBDA, DEFAULT_ENTANGLER_SCALE)
            .expect("runnable method");
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let init = initialize(&instance.template, Some(&features), &variant, &mut rng)?;
        println!("{:<16} {:+.3?}", method.as_str(), init.params);
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
