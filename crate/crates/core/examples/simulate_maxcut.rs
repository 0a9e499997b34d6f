// Energies and gradients of the Max-Cut Hamiltonian on simple states.

use std::f64::consts::PI;

use bridgq::circuit::{CircuitTemplate, GateKind};
use bridgq::problem::{exact_energy, ProblemGraph};
use bridgq::sim::{energy_and_gradient, expectation, simulate};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let graph = ProblemGraph::new(4, vec![(0, 1, 0.7), (1, 2, 0.3), (2, 3, 0.9), (0, 3, 0.5)])?;
    let cut = graph.maxcut_hamiltonian();
    println!("H = {cut}");
    println!("ground energy {:.4}", exact_energy(&cut, 4)?);

    // ry(pi) flips a qubit; flipping 0 and 2 gives the alternating cut.
    let mut t = CircuitTemplate::new(4);
    for q in 0..4 {
        t.push(GateKind::Ry, vec![q], None);
    }
    for (name, params) in [("|0000>", [0.0; 4]), ("|0101>", [PI, 0.0, PI, 0.0])] {
        let state = simulate(&t, &params)?;
        println!("{name}: <H> = {:+.6}", expectation(&state, &cut)?);
    }

    let (energy, grad) = energy_and_gradient(&t, &[1.0, 0.5, 2.0, -0.3], &cut)?;
    println!("at a generic point: E = {energy:+.6}, grad = {grad:+.6?}");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
