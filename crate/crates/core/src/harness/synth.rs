use std::f64::consts::PI;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HarnessError, Instance};
use crate::circuit::{CircuitTemplate, GateKind};
use crate::problem::ProblemGraph;

const MIN_NODES: usize = 3;
const MAX_NODES: usize = 12;
const EXTRA_EDGE_PROBABILITY: f64 = 0.3;
const ANSATZ_LAYERS: usize = 2;

/// Random weighted Max-Cut instances standing in for generated benchmark
/// circuits.
///
/// Each graph is connected (random spanning tree plus extra edges), weights
/// are uniform in [0.1, 1.0], the Hamiltonian is the negated cut
/// `-sum w_ij (1 - Z_i Z_j) / 2`, and the circuit is a layered ansatz (`ry`
/// on every qubit, then a ring of `crz`) carrying random literal angles.
/// The exact energy is minus the best cut found by enumeration.
pub fn generate_synthetic(
    count: usize,
    nodes: RangeInclusive<usize>,
    seed: u64,
) -> Result<Vec<Instance>, HarnessError> {
    if nodes.is_empty() || *nodes.start() < MIN_NODES || *nodes.end() > MAX_NODES {
        return Err(HarnessError::InvalidArgument(format!(
            "node range {}..={} must lie within [{MIN_NODES}, {MAX_NODES}]",
            nodes.start(),
            nodes.end()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.random_range(nodes.clone());
            let graph = random_connected_graph(n, &mut rng);
            let qasm = layered_ansatz(n, &mut rng).to_qasm();
            let best_cut = (0..1usize << n)
                .map(|s| graph.cut_value(s))
                .fold(f64::NEG_INFINITY, f64::max);
            let hamiltonian = graph.maxcut_hamiltonian();
            Ok(Instance {
                id: format!("synthetic-{seed}-{i:04}"),
                num_qubits: n,
                cost_hamiltonian: hamiltonian.to_string(),
                template: crate::circuit::parse_qasm(&qasm).expect("generated circuit parses"),
                qasm,
                exact_energy: Some(-best_cut),
                graph,
                hamiltonian,
            })
        })
        .collect()
}

fn random_connected_graph(n: usize, rng: &mut ChaCha8Rng) -> ProblemGraph {
    let mut pairs = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        pairs.push((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !pairs.contains(&(u, v)) && rng.random::<f64>() < EXTRA_EDGE_PROBABILITY {
                pairs.push((u, v));
            }
        }
    }
    pairs.sort_unstable();
    let edges = pairs
        .into_iter()
        .map(|(u, v)| (u, v, rng.random_range(0.1..=1.0)))
        .collect();
    ProblemGraph::new(n, edges).expect("generated graph is valid")
}

fn layered_ansatz(n: usize, rng: &mut ChaCha8Rng) -> CircuitTemplate {
    let mut t = CircuitTemplate::new(n);
    for _ in 0..ANSATZ_LAYERS {
        for q in 0..n {
            t.push(GateKind::Ry, vec![q], Some(vec![rng.random_range(-PI..=PI)]));
        }
        for q in 0..n {
            t.push(GateKind::Crz, vec![q, (q + 1) % n], Some(vec![rng.random_range(-PI..=PI)]));
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::exact_energy;

    #[test]
    fn empty_and_range_checks() {
        assert!(generate_synthetic(0, 3..=5, 1).unwrap().is_empty());
        assert!(generate_synthetic(1, 2..=5, 1).is_err());
        assert!(generate_synthetic(1, 3..=13, 1).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_synthetic(5, 3..=7, 42).unwrap();
        let b = generate_synthetic(5, 3..=7, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic(5, 3..=7, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn instances_are_consistent() {
        for inst in generate_synthetic(8, 3..=8, 7).unwrap() {
            let reparsed = Instance::from_file(inst.to_file()).unwrap();
            assert_eq!(reparsed.hamiltonian, inst.hamiltonian);
            assert_eq!(reparsed.template, inst.template);
            let e = exact_energy(&inst.hamiltonian, inst.num_qubits).unwrap();
            assert!((e - inst.exact_energy.unwrap()).abs() < 1e-9);
            assert!(inst.graph.edges.len() >= inst.num_qubits - 1);
            assert!(inst.graph.edges.iter().all(|e| (0.1..=1.0).contains(&e.weight)));
            assert_eq!(inst.template.slot_count(), 4 * inst.num_qubits);
        }
    }
}
