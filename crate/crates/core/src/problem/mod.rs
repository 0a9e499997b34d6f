//! Problem instances: weighted graphs, Pauli-sum Hamiltonians, the feature
//! vector the Beta prior is fitted to, and exact reference energies.

mod hamiltonian;
mod spectrum;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use hamiltonian::{parse_hamiltonian, Hamiltonian, Pauli, PauliTerm};
pub use spectrum::exact_energy;

/// Clamp margin keeping features strictly inside the Beta support.
pub const FEATURE_FLOOR: f64 = 1e-6;

/// Largest register handled by basis enumeration of a Z-only Hamiltonian.
pub const MAX_DIAGONAL_QUBITS: usize = 20;
/// Largest register handled by the general (non-diagonal) eigensolver.
pub const MAX_DENSE_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("malformed Hamiltonian term `{term}`: {reason}")]
    MalformedTerm { term: String, reason: String },
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitIndexOutOfRange { index: usize, num_qubits: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("no features: graph has no edges and Hamiltonian has no terms")]
    EmptyFeatures,
    #[error("feature vector contains a non-finite value")]
    NonFiniteInput,
    #[error("{num_qubits} qubits is too large for exact diagonalisation (limit {limit}); supply exact_energy in the instance file")]
    TooLarge { num_qubits: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProblemGraph {
    pub node_count: usize,
    pub edges: Vec<Edge>,
}

impl ProblemGraph {
    /// Builds a graph, rejecting self-loops, out-of-range endpoints and
    /// repeated unordered pairs.
    pub fn new(node_count: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self, ProblemError> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v, w) in &edges {
            if u == v {
                return Err(ProblemError::InvalidGraph(format!("self-loop on node {u}")));
            }
            if u >= node_count || v >= node_count {
                return Err(ProblemError::InvalidGraph(format!(
                    "edge ({u}, {v}) outside {node_count} nodes"
                )));
            }
            if !w.is_finite() {
                return Err(ProblemError::InvalidGraph(format!("edge ({u}, {v}) has non-finite weight")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(ProblemError::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(ProblemGraph {
            node_count,
            edges: edges
                .into_iter()
                .map(|(u, v, weight)| Edge { u, v, weight })
                .collect(),
        })
    }

    /// Cut weight of a bipartition given as a bit mask over nodes.
    pub fn cut_value(&self, assignment: usize) -> f64 {
        self.edges
            .iter()
            .filter(|e| ((assignment >> e.u) ^ (assignment >> e.v)) & 1 == 1)
            .map(|e| e.weight)
            .sum()
    }

    /// Max-Cut cost written for minimisation: `-sum_ij w_ij (1 - Z_i Z_j) / 2`.
    pub fn maxcut_hamiltonian(&self) -> Hamiltonian {
        let mut h = Hamiltonian::default();
        for e in &self.edges {
            h.identity_offset -= e.weight / 2.0;
            h.terms.push(PauliTerm {
                coefficient: e.weight / 2.0,
                paulis: vec![(Pauli::Z, e.u), (Pauli::Z, e.v)],
            });
        }
        h
    }
}

/// Normalised instance features, every entry inside
/// `[FEATURE_FLOOR, 1 - FEATURE_FLOOR]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Edge weights in edge order followed by absolute term coefficients in term
/// order. The identity offset is not a feature.
pub fn extract_features(graph: &ProblemGraph, hamiltonian: &Hamiltonian) -> Result<Vec<f64>, ProblemError> {
    let raw: Vec<f64> = graph
        .edges
        .iter()
        .map(|e| e.weight)
        .chain(hamiltonian.terms.iter().map(|t| t.coefficient.abs()))
        .collect();
    if raw.is_empty() {
        return Err(ProblemError::EmptyFeatures);
    }
    Ok(raw)
}

/// Maps raw features into the clamped unit interval. Values already inside
/// `[0, 1]` pass through; anything else is min-max scaled as a whole.
pub fn normalize_features(raw: &[f64]) -> Result<FeatureVector, ProblemError> {
    if raw.is_empty() {
        return Err(ProblemError::EmptyFeatures);
    }
    if raw.iter().any(|x| !x.is_finite()) {
        return Err(ProblemError::NonFiniteInput);
    }
    let clamp = |x: f64| x.clamp(FEATURE_FLOOR, 1.0 - FEATURE_FLOOR);
    let in_unit = raw.iter().all(|&x| (0.0..=1.0).contains(&x));
    let (lo, hi) = raw
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let values = if in_unit || hi == lo {
        raw.iter().map(|&x| clamp(x)).collect()
    } else {
        raw.iter().map(|&x| clamp((x - lo) / (hi - lo))).collect()
    };
    Ok(FeatureVector(values))
}
