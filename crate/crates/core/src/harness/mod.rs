//! Instance sets and the paired evaluation protocol.
//!
//! Every method runs on the same instances and circuit structures. A method
//! only counts on a `(instance, seed)` unit when both it and the baseline
//! produced a valid run there, and instances whose baseline gap exceeds the
//! exclusion threshold are dropped before any statistics are taken.

mod bench;
mod eval;
mod export;
mod synth;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{parse_qasm, CircuitError, CircuitTemplate};
use crate::init::Method;
use crate::problem::{
    exact_energy, extract_features, normalize_features, parse_hamiltonian, FeatureVector, Hamiltonian,
    ProblemError, ProblemGraph,
};

pub use bench::{run_benchmark, run_instance, run_seed, BenchConfig, BenchOutcome};
pub use eval::{filter_by_baseline, oracle_best, paired_summary, PairedSummary, SummaryRow};
pub use export::{export_results, read_runs_csv, SUMMARY_HEADER};
pub use synth::generate_synthetic;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("instance `{id}`: {reason}")]
    Instance { id: String, reason: String },
    #[error("baseline required for pairing: include `agentq` in the method list")]
    BaselineRequired,
    #[error("method `{method}` has no valid runs paired with the baseline")]
    EmptyPairing { method: Method },
    #[error("{0}")]
    InvalidArgument(String),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// On-disk graph layout: `{"nodes": n, "edges": [[u, v, w], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub nodes: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

/// One instance file, as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub id: String,
    pub num_qubits: usize,
    pub graph: GraphSpec,
    pub cost_hamiltonian: String,
    pub qasm: String,
    pub exact_energy: Option<f64>,
    /// Pre-parsed Hamiltonian; when present it is used instead of parsing
    /// `cost_hamiltonian`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<Hamiltonian>,
}

/// A validated problem instance with its circuit and Hamiltonian parsed.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub id: String,
    pub num_qubits: usize,
    pub graph: ProblemGraph,
    pub cost_hamiltonian: String,
    pub qasm: String,
    pub exact_energy: Option<f64>,
    pub template: CircuitTemplate,
    pub hamiltonian: Hamiltonian,
}

impl Instance {
    pub fn from_file(file: InstanceFile) -> Result<Self, HarnessError> {
        let id = file.id.clone();
        let bad = |reason: String| HarnessError::Instance {
            id: id.clone(),
            reason,
        };
        if file.id.trim().is_empty() {
            return Err(bad("empty id".into()));
        }
        if file.num_qubits == 0 {
            return Err(bad("num_qubits must be positive".into()));
        }
        let template = parse_qasm(&file.qasm).map_err(|e: CircuitError| bad(format!("qasm: {e}")))?;
        if template.num_qubits != file.num_qubits {
            return Err(bad(format!(
                "circuit declares {} qubits but num_qubits is {}",
                template.num_qubits, file.num_qubits
            )));
        }
        let hamiltonian = match file.hamiltonian {
            Some(h) => {
                if h.min_qubits() > file.num_qubits {
                    return Err(bad("hamiltonian acts outside the register".into()));
                }
                h
            }
            None => parse_hamiltonian(&file.cost_hamiltonian, file.num_qubits)
                .map_err(|e: ProblemError| bad(format!("cost_hamiltonian: {e}")))?,
        };
        let graph =
            ProblemGraph::new(file.graph.nodes, file.graph.edges).map_err(|e| bad(format!("graph: {e}")))?;
        if let Some(e) = file.exact_energy {
            if !e.is_finite() {
                return Err(bad("exact_energy must be finite".into()));
            }
        }
        Ok(Instance {
            id: file.id,
            num_qubits: file.num_qubits,
            graph,
            cost_hamiltonian: file.cost_hamiltonian,
            qasm: file.qasm,
            exact_energy: file.exact_energy,
            template,
            hamiltonian,
        })
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            id: self.id.clone(),
            num_qubits: self.num_qubits,
            graph: GraphSpec {
                nodes: self.graph.node_count,
                edges: self.graph.edges.iter().map(|e| (e.u, e.v, e.weight)).collect(),
            },
            cost_hamiltonian: self.cost_hamiltonian.clone(),
            qasm: self.qasm.clone(),
            exact_energy: self.exact_energy,
            hamiltonian: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|source| HarnessError::Json {
            path: PathBuf::from("<string>"),
            source,
        })?;
        Instance::from_file(file)
    }

    pub fn read(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let file: InstanceFile = serde_json::from_str(&text).map_err(|source| HarnessError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        Instance::from_file(file)
    }

    /// Writes `<dir>/<id>.json`.
    pub fn write(&self, dir: &Path) -> Result<PathBuf, HarnessError> {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        let path = dir.join(format!("{}.json", self.id));
        let mut text = serde_json::to_string_pretty(&self.to_file()).expect("instance serialises");
        text.push('\n');
        fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
        Ok(path)
    }

    /// Normalised features for the Beta prior.
    pub fn features(&self) -> Result<FeatureVector, ProblemError> {
        normalize_features(&extract_features(&self.graph, &self.hamiltonian)?)
    }

    /// The stored exact energy, or one computed by diagonalisation.
    pub fn reference_energy(&self) -> Result<f64, ProblemError> {
        match self.exact_energy {
            Some(e) => Ok(e),
            None => exact_energy(&self.hamiltonian, self.num_qubits),
        }
    }
}

#[derive(Debug, Default)]
pub struct LoadReport {
    /// Valid instances, sorted by id.
    pub instances: Vec<Instance>,
    /// One message per skipped file or duplicate id.
    pub warnings: Vec<String>,
}

/// Loads one instance file, or every `*.json` file in a directory. Invalid
/// files are skipped with a warning rather than failing the whole load.
pub fn load_instances(path: &Path) -> Result<LoadReport, HarnessError> {
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut v: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| HarnessError::io(path, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
            .collect();
        v.sort();
        v
    } else {
        vec![path.to_path_buf()]
    };

    let mut report = LoadReport::default();
    let mut seen = BTreeSet::new();
    for file in files {
        match Instance::read(&file) {
            Ok(inst) => {
                if seen.insert(inst.id.clone()) {
                    report.instances.push(inst);
                } else {
                    report
                        .warnings
                        .push(format!("{}: duplicate instance id `{}` skipped", file.display(), inst.id));
                }
            }
            Err(e) => report.warnings.push(format!("{}: skipped: {e}", file.display())),
        }
    }
    for w in &report.warnings {
        log::warn!("{w}");
    }
    report.instances.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(report)
}
