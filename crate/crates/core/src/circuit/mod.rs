//! Parameter-slot circuit templates parsed from an OpenQASM subset.
//!
//! A [`CircuitTemplate`] keeps the gate structure of a circuit and assigns
//! every continuous gate argument a *slot*. Slots are numbered in program
//! order (gate order, then argument order within a gate), so a flat parameter
//! vector of length [`CircuitTemplate::slot_count`] fully binds the circuit.

mod expr;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::parse_qasm;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("line {line}: unsupported gate `{name}`")]
    UnsupportedGate { name: String, line: usize },
    #[error("line {line}: malformed statement `{statement}`: {reason}")]
    MalformedStatement {
        statement: String,
        line: usize,
        reason: String,
    },
    #[error("line {line}: qubit index {index} out of range for {num_qubits}-qubit register")]
    WireOutOfRange {
        index: usize,
        num_qubits: usize,
        line: usize,
    },
    #[error("line {line}: gate used before any qubit declaration")]
    MissingQubitDeclaration { line: usize },
    #[error("missing literals: slot {slot} has no recorded value")]
    MissingLiteral { slot: usize },
}

/// Supported gate vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    U3,
    Crx,
    Cry,
    Crz,
    H,
    X,
    Y,
    Z,
    S,
    T,
    Cx,
    Cz,
    Swap,
}

impl GateKind {
    pub const ALL: [GateKind; 16] = [
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::U3,
        GateKind::Crx,
        GateKind::Cry,
        GateKind::Crz,
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::T,
        GateKind::Cx,
        GateKind::Cz,
        GateKind::Swap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::U3 => "u3",
            GateKind::Crx => "crx",
            GateKind::Cry => "cry",
            GateKind::Crz => "crz",
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::T => "t",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
        }
    }

    /// Number of continuous angles the gate takes.
    pub fn param_arity(self) -> usize {
        match self {
            GateKind::U3 => 3,
            GateKind::Rx
            | GateKind::Ry
            | GateKind::Rz
            | GateKind::Crx
            | GateKind::Cry
            | GateKind::Crz => 1,
            _ => 0,
        }
    }

    /// Number of qubits the gate acts on.
    pub fn wire_arity(self) -> usize {
        match self {
            GateKind::Crx
            | GateKind::Cry
            | GateKind::Crz
            | GateKind::Cx
            | GateKind::Cz
            | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn is_parameterised(self) -> bool {
        self.param_arity() > 0
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or(())
    }
}

/// Functional role of a parameter slot, used by gate-aware initialisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateRole {
    /// Single-qubit rotations that explore the full angular range.
    Driver,
    /// Single-qubit rotations scaled like entanglers (rz).
    ConservativeSingle,
    /// Controlled rotations.
    Entangler,
    Fixed,
}

pub fn classify_role(kind: GateKind) -> GateRole {
    match kind {
        GateKind::Rx | GateKind::Ry | GateKind::U3 => GateRole::Driver,
        GateKind::Rz => GateRole::ConservativeSingle,
        GateKind::Crx | GateKind::Cry | GateKind::Crz => GateRole::Entangler,
        _ => GateRole::Fixed,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateInstance {
    pub kind: GateKind,
    /// Qubit indices; for controlled gates the control comes first.
    pub wires: Vec<usize>,
    pub slots: Vec<usize>,
    /// Angles as written in the source, in radians.
    pub literals: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitTemplate {
    pub num_qubits: usize,
    pub gates: Vec<GateInstance>,
    pub slot_roles: Vec<GateRole>,
}

impl CircuitTemplate {
    pub fn new(num_qubits: usize) -> Self {
        CircuitTemplate {
            num_qubits,
            gates: Vec::new(),
            slot_roles: Vec::new(),
        }
    }

    /// Appends a gate, assigning fresh slots to its parameters.
    ///
    /// Panics if the wires are invalid or `literals` has the wrong length;
    /// the parser validates input before calling this.
    pub fn push(&mut self, kind: GateKind, wires: Vec<usize>, literals: Option<Vec<f64>>) {
        assert_eq!(wires.len(), kind.wire_arity(), "wire arity for {kind}");
        assert!(wires.iter().all(|&w| w < self.num_qubits), "wire out of range");
        if let Some(lits) = &literals {
            assert_eq!(lits.len(), kind.param_arity(), "literal count for {kind}");
        }
        let first = self.slot_roles.len();
        let slots: Vec<usize> = (first..first + kind.param_arity()).collect();
        let role = classify_role(kind);
        self.slot_roles.extend(slots.iter().map(|_| role));
        let literals = literals.filter(|l| !l.is_empty());
        self.gates.push(GateInstance {
            kind,
            wires,
            slots,
            literals,
        });
    }

    /// Number of parameter slots `P`.
    pub fn slot_count(&self) -> usize {
        self.slot_roles.len()
    }

    pub fn count_role(&self, role: GateRole) -> usize {
        self.slot_roles.iter().filter(|&&r| r == role).count()
    }

    pub fn gate_histogram(&self) -> BTreeMap<GateKind, usize> {
        let mut hist = BTreeMap::new();
        for g in &self.gates {
            *hist.entry(g.kind).or_insert(0) += 1;
        }
        hist
    }

    /// Copy with every recorded literal discarded; structure is untouched.
    pub fn strip_parameters(&self) -> CircuitTemplate {
        let mut out = self.clone();
        for g in &mut out.gates {
            g.literals = None;
        }
        out
    }

    pub fn is_stripped(&self) -> bool {
        self.gates.iter().all(|g| g.literals.is_none())
    }

    /// The angles written in the source, ordered by slot.
    pub fn baseline_parameters(&self) -> Result<Vec<f64>, CircuitError> {
        let mut out = Vec::with_capacity(self.slot_count());
        for g in &self.gates {
            if g.slots.is_empty() {
                continue;
            }
            match &g.literals {
                Some(lits) => out.extend_from_slice(lits),
                None => return Err(CircuitError::MissingLiteral { slot: g.slots[0] }),
            }
        }
        Ok(out)
    }

    /// Canonical OpenQASM 3 text: one statement per line, angles printed
    /// with 17 significant digits. Stripped gates are written without an
    /// argument list.
    pub fn to_qasm(&self) -> String {
        let mut s = String::from("OPENQASM 3.0;\n");
        s.push_str(&format!("qubit[{}] q;\n", self.num_qubits));
        for g in &self.gates {
            s.push_str(g.kind.name());
            if let Some(lits) = &g.literals {
                let args: Vec<String> = lits.iter().map(|&x| fmt_f64(x)).collect();
                s.push('(');
                s.push_str(&args.join(", "));
                s.push(')');
            }
            let wires: Vec<String> = g.wires.iter().map(|w| format!("q[{w}]")).collect();
            s.push(' ');
            s.push_str(&wires.join(", "));
            s.push_str(";\n");
        }
        s
    }
}

/// Free-function form of [`CircuitTemplate::strip_parameters`].
pub fn strip_parameters(template: &CircuitTemplate) -> CircuitTemplate {
    template.strip_parameters()
}

/// Free-function form of [`CircuitTemplate::baseline_parameters`].
pub fn baseline_parameters(template: &CircuitTemplate) -> Result<Vec<f64>, CircuitError> {
    template.baseline_parameters()
}

/// Formats a float with 17 significant digits, round-trip exact.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
