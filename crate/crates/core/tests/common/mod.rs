#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;

use bridgq::circuit::{CircuitTemplate, GateKind};
use bridgq::harness::Instance;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture() -> Instance {
    Instance::read(&fixture_path("maxcut4.json")).expect("fixture loads")
}

fn m2(a: [[C; 2]; 2]) -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
}

fn pauli(letter: char) -> DMatrix<C> {
    let (o, z, i) = (C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 1.0));
    match letter {
        'I' => m2([[o, z], [z, o]]),
        'X' => m2([[z, o], [o, z]]),
        'Y' => m2([[z, -i], [i, z]]),
        'Z' => m2([[o, z], [z, -o]]),
        _ => unreachable!(),
    }
}

/// exp(-i theta P / 2) = cos(theta/2) I - i sin(theta/2) P.
fn rotation(letter: char, theta: f64) -> DMatrix<C> {
    pauli('I') * C::new((theta / 2.0).cos(), 0.0) - pauli(letter) * C::new(0.0, (theta / 2.0).sin())
}

/// 2x2 target matrix of a gate, written from the textbook definitions.
pub fn reference_matrix(kind: GateKind, angles: &[f64]) -> DMatrix<C> {
    let (o, z) = (C::new(1.0, 0.0), C::new(0.0, 0.0));
    match kind {
        GateKind::Rx | GateKind::Crx => rotation('X', angles[0]),
        GateKind::Ry | GateKind::Cry => rotation('Y', angles[0]),
        GateKind::Rz | GateKind::Crz => rotation('Z', angles[0]),
        GateKind::U3 => {
            let (t, p, l) = (angles[0], angles[1], angles[2]);
            let e = |x: f64| C::from_polar(1.0, x);
            m2([
                [C::new((t / 2.0).cos(), 0.0), -e(l) * (t / 2.0).sin()],
                [e(p) * (t / 2.0).sin(), e(p + l) * (t / 2.0).cos()],
            ])
        }
        GateKind::H => (pauli('X') + pauli('Z')) * C::new(0.5f64.sqrt(), 0.0),
        GateKind::X | GateKind::Cx => pauli('X'),
        GateKind::Y => pauli('Y'),
        GateKind::Z | GateKind::Cz => pauli('Z'),
        GateKind::S => m2([[o, z], [z, C::new(0.0, 1.0)]]),
        GateKind::T => m2([[o, z], [z, C::from_polar(1.0, PI / 4.0)]]),
        GateKind::Swap => unreachable!(),
    }
}

/// Kronecker product with qubit `n-1` as the leftmost factor, so qubit `k`
/// is bit `k` of the basis index.
fn embed(n: usize, factors: &[(usize, DMatrix<C>)]) -> DMatrix<C> {
    let mut m = DMatrix::from_element(1, 1, C::new(1.0, 0.0));
    for q in (0..n).rev() {
        let f = factors
            .iter()
            .find(|(w, _)| *w == q)
            .map(|(_, f)| f.clone())
            .unwrap_or_else(|| pauli('I'));
        m = m.kronecker(&f);
    }
    m
}

pub fn full_gate(n: usize, kind: GateKind, wires: &[usize], angles: &[f64]) -> DMatrix<C> {
    let (o, z) = (C::new(1.0, 0.0), C::new(0.0, 0.0));
    match kind.wire_arity() {
        1 => embed(n, &[(wires[0], reference_matrix(kind, angles))]),
        _ if kind == GateKind::Swap => {
            let dim = 1 << n;
            let (a, b) = (wires[0], wires[1]);
            DMatrix::from_fn(dim, dim, |r, col| {
                let (ba, bb) = ((col >> a) & 1, (col >> b) & 1);
                let swapped = (col & !(1 << a) & !(1 << b)) | (bb << a) | (ba << b);
                if r == swapped {
                    o
                } else {
                    z
                }
            })
        }
        _ => {
            let p0 = m2([[o, z], [z, z]]);
            let p1 = m2([[z, z], [z, o]]);
            embed(n, &[(wires[0], p0)]) + embed(n, &[(wires[0], p1), (wires[1], reference_matrix(kind, angles))])
        }
    }
}

/// Statevector by explicit dense matrix products.
pub fn dense_simulate(t: &CircuitTemplate, params: &[f64]) -> DVector<C> {
    let n = t.num_qubits;
    let mut psi = DVector::from_element(1 << n, C::new(0.0, 0.0));
    psi[0] = C::new(1.0, 0.0);
    for g in &t.gates {
        let angles: Vec<f64> = g.slots.iter().map(|&s| params[s]).collect();
        psi = full_gate(n, g.kind, &g.wires, &angles) * psi;
    }
    psi
}

pub fn random_circuit<R: Rng>(rng: &mut R, max_qubits: usize, max_gates: usize) -> (CircuitTemplate, Vec<f64>) {
    let n = rng.random_range(1..=max_qubits);
    let mut t = CircuitTemplate::new(n);
    let gates = rng.random_range(1..=max_gates);
    for _ in 0..gates {
        let kinds: Vec<GateKind> = GateKind::ALL
            .iter()
            .copied()
            .filter(|k| k.wire_arity() == 1 || n >= 2)
            .collect();
        let kind = kinds[rng.random_range(0..kinds.len())];
        let wires = if kind.wire_arity() == 1 {
            vec![rng.random_range(0..n)]
        } else {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            vec![a, b]
        };
        t.push(kind, wires, None);
    }
    let params = (0..t.slot_count()).map(|_| rng.random_range(-PI..PI)).collect();
    (t, params)
}
