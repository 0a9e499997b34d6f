//! Dense statevector simulation of circuit templates.
//!
//! Qubit `k` is bit `k` of the basis index (little-endian), rotations are
//! `exp(-iθσ/2)`, and controlled gates act when the control bit is 1.
//! Gradients use a reverse (adjoint) sweep: one forward pass, then one
//! backward pass carrying `H|ψ>` alongside the state.

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{CircuitTemplate, GateInstance, GateKind};
use crate::problem::Hamiltonian;

type C = Complex64;
type Mat2 = [[C; 2]; 2];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("expected {expected} parameters, got {got}")]
    ParamLengthMismatch { expected: usize, got: usize },
    #[error("Hamiltonian acts on {hamiltonian} qubits but the state has {state}")]
    DimensionMismatch { hamiltonian: usize, state: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C>,
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amplitudes = vec![C::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = C::new(1.0, 0.0);
        StateVector {
            num_qubits,
            amplitudes,
        }
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<C>) -> Self {
        assert!(amplitudes.len().is_power_of_two());
        StateVector {
            num_qubits: amplitudes.len().trailing_zeros() as usize,
            amplitudes,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<C>()
            .norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn cis(phi: f64) -> C {
    C::from_polar(1.0, phi)
}

fn dagger(m: &Mat2) -> Mat2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

/// Matrix of the single-qubit (or target) part of a gate.
fn gate_matrix(kind: GateKind, angles: &[f64]) -> Mat2 {
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let half = |i: usize| angles[i] / 2.0;
    match kind {
        GateKind::Rx | GateKind::Crx => {
            let (s, co) = half(0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        GateKind::Ry | GateKind::Cry => {
            let (s, co) = half(0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::Rz | GateKind::Crz => [[cis(-half(0)), zero], [zero, cis(half(0))]],
        GateKind::U3 => {
            let (s, co) = half(0).sin_cos();
            let (phi, lam) = (angles[1], angles[2]);
            [[c(co, 0.0), -cis(lam) * s], [cis(phi) * s, cis(phi + lam) * co]]
        }
        GateKind::H => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]]
        }
        GateKind::X | GateKind::Cx => [[zero, one], [one, zero]],
        GateKind::Y => [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]],
        GateKind::Z | GateKind::Cz => [[one, zero], [zero, -one]],
        GateKind::S => [[one, zero], [zero, c(0.0, 1.0)]],
        GateKind::T => [[one, zero], [zero, cis(std::f64::consts::FRAC_PI_4)]],
        GateKind::Swap => unreachable!("swap has no 2x2 form"),
    }
}

/// Partial derivative of [`gate_matrix`] with respect to angle `which`.
fn gate_derivative(kind: GateKind, angles: &[f64], which: usize) -> Mat2 {
    let zero = c(0.0, 0.0);
    let (s, co) = (angles[0] / 2.0).sin_cos();
    match kind {
        GateKind::Rx | GateKind::Crx => [[c(-s / 2.0, 0.0), c(0.0, -co / 2.0)], [c(0.0, -co / 2.0), c(-s / 2.0, 0.0)]],
        GateKind::Ry | GateKind::Cry => [[c(-s / 2.0, 0.0), c(-co / 2.0, 0.0)], [c(co / 2.0, 0.0), c(-s / 2.0, 0.0)]],
        GateKind::Rz | GateKind::Crz => {
            let h = angles[0] / 2.0;
            [[c(0.0, -0.5) * cis(-h), zero], [zero, c(0.0, 0.5) * cis(h)]]
        }
        GateKind::U3 => {
            let (phi, lam) = (angles[1], angles[2]);
            let i = c(0.0, 1.0);
            match which {
                0 => [[c(-s / 2.0, 0.0), -cis(lam) * (co / 2.0)], [cis(phi) * (co / 2.0), -cis(phi + lam) * (s / 2.0)]],
                1 => [[zero, zero], [i * cis(phi) * s, i * cis(phi + lam) * co]],
                _ => [[zero, -i * cis(lam) * s], [zero, i * cis(phi + lam) * co]],
            }
        }
        _ => unreachable!("{kind} has no parameters"),
    }
}

fn apply_single(amps: &mut [C], target: usize, m: &Mat2) {
    let bit = 1usize << target;
    for i in 0..amps.len() {
        if i & bit == 0 {
            let j = i | bit;
            let (a0, a1) = (amps[i], amps[j]);
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[j] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

/// Applies `m` to `target` on the control-1 subspace. With `project`, the
/// control-0 subspace is zeroed (the derivative of a controlled gate).
fn apply_controlled(amps: &mut [C], control: usize, target: usize, m: &Mat2, project: bool) {
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    for i in 0..amps.len() {
        if i & cbit == 0 {
            if project {
                amps[i] = c(0.0, 0.0);
            }
            continue;
        }
        if i & tbit == 0 {
            let j = i | tbit;
            let (a0, a1) = (amps[i], amps[j]);
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[j] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

fn apply_swap(amps: &mut [C], a: usize, b: usize) {
    let (ba, bb) = (1usize << a, 1usize << b);
    for i in 0..amps.len() {
        if i & ba != 0 && i & bb == 0 {
            amps.swap(i, (i & !ba) | bb);
        }
    }
}

fn gate_angles(gate: &GateInstance, params: &[f64]) -> Vec<f64> {
    gate.slots.iter().map(|&s| params[s]).collect()
}

fn apply_gate(amps: &mut [C], gate: &GateInstance, angles: &[f64], adjoint: bool) {
    if gate.kind == GateKind::Swap {
        apply_swap(amps, gate.wires[0], gate.wires[1]);
        return;
    }
    let mut m = gate_matrix(gate.kind, angles);
    if adjoint {
        m = dagger(&m);
    }
    if gate.kind.wire_arity() == 2 {
        apply_controlled(amps, gate.wires[0], gate.wires[1], &m, false);
    } else {
        apply_single(amps, gate.wires[0], &m);
    }
}

fn apply_gate_derivative(amps: &mut [C], gate: &GateInstance, angles: &[f64], which: usize) {
    let m = gate_derivative(gate.kind, angles, which);
    if gate.kind.wire_arity() == 2 {
        apply_controlled(amps, gate.wires[0], gate.wires[1], &m, true);
    } else {
        apply_single(amps, gate.wires[0], &m);
    }
}

fn check_params(template: &CircuitTemplate, params: &[f64]) -> Result<(), SimError> {
    if params.len() != template.slot_count() {
        return Err(SimError::ParamLengthMismatch {
            expected: template.slot_count(),
            got: params.len(),
        });
    }
    Ok(())
}

fn check_dims(h: &Hamiltonian, n: usize) -> Result<(), SimError> {
    if h.min_qubits() > n {
        return Err(SimError::DimensionMismatch {
            hamiltonian: h.min_qubits(),
            state: n,
        });
    }
    Ok(())
}

/// Runs the circuit on `|0...0>` with the given slot values.
pub fn simulate(template: &CircuitTemplate, params: &[f64]) -> Result<StateVector, SimError> {
    check_params(template, params)?;
    let mut state = StateVector::zero(template.num_qubits);
    for gate in &template.gates {
        apply_gate(&mut state.amplitudes, gate, &gate_angles(gate, params), false);
    }
    Ok(state)
}

/// `<ψ|H|ψ>`.
pub fn expectation(state: &StateVector, h: &Hamiltonian) -> Result<f64, SimError> {
    check_dims(h, state.num_qubits)?;
    let amps = &state.amplitudes;
    let mut energy = h.identity_offset * state.norm_sqr();
    for term in &h.terms {
        if term.is_diagonal() {
            energy += term.coefficient
                * amps
                    .iter()
                    .enumerate()
                    .map(|(i, a)| a.norm_sqr() * term.diagonal_sign(i))
                    .sum::<f64>();
        } else {
            let flip = term.flip_mask();
            let v: C = amps
                .iter()
                .enumerate()
                .map(|(i, a)| amps[i ^ flip].conj() * term.phase(i) * a)
                .sum();
            energy += term.coefficient * v.re;
        }
    }
    Ok(energy)
}

/// Energy and its gradient with respect to every slot.
pub fn energy_and_gradient(
    template: &CircuitTemplate,
    params: &[f64],
    h: &Hamiltonian,
) -> Result<(f64, Vec<f64>), SimError> {
    check_dims(h, template.num_qubits)?;
    let mut psi = simulate(template, params)?;
    let energy = expectation(&psi, h)?;
    let mut lambda = vec![c(0.0, 0.0); psi.amplitudes.len()];
    h.apply(&psi.amplitudes, &mut lambda);

    let mut grad = vec![0.0; params.len()];
    let mut mu = vec![c(0.0, 0.0); lambda.len()];
    for gate in template.gates.iter().rev() {
        let angles = gate_angles(gate, params);
        apply_gate(&mut psi.amplitudes, gate, &angles, true);
        for (which, &slot) in gate.slots.iter().enumerate() {
            mu.copy_from_slice(&psi.amplitudes);
            apply_gate_derivative(&mut mu, gate, &angles, which);
            let overlap: C = lambda.iter().zip(&mu).map(|(l, m)| l.conj() * m).sum();
            grad[slot] = 2.0 * overlap.re;
        }
        apply_gate(&mut lambda, gate, &angles, true);
    }
    Ok((energy, grad))
}

/// `∂<H>/∂θ_k` for every slot `k`.
pub fn gradient(template: &CircuitTemplate, params: &[f64], h: &Hamiltonian) -> Result<Vec<f64>, SimError> {
    energy_and_gradient(template, params, h).map(|(_, g)| g)
}
