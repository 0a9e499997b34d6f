use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ProblemError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub paulis: Vec<(Pauli, usize)>,
}

impl PauliTerm {
    pub fn is_diagonal(&self) -> bool {
        self.paulis.iter().all(|&(p, _)| p == Pauli::Z)
    }

    /// Bit mask of qubits flipped by X or Y factors.
    pub fn flip_mask(&self) -> usize {
        self.paulis
            .iter()
            .filter(|(p, _)| *p != Pauli::Z)
            .fold(0, |m, &(_, q)| m | (1 << q))
    }

    /// Bit mask of qubits carrying a Z or Y factor (the sign-bearing ones).
    fn sign_mask(&self) -> usize {
        self.paulis
            .iter()
            .filter(|(p, _)| *p != Pauli::X)
            .fold(0, |m, &(_, q)| m | (1 << q))
    }

    fn y_count(&self) -> usize {
        self.paulis.iter().filter(|(p, _)| *p == Pauli::Y).count()
    }

    /// Matrix element of the Pauli string: `P|i> = phase(i) |i ^ flip_mask>`.
    pub fn phase(&self, index: usize) -> Complex64 {
        let sign = if (index & self.sign_mask()).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        // each Y contributes a factor i
        let i_pow = match self.y_count() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        i_pow * sign
    }

    /// Eigenvalue (+1/-1) of a Z-only string on a computational basis state.
    pub fn diagonal_sign(&self, index: usize) -> f64 {
        debug_assert!(self.is_diagonal());
        if (index & self.sign_mask()).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// A real linear combination of Pauli strings plus a constant offset.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Hamiltonian {
    pub terms: Vec<PauliTerm>,
    pub identity_offset: f64,
}

impl Hamiltonian {
    pub fn constant(c: f64) -> Self {
        Hamiltonian {
            terms: Vec::new(),
            identity_offset: c,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(PauliTerm::is_diagonal)
    }

    /// Highest qubit index referenced, plus one.
    pub fn min_qubits(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|t| t.paulis.iter().map(|&(_, q)| q + 1))
            .max()
            .unwrap_or(0)
    }

    /// Energy of a computational basis state. Only meaningful for Z-only
    /// Hamiltonians.
    pub fn diagonal_energy(&self, index: usize) -> f64 {
        self.identity_offset
            + self
                .terms
                .iter()
                .map(|t| t.coefficient * t.diagonal_sign(index))
                .sum::<f64>()
    }

    /// Writes `H|psi>` into `out`.
    pub fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        assert_eq!(psi.len(), out.len());
        for (o, a) in out.iter_mut().zip(psi) {
            *o = a * self.identity_offset;
        }
        for term in &self.terms {
            let flip = term.flip_mask();
            for (i, a) in psi.iter().enumerate() {
                out[i ^ flip] += a * term.phase(i) * term.coefficient;
            }
        }
    }
}

impl fmt::Display for Hamiltonian {
    /// Canonical text: signed terms in order, then the constant offset.
    /// Coefficients use the shortest decimal form that parses back exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut write_signed = |f: &mut fmt::Formatter<'_>, c: f64, body: &str| {
            let neg = c.is_sign_negative();
            let mag = c.abs();
            let r = match (first, neg) {
                (true, false) => write!(f, "{mag}{body}"),
                (true, true) => write!(f, "-{mag}{body}"),
                (false, false) => write!(f, " + {mag}{body}"),
                (false, true) => write!(f, " - {mag}{body}"),
            };
            first = false;
            r
        };
        for t in &self.terms {
            let body: String = t
                .paulis
                .iter()
                .map(|&(p, q)| format!("*{}{}", p.letter(), q))
                .collect();
            write_signed(f, t.coefficient, &body)?;
        }
        if self.terms.is_empty() || self.identity_offset != 0.0 {
            write_signed(f, self.identity_offset, "")?;
        }
        Ok(())
    }
}

/// Parses a cost-Hamiltonian string such as `0.5*Z0*Z1 - 0.3*Z2 + 1.2`.
///
/// Each term is an optional signed coefficient times Pauli factors `X|Y|Z`
/// followed by a qubit index; numeric factors multiply into the
/// coefficient and `I` factors are ignored. Terms without Pauli factors are
/// folded into the identity offset.
pub fn parse_hamiltonian(text: &str, num_qubits: usize) -> Result<Hamiltonian, ProblemError> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(ProblemError::MalformedTerm {
            term: String::new(),
            reason: "empty Hamiltonian".into(),
        });
    }
    let mut h = Hamiltonian::default();
    let mut pos = 0;
    let mut first = true;
    while pos < chars.len() {
        let term_start = pos;
        let mut sign = 1.0;
        let mut saw_sign = false;
        while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                sign = -sign;
            }
            saw_sign = true;
            pos += 1;
        }
        if !first && !saw_sign {
            return Err(malformed(&chars[term_start..], "expected `+` or `-` between terms"));
        }
        first = false;

        let mut coeff = sign;
        let mut paulis: Vec<(Pauli, usize)> = Vec::new();
        let mut expect_factor = true;
        let factor_start = pos;
        while pos < chars.len() {
            let c = chars[pos];
            if !expect_factor {
                if c == '*' {
                    expect_factor = true;
                    pos += 1;
                    continue;
                }
                break;
            }
            match c {
                'X' | 'Y' | 'Z' | 'I' => {
                    pos += 1;
                    let idx_start = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let digits: String = chars[idx_start..pos].iter().collect();
                    if c == 'I' {
                        expect_factor = false;
                        continue;
                    }
                    let q: usize = digits
                        .parse()
                        .map_err(|_| malformed(&chars[term_start..pos], "Pauli factor needs a qubit index"))?;
                    if q >= num_qubits {
                        return Err(ProblemError::QubitIndexOutOfRange { index: q, num_qubits });
                    }
                    if paulis.iter().any(|&(_, other)| other == q) {
                        return Err(malformed(&chars[term_start..pos], "repeated qubit within one term"));
                    }
                    let p = match c {
                        'X' => Pauli::X,
                        'Y' => Pauli::Y,
                        _ => Pauli::Z,
                    };
                    paulis.push((p, q));
                }
                d if d.is_ascii_digit() || d == '.' => {
                    let num_start = pos;
                    while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '.') {
                        pos += 1;
                    }
                    if pos < chars.len() && (chars[pos] == 'e' || chars[pos] == 'E') {
                        let save = pos;
                        pos += 1;
                        if pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
                            pos += 1;
                        }
                        if pos < chars.len() && chars[pos].is_ascii_digit() {
                            while pos < chars.len() && chars[pos].is_ascii_digit() {
                                pos += 1;
                            }
                        } else {
                            pos = save;
                        }
                    }
                    let s: String = chars[num_start..pos].iter().collect();
                    let v: f64 = s
                        .parse()
                        .map_err(|_| malformed(&chars[num_start..pos], "bad number"))?;
                    coeff *= v;
                }
                _ => return Err(malformed(&chars[term_start..=pos], "unexpected character")),
            }
            expect_factor = false;
        }
        if expect_factor {
            return Err(malformed(&chars[term_start..pos], "dangling operator"));
        }
        if pos == factor_start {
            return Err(malformed(&chars[term_start..], "empty term"));
        }
        if !coeff.is_finite() {
            return Err(malformed(&chars[term_start..pos], "coefficient is not finite"));
        }
        if paulis.is_empty() {
            h.identity_offset += coeff;
        } else {
            h.terms.push(PauliTerm {
                coefficient: coeff,
                paulis,
            });
        }
    }
    Ok(h)
}

fn malformed(chars: &[char], reason: &str) -> ProblemError {
    ProblemError::MalformedTerm {
        term: chars.iter().collect(),
        reason: reason.into(),
    }
}
