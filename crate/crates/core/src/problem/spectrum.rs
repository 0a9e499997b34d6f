use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Hamiltonian, ProblemError, MAX_DENSE_QUBITS, MAX_DIAGONAL_QUBITS};

/// Up to this size the full matrix is diagonalised directly.
const DENSE_DIRECT_QUBITS: usize = 6;
const LANCZOS_MAX_KRYLOV: usize = 300;

/// Ground-state energy of `hamiltonian` on `num_qubits` qubits.
///
/// Z-only Hamiltonians are minimised by enumerating basis states; general
/// Pauli sums are diagonalised (dense for small registers, Lanczos with full
/// reorthogonalisation otherwise).
pub fn exact_energy(hamiltonian: &Hamiltonian, num_qubits: usize) -> Result<f64, ProblemError> {
    if hamiltonian.min_qubits() > num_qubits {
        return Err(ProblemError::QubitIndexOutOfRange {
            index: hamiltonian.min_qubits() - 1,
            num_qubits,
        });
    }
    if hamiltonian.terms.is_empty() {
        return Ok(hamiltonian.identity_offset);
    }
    if hamiltonian.is_diagonal() {
        if num_qubits > MAX_DIAGONAL_QUBITS {
            return Err(ProblemError::TooLarge {
                num_qubits,
                limit: MAX_DIAGONAL_QUBITS,
            });
        }
        return Ok((0..1usize << num_qubits)
            .map(|s| hamiltonian.diagonal_energy(s))
            .fold(f64::INFINITY, f64::min));
    }
    if num_qubits > MAX_DENSE_QUBITS {
        return Err(ProblemError::TooLarge {
            num_qubits,
            limit: MAX_DENSE_QUBITS,
        });
    }
    if num_qubits <= DENSE_DIRECT_QUBITS {
        Ok(dense_min_eigenvalue(hamiltonian, num_qubits))
    } else {
        Ok(lanczos_min_eigenvalue(hamiltonian, num_qubits))
    }
}

pub(crate) fn dense_matrix(hamiltonian: &Hamiltonian, num_qubits: usize) -> DMatrix<Complex64> {
    let dim = 1usize << num_qubits;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let mut basis = vec![Complex64::new(0.0, 0.0); dim];
    let mut col = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        basis[j] = Complex64::new(1.0, 0.0);
        hamiltonian.apply(&basis, &mut col);
        for (i, v) in col.iter().enumerate() {
            m[(i, j)] = *v;
        }
        basis[j] = Complex64::new(0.0, 0.0);
    }
    m
}

pub(crate) fn dense_min_eigenvalue(hamiltonian: &Hamiltonian, num_qubits: usize) -> f64 {
    let m = dense_matrix(hamiltonian, num_qubits);
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn lanczos_min_eigenvalue(hamiltonian: &Hamiltonian, num_qubits: usize) -> f64 {
    let dim = 1usize << num_qubits;
    let steps = dim.min(LANCZOS_MAX_KRYLOV);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2c_20e5);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let n0 = norm(&v);
    v.iter_mut().for_each(|x| *x /= n0);

    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let mut alphas = Vec::with_capacity(steps);
    let mut betas: Vec<f64> = Vec::with_capacity(steps);
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    for k in 0..steps {
        hamiltonian.apply(&basis[k], &mut w);
        alphas.push(dot(&basis[k], &w).re);
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let beta = norm(&w);
        if k + 1 == steps || beta < 1e-12 {
            break;
        }
        betas.push(beta);
        basis.push(w.iter().map(|x| x / beta).collect());
    }

    let m = alphas.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    SymmetricEigen::new(t)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{parse_hamiltonian, Pauli, PauliTerm};

    fn random_hamiltonian(n: usize, terms: usize, seed: u64) -> Hamiltonian {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut h = Hamiltonian::constant(rng.random_range(-1.0..1.0));
        for _ in 0..terms {
            let mut paulis = Vec::new();
            for q in 0..n {
                match rng.random_range(0..4) {
                    1 => paulis.push((Pauli::X, q)),
                    2 => paulis.push((Pauli::Y, q)),
                    3 => paulis.push((Pauli::Z, q)),
                    _ => {}
                }
            }
            if paulis.is_empty() {
                paulis.push((Pauli::X, 0));
            }
            h.terms.push(PauliTerm {
                coefficient: rng.random_range(-1.0..1.0),
                paulis,
            });
        }
        h
    }

    #[test]
    fn single_z() {
        let h = parse_hamiltonian("Z0", 1).unwrap();
        assert_eq!(exact_energy(&h, 1).unwrap(), -1.0);
    }

    #[test]
    fn constant_only() {
        assert_eq!(exact_energy(&Hamiltonian::constant(1.2), 3).unwrap(), 1.2);
    }

    #[test]
    fn negated_maxcut_fixture() {
        let h = parse_hamiltonian(
            "-1.2 + 0.35*Z0*Z1 + 0.15*Z1*Z2 + 0.45*Z2*Z3 + 0.25*Z0*Z3",
            4,
        )
        .unwrap();
        assert!((exact_energy(&h, 4).unwrap() + 2.4).abs() < 1e-12);
    }

    #[test]
    fn non_diagonal_known_spectrum() {
        // X0 + Z0 has eigenvalues +-sqrt(2)
        let h = parse_hamiltonian("X0 + Z0", 1).unwrap();
        assert!((exact_energy(&h, 1).unwrap() + 2f64.sqrt()).abs() < 1e-12);
        // Heisenberg pair: singlet at -3
        let h = parse_hamiltonian("X0*X1 + Y0*Y1 + Z0*Z1", 2).unwrap();
        assert!((exact_energy(&h, 2).unwrap() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn lanczos_matches_dense() {
        for (n, seed) in [(4, 1), (5, 2), (6, 3), (6, 4)] {
            let h = random_hamiltonian(n, 12, seed);
            let dense = dense_min_eigenvalue(&h, n);
            let lanczos = lanczos_min_eigenvalue(&h, n);
            assert!((dense - lanczos).abs() < 1e-9, "n={n}: {dense} vs {lanczos}");
        }
    }

    #[test]
    fn size_limits() {
        let h = parse_hamiltonian("X0", 13).unwrap();
        assert!(matches!(exact_energy(&h, 13), Err(ProblemError::TooLarge { .. })));
        let h = parse_hamiltonian("Z0", 21).unwrap();
        assert!(matches!(exact_energy(&h, 21), Err(ProblemError::TooLarge { .. })));
    }
}
