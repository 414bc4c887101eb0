//! Dense complex operators (Hamiltonians, unitaries, general matrices) with
//! the structural checks the rest of the crate relies on.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{ComplexAmp, StateVector};

/// Dense `dim × dim` complex matrix in row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<ComplexAmp>,
}

impl OperatorMatrix {
    /// Build from row-major entries. Rejects non-finite values.
    pub fn new(dim: usize, entries: Vec<ComplexAmp>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        for (k, e) in entries.iter().enumerate() {
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::NonFiniteAmplitude(k));
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> ComplexAmp) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    /// Real-valued convenience constructor used by the fixed gate matrices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| ComplexAmp::new(rows[i][j], 0.0))
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ComplexAmp::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                ComplexAmp::ONE
            } else {
                ComplexAmp::ZERO
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True when the matrix indexes an n-qubit register (dim a power of two).
    pub fn qubit_structured(&self) -> bool {
        self.dim.is_power_of_two()
    }

    /// Number of qubits when qubit-structured.
    pub fn n_qubits(&self) -> Option<usize> {
        self.qubit_structured()
            .then(|| self.dim.trailing_zeros() as usize)
    }

    pub fn get(&self, i: usize, j: usize) -> ComplexAmp {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ComplexAmp) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: ComplexAmp) {
        self.entries[i * self.dim + j] += v;
    }

    pub fn entries(&self) -> &[ComplexAmp] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<ComplexAmp> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn trace(&self) -> ComplexAmp {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: ComplexAmp) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let d = self.dim;
        let mut out = vec![ComplexAmp::ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == ComplexAmp::ZERO {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        Ok(Self {
            dim: d,
            entries: out,
        })
    }

    /// Matrix-vector product `A|ψ⟩`; the input is untouched.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if self.dim != psi.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: psi.dim(),
            });
        }
        let out = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.entries[i * self.dim + j] * psi.amp(j))
                    .sum()
            })
            .collect();
        StateVector::new(psi.n_qubits(), out)
    }

    /// Kronecker product `self ⊗ other` (self supplies the most significant
    /// part of the index).
    pub fn kron(&self, other: &Self) -> Self {
        let d1 = self.dim;
        let d2 = other.dim;
        Self::from_fn(d1 * d2, |i, j| {
            self.get(i / d2, j / d2) * other.get(i % d2, j % d2)
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max_{ij} |A_ij − conj(A_ji)| ≤ tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        for i in 0..self.dim {
            for j in i..self.dim {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// `max |(A†A − I)_ij| ≤ tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let mut acc = ComplexAmp::ZERO;
                for k in 0..d {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                let expect = if i == j {
                    ComplexAmp::ONE
                } else {
                    ComplexAmp::ZERO
                };
                if (acc - expect).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

/// Pauli X.
pub fn sigma_x() -> OperatorMatrix {
    OperatorMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

/// Pauli Z.
pub fn sigma_z() -> OperatorMatrix {
    OperatorMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// Pauli Y.
pub fn sigma_y() -> OperatorMatrix {
    OperatorMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 1) => Complex64::new(0.0, -1.0),
        (1, 0) => Complex64::new(0.0, 1.0),
        _ => Complex64::ZERO,
    })
}

/// Hadamard.
pub fn hadamard() -> OperatorMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    OperatorMatrix::from_real_rows(&[&[h, h], &[h, -h]])
}

/// The 4×4 chain Hamiltonian used as the running reduction example:
/// `H[i][j] = 1` exactly when `i+j` is odd.
pub fn chain_h4() -> OperatorMatrix {
    OperatorMatrix::from_real_rows(&[
        &[0.0, 1.0, 0.0, 1.0],
        &[1.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 1.0],
        &[1.0, 0.0, 1.0, 0.0],
    ])
}

/// Its completely reduced form `σx⊗I + I⊗σx`.
pub fn reduced_h4() -> OperatorMatrix {
    let sx = sigma_x();
    let id = OperatorMatrix::identity(2);
    sx.kron(&id).add(&id.kron(&sx)).unwrap()
}

/// Embed `op` (acting on `positions.len()` qubits, in the order given) into an
/// `n`-qubit register, acting as identity elsewhere. Qubit 0 is the most
/// significant bit of both the sub-register and the full register.
pub fn embed_operator(op: &OperatorMatrix, positions: &[usize], n: usize) -> Result<OperatorMatrix> {
    let k = positions.len();
    if op.dim() != 1 << k {
        return Err(Error::DimensionMismatch {
            left: op.dim(),
            right: 1 << k,
        });
    }
    for &p in positions {
        if p >= n {
            return Err(Error::Invalid {
                what: "qubit position",
                why: format!("{p} out of range for n = {n}"),
            });
        }
    }
    let dim = 1usize << n;
    let extract = |j: usize| -> usize {
        let mut a = 0usize;
        for &p in positions {
            a = (a << 1) | ((j >> (n - 1 - p)) & 1);
        }
        a
    };
    let outside_mask: usize = {
        let mut m = dim - 1;
        for &p in positions {
            m &= !(1usize << (n - 1 - p));
        }
        m
    };
    let mut out = OperatorMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            if (i & outside_mask) == (j & outside_mask) {
                out.set(i, j, op.get(extract(i), extract(j)));
            }
        }
    }
    Ok(out)
}
