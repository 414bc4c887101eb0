//! Permutations of basis vectors and of qubit positions.
//!
//! A `BasisPerm` σ realizes the operator `P|j⟩ = |σ(j)⟩`; a `QubitPerm` η acts
//! on qubit positions and induces a basis permutation by relocating bit k of
//! each bit-string to position η(k) (qubit 0 = most significant bit).

use crate::error::{Error, Result};
use crate::operator::OperatorMatrix;
use crate::state::{ComplexAmp, StateVector};

/// Permutation σ of basis indices `{0..dim−1}`, stored as the image sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisPerm {
    map: Vec<usize>,
}

impl BasisPerm {
    pub fn identity(dim: usize) -> Self {
        Self {
            map: (0..dim).collect(),
        }
    }

    /// Validates that `map` is a bijection on `{0..len−1}`.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &v in &map {
            if v >= map.len() || seen[v] {
                return Err(Error::NotABijection);
            }
            seen[v] = true;
        }
        Ok(Self { map })
    }

    /// Transposition of two basis indices.
    pub fn transposition(dim: usize, a: usize, b: usize) -> Self {
        let mut map: Vec<usize> = (0..dim).collect();
        map.swap(a, b);
        Self { map }
    }

    /// The k-th permutation of `{0..dim−1}` in lexicographic order
    /// (factorial number system decoding); `k < dim!`.
    pub fn from_lex_index(dim: usize, mut k: u64) -> Self {
        let mut pool: Vec<usize> = (0..dim).collect();
        let mut fact = vec![1u64; dim];
        for i in 1..dim {
            fact[i] = fact[i - 1] * i as u64;
        }
        let mut map = Vec::with_capacity(dim);
        for i in (0..dim).rev() {
            let f = fact[i];
            let idx = (k / f) as usize;
            k %= f;
            map.push(pool.remove(idx));
        }
        Self { map }
    }

    pub fn dim(&self) -> usize {
        self.map.len()
    }

    pub fn apply_index(&self, j: usize) -> usize {
        self.map[j]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (j, &v) in self.map.iter().enumerate() {
            inv[v] = j;
        }
        Self { map: inv }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.map.len(), other.map.len());
        Self {
            map: other.map.iter().map(|&j| self.map[j]).collect(),
        }
    }

    /// The 0/1 matrix `P` with `P|j⟩ = |σ(j)⟩`; always unitary.
    pub fn to_operator(&self) -> OperatorMatrix {
        let dim = self.map.len();
        let mut m = OperatorMatrix::zeros(dim);
        for (j, &i) in self.map.iter().enumerate() {
            m.set(i, j, ComplexAmp::ONE);
        }
        m
    }

    /// `P|ψ⟩`: amplitude of `|j⟩` moves to `|σ(j)⟩`.
    pub fn apply_to_state(&self, psi: &StateVector) -> StateVector {
        assert_eq!(self.map.len(), psi.dim());
        let mut out = vec![ComplexAmp::ZERO; psi.dim()];
        for (j, &i) in self.map.iter().enumerate() {
            out[i] = psi.amp(j);
        }
        StateVector::new(psi.n_qubits(), out).expect("permuting preserves validity")
    }

    /// `P⁻¹ A P`, i.e. `out[i][j] = A[σ(i)][σ(j)]`.
    pub fn conjugate(&self, a: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.map.len(), a.dim());
        OperatorMatrix::from_fn(a.dim(), |i, j| a.get(self.map[i], self.map[j]))
    }

    /// Lengths of the cycles of σ, descending.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.map.len()];
        let mut cycles = Vec::new();
        for start in 0..self.map.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.map[j];
                len += 1;
            }
            cycles.push(len);
        }
        cycles.sort_unstable_by(|a, b| b.cmp(a));
        cycles
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(j, &v)| j == v)
    }
}

/// `dim!` as u64; panics above 20!.
pub fn factorial(dim: usize) -> u64 {
    (1..=dim as u64).product()
}

/// CNOT with the given control and target qubit positions on `n` qubits, as a
/// basis permutation: flips bit `target` whenever bit `control` is set.
pub fn cnot_perm(n: usize, control: usize, target: usize) -> BasisPerm {
    assert!(control < n && target < n && control != target);
    let dim = 1usize << n;
    let cbit = 1usize << (n - 1 - control);
    let tbit = 1usize << (n - 1 - target);
    let map = (0..dim)
        .map(|j| if j & cbit != 0 { j ^ tbit } else { j })
        .collect();
    BasisPerm { map }
}

/// Permutation η of qubit positions `{0..n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QubitPerm {
    map: Vec<usize>,
}

impl QubitPerm {
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        BasisPerm::from_map(map.clone())?;
        Ok(Self { map })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Self { map }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (k, &v) in self.map.iter().enumerate() {
            inv[v] = k;
        }
        Self { map: inv }
    }

    /// Basis permutation that relocates bit k of each index to position η(k).
    pub fn induced_basis_perm(&self) -> BasisPerm {
        let n = self.map.len();
        let dim = 1usize << n;
        let map = (0..dim)
            .map(|j| {
                let mut out = 0usize;
                for (k, &dest) in self.map.iter().enumerate() {
                    let bit = (j >> (n - 1 - k)) & 1;
                    out |= bit << (n - 1 - dest);
                }
                out
            })
            .collect();
        BasisPerm { map }
    }

    /// All `n!` qubit permutations in lexicographic order.
    pub fn enumerate(n: usize) -> impl Iterator<Item = QubitPerm> {
        (0..factorial(n)).map(move |k| QubitPerm {
            map: BasisPerm::from_lex_index(n, k).map,
        })
    }
}

/// The matrix of a basis permutation.
pub fn permutation_operator(perm: &BasisPerm) -> OperatorMatrix {
    perm.to_operator()
}

/// The matrix induced by a qubit permutation.
pub fn qubit_permutation_operator(eta: &QubitPerm) -> OperatorMatrix {
    eta.induced_basis_perm().to_operator()
}
