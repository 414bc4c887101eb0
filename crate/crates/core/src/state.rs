//! Dense complex state vectors over an n-qubit (or general N-dimensional) basis.
//!
//! Basis ordering is lexicographic over bit-strings with qubit 0 as the most
//! significant bit, so `|01⟩` on two qubits is index 1 and `|10⟩` is index 2.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex amplitude; `re`/`im` are dimensionless.
pub type ComplexAmp = Complex64;

/// Default absolute tolerance for structural checks (normalization,
/// hermiticity, unitarity, reducibility residuals).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Amplitudes below this modulus are treated as zero when deciding the
/// support of a state.
pub const SUPPORT_EPS: f64 = 1e-12;

/// Dense amplitude vector. `n_qubits == 0` with `dim > 1` marks a general
/// non-qubit dimension (photon ladders above the two-level cutoff, etc.).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<ComplexAmp>,
}

impl StateVector {
    /// Build a state from raw amplitudes. Rejects non-finite entries and a
    /// length that disagrees with `2^n_qubits` when `n_qubits > 0`.
    pub fn new(n_qubits: usize, amps: Vec<ComplexAmp>) -> Result<Self> {
        if n_qubits > 0 && amps.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                left: 1 << n_qubits,
                right: amps.len(),
            });
        }
        if amps.is_empty() {
            return Err(Error::Invalid {
                what: "state",
                why: "zero-dimensional amplitude vector".into(),
            });
        }
        for (j, a) in amps.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::NonFiniteAmplitude(j));
            }
        }
        Ok(Self { n_qubits, amps })
    }

    /// General-dimension state (not qubit-structured unless `dim == 1`).
    pub fn general(amps: Vec<ComplexAmp>) -> Result<Self> {
        Self::new(0, amps)
    }

    /// Computational basis state `|j⟩` on `n_qubits`.
    pub fn basis_state(n_qubits: usize, j: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(j < dim, "basis index {j} out of range for dim {dim}");
        let mut amps = vec![ComplexAmp::ZERO; dim];
        amps[j] = ComplexAmp::ONE;
        Self { n_qubits, amps }
    }

    /// `(|00…0⟩ + |11…1⟩)/√2`.
    pub fn ghz(n_qubits: usize) -> Self {
        assert!(n_qubits >= 1);
        let dim = 1usize << n_qubits;
        let mut amps = vec![ComplexAmp::ZERO; dim];
        let a = ComplexAmp::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0] = a;
        amps[dim - 1] = a;
        Self { n_qubits, amps }
    }

    /// Uniform superposition `2^{-n/2} Σ_j |j⟩`.
    pub fn uniform(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let a = ComplexAmp::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self {
            n_qubits,
            amps: vec![a; dim],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// True when the vector indexes an n-qubit register.
    pub fn qubit_structured(&self) -> bool {
        self.amps.len() == 1 << self.n_qubits
    }

    pub fn amps(&self) -> &[ComplexAmp] {
        &self.amps
    }

    pub fn amp(&self, j: usize) -> ComplexAmp {
        self.amps[j]
    }

    pub fn into_amps(self) -> Vec<ComplexAmp> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Errors unless `|‖ψ‖² − 1| ≤ tol`.
    pub fn require_normalized(&self, tol: f64) -> Result<()> {
        let dev = (self.norm_sqr() - 1.0).abs();
        if dev <= tol {
            Ok(())
        } else {
            Err(Error::NotNormalized { deviation: dev })
        }
    }

    /// Indices with `|λ_j| > threshold`.
    pub fn support(&self, threshold: f64) -> Vec<usize> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > threshold)
            .map(|(j, _)| j)
            .collect()
    }

    /// Rescale to unit norm. Errors when the norm is zero.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 0.0 {
            return Err(Error::Invalid {
                what: "state",
                why: "cannot normalize the zero vector".into(),
            });
        }
        let amps = self.amps.iter().map(|a| a / n).collect();
        Ok(Self {
            n_qubits: self.n_qubits,
            amps,
        })
    }

    /// Tensor product `self ⊗ other` (self supplies the most significant bits).
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }

    /// `Σ_j |ψ_j − φ_j|` (L1 distance).
    pub fn l1_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .sum()
    }

    /// Largest per-component deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Cross-norm `{z} = |Re z| + |Im z|`.
pub fn cross_norm(z: ComplexAmp) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Cross-norm of a state: `{ψ} = Σ_j {⟨j|ψ⟩}`.
pub fn state_cross_norm(psi: &StateVector) -> f64 {
    psi.amps().iter().copied().map(cross_norm).sum()
}
