//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator of dim {dim} is not qubit-structured")]
    NotQubitStructured { dim: usize },

    #[error("permutation is not a bijection")]
    NotABijection,

    #[error("qubit subset must be a proper non-empty part of the register")]
    InvalidSubset,

    #[error("state is not normalized (|norm^2 - 1| = {deviation:.3e})")]
    NotNormalized { deviation: f64 },

    #[error("exhaustive permutation search supports dim <= {max}, got {dim}")]
    ExhaustiveTooLarge { dim: usize, max: usize },

    #[error("qubit permutation enumeration supports n <= {max}, got {n}")]
    TooManyQubits { n: usize, max: usize },

    #[error("matrix is not hermitian within {tol:.1e}")]
    NotHermitian { tol: f64 },

    #[error("state is not connected: no commuting qubit permutation maps basis state {from} to {to}")]
    NotConnected { from: usize, to: usize },

    #[error(
        "state is not equilibrium with respect to the operator \
         (column cross-norms range {min:.6} to {max:.6})"
    )]
    NotEquilibrium { min: f64, max: f64 },

    #[error("column weights differ over the grid support ({weights:?}); use a finer epsilon")]
    UnequalColumnWeights { weights: Vec<(usize, u64)> },

    #[error("operator rounds to zero on the grid (nu = 0); the theorem admits c(eps) = 0 here")]
    ZeroColumnWeight,

    #[error("every amplitude rounds to zero on the grid; use a finer epsilon")]
    EmptyStateGrid,

    #[error("all final-type contributions cancel; theta_fin has zero norm")]
    TotalCancellation,

    #[error("unknown amplitude-quantum id {0}")]
    UnknownQuantumId(u64),

    #[error("all amplitudes fall below the cutoff {eps_min}")]
    AllAmplitudesDropped { eps_min: f64 },

    #[error("seed basis state {seed} is a fixed point of the symmetry group and H|seed> = 0")]
    DeadOrbit { seed: usize },

    #[error("non-finite amplitude at index {0}")]
    NonFiniteAmplitude(usize),

    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },
}

pub type Result<T> = std::result::Result<T, Error>;
