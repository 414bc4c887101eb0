//! Complexity and accuracy machinery for small quantum registers.
//!
//! The crate provides five toolboxes over dense complex vectors and matrices:
//!
//! - [`state`] / [`operator`] / [`perm`] / [`tavis`]: amplitude vectors,
//!   operators, basis and qubit permutations, standard gates, and the
//!   Tavis–Cummings builder. Basis ordering is lexicographic over bit-strings
//!   with qubit 0 as the most significant bit.
//! - [`complexity`]: additive reducibility of Hamiltonians and tensor
//!   factorization of states, their finest block decompositions, and the
//!   minimization of the kernel size over basis permutations (exhaustive for
//!   `dim ≤ 8`, a CNOT/qubit-permutation library above that).
//! - [`symmetry`]: column cross-norms, equilibrium states, the commutant
//!   group of qubit permutations, connected states, and the
//!   column-permutation property of their matrices.
//! - [`ampquant`]: grid approximation of amplitudes and operators, amplitude
//!   quanta with deterministic trajectories, and the consistency error of the
//!   reconstruction.
//! - [`grover`]: Grover search with an optional minimum-amplitude cutoff and
//!   the register-size sweep that estimates where truncated and standard
//!   evolution separate.
//!
//! Everything is immutable after construction and safe to share across
//! threads; the permutation searches and sweeps fan out with rayon and reduce
//! deterministically.

pub mod ampquant;
pub mod complexity;
pub mod error;
pub mod fixtures;
pub mod grover;
pub mod io;
mod linalg;
pub mod operator;
pub mod perm;
pub mod qubits;
pub mod state;
pub mod symmetry;
pub mod tavis;

pub use error::{Error, Result};
pub use operator::OperatorMatrix;
pub use state::{cross_norm, state_cross_norm, ComplexAmp, StateVector, DEFAULT_TOL, SUPPORT_EPS};
