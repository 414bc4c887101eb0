//! Equilibrium tests, the qubit-permutation commutant of a Hamiltonian,
//! connected subspaces/states, and the column-permutation property their
//! matrices inherit.
//!
//! All of these notions are basis-dependent by construction: they are stated
//! in the computational basis and do not survive general rotations.

use num_complex::Complex64;

use crate::ampquant::AmplitudeType;
use crate::error::{Error, Result};
use crate::linalg::hermitian_function;
use crate::operator::OperatorMatrix;
use crate::state::{cross_norm, ComplexAmp, StateVector, SUPPORT_EPS};

/// Largest register for which the full `n!` qubit-permutation scan runs.
pub const COMMUTANT_QUBIT_LIMIT: usize = 8;

/// `{A|j⟩}` for every column j.
pub fn column_cross_norms(a: &OperatorMatrix) -> Vec<f64> {
    (0..a.dim())
        .map(|j| (0..a.dim()).map(|i| cross_norm(a.get(i, j))).sum())
        .collect()
}

/// A state is equilibrium w.r.t. `A` when all support columns share the same
/// cross-norm within `tol`. Support is decided at `SUPPORT_EPS`.
pub fn is_equilibrium(psi: &StateVector, a: &OperatorMatrix, tol: f64) -> Result<bool> {
    is_equilibrium_with(psi, a, tol, SUPPORT_EPS)
}

pub fn is_equilibrium_with(
    psi: &StateVector,
    a: &OperatorMatrix,
    tol: f64,
    support_eps: f64,
) -> Result<bool> {
    let (min, max) = support_column_norm_range(psi, a, support_eps)?;
    Ok(max - min <= tol)
}

/// Min/max column cross-norm over the support of ψ.
pub fn support_column_norm_range(
    psi: &StateVector,
    a: &OperatorMatrix,
    support_eps: f64,
) -> Result<(f64, f64)> {
    if psi.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: psi.dim(),
        });
    }
    let norms = column_cross_norms(a);
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for j in psi.support(support_eps) {
        min = min.min(norms[j]);
        max = max.max(norms[j]);
    }
    if !min.is_finite() {
        // Empty support: vacuously equilibrium.
        return Ok((0.0, 0.0));
    }
    Ok((min, max))
}

/// The group `G_H` of qubit permutations commuting with H, listed explicitly.
#[derive(Clone, Debug)]
pub struct CommutantGroup {
    n: usize,
    members: Vec<crate::perm::QubitPerm>,
}

impl CommutantGroup {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[crate::perm::QubitPerm] {
        &self.members
    }

    pub fn contains(&self, eta: &crate::perm::QubitPerm) -> bool {
        self.members.iter().any(|m| m == eta)
    }

    /// First member whose induced basis permutation maps `from` to `to`.
    pub fn mapping_between(&self, from: usize, to: usize) -> Option<&crate::perm::QubitPerm> {
        self.members
            .iter()
            .find(|eta| eta.induced_basis_perm().apply_index(from) == to)
    }

    /// Orbit of a basis index under the induced permutations, ascending.
    pub fn orbit(&self, seed: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self
            .members
            .iter()
            .map(|eta| eta.induced_basis_perm().apply_index(seed))
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }
}

/// All qubit permutations η with `‖H·P_η − P_η·H‖_max ≤ tol`.
pub fn commutant(h: &OperatorMatrix, n: usize, tol: f64) -> Result<CommutantGroup> {
    if n > COMMUTANT_QUBIT_LIMIT {
        return Err(Error::TooManyQubits {
            n,
            max: COMMUTANT_QUBIT_LIMIT,
        });
    }
    if h.dim() != 1 << n {
        return Err(Error::DimensionMismatch {
            left: h.dim(),
            right: 1 << n,
        });
    }
    let members = crate::perm::QubitPerm::enumerate(n)
        .filter(|eta| commutes_with(h, &eta.induced_basis_perm(), tol))
        .collect();
    Ok(CommutantGroup { n, members })
}

/// `‖H·P − P·H‖_max ≤ tol` without forming either product: with
/// `P|j⟩ = |σ(j)⟩`, `(HP)[i][j] = H[i][σ(j)]` and `(PH)[i][j] = H[σ⁻¹(i)][j]`.
fn commutes_with(h: &OperatorMatrix, sigma: &crate::perm::BasisPerm, tol: f64) -> bool {
    let dim = h.dim();
    let inv = sigma.inverse();
    for i in 0..dim {
        let si = inv.apply_index(i);
        for j in 0..dim {
            if (h.get(i, sigma.apply_index(j)) - h.get(si, j)).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Result of the connectivity test.
#[derive(Clone, Debug)]
pub struct ConnectivityReport {
    pub connected: bool,
    /// Basis indices with `|λ_j| > SUPPORT_EPS` (the set A).
    pub support: Vec<usize>,
    /// For each ordered support pair found, a commutant member mapping the
    /// first index to the second. Covers all pairs when `connected`.
    pub witnesses: Vec<((usize, usize), crate::perm::QubitPerm)>,
    /// First ordered pair without a connecting permutation, if any.
    pub missing_pair: Option<(usize, usize)>,
    /// `‖H|ψ⟩‖ > tol`.
    pub h_psi_nonzero: bool,
}

/// A state is connected w.r.t. H when every ordered support pair is linked by
/// a member of `G_H` and `H|ψ⟩ ≠ 0`.
pub fn is_connected(
    psi: &StateVector,
    h: &OperatorMatrix,
    tol: f64,
) -> Result<ConnectivityReport> {
    let n = h
        .n_qubits()
        .ok_or(Error::NotQubitStructured { dim: h.dim() })?;
    let group = commutant(h, n, tol)?;
    let support = psi.support(SUPPORT_EPS);
    let mut witnesses = Vec::new();
    let mut missing_pair = None;
    'pairs: for &i in &support {
        for &j in &support {
            match group.mapping_between(i, j) {
                Some(eta) => witnesses.push(((i, j), eta.clone())),
                None => {
                    missing_pair = Some((i, j));
                    break 'pairs;
                }
            }
        }
    }
    let h_psi_nonzero = h.apply(psi)?.norm() > tol;
    Ok(ConnectivityReport {
        connected: missing_pair.is_none() && h_psi_nonzero,
        support,
        witnesses,
        missing_pair,
        h_psi_nonzero,
    })
}

/// Evolution operator `exp(−iHt/ħ)` via dense hermitian eigendecomposition.
pub fn evolution_operator(h: &OperatorMatrix, t: f64, hbar: f64, tol: f64) -> Result<OperatorMatrix> {
    if !h.is_hermitian(tol) {
        return Err(Error::NotHermitian { tol });
    }
    let factor = Complex64::new(0.0, -t / hbar);
    Ok(hermitian_function(h, |l| (factor * l).exp()))
}

/// Outcome of the column-permutation check.
#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub ok: bool,
    /// Per ordered support pair `(j1, j2)`: the qubit permutation whose
    /// induced reordering carries column j1 onto column j2.
    pub witnesses: Vec<((usize, usize), crate::perm::QubitPerm)>,
    /// First pair whose columns disagree beyond `tol`, if any.
    pub failing_pair: Option<(usize, usize)>,
}

/// For a state connected w.r.t. the Hamiltonian behind `M` (M itself or its
/// evolution operator), verifies that every pair of support columns of `M`
/// differs only by the basis reordering induced by a connecting permutation.
/// Refuses non-connected inputs.
pub fn lemma_column_permutation_check(
    psi: &StateVector,
    m: &OperatorMatrix,
    tol: f64,
) -> Result<LemmaReport> {
    let report = is_connected(psi, m, tol)?;
    if !report.connected {
        let (from, to) = report.missing_pair.unwrap_or_else(|| {
            let j = report.support.first().copied().unwrap_or(0);
            (j, j)
        });
        return Err(Error::NotConnected { from, to });
    }
    let mut witnesses = Vec::new();
    let mut failing_pair = None;
    'outer: for &((j1, j2), ref eta) in &report.witnesses {
        if j1 == j2 {
            continue;
        }
        let sigma = eta.induced_basis_perm();
        // τ M|j1⟩ = M|j2⟩: column j2 at σ(i) equals column j1 at i.
        for i in 0..m.dim() {
            if (m.get(sigma.apply_index(i), j2) - m.get(i, j1)).norm() > tol {
                failing_pair = Some((j1, j2));
                break 'outer;
            }
        }
        witnesses.push(((j1, j2), eta.clone()));
    }
    Ok(LemmaReport {
        ok: failing_pair.is_none(),
        witnesses,
        failing_pair,
    })
}

/// Builds a state supported on the commutant orbit of `seed`, with equal
/// moduli and phases drawn cyclically from `pattern`; normalized. Errors when
/// the orbit is a fixed point annihilated by H.
pub fn build_connected_state(
    h: &OperatorMatrix,
    n: usize,
    seed: usize,
    pattern: &[AmplitudeType],
    tol: f64,
) -> Result<StateVector> {
    if pattern.is_empty() {
        return Err(Error::Invalid {
            what: "amplitude pattern",
            why: "must supply at least one amplitude type".into(),
        });
    }
    let group = commutant(h, n, tol)?;
    let orbit = group.orbit(seed);
    if orbit.len() == 1 {
        let candidate = StateVector::basis_state(n, seed);
        if h.apply(&candidate)?.norm() <= tol {
            return Err(Error::DeadOrbit { seed });
        }
        return Ok(candidate);
    }
    let scale = 1.0 / (orbit.len() as f64).sqrt();
    let mut amps = vec![ComplexAmp::ZERO; 1 << n];
    for (k, &j) in orbit.iter().enumerate() {
        amps[j] = pattern[k % pattern.len()].unit() * scale;
    }
    StateVector::new(n, amps)
}
