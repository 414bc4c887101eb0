//! Tavis–Cummings Hamiltonian for k two-level atoms coupled to one cavity
//! mode, in the rotating-wave approximation with a hard photon-number cutoff.
//!
//! Basis: `|n⟩_ph ⊗ |m₁…m_k⟩_at` with `n ≤ n_max`, ordered photon-major and
//! atom bit-strings lexicographic (`m₁` most significant). For `n_max = 1`
//! the result is qubit-structured with the photon mode as qubit 0.

use crate::error::{Error, Result};
use crate::operator::OperatorMatrix;
use crate::state::ComplexAmp;

/// `ħω(a⁺a + Σ_j σ⁺_j σ_j) + a⁺σ̄ + aσ̄⁺` with `σ̄ = Σ_j g_j σ_j`.
/// Creation above `n_max` is projected out.
pub fn build_tavis_cummings(
    k: usize,
    n_max: usize,
    omega: f64,
    g: &[f64],
    hbar: f64,
) -> Result<OperatorMatrix> {
    if k < 1 || n_max < 1 {
        return Err(Error::Invalid {
            what: "tavis-cummings parameters",
            why: format!("need k >= 1 and n_max >= 1, got k = {k}, n_max = {n_max}"),
        });
    }
    if g.len() != k {
        return Err(Error::Invalid {
            what: "coupling list",
            why: format!("expected {k} couplings, got {}", g.len()),
        });
    }
    let atom_dim = 1usize << k;
    let dim = (n_max + 1) * atom_dim;
    let idx = |n: usize, m: usize| n * atom_dim + m;
    let mut h = OperatorMatrix::zeros(dim);
    for n in 0..=n_max {
        for m in 0..atom_dim {
            let j = idx(n, m);
            let excited = m.count_ones() as f64;
            h.set(j, j, ComplexAmp::new(hbar * omega * (n as f64 + excited), 0.0));
            for (atom, &ga) in g.iter().enumerate() {
                let bit = 1usize << (k - 1 - atom);
                if m & bit != 0 && n < n_max {
                    // a⁺ σ_j: atom relaxes, photon count rises by one.
                    let i = idx(n + 1, m & !bit);
                    h.add_to(i, j, ComplexAmp::new(ga * ((n + 1) as f64).sqrt(), 0.0));
                }
                if m & bit == 0 && n >= 1 {
                    // a σ⁺_j: photon absorbed, atom excites.
                    let i = idx(n - 1, m | bit);
                    h.add_to(i, j, ComplexAmp::new(ga * (n as f64).sqrt(), 0.0));
                }
            }
        }
    }
    Ok(h)
}
