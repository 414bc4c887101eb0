//! Thin wrappers around nalgebra for the two dense decompositions the crate
//! needs: rectangular complex SVD (rank-1 factor tests) and hermitian
//! eigendecomposition (matrix exponentials).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::operator::OperatorMatrix;
use crate::state::ComplexAmp;

/// Leading part of the SVD of a `rows × cols` row-major complex matrix.
pub struct LeadingSvd {
    pub sigma1: f64,
    pub sigma2: f64,
    /// Left singular vector for σ1 (length `rows`).
    pub left: Vec<ComplexAmp>,
    /// Right singular vector for σ1 (length `cols`), not conjugated.
    pub right: Vec<ComplexAmp>,
}

/// Full SVD via nalgebra, repackaged for the rank-1 factor test.
pub fn leading_svd(data: &[ComplexAmp], rows: usize, cols: usize) -> LeadingSvd {
    debug_assert_eq!(data.len(), rows * cols);
    let m = DMatrix::from_row_iterator(rows, cols, data.iter().copied());
    let svd = m.svd(true, true);
    let s = svd.singular_values.as_slice();
    // nalgebra returns singular values in descending order.
    let sigma1 = s.first().copied().unwrap_or(0.0);
    let sigma2 = s.get(1).copied().unwrap_or(0.0);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let left: Vec<ComplexAmp> = (0..rows).map(|i| u[(i, 0)]).collect();
    // v_t rows are conjugate-transposed right vectors: v = conj(v_t[0, :]).
    let right: Vec<ComplexAmp> = (0..cols).map(|j| v_t[(0, j)].conj()).collect();
    LeadingSvd {
        sigma1,
        sigma2,
        left,
        right,
    }
}

/// `V f(Λ) V†` for a hermitian matrix, with `f` applied to the real
/// eigenvalues. Hermiticity is the caller's contract.
pub fn hermitian_function(
    h: &OperatorMatrix,
    f: impl Fn(f64) -> Complex64,
) -> OperatorMatrix {
    let d = h.dim();
    let m = DMatrix::from_row_iterator(d, d, h.entries().iter().copied());
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut out = OperatorMatrix::zeros(d);
    let fvals: Vec<Complex64> = eig.eigenvalues.iter().map(|&l| f(l)).collect();
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex64::ZERO;
            for (k, fv) in fvals.iter().enumerate() {
                acc += eig.eigenvectors[(i, k)] * fv * eig.eigenvectors[(j, k)].conj();
            }
            out.set(i, j, acc);
        }
    }
    out
}
