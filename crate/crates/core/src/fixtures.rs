//! Seeded generators for symmetry-rich Hamiltonians and connected states,
//! used by the verification suites and reproducible experiment scripts.

use rand::Rng;

use crate::ampquant::AmplitudeType;
use crate::operator::{embed_operator, sigma_x, sigma_z, OperatorMatrix};
use crate::state::{ComplexAmp, StateVector};
use crate::symmetry::{build_connected_state, is_connected};
use crate::tavis::build_tavis_cummings;

/// Total-spin operator `Σ_q op_q` on n qubits.
pub fn total_spin(op: &OperatorMatrix, n: usize) -> OperatorMatrix {
    let mut total = OperatorMatrix::zeros(1 << n);
    for q in 0..n {
        total = total
            .add(&embed_operator(op, &[q], n).expect("valid position"))
            .unwrap();
    }
    total
}

/// Random polynomial in the total-spin operators
/// `c₀·Sx + c₁·Sz + c₂·Sx² + c₃·Sz² + c₄·(SxSz + SzSx)`;
/// hermitian and invariant under every qubit permutation.
pub fn symmetric_hamiltonian(rng: &mut impl Rng, n: usize) -> OperatorMatrix {
    let sx = total_spin(&sigma_x(), n);
    let sz = total_spin(&sigma_z(), n);
    let mut next = || {
        let mag: f64 = rng.random_range(0.2..1.0);
        if rng.random_bool(0.5) {
            mag
        } else {
            -mag
        }
    };
    let terms = [next(), next(), next(), next(), next()];
    let mut h = sx.scale(ComplexAmp::new(terms[0], 0.0));
    h = h.add(&sz.scale(ComplexAmp::new(terms[1], 0.0))).unwrap();
    h = h
        .add(&sx.matmul(&sx).unwrap().scale(ComplexAmp::new(terms[2], 0.0)))
        .unwrap();
    h = h
        .add(&sz.matmul(&sz).unwrap().scale(ComplexAmp::new(terms[3], 0.0)))
        .unwrap();
    let cross = sx
        .matmul(&sz)
        .unwrap()
        .add(&sz.matmul(&sx).unwrap())
        .unwrap();
    h.add(&cross.scale(ComplexAmp::new(terms[4], 0.0))).unwrap()
}

/// Equal-coupling Tavis–Cummings Hamiltonian on `k` atoms with a two-level
/// photon mode: qubit-structured on `k + 1` qubits, atom permutations commute.
pub fn equal_coupling_tavis(rng: &mut impl Rng, k: usize) -> OperatorMatrix {
    let omega: f64 = rng.random_range(0.5..1.5);
    let g_val: f64 = rng.random_range(0.2..0.9);
    let g = vec![g_val; k];
    build_tavis_cummings(k, 1, omega, &g, 1.0).expect("valid parameters")
}

const PATTERNS: [&[AmplitudeType]; 4] = [
    &[AmplitudeType::PlusOne],
    &[AmplitudeType::PlusOne, AmplitudeType::MinusOne],
    &[AmplitudeType::PlusOne, AmplitudeType::PlusI],
    &[AmplitudeType::PlusI, AmplitudeType::MinusI, AmplitudeType::PlusOne],
];

/// One Hamiltonian from the commutant-rich families together with a state
/// connected with respect to it. Resamples until connectivity holds.
pub fn connected_fixture(rng: &mut impl Rng, n: usize, tol: f64) -> (OperatorMatrix, StateVector) {
    loop {
        let h = if n >= 2 && rng.random_bool(0.5) {
            equal_coupling_tavis(rng, n - 1)
        } else {
            symmetric_hamiltonian(rng, n)
        };
        for _ in 0..8 {
            let seed = rng.random_range(1..(1usize << n) - 1);
            let pattern = PATTERNS[rng.random_range(0..PATTERNS.len())];
            let Ok(psi) = build_connected_state(&h, n, seed, pattern, tol) else {
                continue;
            };
            let report = is_connected(&psi, &h, tol).expect("dims agree");
            if report.connected {
                return (h, psi);
            }
        }
    }
}
