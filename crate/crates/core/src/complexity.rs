//! Tensor-factor structure of states and Hamiltonians: reducibility tests,
//! finest block decompositions, naive and permutation-minimized complexity,
//! and the accuracy budget arithmetic.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::leading_svd;
use crate::operator::OperatorMatrix;
use crate::perm::{cnot_perm, factorial, BasisPerm, QubitPerm};
use crate::qubits::{bipartitions_of, Bipartition, QubitSubset};
use crate::state::{ComplexAmp, StateVector, DEFAULT_TOL};

/// Largest dimension for which the full `dim!` permutation search runs.
pub const EXHAUSTIVE_DIM_LIMIT: usize = 8;

/// Largest register the recursive block decompositions accept.
pub const BLOCKS_QUBIT_LIMIT: usize = 12;

/// One irreducible factor: the original qubit positions it covers and the
/// factor living on them.
#[derive(Clone, Debug)]
pub struct Block<F> {
    pub qubits: Vec<usize>,
    pub factor: F,
}

/// Partition of the register into irreducible factors. The kernel is the
/// largest block; its size is the naive complexity ν.
#[derive(Clone, Debug)]
pub struct BlockDecomposition<F> {
    pub n_qubits: usize,
    pub blocks: Vec<Block<F>>,
}

impl<F> BlockDecomposition<F> {
    pub fn kernel(&self) -> &Block<F> {
        self.blocks
            .iter()
            .reduce(|best, b| if b.qubits.len() > best.qubits.len() { b } else { best })
            .expect("at least one block")
    }

    pub fn naive_complexity(&self) -> usize {
        self.kernel().qubits.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(|b| b.qubits.len()).collect();
        sizes.sort_unstable();
        sizes
    }

    /// Qubit partition, each block's positions ascending, blocks ordered by
    /// first position.
    pub fn partition(&self) -> Vec<Vec<usize>> {
        let mut parts: Vec<Vec<usize>> = self.blocks.iter().map(|b| b.qubits.clone()).collect();
        parts.sort();
        parts
    }
}

/// Which family of basis permutations the complexity search walks.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchStrategy {
    /// All `dim!` basis permutations; certified minimum, `dim ≤ 8`.
    Exhaustive,
    /// Compositions of CNOT gates and qubit permutations, explored best-first
    /// up to a depth and node budget; upper bound only.
    HeuristicLibrary(HeuristicOptions),
}

impl SearchStrategy {
    pub fn heuristic() -> Self {
        Self::HeuristicLibrary(HeuristicOptions::default())
    }

    fn label(&self) -> &'static str {
        match self {
            Self::Exhaustive => "exhaustive",
            Self::HeuristicLibrary(_) => "heuristic_library",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicOptions {
    /// Longest gate sequence composed; `None` means the qubit count.
    pub max_depth: Option<usize>,
    /// Cap on the number of candidate permutations evaluated.
    pub node_budget: usize,
}

impl Default for HeuristicOptions {
    fn default() -> Self {
        Self {
            max_depth: None,
            node_budget: 4096,
        }
    }
}

/// Outcome of a complexity minimization.
#[derive(Clone, Debug)]
pub struct ComplexityReport {
    /// ν in the computational basis.
    pub naive: usize,
    /// Minimal ν over the searched permutation family.
    pub quantum: usize,
    /// Permutation achieving `quantum` (lexicographically smallest found).
    pub witness: BasisPerm,
    /// Echo of the search family, as a stable label.
    pub strategy: &'static str,
    /// True only for the exhaustive search.
    pub certified: bool,
}

/// Additive split `H ≈ H1⊗I + I⊗H2` over a bipartition, built from partial
/// traces with the scalar part divided evenly. Returns the residual alongside
/// the candidate factors.
fn trace_split(
    h: &OperatorMatrix,
    bp: &Bipartition,
) -> (OperatorMatrix, OperatorMatrix, f64) {
    let dp = bp.part_dim();
    let dpp = bp.comp_dim();
    let shift = h.trace() / (2.0 * dp as f64 * dpp as f64);
    let mut h1 = OperatorMatrix::zeros(dp);
    for a in 0..dp {
        for b in 0..dp {
            let mut acc = ComplexAmp::ZERO;
            for c in 0..dpp {
                acc += h.get(bp.fuse(a, c), bp.fuse(b, c));
            }
            let mut v = acc / dpp as f64;
            if a == b {
                v -= shift;
            }
            h1.set(a, b, v);
        }
    }
    let mut h2 = OperatorMatrix::zeros(dpp);
    for c in 0..dpp {
        for d in 0..dpp {
            let mut acc = ComplexAmp::ZERO;
            for a in 0..dp {
                acc += h.get(bp.fuse(a, c), bp.fuse(a, d));
            }
            let mut v = acc / dp as f64;
            if c == d {
                v -= shift;
            }
            h2.set(c, d, v);
        }
    }
    let mut residual = 0.0f64;
    for i in 0..h.dim() {
        let (ai, ci) = bp.split(i);
        for j in 0..h.dim() {
            let (aj, cj) = bp.split(j);
            let mut v = h.get(i, j);
            if ci == cj {
                v -= h1.get(ai, aj);
            }
            if ai == aj {
                v -= h2.get(ci, cj);
            }
            residual = residual.max(v.norm());
        }
    }
    (h1, h2, residual)
}

/// Tests whether `H = H1⊗I + I⊗H2` over the given qubit subset, within `tol`.
/// Returns the factors on success (part factor first).
pub fn is_reducible_h(
    h: &OperatorMatrix,
    part: &QubitSubset,
    tol: f64,
) -> Result<Option<(OperatorMatrix, OperatorMatrix)>> {
    let n = h
        .n_qubits()
        .ok_or(Error::NotQubitStructured { dim: h.dim() })?;
    if part.n() != n || !part.is_proper() {
        return Err(Error::InvalidSubset);
    }
    let bp = Bipartition::new(part)?;
    let (h1, h2, residual) = trace_split(h, &bp);
    Ok((residual <= tol).then_some((h1, h2)))
}

/// Recursively splits the register via `is_reducible_h` over all bipartitions
/// (smallest side first) until no block splits further.
pub fn finest_blocks_h(h: &OperatorMatrix, tol: f64) -> Result<BlockDecomposition<OperatorMatrix>> {
    let n = h
        .n_qubits()
        .ok_or(Error::NotQubitStructured { dim: h.dim() })?;
    if n > BLOCKS_QUBIT_LIMIT {
        return Err(Error::TooManyQubits {
            n,
            max: BLOCKS_QUBIT_LIMIT,
        });
    }
    let mut blocks = Vec::new();
    let mut queue = vec![Block {
        qubits: (0..n).collect::<Vec<_>>(),
        factor: h.clone(),
    }];
    while let Some(block) = queue.pop() {
        let k = block.qubits.len();
        let mut split = None;
        if k > 1 {
            let local: Vec<usize> = (0..k).collect();
            for (part_local, comp_local) in bipartitions_of(&local) {
                let bp = Bipartition::from_positions(k, part_local.clone(), comp_local.clone());
                let (h1, h2, residual) = trace_split(&block.factor, &bp);
                if residual <= tol {
                    split = Some((part_local, comp_local, h1, h2));
                    break;
                }
            }
        }
        match split {
            Some((part_local, comp_local, h1, h2)) => {
                queue.push(Block {
                    qubits: part_local.iter().map(|&t| block.qubits[t]).collect(),
                    factor: h1,
                });
                queue.push(Block {
                    qubits: comp_local.iter().map(|&t| block.qubits[t]).collect(),
                    factor: h2,
                });
            }
            None => blocks.push(block),
        }
    }
    blocks.sort_by_key(|b| b.qubits[0]);
    Ok(BlockDecomposition { n_qubits: n, blocks })
}

/// ν(H): size of the kernel of the finest decomposition.
pub fn naive_complexity_h(h: &OperatorMatrix, tol: f64) -> Result<(usize, BlockDecomposition<OperatorMatrix>)> {
    let d = finest_blocks_h(h, tol)?;
    Ok((d.naive_complexity(), d))
}

/// Rank-1 test over a bipartition: reshapes ψ to a `d′ × d″` matrix and
/// accepts when the second singular value is at most `tol·σ1`. Factors are
/// the leading singular pair, phase-fixed so the largest-modulus entry of the
/// part factor is real positive.
pub fn factor_state(
    psi: &StateVector,
    part: &QubitSubset,
    tol: f64,
) -> Result<Option<(StateVector, StateVector)>> {
    if !psi.qubit_structured() {
        return Err(Error::NotQubitStructured { dim: psi.dim() });
    }
    psi.require_normalized(DEFAULT_TOL)?;
    if part.n() != psi.n_qubits() || !part.is_proper() {
        return Err(Error::InvalidSubset);
    }
    let bp = Bipartition::new(part)?;
    Ok(factor_over(psi.amps(), &bp, tol).map(|(f1, f2)| {
        let p1 = StateVector::new(bp.part_positions().len(), f1).expect("factor finite");
        let p2 = StateVector::new(bp.comp_positions().len(), f2).expect("factor finite");
        (p1, p2)
    }))
}

fn factor_over(
    amps: &[ComplexAmp],
    bp: &Bipartition,
    tol: f64,
) -> Option<(Vec<ComplexAmp>, Vec<ComplexAmp>)> {
    let dp = bp.part_dim();
    let dpp = bp.comp_dim();
    let mut m = vec![ComplexAmp::ZERO; dp * dpp];
    for a in 0..dp {
        for c in 0..dpp {
            m[a * dpp + c] = amps[bp.fuse(a, c)];
        }
    }
    let svd = leading_svd(&m, dp, dpp);
    if svd.sigma2 > tol * svd.sigma1 {
        return None;
    }
    let mut f1 = svd.left;
    let mut f2: Vec<ComplexAmp> = svd.right.iter().map(|v| v.conj() * svd.sigma1).collect();
    // Phase convention: largest-modulus entry of the part factor real positive.
    let lead = f1
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| x.norm().total_cmp(&y.norm()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let phase = f1[lead] / f1[lead].norm();
    for v in &mut f1 {
        *v /= phase;
    }
    for v in &mut f2 {
        *v *= phase;
    }
    Some((f1, f2))
}

/// Finest tensor factorization of a state; ν is the largest irreducible
/// factor's qubit count (1 for a full product state).
pub fn naive_complexity_state(
    psi: &StateVector,
    tol: f64,
) -> Result<(usize, BlockDecomposition<StateVector>)> {
    if !psi.qubit_structured() {
        return Err(Error::NotQubitStructured { dim: psi.dim() });
    }
    let n = psi.n_qubits();
    if n > BLOCKS_QUBIT_LIMIT {
        return Err(Error::TooManyQubits {
            n,
            max: BLOCKS_QUBIT_LIMIT,
        });
    }
    psi.require_normalized(DEFAULT_TOL)?;
    let mut blocks = Vec::new();
    let mut queue = vec![Block {
        qubits: (0..n).collect::<Vec<_>>(),
        factor: psi.clone(),
    }];
    while let Some(block) = queue.pop() {
        let k = block.qubits.len();
        let mut split = None;
        if k > 1 {
            let local: Vec<usize> = (0..k).collect();
            for (part_local, comp_local) in bipartitions_of(&local) {
                let bp = Bipartition::from_positions(k, part_local.clone(), comp_local.clone());
                if let Some((f1, f2)) = factor_over(block.factor.amps(), &bp, tol) {
                    split = Some((part_local, comp_local, f1, f2));
                    break;
                }
            }
        }
        match split {
            Some((part_local, comp_local, f1, f2)) => {
                queue.push(Block {
                    qubits: part_local.iter().map(|&t| block.qubits[t]).collect(),
                    factor: StateVector::new(part_local.len(), f1).expect("factor finite"),
                });
                queue.push(Block {
                    qubits: comp_local.iter().map(|&t| block.qubits[t]).collect(),
                    factor: StateVector::new(comp_local.len(), f2).expect("factor finite"),
                });
            }
            None => blocks.push(block),
        }
    }
    blocks.sort_by_key(|b| b.qubits[0]);
    let d = BlockDecomposition { n_qubits: n, blocks };
    Ok((d.naive_complexity(), d))
}

/// Minimal ν(P_τ ψ) over basis permutations τ from the chosen family.
pub fn quantum_complexity_state(
    psi: &StateVector,
    strategy: &SearchStrategy,
    tol: f64,
) -> Result<ComplexityReport> {
    if !psi.qubit_structured() {
        return Err(Error::NotQubitStructured { dim: psi.dim() });
    }
    psi.require_normalized(DEFAULT_TOL)?;
    let n = psi.n_qubits();
    let naive = naive_complexity_state(psi, tol)?.0;
    let eval = |perm: &BasisPerm| {
        naive_complexity_state(&perm.apply_to_state(psi), tol)
            .expect("permuted state stays valid")
            .0
    };
    run_search(n, psi.dim(), naive, strategy, eval)
}

/// Minimal ν(P_τ⁻¹ H P_τ) over basis permutations τ; the witness is the
/// canonical transformation.
pub fn quantum_complexity_h(
    h: &OperatorMatrix,
    strategy: &SearchStrategy,
    tol: f64,
) -> Result<ComplexityReport> {
    let n = h
        .n_qubits()
        .ok_or(Error::NotQubitStructured { dim: h.dim() })?;
    let naive = finest_blocks_h(h, tol)?.naive_complexity();
    let eval = |perm: &BasisPerm| {
        finest_blocks_h(&perm.conjugate(h), tol)
            .expect("conjugated matrix stays valid")
            .naive_complexity()
    };
    run_search(n, h.dim(), naive, strategy, eval)
}

fn run_search(
    n: usize,
    dim: usize,
    naive: usize,
    strategy: &SearchStrategy,
    eval: impl Fn(&BasisPerm) -> usize + Sync,
) -> Result<ComplexityReport> {
    let (quantum, witness, certified) = match strategy {
        SearchStrategy::Exhaustive => {
            if dim > EXHAUSTIVE_DIM_LIMIT {
                return Err(Error::ExhaustiveTooLarge {
                    dim,
                    max: EXHAUSTIVE_DIM_LIMIT,
                });
            }
            let (nu, perm) = exhaustive_min(dim, &eval);
            (nu, perm, true)
        }
        SearchStrategy::HeuristicLibrary(opts) => {
            let (nu, perm) = heuristic_min(n, dim, opts, &eval);
            (nu, perm, false)
        }
    };
    debug_assert!(quantum <= naive);
    Ok(ComplexityReport {
        naive,
        quantum,
        witness,
        strategy: strategy.label(),
        certified,
    })
}

/// Full scan over all `dim!` permutations, combined by the `(ν, permutation)`
/// minimum; the result is independent of the parallel schedule.
fn exhaustive_min(dim: usize, eval: &(impl Fn(&BasisPerm) -> usize + Sync)) -> (usize, BasisPerm) {
    let total = factorial(dim);
    (0..total)
        .into_par_iter()
        .map(|k| {
            let perm = BasisPerm::from_lex_index(dim, k);
            (eval(&perm), perm)
        })
        .reduce_with(min_candidate)
        .expect("at least the identity permutation")
}

fn min_candidate(a: (usize, BasisPerm), b: (usize, BasisPerm)) -> (usize, BasisPerm) {
    if (b.0, b.1.as_slice()) < (a.0, a.1.as_slice()) {
        b
    } else {
        a
    }
}

/// Deterministic best-first walk over the library generated by CNOT gates and
/// qubit transpositions, seeded with all qubit permutations when their count
/// is small. Returns the best `(ν, permutation)` found within the budget.
fn heuristic_min(
    n: usize,
    dim: usize,
    opts: &HeuristicOptions,
    eval: &(impl Fn(&BasisPerm) -> usize + Sync),
) -> (usize, BasisPerm) {
    let max_depth = opts.max_depth.unwrap_or(n);
    let mut generators: Vec<BasisPerm> = Vec::new();
    for control in 0..n {
        for target in 0..n {
            if control != target {
                generators.push(cnot_perm(n, control, target));
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            generators.push(QubitPerm::transposition(n, a, b).induced_basis_perm());
        }
    }

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut heap: BinaryHeap<Reverse<(usize, usize, Vec<usize>)>> = BinaryHeap::new();
    let identity = BasisPerm::identity(dim);
    let mut best = (eval(&identity), identity.clone());
    let mut evals = 1usize;
    seen.insert(identity.as_slice().to_vec());
    heap.push(Reverse((best.0, 0, identity.as_slice().to_vec())));

    // Seed with the full qubit-permutation family while it stays enumerable.
    if n >= 2 && factorial(n) <= 5040 {
        for eta in QubitPerm::enumerate(n) {
            let perm = eta.induced_basis_perm();
            if seen.insert(perm.as_slice().to_vec()) && evals < opts.node_budget {
                let nu = eval(&perm);
                evals += 1;
                best = min_candidate(best, (nu, perm.clone()));
                if best.0 == 1 {
                    return best;
                }
                heap.push(Reverse((nu, 0, perm.as_slice().to_vec())));
            }
        }
    }

    while let Some(Reverse((_, depth, map))) = heap.pop() {
        if depth >= max_depth || evals >= opts.node_budget {
            continue;
        }
        let parent = BasisPerm::from_map(map).expect("stored maps are valid");
        for gen in &generators {
            if evals >= opts.node_budget {
                break;
            }
            let child = gen.compose(&parent);
            if !seen.insert(child.as_slice().to_vec()) {
                continue;
            }
            let nu = eval(&child);
            evals += 1;
            best = min_candidate(best, (nu, child.clone()));
            if best.0 == 1 {
                return best;
            }
            heap.push(Reverse((nu, depth + 1, child.as_slice().to_vec())));
        }
    }
    best
}

/// Largest accuracy A with `C·A ≤ Q`, i.e. `⌊Q/C⌋`. Both arguments must be
/// at least 1.
pub fn accuracy_budget(c: u32, q: u32) -> u32 {
    assert!(c >= 1 && q >= 1, "accuracy_budget requires C >= 1 and Q >= 1");
    q / c
}

/// The amplitude quantum `ε = 2^{−Q/2}`. Exact for even Q; for odd Q the
/// value carries one rounding of `1/√2`.
pub fn epsilon_from_q(q: u32) -> f64 {
    assert!(q >= 1, "epsilon_from_q requires Q >= 1");
    let half = 0.5f64.powi((q / 2) as i32);
    if q.is_multiple_of(2) {
        half
    } else {
        half * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// The coherent-support bound `|J| = 1/ε² = 2^Q`, kept in exact integer form.
pub fn grid_size_from_q(q: u32) -> u64 {
    assert!((1..=63).contains(&q), "grid_size_from_q requires 1 <= Q <= 63");
    1u64 << q
}
