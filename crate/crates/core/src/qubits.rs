//! Qubit subsets and the index bookkeeping for bipartitions.

use crate::error::{Error, Result};

/// A subset of qubit positions `0..n−1`, stored as a bitmask over positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QubitSubset {
    mask: u64,
    n: usize,
}

impl QubitSubset {
    pub fn new(mask: u64, n: usize) -> Result<Self> {
        if n == 0 || n > 63 || mask >= (1u64 << n) {
            return Err(Error::InvalidSubset);
        }
        Ok(Self { mask, n })
    }

    pub fn from_positions(positions: &[usize], n: usize) -> Result<Self> {
        let mut mask = 0u64;
        for &p in positions {
            if p >= n {
                return Err(Error::InvalidSubset);
            }
            mask |= 1 << p;
        }
        Self::new(mask, n)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Proper: neither empty nor the full register.
    pub fn is_proper(&self) -> bool {
        self.mask != 0 && self.mask != (1u64 << self.n) - 1
    }

    pub fn complement(&self) -> Self {
        Self {
            mask: !self.mask & ((1u64 << self.n) - 1),
            n: self.n,
        }
    }

    pub fn contains(&self, position: usize) -> bool {
        position < self.n && (self.mask >> position) & 1 == 1
    }

    /// Member positions in ascending order.
    pub fn positions(&self) -> Vec<usize> {
        (0..self.n).filter(|&p| self.contains(p)).collect()
    }
}

/// Index maps for a bipartition of an n-qubit register into `part` and its
/// complement. Sub-register bit order follows ascending position order, with
/// the lowest position as the most significant bit of the sub-index (matching
/// the global MSB convention).
#[derive(Clone, Debug)]
pub struct Bipartition {
    n: usize,
    part_positions: Vec<usize>,
    comp_positions: Vec<usize>,
}

impl Bipartition {
    pub fn new(part: &QubitSubset) -> Result<Self> {
        if !part.is_proper() {
            return Err(Error::InvalidSubset);
        }
        Ok(Self {
            n: part.n(),
            part_positions: part.positions(),
            comp_positions: part.complement().positions(),
        })
    }

    /// Bipartition of a sub-register given explicit position lists.
    pub fn from_positions(n: usize, part: Vec<usize>, comp: Vec<usize>) -> Self {
        Self {
            n,
            part_positions: part,
            comp_positions: comp,
        }
    }

    pub fn part_dim(&self) -> usize {
        1 << self.part_positions.len()
    }

    pub fn comp_dim(&self) -> usize {
        1 << self.comp_positions.len()
    }

    pub fn part_positions(&self) -> &[usize] {
        &self.part_positions
    }

    pub fn comp_positions(&self) -> &[usize] {
        &self.comp_positions
    }

    /// Split a global basis index into (part index, complement index).
    pub fn split(&self, j: usize) -> (usize, usize) {
        (
            extract_bits(j, &self.part_positions, self.n),
            extract_bits(j, &self.comp_positions, self.n),
        )
    }

    /// Inverse of `split`.
    pub fn fuse(&self, a: usize, c: usize) -> usize {
        deposit_bits(a, &self.part_positions, self.n)
            | deposit_bits(c, &self.comp_positions, self.n)
    }
}

fn extract_bits(j: usize, positions: &[usize], n: usize) -> usize {
    let mut out = 0usize;
    for &p in positions {
        out = (out << 1) | ((j >> (n - 1 - p)) & 1);
    }
    out
}

fn deposit_bits(sub: usize, positions: &[usize], n: usize) -> usize {
    let k = positions.len();
    let mut out = 0usize;
    for (t, &p) in positions.iter().enumerate() {
        let bit = (sub >> (k - 1 - t)) & 1;
        out |= bit << (n - 1 - p);
    }
    out
}

/// Proper bipartitions of the positions in `block`, smallest side first, each
/// side represented once (the lexicographically smaller mask of a
/// half-and-half pair carries the block's first position).
pub fn bipartitions_of(block: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let k = block.len();
    let mut out = Vec::new();
    for size in 1..=k / 2 {
        let mut subsets = subsets_of_size(k, size);
        // Avoid listing both halves of an equal split.
        if 2 * size == k {
            subsets.retain(|s| s.contains(&0));
        }
        for s in subsets {
            let part: Vec<usize> = s.iter().map(|&i| block[i]).collect();
            let comp: Vec<usize> = (0..k).filter(|i| !s.contains(i)).map(|i| block[i]).collect();
            out.push((part, comp));
        }
    }
    out
}

fn subsets_of_size(k: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(start: usize, k: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..k {
            current.push(i);
            rec(i + 1, k, size, current, out);
            current.pop();
        }
    }
    rec(0, k, size, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_and_fuse_roundtrip() {
        let part = QubitSubset::from_positions(&[0, 2], 3).unwrap();
        let bp = Bipartition::new(&part).unwrap();
        for j in 0..8 {
            let (a, c) = bp.split(j);
            assert_eq!(bp.fuse(a, c), j);
        }
        // |101⟩ = index 5: part bits (q0,q2) = (1,1) -> 3, comp bit q1 = 0.
        assert_eq!(bp.split(0b101), (0b11, 0));
    }

    #[test]
    fn complement_partitions_register() {
        let s = QubitSubset::from_positions(&[1], 3).unwrap();
        assert_eq!(s.complement().positions(), vec![0, 2]);
        assert!(s.is_proper());
        assert!(!QubitSubset::new(0, 3).unwrap().is_proper());
        assert!(!QubitSubset::new(0b111, 3).unwrap().is_proper());
    }

    #[test]
    fn bipartition_enumeration_smallest_first() {
        let parts = bipartitions_of(&[0, 1, 2]);
        assert_eq!(parts.len(), 3);
        for (part, comp) in &parts {
            assert_eq!(part.len(), 1);
            assert_eq!(comp.len(), 2);
        }
        // Equal split listed once for even blocks.
        let parts4 = bipartitions_of(&[0, 1, 2, 3]);
        let equal: Vec<_> = parts4.iter().filter(|(p, _)| p.len() == 2).collect();
        assert_eq!(equal.len(), 3);
        assert_eq!(parts4.len(), 4 + 3);
    }
}
