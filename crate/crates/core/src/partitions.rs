//! Streaming enumeration of perfect matchings of `0..2n`.
//!
//! Partitions come out in lexicographic order: the smallest unpaired position
//! is paired with each remaining position in increasing order. The sign of a
//! partition `{(i1,j1),…,(in,jn)}` is the parity of the permutation
//! `0,1,…,2n−1 → i1,j1,…,in,jn`; it is built up one pair at a time, since
//! pairing the first free position with the `k`-th free position after it
//! moves the partner across `k` others.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Upper limit imposed by the bitmask representation.
pub const MAX_POSITIONS: usize = 62;

/// One perfect matching with its fermionic sign. Bosonic consumers ignore
/// the sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPartition {
    pub pairs: Vec<(usize, usize)>,
    pub sign: i8,
}

/// Lending-style cursor over all pair partitions; also an [`Iterator`] that
/// clones each partition out.
#[derive(Debug, Clone)]
pub struct PairPartitions {
    n_levels: usize,
    floor: usize,
    avail: Vec<u64>,
    partner: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    level_sign: Vec<i8>,
    started: bool,
    done: bool,
}

impl PairPartitions {
    /// All partitions of `0..n_positions` into pairs.
    pub fn new(n_positions: usize) -> Result<Self> {
        Self::build(n_positions, None)
    }

    /// Only the partitions in which position 0 is paired with `partner`.
    /// The sub-streams for `partner = 1..n` are disjoint and together give
    /// [`PairPartitions::new`] in the same order.
    pub fn with_first_partner(n_positions: usize, partner: usize) -> Result<Self> {
        if partner == 0 || partner >= n_positions {
            return Err(Error::ShapeError(format!(
                "first partner {partner} out of range for {n_positions} positions"
            )));
        }
        Self::build(n_positions, Some(partner))
    }

    fn build(n_positions: usize, first: Option<usize>) -> Result<Self> {
        if n_positions % 2 == 1 {
            return Err(Error::OddLength(n_positions));
        }
        if n_positions > MAX_POSITIONS {
            return Err(Error::ShapeError(format!(
                "at most {MAX_POSITIONS} positions supported, got {n_positions}"
            )));
        }
        let n_levels = n_positions / 2;
        let full = (1u64 << n_positions) - 1;
        let mut s = PairPartitions {
            n_levels,
            floor: 0,
            avail: vec![0; n_levels + 1],
            partner: vec![0; n_levels],
            pairs: vec![(0, 0); n_levels],
            level_sign: vec![1; n_levels],
            started: false,
            done: false,
        };
        s.avail[0] = full;
        if let Some(p) = first {
            s.set_level(0, p);
            s.floor = 1;
        }
        Ok(s)
    }

    fn set_level(&mut self, level: usize, partner: usize) {
        let avail = self.avail[level];
        let first = avail.trailing_zeros() as usize;
        let between = avail & !(1u64 << first) & ((1u64 << partner) - 1);
        self.partner[level] = partner;
        self.pairs[level] = (first, partner);
        self.level_sign[level] = if between.count_ones() % 2 == 0 { 1 } else { -1 };
        self.avail[level + 1] = avail & !(1u64 << first) & !(1u64 << partner);
    }

    fn descend(&mut self, from: usize) {
        for level in from..self.n_levels {
            let avail = self.avail[level];
            let first = avail.trailing_zeros();
            let rest = avail & !(1u64 << first);
            self.set_level(level, rest.trailing_zeros() as usize);
        }
    }

    /// Moves to the next partition. Returns `false` once exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            self.descend(self.floor);
            return true;
        }
        let mut level = self.n_levels;
        while level > self.floor {
            level -= 1;
            let avail = self.avail[level];
            let first = avail.trailing_zeros();
            let rest = avail & !(1u64 << first);
            let above = rest & !((2u64 << self.partner[level]) - 1);
            if above != 0 {
                self.set_level(level, above.trailing_zeros() as usize);
                self.descend(level + 1);
                return true;
            }
        }
        self.done = true;
        false
    }

    /// Pairs of the current partition (valid after `advance` returned true).
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Fermionic sign of the current partition.
    pub fn sign(&self) -> i8 {
        self.level_sign.iter().product()
    }
}

impl Iterator for PairPartitions {
    type Item = PairPartition;

    fn next(&mut self) -> Option<PairPartition> {
        if self.advance() {
            Some(PairPartition {
                pairs: self.pairs.clone(),
                sign: self.sign(),
            })
        } else {
            None
        }
    }
}

/// Stream of all pair partitions of `0..n_positions`.
pub fn enumerate_pair_partitions(n_positions: usize) -> Result<PairPartitions> {
    PairPartitions::new(n_positions)
}

/// `(2n−1)!!` for `n_positions = 2n`; 1 for zero positions.
pub fn pairing_count(n_positions: usize) -> u64 {
    assert!(n_positions % 2 == 0, "pairing_count needs an even argument");
    (1..n_positions as u64).step_by(2).product()
}

/// Number of involutions of `n` elements: `I(n) = I(n−1) + (n−1) I(n−2)`.
pub fn involution_number(n: usize) -> u64 {
    let (mut prev, mut cur) = (1u64, 1u64);
    for k in 2..=n as u64 {
        let next = cur + (k - 1) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Expected number of Wick terms with exactly `k` contractions in a product
/// of `n` operators: `C(n, 2k)·(2k−1)!!`.
pub fn terms_with_contractions(n: usize, k: usize) -> u64 {
    if 2 * k > n {
        return 0;
    }
    binomial(n, 2 * k) * pairing_count(2 * k)
}

/// Pairwise (tree) reduction with a fixed shape, so any evaluation that
/// produces the same leaves gets a bit-identical sum.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n => {
            let (l, r) = values.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

/// `Σ_P sign(P) Π_{(i,j)∈P} value(i,j)` over all pair partitions of
/// `0..n_positions`.
///
/// The stream is split by the partner of position 0; each chunk is summed in
/// enumeration order and the chunk sums are combined with [`pairwise_sum`].
/// [`signed_pairing_sum_par`] uses the same chunks, so both agree bit for bit.
pub fn signed_pairing_sum<F>(n_positions: usize, fermionic: bool, value: F) -> Result<Complex64>
where
    F: Fn(usize, usize) -> Complex64,
{
    if n_positions % 2 == 1 {
        return Err(Error::OddLength(n_positions));
    }
    if n_positions == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let chunks: Result<Vec<Complex64>> = (1..n_positions)
        .map(|p| chunk_sum(n_positions, p, fermionic, &value))
        .collect();
    Ok(pairwise_sum(&chunks?))
}

/// Parallel version of [`signed_pairing_sum`] with identical rounding.
pub fn signed_pairing_sum_par<F>(n_positions: usize, fermionic: bool, value: F) -> Result<Complex64>
where
    F: Fn(usize, usize) -> Complex64 + Sync,
{
    use rayon::prelude::*;
    if n_positions % 2 == 1 {
        return Err(Error::OddLength(n_positions));
    }
    if n_positions == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let chunks: Result<Vec<Complex64>> = (1..n_positions)
        .into_par_iter()
        .map(|p| chunk_sum(n_positions, p, fermionic, &value))
        .collect();
    Ok(pairwise_sum(&chunks?))
}

fn chunk_sum<F>(n_positions: usize, first_partner: usize, fermionic: bool, value: &F) -> Result<Complex64>
where
    F: Fn(usize, usize) -> Complex64,
{
    let mut cursor = PairPartitions::with_first_partner(n_positions, first_partner)?;
    let mut acc = Complex64::new(0.0, 0.0);
    while cursor.advance() {
        let mut prod = Complex64::new(1.0, 0.0);
        for &(i, j) in cursor.pairs() {
            prod *= value(i, j);
        }
        if fermionic && cursor.sign() < 0 {
            acc -= prod;
        } else {
            acc += prod;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parity;

    #[test]
    fn two_positions() {
        let all: Vec<_> = PairPartitions::new(2).unwrap().collect();
        assert_eq!(
            all,
            vec![PairPartition {
                pairs: vec![(0, 1)],
                sign: 1
            }]
        );
    }

    #[test]
    fn four_positions_signs() {
        let all: Vec<_> = PairPartitions::new(4).unwrap().collect();
        let pairs: Vec<_> = all.iter().map(|p| (p.pairs.clone(), p.sign)).collect();
        assert_eq!(
            pairs,
            vec![
                (vec![(0, 1), (2, 3)], 1),
                (vec![(0, 2), (1, 3)], -1),
                (vec![(0, 3), (1, 2)], 1),
            ]
        );
    }

    #[test]
    fn counts_match_double_factorial() {
        for n in (0..=12).step_by(2) {
            let count = PairPartitions::new(n).unwrap().count() as u64;
            assert_eq!(count, pairing_count(n), "n = {n}");
        }
        assert_eq!(PairPartitions::new(8).unwrap().count(), 105);
    }

    #[test]
    fn odd_is_rejected() {
        assert!(matches!(PairPartitions::new(3), Err(Error::OddLength(3))));
    }

    #[test]
    fn signs_match_inversion_parity() {
        for p in PairPartitions::new(8).unwrap() {
            let flat: Vec<usize> = p.pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
            assert_eq!(p.sign, parity(&flat).unwrap(), "{:?}", p.pairs);
        }
    }

    #[test]
    fn sub_streams_concatenate_to_full_stream() {
        let full: Vec<_> = PairPartitions::new(8).unwrap().collect();
        let mut joined = Vec::new();
        for partner in 1..8 {
            joined.extend(PairPartitions::with_first_partner(8, partner).unwrap());
        }
        assert_eq!(full, joined);
    }

    #[test]
    fn lexicographic_order() {
        let all: Vec<_> = PairPartitions::new(6).unwrap().map(|p| p.pairs).collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn counting_helpers() {
        let inv: Vec<u64> = (0..8).map(involution_number).collect();
        assert_eq!(inv, vec![1, 1, 2, 4, 10, 26, 76, 232]);
        assert_eq!(involution_number(12), 140152);
        assert_eq!(pairing_count(16), 2027025);
        assert_eq!(binomial(6, 2), 15);
        for n in 0..12 {
            let total: u64 = (0..=n / 2).map(|k| terms_with_contractions(n, k)).sum();
            assert_eq!(total, involution_number(n));
        }
    }
}
