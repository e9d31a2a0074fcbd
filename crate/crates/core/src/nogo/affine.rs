use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// `y = M·x ⊕ c` over GF(2). Bit vectors are packed little-endian into a
/// `u32`; row `i` of `M` is a mask over the input bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    in_bits: usize,
    rows: Vec<u32>,
    offset: u32,
}

impl AffineMap {
    pub const MAX_BITS: usize = 24;

    /// `None` if a row or the offset has bits beyond the declared widths.
    pub fn new(in_bits: usize, rows: Vec<u32>, offset: u32) -> Option<Self> {
        let in_mask = mask(in_bits);
        let ok = in_bits <= Self::MAX_BITS
            && rows.len() <= Self::MAX_BITS
            && rows.iter().all(|&r| r & !in_mask == 0)
            && offset & !mask(rows.len()) == 0;
        ok.then_some(Self { in_bits, rows, offset })
    }

    /// The `index`-th map in a fixed enumeration of all
    /// `2^{out·(in+1)}` maps: output `i` takes bits `i·(in+1) ..` of
    /// `index`, the input mask first and the offset bit last.
    pub fn from_index(in_bits: usize, out_bits: usize, index: u64) -> Self {
        let stride = in_bits + 1;
        let mut rows = Vec::with_capacity(out_bits);
        let mut offset = 0;
        for i in 0..out_bits {
            let chunk = (index >> (i * stride)) as u32;
            rows.push(chunk & mask(in_bits));
            offset |= ((chunk >> in_bits) & 1) << i;
        }
        Self { in_bits, rows, offset }
    }

    pub fn in_bits(&self) -> usize {
        self.in_bits
    }

    pub fn out_bits(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .fold(self.offset, |y, (i, &r)| y ^ (((r & x).count_ones() & 1) << i))
    }

    /// Rank of `M` over GF(2).
    pub fn rank(&self) -> usize {
        gf2_rank(&self.rows)
    }

    /// Every output reachable from some input, in increasing order.
    pub fn image(&self) -> Vec<u32> {
        let mut seen: Vec<u32> = (0..1u32 << self.in_bits).map(|x| self.apply(x)).collect();
        seen.sort_unstable();
        seen.dedup();
        seen
    }
}

pub(crate) fn mask(bits: usize) -> u32 {
    if bits >= 32 {
        u32::MAX
    } else {
        (1u32 << bits) - 1
    }
}

pub fn gf2_rank(rows: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &r in rows {
        let reduced = basis.iter().fold(r, |v, &b| v.min(v ^ b));
        if reduced != 0 {
            basis.push(reduced);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Arbitrary function from a finite set of `u32` keys to `out_bits`-bit
/// values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthTable {
    pub out_bits: usize,
    pub entries: BTreeMap<u32, u32>,
}

impl TruthTable {
    /// The `index`-th table over `domain`: entry `j` takes bits
    /// `j·out_bits ..` of `index`.
    pub fn from_index(domain: &[u32], out_bits: usize, index: u64) -> Self {
        let entries = domain
            .iter()
            .enumerate()
            .map(|(j, &k)| (k, ((index >> (j * out_bits)) as u32) & mask(out_bits)))
            .collect();
        Self { out_bits, entries }
    }

    /// `None` outside the domain.
    pub fn get(&self, key: u32) -> Option<u32> {
        self.entries.get(&key).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_is_affine() {
        let m = AffineMap::new(3, vec![0b011, 0b100], 0b10).unwrap();
        assert_eq!(m.apply(0), 0b10);
        assert_eq!(m.apply(0b001), 0b11);
        assert_eq!(m.apply(0b011), 0b10);
        assert_eq!(m.apply(0b100), 0b00);
        for x in 0..8 {
            for y in 0..8 {
                assert_eq!(m.apply(x ^ y) ^ m.apply(0), m.apply(x) ^ m.apply(y));
            }
        }
    }

    #[test]
    fn widths_are_checked() {
        assert!(AffineMap::new(2, vec![0b100], 0).is_none());
        assert!(AffineMap::new(2, vec![0b01], 0b10).is_none());
    }

    #[test]
    fn enumeration_is_a_bijection() {
        let (n, m) = (2, 2);
        let all: std::collections::HashSet<AffineMap> =
            (0..1u64 << (m * (n + 1))).map(|i| AffineMap::from_index(n, m, i)).collect();
        assert_eq!(all.len(), 64);
    }

    #[test]
    fn image_size_is_two_to_rank() {
        for i in 0..1u64 << 8 {
            let m = AffineMap::from_index(3, 2, i);
            assert_eq!(m.image().len(), 1 << m.rank());
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(gf2_rank(&[]), 0);
        assert_eq!(gf2_rank(&[0b11, 0b01, 0b10]), 2);
        assert_eq!(gf2_rank(&[0, 0]), 0);
    }
}
