use crate::error::{Error, Result};
use crate::f2::low_mask;

/// Largest ambient dimension for subspace searches.
pub const MAX_SEARCH_N: usize = 16;

/// A subset of F2^n as a bitset indexed by the little-endian point value.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PointSet {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    ((1usize << n) + 63) / 64
}

impl PointSet {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_SEARCH_N {
            return Err(Error::TooLarge { dim: n, max: MAX_SEARCH_N });
        }
        Ok(PointSet { n, words: vec![0; word_count(n)] })
    }

    pub fn full(n: usize) -> Result<Self> {
        let mut s = Self::empty(n)?;
        s.words.iter_mut().for_each(|w| *w = u64::MAX);
        s.clear_tail();
        Ok(s)
    }

    pub fn from_fn<F: FnMut(u64) -> bool>(n: usize, mut pred: F) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for x in 0..1u64 << n {
            if pred(x) {
                s.insert(x);
            }
        }
        Ok(s)
    }

    pub fn from_points(n: usize, points: &[u64]) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for p in points {
            if p >> n != 0 {
                return Err(Error::InvalidArgument(format!("point {p} outside F2^{n}")));
            }
            s.insert(*p);
        }
        Ok(s)
    }

    /// The set of nonzero points selected by bit `i - 1` of `mask`, for `i ≥ 1`.
    pub fn from_nonzero_mask(n: usize, mask: u64) -> Result<Self> {
        Self::from_fn(n, |x| x != 0 && (mask >> (x - 1)) & 1 == 1)
    }

    fn clear_tail(&mut self) {
        let size = 1usize << self.n;
        if size < 64 {
            self.words[0] &= low_mask(size);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        let mut s = PointSet { n, words };
        s.clear_tail();
        s
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        (self.words[(x >> 6) as usize] >> (x & 63)) & 1 == 1
    }

    pub fn insert(&mut self, x: u64) {
        self.words[(x >> 6) as usize] |= 1 << (x & 63);
    }

    pub fn remove(&mut self, x: u64) {
        self.words[(x >> 6) as usize] &= !(1 << (x & 63));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn complement(&self) -> Self {
        PointSet::from_words(self.n, self.words.iter().map(|w| !w).collect())
    }

    pub fn points(&self) -> Vec<u64> {
        (0..1u64 << self.n).filter(|x| self.contains(*x)).collect()
    }

    pub fn is_superset_of(&self, other: &PointSet) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| b & !a == 0)
    }
}

const SWAP_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// Bitset of `{x : x ^ v ∈ set}` (a translate of the set by `v`).
pub(crate) fn translate(words: &[u64], v: u64) -> Vec<u64> {
    let high = (v >> 6) as usize;
    let low = v & 63;
    (0..words.len())
        .map(|w| {
            let mut x = words.get(w ^ high).copied().unwrap_or(0);
            for (b, mask) in SWAP_MASKS.iter().enumerate() {
                if (low >> b) & 1 == 1 {
                    let s = 1u32 << b;
                    x = ((x & mask) << s) | ((x >> s) & mask);
                }
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translate_matches_pointwise() {
        let s = PointSet::from_fn(8, |x| (x * 37 + 11) % 5 < 2).unwrap();
        for v in [0u64, 1, 5, 63, 64, 200] {
            let t = PointSet::from_words(8, translate(s.words(), v));
            for x in 0u64..256 {
                assert_eq!(t.contains(x), s.contains(x ^ v));
            }
        }
        let small = PointSet::from_points(3, &[1, 6]).unwrap();
        let t = PointSet::from_words(3, translate(small.words(), 3));
        assert_eq!(t.points(), vec![2, 5]);
    }

    #[test]
    fn basic_set_operations() {
        let s = PointSet::from_points(3, &[0, 3]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.complement().len(), 6);
        assert!(PointSet::full(3).unwrap().is_superset_of(&s));
        assert_eq!(PointSet::from_nonzero_mask(2, 0b101).unwrap().points(), vec![1, 3]);
    }
}
