use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

/// Largest length of a packed vector (matrix rows use the same packing).
pub const MAX_VECTOR_DIM: usize = 64;

/// Mask with the low `dim` bits set.
#[inline]
pub fn low_mask(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

/// A vector of F2^dim packed little-endian: coordinate `i` (0-based) is bit `i`.
///
/// The integer value of the packing is the point's index in every truth table
/// of the crate. Bits at or beyond `dim` are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct F2Vector {
    dim: u8,
    bits: u64,
}

impl F2Vector {
    pub fn new(dim: usize, bits: u64) -> Result<Self> {
        if dim > MAX_VECTOR_DIM {
            return Err(Error::TooLarge { dim, max: MAX_VECTOR_DIM });
        }
        if bits & !low_mask(dim) != 0 {
            return Err(Error::InvalidArgument(format!(
                "bits {bits:#x} do not fit in dimension {dim}"
            )));
        }
        Ok(F2Vector { dim: dim as u8, bits })
    }

    /// Builds a vector, silently dropping bits beyond `dim`.
    pub fn truncated(dim: usize, bits: u64) -> Self {
        assert!(dim <= MAX_VECTOR_DIM, "vector dimension {dim} too large");
        F2Vector { dim: dim as u8, bits: bits & low_mask(dim) }
    }

    pub fn zero(dim: usize) -> Self {
        Self::truncated(dim, 0)
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim, "unit index {i} out of range for dimension {dim}");
        Self::truncated(dim, 1 << i)
    }

    /// Parses a bit string with coordinate 1 first, e.g. `"110"` = e1 + e2.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() > MAX_VECTOR_DIM {
            return Err(Error::TooLarge { dim: s.len(), max: MAX_VECTOR_DIM });
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "invalid bit '{other}' at position {}",
                        i + 1
                    )))
                }
            }
        }
        Self::new(s.len(), bits)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn with(mut self, i: usize, value: bool) -> Self {
        assert!(i < self.dim(), "coordinate {i} out of range");
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
        self
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Inner product over F2.
    #[inline]
    pub fn dot(&self, other: &F2Vector) -> bool {
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    /// Lexicographic order with coordinate 1 most significant.
    pub fn lex_cmp(&self, other: &F2Vector) -> Ordering {
        lex_cmp_bits(self.bits, other.bits)
    }
}

/// Lexicographic comparison of packed vectors, coordinate 1 (bit 0) first.
#[inline]
pub fn lex_cmp_bits(a: u64, b: u64) -> Ordering {
    a.reverse_bits().cmp(&b.reverse_bits())
}

impl Add for F2Vector {
    type Output = F2Vector;

    fn add(self, rhs: F2Vector) -> F2Vector {
        assert_eq!(self.dim, rhs.dim, "adding vectors of different dimension");
        F2Vector { dim: self.dim, bits: self.bits ^ rhs.bits }
    }
}

impl AddAssign for F2Vector {
    fn add_assign(&mut self, rhs: F2Vector) {
        *self = *self + rhs;
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}
