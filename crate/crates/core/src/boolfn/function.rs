use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::error::{check_dim, Error, Result};
use crate::f2::{check_ambient, low_mask, F2Vector, LinearMap, Subspace};

/// A Boolean function `F2^n -> {0,1}` stored as a packed truth table.
///
/// Bit `x` of the table is `f(x)`, where the point `x` is read as a
/// little-endian integer (coordinate 1 is bit 0).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<u64>,
}

fn words_for(n: usize) -> usize {
    ((1usize << n) + 63) / 64
}

impl BooleanFunction {
    pub fn zeros(n: usize) -> Result<Self> {
        check_ambient(n)?;
        Ok(BooleanFunction { n, table: vec![0; words_for(n)] })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        let mut f = Self::zeros(n)?;
        if value {
            f.table.iter_mut().for_each(|w| *w = u64::MAX);
            f.clear_tail();
        }
        Ok(f)
    }

    pub fn from_fn<F: FnMut(u64) -> bool>(n: usize, mut pred: F) -> Result<Self> {
        let mut f = Self::zeros(n)?;
        for x in 0..(1u64 << n) {
            if pred(x) {
                f.table[(x >> 6) as usize] |= 1 << (x & 63);
            }
        }
        Ok(f)
    }

    /// Builds a function from packed table words (bits past `2^n` must be zero).
    pub fn from_words(n: usize, table: Vec<u64>) -> Result<Self> {
        check_ambient(n)?;
        check_dim(words_for(n), table.len())?;
        let f = BooleanFunction { n, table };
        let mut g = f.clone();
        g.clear_tail();
        if g != f {
            return Err(Error::InvalidArgument("table has bits beyond 2^n".into()));
        }
        Ok(f)
    }

    /// Small tables (n ≤ 6) packed into one integer: bit `x` is `f(x)`.
    pub fn from_u64(n: usize, table: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::TooLarge { dim: n, max: 6 });
        }
        Self::from_words(n, vec![table & low_mask(1 << n)])
    }

    /// Indicator of the hyperplane `{x : <x,a> = 0}`.
    pub fn hyperplane(a: &F2Vector) -> Result<Self> {
        let bits = a.bits();
        Self::from_fn(a.dim(), |x| (x & bits).count_ones() % 2 == 0)
    }

    /// The inner-product bent function `x1 x2 + x3 x4 + ...` (n even).
    pub fn bent_inner_product(n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::InvalidArgument("bent functions need an even dimension".into()));
        }
        Self::from_fn(n, |x| {
            (0..n / 2).filter(|i| (x >> (2 * i)) & (x >> (2 * i + 1)) & 1 == 1).count() % 2 == 1
        })
    }

    pub fn indicator_of_subspace(h: &Subspace) -> Result<Self> {
        Self::from_fn(h.ambient_dim(), |x| h.contains_bits(x))
    }

    /// Each value is 1 independently with probability `density`.
    pub fn random<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::InvalidArgument(format!("density {density} outside [0,1]")));
        }
        Self::from_fn(n, |_| rng.gen_bool(density))
    }

    fn clear_tail(&mut self) {
        let size = 1usize << self.n;
        if size < 64 {
            self.table[0] &= low_mask(size);
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn size(&self) -> usize {
        1usize << self.n
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.table
    }

    #[inline]
    pub fn get(&self, x: u64) -> bool {
        (self.table[(x >> 6) as usize] >> (x & 63)) & 1 == 1
    }

    pub fn eval(&self, x: &F2Vector) -> Result<bool> {
        check_dim(self.n, x.dim())?;
        Ok(self.get(x.bits()))
    }

    pub fn set(&mut self, x: u64, value: bool) {
        let w = &mut self.table[(x >> 6) as usize];
        if value {
            *w |= 1 << (x & 63);
        } else {
            *w &= !(1 << (x & 63));
        }
    }

    pub fn ones(&self) -> u64 {
        self.table.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Exact density `ones / 2^n`.
    pub fn density(&self) -> BigRational {
        BigRational::new(BigInt::from(self.ones()), BigInt::from(1u64) << self.n)
    }

    pub fn complement(&self) -> Self {
        let mut f = BooleanFunction { n: self.n, table: self.table.iter().map(|w| !w).collect() };
        f.clear_tail();
        f
    }

    pub fn is_constant(&self) -> bool {
        let ones = self.ones();
        ones == 0 || ones == self.size() as u64
    }

    /// Number of points where `self` and `other` differ.
    pub fn hamming(&self, other: &BooleanFunction) -> Result<u64> {
        check_dim(self.n, other.n)?;
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum())
    }

    /// Restriction to the coset `g + H`, read in the canonical basis of `H`:
    /// `out(y) = f(g + Σ y_i b_i)`.
    pub fn restrict(&self, h: &Subspace, g: &F2Vector) -> Result<BooleanFunction> {
        check_dim(self.n, h.ambient_dim())?;
        check_dim(self.n, g.dim())?;
        Ok(self.restrict_bits(h, g.bits()))
    }

    pub(crate) fn restrict_bits(&self, h: &Subspace, g: u64) -> BooleanFunction {
        let d = h.dim();
        let basis = h.basis_bits();
        let mut out = BooleanFunction { n: d, table: vec![0; words_for(d)] };
        let mut cur = g;
        if self.get(cur) {
            out.table[0] |= 1;
        }
        // walk y in Gray-code order but write each value at its own index
        let mut y = 0u64;
        for t in 1..(1u64 << d) {
            let i = t.trailing_zeros() as usize;
            cur ^= basis[i];
            y ^= 1 << i;
            if self.get(cur) {
                out.table[(y >> 6) as usize] |= 1 << (y & 63);
            }
        }
        out
    }

    /// Number of ones of `f` on the coset `g + H`.
    pub(crate) fn ones_on_coset(&self, h: &Subspace, g: u64) -> u64 {
        let basis = h.basis_bits();
        let mut cur = g;
        let mut ones = self.get(cur) as u64;
        for t in 1..(1u64 << h.dim()) {
            cur ^= basis[t.trailing_zeros() as usize];
            ones += self.get(cur) as u64;
        }
        ones
    }

    /// Precomposition `x -> f(L x)` for `L: F2^m -> F2^n`.
    pub fn compose_linear(&self, l: &LinearMap) -> Result<BooleanFunction> {
        check_dim(self.n, l.codomain_dim())?;
        let m = l.domain_dim();
        check_ambient(m)?;
        let images = l.image_table();
        Self::from_fn(m, |x| self.get(images[x as usize]))
    }

    /// Packs the whole table into one integer when `n ≤ 6`.
    pub fn to_u64(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.table[0])
    }

    /// Support as a list of points.
    pub fn support(&self) -> Vec<u64> {
        (0..self.size() as u64).filter(|x| self.get(*x)).collect()
    }
}

/// Exact normalized Hamming distance.
pub fn distance(f: &BooleanFunction, g: &BooleanFunction) -> Result<BigRational> {
    let d = f.hamming(g)?;
    Ok(BigRational::new(BigInt::from(d), BigInt::from(1u64) << f.n()))
}
