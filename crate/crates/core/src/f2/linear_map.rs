use super::matrix::{rref_rows, F2Matrix};
use super::vector::{low_mask, F2Vector};
use crate::error::{check_dim, Error, Result};

/// An F2-linear map `F2^domain -> F2^codomain`, stored by the images of the
/// standard basis vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearMap {
    domain: usize,
    codomain: usize,
    columns: Vec<u64>,
}

impl LinearMap {
    pub fn new(domain: usize, codomain: usize, columns: Vec<u64>) -> Result<Self> {
        check_dim(domain, columns.len())?;
        super::subspace::check_ambient(codomain)?;
        super::subspace::check_ambient(domain)?;
        if columns.iter().any(|c| c & !low_mask(codomain) != 0) {
            return Err(Error::InvalidArgument(format!(
                "column image does not fit in F2^{codomain}"
            )));
        }
        Ok(LinearMap { domain, codomain, columns })
    }

    pub fn identity(n: usize) -> Self {
        LinearMap { domain: n, codomain: n, columns: (0..n).map(|i| 1u64 << i).collect() }
    }

    /// The map whose matrix (codomain × domain) is `m`.
    pub fn from_matrix(m: &F2Matrix) -> Result<Self> {
        let columns = (0..m.ncols()).map(|c| m.column(c)).collect();
        LinearMap::new(m.ncols(), m.nrows(), columns)
    }

    pub fn to_matrix(&self) -> F2Matrix {
        let rows = (0..self.codomain)
            .map(|r| {
                self.columns
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, c)| acc | (((c >> r) & 1) << j))
            })
            .collect();
        F2Matrix::new(self.domain, rows).expect("matrix of a valid map")
    }

    #[inline]
    pub fn domain_dim(&self) -> usize {
        self.domain
    }

    #[inline]
    pub fn codomain_dim(&self) -> usize {
        self.codomain
    }

    #[inline]
    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    #[inline]
    pub fn apply_bits(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        let mut x = x & low_mask(self.domain);
        while x != 0 {
            acc ^= self.columns[x.trailing_zeros() as usize];
            x &= x - 1;
        }
        acc
    }

    pub fn apply(&self, x: &F2Vector) -> Result<F2Vector> {
        check_dim(self.domain, x.dim())?;
        Ok(F2Vector::truncated(self.codomain, self.apply_bits(x.bits())))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        check_dim(self.domain, inner.codomain)?;
        let columns = inner.columns.iter().map(|c| self.apply_bits(*c)).collect();
        LinearMap::new(inner.domain, self.codomain, columns)
    }

    pub fn rank(&self) -> usize {
        rref_rows(&self.columns, self.codomain).len()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.domain
    }

    /// Images of every point of the domain, indexed by the point.
    pub fn image_table(&self) -> Vec<u64> {
        let size = 1usize << self.domain;
        let mut out = vec![0u64; size];
        for x in 1..size {
            let low = x.trailing_zeros() as usize;
            out[x] = out[x & (x - 1)] ^ self.columns[low];
        }
        out
    }

    /// Inverse of a square nonsingular map.
    pub fn inverse(&self) -> Result<LinearMap> {
        if self.domain != self.codomain {
            return Err(Error::InvalidArgument("only square maps can be inverted".into()));
        }
        let n = self.domain;
        // augmented rows [A | I] with A in the low n bits
        let a = self.to_matrix();
        let mut rows: Vec<u64> = (0..n).map(|r| a.row_bits()[r] | (1u64 << (n + r))).collect();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| (rows[i] >> c) & 1 == 1) else {
                return Err(Error::InvalidArgument("map is singular".into()));
            };
            rows.swap(c, p);
            let pivot = rows[c];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != c && (*r >> c) & 1 == 1 {
                    *r ^= pivot;
                }
            }
        }
        let inv_rows: Vec<u64> = rows.iter().map(|r| r >> n).collect();
        let inv = LinearMap::from_matrix(&F2Matrix::new(n, inv_rows)?)?;
        if self.compose(&inv)? != LinearMap::identity(n) {
            return Err(Error::InvariantViolated("computed inverse does not invert".into()));
        }
        Ok(inv)
    }
}

/// A square invertible map carried together with its verified inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Nonsingular {
    forward: LinearMap,
    inverse: LinearMap,
}

impl Nonsingular {
    pub fn new(forward: LinearMap) -> Result<Self> {
        let inverse = forward.inverse()?;
        Ok(Nonsingular { forward, inverse })
    }

    pub fn forward(&self) -> &LinearMap {
        &self.forward
    }

    pub fn inverse(&self) -> &LinearMap {
        &self.inverse
    }

    pub fn into_map(self) -> LinearMap {
        self.forward
    }
}
