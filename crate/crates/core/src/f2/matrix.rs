use std::fmt;

use super::vector::{low_mask, F2Vector, MAX_VECTOR_DIM};
use crate::error::{check_dim, Error, Result};

/// Dense matrix over F2 with rows packed into `u64` words (column `j` is bit `j`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<u64>,
}

impl F2Matrix {
    pub fn new(cols: usize, rows: Vec<u64>) -> Result<Self> {
        if cols > MAX_VECTOR_DIM {
            return Err(Error::TooLarge { dim: cols, max: MAX_VECTOR_DIM });
        }
        let mask = low_mask(cols);
        if let Some(r) = rows.iter().find(|r| **r & !mask != 0) {
            return Err(Error::InvalidArgument(format!(
                "row {r:#x} does not fit in {cols} columns"
            )));
        }
        Ok(F2Matrix { cols, rows })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix::new(cols, vec![0; rows]).expect("zero matrix")
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix::new(n, (0..n).map(|i| 1u64 << i).collect()).expect("identity")
    }

    pub fn from_vectors(cols: usize, rows: &[F2Vector]) -> Result<Self> {
        for r in rows {
            check_dim(cols, r.dim())?;
        }
        F2Matrix::new(cols, rows.iter().map(|r| r.bits()).collect())
    }

    /// Parses rows written as bit strings, coordinate 1 first.
    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| F2Vector::parse_bits(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let cols = match parsed.first() {
            Some(v) => v.dim(),
            None => return Err(Error::InvalidArgument("matrix has no rows".into())),
        };
        F2Matrix::from_vectors(cols, &parsed)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row_bits(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> F2Vector {
        F2Vector::truncated(self.cols, self.rows[i])
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.rows[r] >> c) & 1 == 1
    }

    pub fn column(&self, c: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, r)| acc | (((r >> c) & 1) << i))
    }

    pub fn transpose(&self) -> F2Matrix {
        let cols: Vec<u64> = (0..self.cols).map(|c| self.column(c)).collect();
        F2Matrix::new(self.nrows(), cols).expect("transpose of a valid matrix")
    }

    pub fn mul_vec(&self, v: &F2Vector) -> Result<F2Vector> {
        check_dim(self.cols, v.dim())?;
        let bits = self
            .rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, r)| acc | ((((r & v.bits()).count_ones() & 1) as u64) << i));
        Ok(F2Vector::truncated(self.nrows(), bits))
    }

    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        check_dim(self.cols, other.nrows())?;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..self.cols)
                    .filter(|c| (r >> c) & 1 == 1)
                    .fold(0u64, |acc, c| acc ^ other.rows[c])
            })
            .collect();
        F2Matrix::new(other.cols, rows)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| *r == 0)
    }

    /// Reduced row-echelon form with zero rows dropped, and the rank.
    ///
    /// Pivots are the lowest set column of each row, rows sorted by pivot, and
    /// each pivot column is zero outside its own row.
    pub fn rref(&self) -> (F2Matrix, usize) {
        let rows = rref_rows(&self.rows, self.cols);
        let rank = rows.len();
        (F2Matrix { cols: self.cols, rows }, rank)
    }

    pub fn rank(&self) -> usize {
        rref_rows(&self.rows, self.cols).len()
    }

    /// Pivot columns of the reduced form, one per nonzero row.
    pub fn pivots(&self) -> Vec<usize> {
        rref_rows(&self.rows, self.cols)
            .iter()
            .map(|r| r.trailing_zeros() as usize)
            .collect()
    }

    /// Basis of the right kernel as the columns of a `cols × (cols − rank)` matrix.
    ///
    /// Column `t` is the solution with the `t`-th free (non-pivot) coordinate set
    /// to one and the other free coordinates zero.
    pub fn kernel_basis(&self) -> F2Matrix {
        let reduced = rref_rows(&self.rows, self.cols);
        let pivots: Vec<usize> = reduced.iter().map(|r| r.trailing_zeros() as usize).collect();
        let pivot_mask = pivots.iter().fold(0u64, |m, p| m | (1 << p));
        let free: Vec<usize> = (0..self.cols).filter(|c| pivot_mask >> c & 1 == 0).collect();
        let mut kernel_rows = vec![0u64; self.cols];
        for (t, &fc) in free.iter().enumerate() {
            kernel_rows[fc] |= 1 << t;
            for (row, &p) in reduced.iter().zip(&pivots) {
                if (row >> fc) & 1 == 1 {
                    kernel_rows[p] |= 1 << t;
                }
            }
        }
        F2Matrix { cols: free.len(), rows: kernel_rows }
    }

    pub fn rowspace_contains(&self, v: &F2Vector) -> Result<bool> {
        check_dim(self.cols, v.dim())?;
        let reduced = rref_rows(&self.rows, self.cols);
        Ok(reduce_against(&reduced, v.bits()) == 0)
    }

    /// All `2^rank` elements of the row space, as packed rows.
    pub fn rowspace_elements(&self) -> Vec<u64> {
        span_elements(&rref_rows(&self.rows, self.cols))
    }

    pub fn to_row_strings(&self) -> Vec<String> {
        (0..self.nrows()).map(|i| self.row(i).to_string()).collect()
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_row_strings().join(","))
    }
}

/// Gauss–Jordan elimination on packed rows; returns the nonzero reduced rows.
pub(crate) fn rref_rows(rows: &[u64], cols: usize) -> Vec<u64> {
    let mut work: Vec<u64> = rows.to_vec();
    let mut rank = 0;
    for c in 0..cols {
        let bit = 1u64 << c;
        let Some(p) = (rank..work.len()).find(|&i| work[i] & bit != 0) else {
            continue;
        };
        work.swap(rank, p);
        let pivot_row = work[rank];
        for (i, r) in work.iter_mut().enumerate() {
            if i != rank && *r & bit != 0 {
                *r ^= pivot_row;
            }
        }
        rank += 1;
    }
    work.truncate(rank);
    work
}

/// Clears the pivot bits of `v` using reduced rows; zero iff `v` is in their span.
#[inline]
pub(crate) fn reduce_against(reduced: &[u64], mut v: u64) -> u64 {
    for r in reduced {
        let p = r.trailing_zeros();
        if (v >> p) & 1 == 1 {
            v ^= r;
        }
    }
    v
}

/// Enumerates the span of `basis` in coefficient-index order.
pub(crate) fn span_elements(basis: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(1 << basis.len());
    out.push(0);
    for b in basis {
        let len = out.len();
        for i in 0..len {
            out.push(out[i] ^ b);
        }
    }
    out
}
