use rayon::prelude::*;

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::f2::F2Matrix;

/// Largest number of free bits enumerated by a kernel walk.
pub const MAX_KERNEL_BITS: usize = 26;

const CHUNK_BITS: usize = 6;

/// Enumerates the tuples `x_i = u_i + B(Σ_t K[i][t] w_t)` for all
/// `w ∈ (F2^D)^c`, where `K` is a kernel basis of the system matrix and `B`
/// maps F2^D into F2^n.
///
/// The walk flips one bit of `w` at a time (Gray code, coordinates of `w_0`
/// first), updating the tuple and its value pattern incrementally.
pub(crate) struct KernelWalk<'a> {
    f: &'a BooleanFunction,
    basis: Vec<u64>,
    offsets: Vec<u64>,
    rows: Vec<u64>,
    cols: Vec<u64>,
}

impl<'a> KernelWalk<'a> {
    pub(crate) fn new(
        f: &'a BooleanFunction,
        matrix: &F2Matrix,
        basis: Vec<u64>,
        offsets: Vec<u64>,
    ) -> Result<Self> {
        let kernel = matrix.kernel_basis();
        let k = matrix.ncols();
        let c = kernel.ncols();
        let bits = basis.len() * c;
        if bits > MAX_KERNEL_BITS {
            return Err(Error::BudgetExceeded(format!(
                "kernel enumeration needs {bits} free bits, limit is {MAX_KERNEL_BITS}"
            )));
        }
        let rows: Vec<u64> = kernel.row_bits().to_vec();
        let cols = (0..c)
            .map(|t| (0..k).fold(0u64, |a, i| a | (((rows[i] >> t) & 1) << i)))
            .collect();
        Ok(KernelWalk { f, basis, offsets, rows, cols })
    }

    /// The full standard basis of F2^n with zero offsets: every solution of `Mx = 0`.
    pub(crate) fn full(f: &'a BooleanFunction, matrix: &F2Matrix) -> Result<Self> {
        let basis = (0..f.n()).map(|j| 1u64 << j).collect();
        Self::new(f, matrix, basis, vec![0; matrix.ncols()])
    }

    pub(crate) fn total_bits(&self) -> usize {
        self.basis.len() * self.cols.len()
    }

    fn start(&self, w: u64) -> (Vec<u64>, u64) {
        let d = self.basis.len();
        let ws: Vec<u64> = (0..self.cols.len())
            .map(|t| {
                let coeffs = (w >> (t * d)) & ((1u64 << d) - 1);
                (0..d).filter(|j| (coeffs >> j) & 1 == 1).fold(0u64, |a, j| a ^ self.basis[j])
            })
            .collect();
        let mut pattern = 0u64;
        let xs: Vec<u64> = self
            .rows
            .iter()
            .zip(&self.offsets)
            .enumerate()
            .map(|(i, (row, u))| {
                let x = (0..ws.len()).filter(|t| (row >> t) & 1 == 1).fold(*u, |a, t| a ^ ws[t]);
                pattern |= (self.f.get(x) as u64) << i;
                x
            })
            .collect();
        (xs, pattern)
    }

    /// Visits every point whose high bits equal `prefix`; stops early when `visit` returns true.
    fn walk_chunk<V: FnMut(u64, &[u64]) -> bool>(&self, prefix: u64, low_bits: usize, mut visit: V) -> bool {
        let d = self.basis.len();
        let (mut xs, mut pattern) = self.start(prefix << low_bits);
        if visit(pattern, &xs) {
            return true;
        }
        for g in 1u64..(1u64 << low_bits) {
            let b = g.trailing_zeros() as usize;
            let (t, j) = (b / d, b % d);
            let delta = self.basis[j];
            let mut affected = self.cols[t];
            while affected != 0 {
                let i = affected.trailing_zeros() as usize;
                xs[i] ^= delta;
                let bit = 1u64 << i;
                if self.f.get(xs[i]) {
                    pattern |= bit;
                } else {
                    pattern &= !bit;
                }
                affected &= affected - 1;
            }
            if visit(pattern, &xs) {
                return true;
            }
        }
        false
    }

    fn split(&self) -> (usize, usize) {
        let bits = self.total_bits();
        let high = if bits >= 2 * CHUNK_BITS { CHUNK_BITS } else { 0 };
        (high, bits - high)
    }

    /// Number of enumerated tuples whose pattern is accepted.
    pub(crate) fn count<A: Fn(u64) -> bool + Sync>(&self, accept: A) -> u64 {
        let (high, low) = self.split();
        (0..1u64 << high)
            .into_par_iter()
            .map(|prefix| {
                let mut n = 0u64;
                self.walk_chunk(prefix, low, |p, _| {
                    n += accept(p) as u64;
                    false
                });
                n
            })
            .sum()
    }

    /// Per-pattern tally over all `2^k` patterns (requires small `k`).
    pub(crate) fn histogram(&self) -> Vec<u64> {
        let k = self.rows.len();
        let (high, low) = self.split();
        (0..1u64 << high)
            .into_par_iter()
            .map(|prefix| {
                let mut h = vec![0u64; 1 << k];
                self.walk_chunk(prefix, low, |p, _| {
                    h[p as usize] += 1;
                    false
                });
                h
            })
            .reduce(
                || vec![0u64; 1 << k],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    }

    /// First tuple in enumeration order whose pattern is accepted.
    pub(crate) fn first<A: Fn(u64) -> bool + Sync>(&self, accept: A) -> Option<(u64, Vec<u64>)> {
        let (high, low) = self.split();
        (0..1u64 << high).into_par_iter().find_map_first(|prefix| {
            let mut found = None;
            self.walk_chunk(prefix, low, |p, xs| {
                if accept(p) {
                    found = Some((p, xs.to_vec()));
                    true
                } else {
                    false
                }
            });
            found
        })
    }
}
