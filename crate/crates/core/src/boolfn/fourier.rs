use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::function::BooleanFunction;
use crate::error::{Error, Result};
use crate::f2::F2Vector;

/// An exact dyadic rational `num / 2^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    pub num: i64,
    pub exp: u32,
}

impl Dyadic {
    pub fn new(num: i64, exp: u32) -> Self {
        Dyadic { num, exp }
    }

    pub fn zero() -> Self {
        Dyadic { num: 0, exp: 0 }
    }

    pub fn abs(self) -> Self {
        Dyadic { num: self.num.abs(), exp: self.exp }
    }

    /// Lowest-terms form.
    pub fn reduced(self) -> Self {
        if self.num == 0 {
            return Dyadic::zero();
        }
        let shift = self.num.trailing_zeros().min(self.exp);
        Dyadic { num: self.num >> shift, exp: self.exp - shift }
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(1u8) << self.exp)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / 2f64.powi(self.exp as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = (self.num as i128) << (e - self.exp);
        let b = (other.num as i128) << (e - other.exp);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.exp == 0 {
            write!(f, "{}", r.num)
        } else {
            write!(f, "{}/{}", r.num, 1u64 << r.exp)
        }
    }
}

/// Exact Fourier spectrum: `f̂(α) = numerators[α] / 2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierSpectrum {
    n: usize,
    numerators: Vec<i64>,
}

impl FourierSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn numerators(&self) -> &[i64] {
        &self.numerators
    }

    pub fn coefficient(&self, alpha: u64) -> Dyadic {
        Dyadic::new(self.numerators[alpha as usize], self.n as u32)
    }

    /// `Σ_α num(α)^2`, which equals `2^n · ones` for a Boolean function.
    pub fn energy(&self) -> i128 {
        self.numerators.iter().map(|v| (*v as i128) * (*v as i128)).sum()
    }

    /// Index of the largest `|num(α)|` over `α ≠ 0`, smallest index on ties.
    pub fn argmax_nontrivial(&self) -> Option<(u64, i64)> {
        let mut best: Option<(u64, i64)> = None;
        for (a, v) in self.numerators.iter().enumerate().skip(1) {
            if best.map_or(true, |(_, b)| v.abs() > b) {
                best = Some((a as u64, v.abs()));
            }
        }
        best
    }

    /// Inverse transform: recovers `2^n · f(x)` pointwise.
    pub fn inverse_scaled(&self) -> Vec<i64> {
        let mut v = self.numerators.clone();
        butterfly(&mut v);
        v
    }
}

const PARALLEL_MIN_LEN: usize = 1 << 14;

fn butterfly(v: &mut [i64]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        let step = |chunk: &mut [i64]| {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        };
        if len >= PARALLEL_MIN_LEN {
            v.par_chunks_mut(2 * h).for_each(step);
        } else {
            v.chunks_mut(2 * h).for_each(step);
        }
        h *= 2;
    }
}

/// Fast Walsh–Hadamard transform of the 0/1 table, in `O(n 2^n)` integer steps.
pub fn wht(f: &BooleanFunction) -> FourierSpectrum {
    let mut v: Vec<i64> = (0..f.size() as u64).map(|x| f.get(x) as i64).collect();
    butterfly(&mut v);
    FourierSpectrum { n: f.n(), numerators: v }
}

/// Largest numerator `|Σ f(x)(-1)^{α·x}|` over `α ≠ 0`; zero when `n = 0`.
pub(crate) fn max_nontrivial_numerator(f: &BooleanFunction) -> i64 {
    if f.is_constant() {
        return 0;
    }
    wht(f).argmax_nontrivial().map_or(0, |(_, v)| v)
}

/// Largest nontrivial Fourier coefficient in absolute value, with its character.
pub fn max_nontrivial_coeff(f: &BooleanFunction) -> Result<(F2Vector, Dyadic)> {
    if f.n() == 0 {
        return Err(Error::InvalidArgument("F2^0 has no nonzero character".into()));
    }
    let (a, v) = wht(f).argmax_nontrivial().expect("n ≥ 1");
    Ok((F2Vector::truncated(f.n(), a), Dyadic::new(v, f.n() as u32)))
}

/// `max_{α≠0} |f̂(α)| < eps`, compared exactly.
pub fn is_uniform(f: &BooleanFunction, eps: &BigRational) -> Result<bool> {
    let (_, v) = max_nontrivial_coeff(f)?;
    Ok(&v.to_rational() < eps)
}

/// Exact distance to the nearest affine function (or its complement).
pub fn distance_to_affine(f: &BooleanFunction) -> BigRational {
    let spec = wht(f);
    let size = f.size() as i64;
    // Walsh value of (-1)^f at α is size·[α=0] − 2·num(α)
    let best = spec
        .numerators()
        .iter()
        .enumerate()
        .map(|(a, v)| ((if a == 0 { size } else { 0 }) - 2 * v).abs())
        .max()
        .unwrap_or(0);
    BigRational::new(BigInt::from(size - best), BigInt::from(2 * size))
}
