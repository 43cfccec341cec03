use std::fmt;

use crate::error::{check_dim, Error, Result};
use crate::f2::{low_mask, F2Matrix, F2Vector};

/// A forbidden induced system `(M, σ)`: a `k`-tuple `x` with `Mx = 0` and
/// `f(x_i) = σ_i` for every `i`.
///
/// `M` is kept in reduced row-echelon form with full row rank. Bit `i` of
/// `sigma` is `σ_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct InducedSystem {
    matrix: F2Matrix,
    sigma: u64,
}

impl InducedSystem {
    pub fn new(matrix: &F2Matrix, sigma: &F2Vector) -> Result<Self> {
        check_dim(matrix.ncols(), sigma.dim())?;
        Self::from_bits(matrix, sigma.bits())
    }

    pub fn from_bits(matrix: &F2Matrix, sigma: u64) -> Result<Self> {
        let k = matrix.ncols();
        if k <= 2 {
            return Err(Error::InvalidArgument(format!("a system needs k > 2 columns, got {k}")));
        }
        if sigma & !low_mask(k) != 0 {
            return Err(Error::InvalidArgument("sigma longer than the number of columns".into()));
        }
        Ok(InducedSystem { matrix: matrix.rref().0, sigma })
    }

    pub fn parse(rows: &[&str], sigma: &str) -> Result<Self> {
        Self::new(&F2Matrix::parse_rows(rows)?, &F2Vector::parse_bits(sigma)?)
    }

    #[inline]
    pub fn matrix(&self) -> &F2Matrix {
        &self.matrix
    }

    #[inline]
    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    pub fn sigma_vector(&self) -> F2Vector {
        F2Vector::truncated(self.k(), self.sigma)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.matrix.ncols()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn with_sigma(&self, sigma: u64) -> Result<Self> {
        Self::from_bits(&self.matrix, sigma)
    }
}

impl fmt::Display for InducedSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.matrix, self.sigma_vector())
    }
}

/// Why a matrix/pattern pair does not define a proper system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// The row space contains `e_i`, so `x_i = 0` is forced.
    ValueForced { coordinate: usize },
    /// The row space contains `e_i + e_j` while `σ_i ≠ σ_j`: nothing can induce it.
    TriviallyFree { i: usize, j: usize },
    /// Substitutions left at most two variables.
    Collapsed { matrix: F2Matrix, sigma: F2Vector },
}

/// One substitution `x_removed := x_kept`, in original 1-based coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub kept: usize,
    pub removed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validated {
    System { system: InducedSystem, reductions: Vec<Reduction> },
    Degenerate { kind: Degeneracy, reductions: Vec<Reduction> },
}

impl Validated {
    pub fn system(&self) -> Option<&InducedSystem> {
        match self {
            Validated::System { system, .. } => Some(system),
            Validated::Degenerate { .. } => None,
        }
    }

    pub fn into_system(self) -> Result<InducedSystem> {
        match self {
            Validated::System { system, .. } => Ok(system),
            Validated::Degenerate { kind, .. } => {
                Err(Error::InvalidArgument(format!("degenerate system: {kind:?}")))
            }
        }
    }
}

/// Largest row rank whose row space is scanned in full.
pub const MAX_SCAN_RANK: usize = 20;

/// Normalizes `(M, σ)` and removes linear dependencies on fewer than three variables.
///
/// A weight-2 relation `x_i = x_j` with `σ_i = σ_j` is eliminated by
/// substituting `x_j := x_i` (column `i` absorbs column `j`, which is deleted)
/// and reducing again.
pub fn validate(matrix: &F2Matrix, sigma: &F2Vector) -> Result<Validated> {
    check_dim(matrix.ncols(), sigma.dim())?;
    if matrix.ncols() <= 2 {
        return Err(Error::InvalidArgument(format!(
            "a system needs k > 2 columns, got {}",
            matrix.ncols()
        )));
    }
    let mut labels: Vec<usize> = (1..=matrix.ncols()).collect();
    let mut cols: Vec<u64> = (0..matrix.ncols()).map(|c| matrix.column(c)).collect();
    let mut sig: Vec<bool> = (0..sigma.dim()).map(|i| sigma.get(i)).collect();
    let nrows = matrix.nrows();
    let mut reductions = Vec::new();
    loop {
        let k = cols.len();
        let current = rebuild(&cols, nrows);
        let (reduced, rank) = current.rref();
        if rank > MAX_SCAN_RANK {
            return Err(Error::TooLarge { dim: rank, max: MAX_SCAN_RANK });
        }
        let elements = reduced.rowspace_elements();
        if let Some(v) = elements.iter().find(|v| v.count_ones() == 1) {
            let coordinate = labels[v.trailing_zeros() as usize];
            return Ok(Validated::Degenerate { kind: Degeneracy::ValueForced { coordinate }, reductions });
        }
        let pair = elements
            .iter()
            .filter(|v| v.count_ones() == 2)
            .map(|v| (v.trailing_zeros() as usize, 63 - v.leading_zeros() as usize))
            .min();
        let Some((i, j)) = pair else {
            let sigma_bits = sig.iter().enumerate().fold(0u64, |a, (t, b)| a | ((*b as u64) << t));
            let system = InducedSystem { matrix: reduced, sigma: sigma_bits };
            return Ok(Validated::System { system, reductions });
        };
        if sig[i] != sig[j] {
            return Ok(Validated::Degenerate {
                kind: Degeneracy::TriviallyFree { i: labels[i], j: labels[j] },
                reductions,
            });
        }
        reductions.push(Reduction { kept: labels[i], removed: labels[j] });
        cols[i] ^= cols[j];
        cols.remove(j);
        sig.remove(j);
        labels.remove(j);
        if k - 1 <= 2 {
            let remaining = rebuild(&cols, nrows).rref().0;
            let sigma = sig.iter().enumerate().fold(0u64, |a, (t, b)| a | ((*b as u64) << t));
            return Ok(Validated::Degenerate {
                kind: Degeneracy::Collapsed {
                    matrix: remaining,
                    sigma: F2Vector::truncated(k - 1, sigma),
                },
                reductions,
            });
        }
    }
}

fn rebuild(cols: &[u64], nrows: usize) -> F2Matrix {
    let rows = (0..nrows)
        .map(|r| cols.iter().enumerate().fold(0u64, |a, (c, col)| a | (((col >> r) & 1) << c)))
        .collect();
    F2Matrix::new(cols.len(), rows).expect("rebuilt matrix fits")
}

/// Named infinite families, realized up to a column cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// The Reed–Muller family of degree `d`; `max_k` omits it when `2^(d+1)` exceeds it.
    ReedMuller { d: usize, max_k: Option<usize> },
}

impl Generator {
    pub fn realize(&self) -> Result<Vec<InducedSystem>> {
        match self {
            Generator::ReedMuller { d, max_k } => {
                let k = 1usize << (d + 1);
                if max_k.is_some_and(|m| k > m) {
                    return Ok(Vec::new());
                }
                crate::families::rm_family(*d).map(|fam| fam.explicit)
            }
        }
    }
}

/// A family of forbidden systems: an explicit list plus generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Family {
    pub explicit: Vec<InducedSystem>,
    pub generators: Vec<Generator>,
}

impl Family {
    pub fn new(explicit: Vec<InducedSystem>) -> Self {
        Family { explicit, generators: Vec::new() }
    }

    pub fn single(system: InducedSystem) -> Self {
        Family::new(vec![system])
    }

    pub fn with_generator(mut self, g: Generator) -> Self {
        self.generators.push(g);
        self
    }

    /// Explicit systems first, then generated ones in generator order.
    pub fn realize(&self) -> Result<Vec<InducedSystem>> {
        let mut out = self.explicit.clone();
        for g in &self.generators {
            out.extend(g.realize()?);
        }
        Ok(out)
    }
}
