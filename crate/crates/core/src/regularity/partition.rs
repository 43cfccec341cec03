use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::boolfn::{wht, BooleanFunction, Dyadic};
use crate::error::{check_dim, Error, Result};
use crate::f2::{rref_rows, Subspace};

/// Per-coset measurements of an `H`-based partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRecord {
    /// Canonical representative of the coset.
    pub rep: u64,
    pub ones: u64,
    /// Largest `|Σ f(g+h)(-1)^{<coords(h), α>}|` over `α ≠ 0` (0 for a point coset).
    pub max_numerator: i64,
    /// The maximizing character in the coordinates of `H`'s canonical basis.
    pub witness: u64,
}

pub(crate) fn analyze_coset(f: &BooleanFunction, h: &Subspace, rep: u64) -> CosetRecord {
    let g = f.restrict_bits(h, rep);
    let ones = g.ones();
    if h.dim() == 0 || g.is_constant() {
        return CosetRecord { rep, ones, max_numerator: 0, witness: 0 };
    }
    let (witness, max_numerator) = wht(&g).argmax_nontrivial().expect("dim ≥ 1");
    CosetRecord { rep, ones, max_numerator, witness }
}

/// Records of every coset of `h`, indexed by quotient coordinates.
pub fn analyze_cosets(f: &BooleanFunction, h: &Subspace) -> Result<Vec<CosetRecord>> {
    check_dim(f.n(), h.ambient_dim())?;
    Ok((0..1u64 << h.codim())
        .into_par_iter()
        .map(|c| analyze_coset(f, h, h.quotient_rep(c)))
        .collect())
}

/// Number of ones of `f` in each coset of `h`, indexed by quotient coordinates.
pub fn coset_ones(f: &BooleanFunction, h: &Subspace) -> Result<Vec<u64>> {
    check_dim(f.n(), h.ambient_dim())?;
    let mut out = vec![0u64; 1 << h.codim()];
    for x in 0..f.size() as u64 {
        if f.get(x) {
            out[h.quotient_coords(x) as usize] += 1;
        }
    }
    Ok(out)
}

/// `ind(f,H) = 2^-n Σ_g ρ(f_H^{+g})^2 = Σ_cosets ones^2 / (|H| 2^n)`.
pub fn index(f: &BooleanFunction, h: &Subspace) -> Result<BigRational> {
    let ones = coset_ones(f, h)?;
    let num: BigInt = ones.iter().map(|o| BigInt::from(*o) * BigInt::from(*o)).sum();
    Ok(BigRational::new(num, BigInt::from(1u8) << (h.dim() + f.n())))
}

/// `num / 2^dim < eps`.
pub(crate) fn below(num: i64, dim: usize, eps: &BigRational) -> bool {
    &BigRational::new(BigInt::from(num), BigInt::from(1u8) << dim) < eps
}

pub(crate) fn ratio(a: usize, b: usize) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// One refinement round of [`green_regularize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub order: usize,
    pub index: BigRational,
    pub bad_fraction: BigRational,
    /// Characters used for the refinement (coordinates of the current `H`).
    pub witnesses: Vec<u64>,
    /// Fraction of cosets that are non-uniform and whose witness is killed.
    pub covered_fraction: BigRational,
    /// Index increase this round must achieve: `Σ_covered f̂(α)^2 / #cosets`.
    pub guaranteed_gain: BigRational,
}

/// An `H`-based partition with per-coset annotations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityPartition {
    pub h: Subspace,
    pub order: usize,
    pub cosets: Vec<CosetRecord>,
    pub index: BigRational,
    pub eps: BigRational,
    pub bad_cosets: usize,
    pub bad_fraction: BigRational,
    /// Set when the budget ran out before the bad fraction dropped to `eps`.
    pub flagged: bool,
    pub rounds: Vec<RoundRecord>,
}

impl RegularityPartition {
    pub fn build(f: &BooleanFunction, h: &Subspace, eps: &BigRational) -> Result<Self> {
        let cosets = analyze_cosets(f, h)?;
        let bad_cosets = cosets.iter().filter(|c| !below(c.max_numerator, h.dim(), eps)).count();
        let ones: BigInt = cosets.iter().map(|c| BigInt::from(c.ones) * BigInt::from(c.ones)).sum();
        Ok(RegularityPartition {
            h: h.clone(),
            order: h.codim(),
            index: BigRational::new(ones, BigInt::from(1u8) << (h.dim() + f.n())),
            eps: eps.clone(),
            bad_cosets,
            bad_fraction: ratio(bad_cosets, cosets.len()),
            cosets,
            flagged: false,
            rounds: Vec::new(),
        })
    }

    pub fn coset_density(&self, coords: u64) -> BigRational {
        BigRational::new(
            BigInt::from(self.cosets[coords as usize].ones),
            BigInt::from(1u8) << self.h.dim(),
        )
    }

    pub fn coset_max_coeff(&self, coords: u64) -> Dyadic {
        Dyadic::new(self.cosets[coords as usize].max_numerator, self.h.dim() as u32)
    }

    pub fn is_coset_uniform(&self, coords: u64, eps: &BigRational) -> bool {
        below(self.cosets[coords as usize].max_numerator, self.h.dim(), eps)
    }
}

/// Budgets standing in for the tower-type bounds of the regularity lemmas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegularityBudget {
    /// Largest partition order; `None` allows refining down to `{0}`.
    pub max_order: Option<usize>,
    pub max_rounds: usize,
}

impl Default for RegularityBudget {
    fn default() -> Self {
        RegularityBudget { max_order: None, max_rounds: 256 }
    }
}

/// Witness characters pooled per refinement round.
pub const WITNESS_POOL: usize = 4;

/// Refines `h_init` until at most an `eps` fraction of cosets fail `eps`-uniformity.
///
/// Each round collects the maximizing character of every non-uniform coset,
/// keeps up to [`WITNESS_POOL`] independent ones (most frequent first, then
/// largest coefficient, then smallest index) and intersects `H` with their
/// kernels. Splitting a coset along a character `α` raises the index by
/// `f̂(α)^2` times the coset's weight, so every round makes progress.
pub fn green_regularize(
    f: &BooleanFunction,
    eps: &BigRational,
    h_init: &Subspace,
    budget: RegularityBudget,
) -> Result<RegularityPartition> {
    if eps <= &BigRational::zero() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let max_order = budget.max_order.unwrap_or(f.n()).min(f.n());
    let mut part = RegularityPartition::build(f, h_init, eps)?;
    let mut rounds = Vec::new();
    loop {
        if part.bad_fraction <= *eps {
            part.rounds = rounds;
            return Ok(part);
        }
        if rounds.len() >= budget.max_rounds || part.order >= max_order {
            part.flagged = true;
            part.rounds = rounds;
            return Ok(part);
        }
        let dim = part.h.dim();
        let bad: Vec<&CosetRecord> =
            part.cosets.iter().filter(|c| !below(c.max_numerator, dim, eps)).collect();
        let mut stats: HashMap<u64, (usize, i64)> = HashMap::new();
        for c in &bad {
            let e = stats.entry(c.witness).or_insert((0, 0));
            e.0 += 1;
            e.1 = e.1.max(c.max_numerator);
        }
        let mut ranked: Vec<(u64, usize, i64)> = stats.into_iter().map(|(a, (n, m))| (a, n, m)).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(b.2.cmp(&a.2)).then(a.0.cmp(&b.0)));
        let room = max_order - part.order;
        let mut chosen: Vec<u64> = Vec::new();
        for (alpha, _, _) in ranked {
            if chosen.len() == WITNESS_POOL.min(room) {
                break;
            }
            let mut trial = chosen.clone();
            trial.push(alpha);
            if rref_rows(&trial, dim).len() == trial.len() {
                chosen = trial;
            }
        }
        let span = rref_rows(&chosen, dim);
        let covered: Vec<&&CosetRecord> = bad
            .iter()
            .filter(|c| crate::f2::reduce_against(&span, c.witness) == 0)
            .collect();
        let gain_num: BigInt = covered
            .iter()
            .map(|c| BigInt::from(c.max_numerator) * BigInt::from(c.max_numerator))
            .sum();
        let guaranteed_gain =
            BigRational::new(gain_num, (BigInt::from(1u8) << (2 * dim)) * BigInt::from(part.cosets.len()));
        rounds.push(RoundRecord {
            order: part.order,
            index: part.index.clone(),
            bad_fraction: part.bad_fraction.clone(),
            witnesses: chosen.clone(),
            covered_fraction: ratio(covered.len(), part.cosets.len()),
            guaranteed_gain,
        });
        let refined = refine_by_characters(&part.h, &chosen);
        part = RegularityPartition::build(f, &refined, eps)?;
    }
}

/// `{h ∈ H : <coords(h), α> = 0 for every α in alphas}`.
pub fn refine_by_characters(h: &Subspace, alphas: &[u64]) -> Subspace {
    let dim = h.dim();
    if alphas.is_empty() {
        return h.clone();
    }
    let m = crate::f2::F2Matrix::new(dim, alphas.to_vec()).expect("characters fit the subspace");
    let kernel = m.kernel_basis();
    let gens: Vec<u64> = (0..kernel.ncols()).map(|t| h.combine(kernel.column(t))).collect();
    Subspace::from_bits(h.ambient_dim(), &gens).expect("elements of H")
}
