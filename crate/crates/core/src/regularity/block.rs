use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::partition::{green_regularize, RegularityBudget};
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::extremal::{find_subspace_in_set, ramsey_find, ramsey_min_n, Color, PointSet, MAX_SEARCH_N};
use crate::f2::Subspace;

/// A subspace `W ⊇ H''` such that every nonzero coset of `H''` in `W` is
/// `gamma`-uniform and lies on one side of density 1/2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredBlock {
    /// `H''`.
    pub h: Subspace,
    pub w: Subspace,
    /// `W / H''` in the quotient coordinates of `H''`.
    pub quotient: Subspace,
    /// True when every nonzero coset has density at least 1/2.
    pub dense: bool,
    pub gamma: BigRational,
    /// Dimension of the uniform subspace found before colouring by density.
    pub r: usize,
}

/// Dimension `r` of the intermediate all-uniform subspace used for blocks of dimension `d`.
///
/// For `d ≤ 2` this is the least `N` forcing a monochromatic `d`-subspace in
/// any 2-colouring of F2^N; beyond that the colour classes are searched directly.
pub fn block_search_dimension(d: usize) -> Result<usize> {
    match d {
        0 => Err(Error::InvalidArgument("block dimension must be positive".into())),
        1 | 2 => Ok(ramsey_min_n(d)?.n),
        _ => Ok(d),
    }
}

/// Regularizes `f` until fewer than a `2^(-r-2)` fraction of cosets fail
/// `gamma`-uniformity, then looks for an `r`-dimensional subspace of uniform
/// cosets in the quotient and a monochromatic (by density) `d`-subspace inside it.
///
/// Returns `None` when the budget stops the refinement before a block appears.
pub fn find_structured_block(
    f: &BooleanFunction,
    d: usize,
    gamma: &BigRational,
    budget: RegularityBudget,
) -> Result<Option<StructuredBlock>> {
    if gamma <= &BigRational::zero() {
        return Err(Error::InvalidArgument("gamma must be positive".into()));
    }
    let r = block_search_dimension(d)?;
    let n = f.n();
    if n < r {
        return Ok(None);
    }
    let eps = gamma.clone().min(BigRational::new(1.into(), BigInt::from(1u8) << (r + 2)));
    let cap = budget.max_order.unwrap_or(n).min(MAX_SEARCH_N);
    let budget = RegularityBudget { max_order: Some(cap), ..budget };
    let part = green_regularize(f, &eps, &Subspace::standard(n, r)?, budget)?;
    let k = part.order;
    let dim = part.h.dim();
    let uniform = |c: u64| part.is_coset_uniform(c, gamma);
    let dense = |c: u64| 2 * part.cosets[c as usize].ones >= 1u64 << dim;
    let good = PointSet::from_fn(k, |c| c != 0 && uniform(c))?;
    let (quotient, is_dense) = if r > d {
        let Some(l) = find_subspace_in_set(&good, r)? else {
            return Ok(None);
        };
        let colours = PointSet::from_fn(r, |y| dense(l.combine(y)))?;
        let Some(cert) = ramsey_find(&colours, d)? else {
            return Err(Error::InvariantViolated(format!("no monochromatic {d}-subspace in F2^{r}")));
        };
        let gens: Vec<u64> = cert.subspace.basis_bits().iter().map(|y| l.combine(*y)).collect();
        (Subspace::from_bits(k, &gens)?, cert.color == Color::InSet)
    } else {
        let dense_side = PointSet::from_fn(k, |c| good.contains(c) && dense(c))?;
        let sparse_side = PointSet::from_fn(k, |c| good.contains(c) && !dense(c))?;
        match find_subspace_in_set(&dense_side, d)? {
            Some(s) => (s, true),
            None => match find_subspace_in_set(&sparse_side, d)? {
                Some(s) => (s, false),
                None => return Ok(None),
            },
        }
    };
    let mut gens: Vec<u64> = part.h.basis_bits().to_vec();
    gens.extend(quotient.basis_bits().iter().map(|c| part.h.quotient_rep(*c)));
    let w = Subspace::from_bits(n, &gens)?;
    let block = StructuredBlock { h: part.h.clone(), w, quotient, dense: is_dense, gamma: gamma.clone(), r };
    verify_block(f, &block)?;
    Ok(Some(block))
}

/// Re-checks uniformity and the density side of every nonzero coset of a block.
pub fn verify_block(f: &BooleanFunction, block: &StructuredBlock) -> Result<()> {
    for c in block.quotient.elements_by_coefficients()?.into_iter().skip(1) {
        let g = f.restrict_bits(&block.h, block.h.quotient_rep(c));
        let max = crate::boolfn::max_nontrivial_numerator(&g);
        if !super::partition::below(max, block.h.dim(), &block.gamma) {
            return Err(Error::InvariantViolated(format!("coset {c:#x} of the block is not uniform")));
        }
        if (2 * g.ones() >= g.size() as u64) != block.dense {
            return Err(Error::InvariantViolated(format!("coset {c:#x} of the block is on the wrong side")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn search_dimensions() {
        assert_eq!(block_search_dimension(1).unwrap(), 1);
        assert_eq!(block_search_dimension(2).unwrap(), 3);
        assert!(block_search_dimension(0).is_err());
    }

    #[test]
    fn constant_function_gives_block() {
        let f = BooleanFunction::constant(6, true).unwrap();
        let b = find_structured_block(&f, 2, &q(1, 4), RegularityBudget::default()).unwrap().unwrap();
        assert!(b.dense);
        assert_eq!(b.quotient.dim(), 2);
        assert_eq!(b.w.dim(), b.h.dim() + 2);
    }

    #[test]
    fn random_functions_give_verified_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        for d in 1..=3 {
            for _ in 0..4 {
                let f = BooleanFunction::random(10, 0.5, &mut rng).unwrap();
                let b = find_structured_block(&f, d, &q(1, 3), RegularityBudget::default()).unwrap().unwrap();
                assert_eq!(b.quotient.dim(), d);
                assert!(b.h.is_subspace_of(&b.w));
                verify_block(&f, &b).unwrap();
            }
        }
    }

    #[test]
    fn too_small_ambient() {
        let f = BooleanFunction::constant(2, false).unwrap();
        assert_eq!(find_structured_block(&f, 2, &q(1, 4), RegularityBudget::default()).unwrap(), None);
    }
}
