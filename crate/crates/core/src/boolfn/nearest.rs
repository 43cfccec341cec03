use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::function::BooleanFunction;
use crate::error::{Error, Result};
use crate::systems::{is_free_systems, Family};

/// Largest `n` for [`distance_to_family`].
pub const MAX_EXHAUSTIVE_N: usize = 4;

/// Distance from `f` to the nearest function free of every realized system,
/// by exhausting all `2^(2^n)` functions.
pub fn distance_to_family(f: &BooleanFunction, fam: &Family) -> Result<BigRational> {
    let n = f.n();
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::TooLarge { dim: n, max: MAX_EXHAUSTIVE_N });
    }
    let systems = fam.realize()?;
    let table = f.to_u64().expect("n ≤ 6");
    let size = 1u32 << n;
    let best = (0..1u64 << size)
        .into_par_iter()
        .map(|g| -> Result<Option<u32>> {
            let cand = BooleanFunction::from_u64(n, g)?;
            Ok(is_free_systems(&cand, &systems)?.free.then(|| (g ^ table).count_ones()))
        })
        .try_reduce(|| None, |a, b| Ok(match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }))?;
    let best = best.ok_or_else(|| Error::InvalidArgument("no function is free of the family".into()))?;
    Ok(BigRational::new(BigInt::from(best), BigInt::from(size)))
}
