use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::f2::{random_linear_map, F2Matrix, Subspace};
use crate::systems::{Family, InducedSystem};

/// Largest `d` for obstruction systems (`k = 2^d` columns).
pub const MAX_OBSTRUCTION_D: usize = 4;

/// Largest `max_d` accepted by [`family_from_oracle`].
pub const MAX_ORACLE_D: usize = 3;

/// The system forcing a linear image of F2^d to carry the pattern `1_S`.
///
/// Column `i` stands for the point of F2^d with integer value `i`. `M_d`
/// spans all relations among these points, so `f` induces `(M_d, σ_S)`
/// exactly when `f ∘ L = 1_S` for some linear `L: F2^d -> F2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionSystem {
    pub d: usize,
    /// Bit `i` is `1_S` at point `i`.
    pub support: u64,
    pub points: F2Matrix,
    pub matrix: F2Matrix,
    pub sigma: u64,
    /// `k = 2^d ≤ 2`: too few columns for a proper system.
    pub degenerate: bool,
}

impl ObstructionSystem {
    pub fn k(&self) -> usize {
        1 << self.d
    }

    pub fn system(&self) -> Option<InducedSystem> {
        (!self.degenerate).then(|| {
            InducedSystem::from_bits(&self.matrix, self.sigma).expect("nondegenerate obstruction")
        })
    }
}

pub fn obstruction_system(d: usize, support: u64) -> Result<ObstructionSystem> {
    if d > MAX_OBSTRUCTION_D {
        return Err(Error::TooLarge { dim: d, max: MAX_OBSTRUCTION_D });
    }
    let k = 1usize << d;
    if support >> k != 0 {
        return Err(Error::InvalidArgument("support has points outside F2^d".into()));
    }
    let points = F2Matrix::new(d, (0..k as u64).collect())?;
    let kernel = points.transpose().kernel_basis();
    let rows = (0..kernel.ncols()).map(|t| kernel.column(t)).collect();
    let matrix = F2Matrix::new(k, rows)?.rref().0;
    Ok(ObstructionSystem { d, support, points, matrix, sigma: support, degenerate: k <= 2 })
}

/// Result of [`family_from_oracle`].
#[derive(Clone, Debug)]
pub struct OracleFamily {
    pub family: Family,
    /// Minimal failing `(d, S)` pairs.
    pub minimal: Vec<(usize, u64)>,
    /// Minimal pairs with `2^d ≤ 2`, replaced by every failing pattern at `d = 2`.
    pub lifted: Vec<(usize, u64)>,
}

const INVARIANCE_SAMPLES: usize = 256;
const INVARIANCE_SEED: u64 = 0x6c69_6e76;

/// Builds the forbidden family of a linear-invariant, subspace-hereditary property.
///
/// Keeps each `(d, S)` with `d ≤ max_d` where `1_S` fails `prop` while all its
/// hyperplane restrictions satisfy it. Minimal pairs with `d ≤ 1` cannot form
/// a system with `k > 2`; they are replaced by all failing patterns at `d = 2`,
/// which precompose them with a projection.
pub fn family_from_oracle<P>(prop: P, max_d: usize) -> Result<OracleFamily>
where
    P: Fn(&BooleanFunction) -> bool + Sync,
{
    if max_d > MAX_ORACLE_D {
        return Err(Error::TooLarge { dim: max_d, max: MAX_ORACLE_D });
    }
    check_invariance(&prop, max_d)?;
    let mut minimal = Vec::new();
    for d in 0..=max_d {
        let hyperplanes = hyperplanes(d);
        let found: Vec<u64> = (0..1u64 << (1u64 << d))
            .into_par_iter()
            .filter(|s| {
                let g = BooleanFunction::from_u64(d, *s).expect("d ≤ 3");
                !prop(&g)
                    && hyperplanes
                        .iter()
                        .all(|h| prop(&g.restrict_bits(h, 0)))
            })
            .collect();
        minimal.extend(found.into_iter().map(|s| (d, s)));
    }
    let lifted: Vec<(usize, u64)> = minimal.iter().copied().filter(|(d, _)| *d <= 1).collect();
    let mut pairs: Vec<(usize, u64)> = minimal.iter().copied().filter(|(d, _)| *d >= 2).collect();
    if !lifted.is_empty() {
        for s in 0..16u64 {
            if !prop(&BooleanFunction::from_u64(2, s)?) {
                pairs.push((2, s));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let systems = pairs
        .iter()
        .map(|(d, s)| Ok(obstruction_system(*d, *s)?.system().expect("d ≥ 2")))
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleFamily { family: Family::new(systems), minimal, lifted })
}

fn hyperplanes(d: usize) -> Vec<Subspace> {
    (1..1u64 << d)
        .map(|a| {
            let gens: Vec<u64> = (0..1u64 << d).filter(|x| (x & a).count_ones() % 2 == 0).collect();
            Subspace::from_bits(d, &gens).expect("points of F2^d")
        })
        .collect()
}

/// Spot-checks that satisfying `prop` survives precomposition with linear maps.
fn check_invariance<P>(prop: &P, max_d: usize) -> Result<()>
where
    P: Fn(&BooleanFunction) -> bool + Sync,
{
    let mut rng = ChaCha8Rng::seed_from_u64(INVARIANCE_SEED);
    for _ in 0..INVARIANCE_SAMPLES {
        let e = rng.gen_range(0..=max_d.max(1));
        let g = BooleanFunction::random(e, 0.5, &mut rng)?;
        if !prop(&g) {
            continue;
        }
        let e2 = rng.gen_range(0..=max_d.max(1));
        let l = random_linear_map(e2, e, &mut rng)?;
        let composed = g.compose_linear(&l)?;
        if !prop(&composed) {
            return Err(Error::InvalidArgument(format!(
                "property is not linear-invariant: it holds for {g:?} but not after composing with {l:?}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{count_induced, is_free};

    #[test]
    fn shapes_and_relations() {
        for d in 0..=4 {
            let o = obstruction_system(d, 0).unwrap();
            assert_eq!(o.matrix.ncols(), 1 << d);
            assert_eq!(o.matrix.rank(), (1 << d) - d);
            assert!(o.matrix.mul(&o.points).unwrap().is_zero());
        }
        assert!(obstruction_system(1, 0b01).unwrap().degenerate);
        assert!(obstruction_system(1, 0b01).unwrap().system().is_none());
        let o = obstruction_system(2, 0b0110).unwrap();
        assert_eq!((o.matrix.nrows(), o.matrix.ncols()), (2, 4));
    }

    /// Some linear `L: F2^d -> F2^n` with `f ∘ L = 1_S`.
    fn has_linear_image(f: &BooleanFunction, d: usize, s: u64) -> bool {
        let n = f.n();
        let total = 1u64 << (n * d);
        (0..total).any(|code| {
            let cols: Vec<u64> = (0..d).map(|j| (code >> (j * n)) & ((1 << n) - 1)).collect();
            (0..1u64 << d).all(|p| {
                let img = (0..d).filter(|j| (p >> j) & 1 == 1).fold(0, |a, j| a ^ cols[j]);
                f.get(img) == ((s >> p) & 1 == 1)
            })
        })
    }

    #[test]
    fn inducement_means_linear_image() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let f = BooleanFunction::random(3, 0.5, &mut rng).unwrap();
            for s in 0u64..16 {
                let sys = obstruction_system(2, s).unwrap().system().unwrap();
                assert_eq!(count_induced(&f, &sys).unwrap() > 0, has_linear_image(&f, 2, s));
            }
        }
    }

    #[test]
    fn constant_property() {
        let out = family_from_oracle(|f: &BooleanFunction| f.is_constant(), 2).unwrap();
        assert_eq!(out.minimal, vec![(1, 0b01), (1, 0b10)]);
        assert_eq!(out.lifted.len(), 2);
        for n in 0..=2 {
            for t in 0u64..1 << (1 << n) {
                let f = BooleanFunction::from_u64(n, t).unwrap();
                assert_eq!(is_free(&f, &out.family).unwrap().free, f.is_constant());
            }
        }
    }

    #[test]
    fn trivial_property_gives_empty_family() {
        let out = family_from_oracle(|_: &BooleanFunction| true, 3).unwrap();
        assert!(out.family.explicit.is_empty());
    }

    #[test]
    fn non_invariant_property_is_rejected() {
        // f(e1) = 0 is not preserved by linear maps
        let prop = |f: &BooleanFunction| f.n() == 0 || !f.get(1);
        assert!(family_from_oracle(prop, 2).is_err());
    }
}
