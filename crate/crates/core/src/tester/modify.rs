use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::boolfn::{distance, BooleanFunction};
use crate::counting::counting_constants;
use crate::error::{Error, Result};
use crate::f2::Subspace;
use crate::regularity::{
    coset_ones, find_structured_block, functional_regularize, pick_uniform_transversal, FunctionalRegularity,
    RegularityBudget, StructuredBlock, UniformTransversal,
};
use crate::systems::{is_free, partial_witness, Family, FreeReport, PartialPattern};

/// Which part of `F2^n` a modification rewrote.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetRef {
    /// The coset of `H` with these quotient coordinates.
    Quotient(u64),
    /// `H` itself.
    Base,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Change {
    pub coset: CosetRef,
    pub step: u8,
    /// Ones on the coset before the rewrite.
    pub old_ones: u64,
    pub new_value: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModifiedFunction {
    pub f: BooleanFunction,
    pub change_log: Vec<Change>,
}

fn set_coset(f: &mut BooleanFunction, h: &Subspace, rep: u64, value: bool) {
    for x in h.elements_by_coefficients().expect("ambient within limits") {
        f.set(rep ^ x, value);
    }
}

fn frac(ones: u64, dim: usize) -> BigRational {
    BigRational::new(BigInt::from(ones), BigInt::from(1u8) << dim)
}

/// Lifts a block found for `f` restricted to `base` (in the coefficient
/// coordinates of `base`) into the ambient space of `base`.
pub fn lift_block(block: &StructuredBlock, base: &Subspace) -> Result<StructuredBlock> {
    let n = base.ambient_dim();
    let img = |s: &Subspace| -> Result<Subspace> {
        Subspace::from_bits(n, &s.basis_bits().iter().map(|b| base.combine(*b)).collect::<Vec<_>>())
    };
    let h = img(&block.h)?;
    let w = img(&block.w)?;
    let gens: Vec<u64> = w.basis_bits().iter().map(|b| h.quotient_coords(*b)).collect();
    let quotient = Subspace::from_bits(h.codim(), &gens)?;
    Ok(StructuredBlock { h, w, quotient, ..block.clone() })
}

/// Rewrites `f` coset by coset:
///
/// 1. for `u ≠ 0` with `|ρ(f_H^{+u}) − ρ(f_{H'}^{+I(u)})| > ε/8`, set `u + H` to
///    `[ρ(f_{H'}^{+I(u)}) ≥ 1/2]`;
/// 2. for `u ≠ 0`, set `u + H` to 1 if `ρ(F_{H'}^{+I(u)}) > 1 − ε/4` and to 0 if it is `< ε/4`;
/// 3. set `H` to 1 if every nonzero coset of `H''` in `W` has density at least
///    1/2, to 0 if every one has density below 1/2.
///
/// The result must be `eps`-close to `f`; otherwise the inputs were not regular
/// enough and an error is returned.
pub fn build_modified_function(
    f: &BooleanFunction,
    trans: &UniformTransversal,
    block: Option<&StructuredBlock>,
    eps: &BigRational,
) -> Result<ModifiedFunction> {
    let h = &trans.h;
    let hp = &trans.h_prime;
    if let Some(b) = block {
        if !(b.h.is_subspace_of(&b.w) && b.w.is_subspace_of(hp)) {
            return Err(Error::InvalidArgument("need H'' ≤ W ≤ H'".into()));
        }
    }
    let eighth = eps / BigRational::from_integer(8.into());
    let quarter = eps / BigRational::from_integer(4.into());
    let half = BigRational::new(1.into(), 2.into());
    let coarse = coset_ones(f, h)?;
    let mut out = f.clone();
    let mut log = Vec::new();
    let size = 1u64 << h.dim();
    let mut record = |out: &mut BooleanFunction, u: u64, step: u8, value: bool, old: u64| {
        if old != if value { size } else { 0 } {
            set_coset(out, h, h.quotient_rep(u), value);
            log.push(Change { coset: CosetRef::Quotient(u), step, old_ones: old, new_value: value });
        }
    };
    for u in 1..1u64 << h.codim() {
        let target = trans.image(u);
        let fine = frac(out.ones_on_coset(hp, target), hp.dim());
        if (frac(coarse[u as usize], h.dim()) - &fine).abs() > eighth {
            record(&mut out, u, 1, fine >= half, coarse[u as usize]);
        }
        let now = out.ones_on_coset(h, h.quotient_rep(u));
        let fine = frac(out.ones_on_coset(hp, target), hp.dim());
        if fine > BigRational::one() - &quarter {
            record(&mut out, u, 2, true, now);
        } else if fine < quarter {
            record(&mut out, u, 2, false, now);
        }
    }
    if let Some(b) = block {
        let sides: Vec<bool> = b
            .quotient
            .elements_by_coefficients()?
            .into_iter()
            .skip(1)
            .map(|c| frac(out.ones_on_coset(&b.h, b.h.quotient_rep(c)), b.h.dim()) >= half)
            .collect();
        let value = if sides.iter().all(|s| *s) {
            Some(true)
        } else if sides.iter().all(|s| !*s) {
            Some(false)
        } else {
            None
        };
        if let Some(v) = value {
            let old = out.ones_on_coset(h, 0);
            if old != if v { size } else { 0 } {
                set_coset(&mut out, h, 0, v);
                log.push(Change { coset: CosetRef::Base, step: 3, old_ones: old, new_value: v });
            }
        }
    }
    let dist = distance(f, &out)?;
    if &dist > eps {
        return Err(Error::InvariantViolated(format!("modified function is {dist}-far, above {eps}")));
    }
    Ok(ModifiedFunction { f: out, change_log: log })
}

/// Largest order accepted by [`pattern_of`].
pub const MAX_PATTERN_ORDER: usize = 16;

/// `μ(u) = 1` if `F ≡ 1` on `u + H`, `0` if `F ≡ 0`, `⋆` otherwise.
pub fn pattern_of(f: &BooleanFunction, h: &Subspace) -> Result<PartialPattern> {
    if h.codim() > MAX_PATTERN_ORDER {
        return Err(Error::TooLarge { dim: h.codim(), max: MAX_PATTERN_ORDER });
    }
    let size = 1u64 << h.dim();
    let values = coset_ones(f, h)?
        .into_iter()
        .map(|o| match o {
            0 => Some(false),
            o if o == size => Some(true),
            _ => None,
        })
        .collect();
    PartialPattern::new(h.codim(), values)
}

/// Settings of [`modification_pipeline`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Dimension of the structured block used in step 3.
    pub block_dim: usize,
    pub budget: RegularityBudget,
    pub max_tries: usize,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { block_dim: 2, budget: RegularityBudget::default(), max_tries: 256, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineReport {
    pub regularity: FunctionalRegularity,
    pub transversal: UniformTransversal,
    pub block: Option<StructuredBlock>,
    pub modified: ModifiedFunction,
    pub distance: BigRational,
    pub free: FreeReport,
    pub pattern: Option<PartialPattern>,
    /// When `F` is not free: index of a realized system partially induced by `μ`.
    pub pattern_induces: Option<Option<usize>>,
}

/// Smallest `m` with `2^-m ≤ eps/8`.
pub fn initial_order(eps: &BigRational) -> usize {
    let target = eps / BigRational::from_integer(8.into());
    (0..64).find(|m| BigRational::new(1.into(), BigInt::from(1u8) << m) <= target).unwrap_or(64)
}

/// Regularizes `f`, picks a transversal, finds a block inside `H'`, builds `F`
/// and extracts its pattern on `F2^n / H`.
pub fn modification_pipeline(
    f: &BooleanFunction,
    fam: &Family,
    eps: &BigRational,
    cfg: &PipelineConfig,
) -> Result<PipelineReport> {
    if eps <= &BigRational::from_integer(0.into()) || eps > &BigRational::one() {
        return Err(Error::InvalidArgument("eps must lie in (0, 1]".into()));
    }
    let eps8 = eps / BigRational::from_integer(8.into());
    let m = initial_order(eps).min(f.n());
    let base = eps8.clone();
    let schedule = move |r: usize| {
        let cap = BigRational::new(1.into(), BigInt::from(1u8) << (r + 1));
        let sixth = &base / BigRational::from_integer(6.into());
        if r == 0 { base.clone() } else { base.clone().min(sixth).min(cap) }
    };
    let regularity = functional_regularize(f, m, &schedule, cfg.budget)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let plain = |_r: usize| eps8.clone();
    let transversal =
        pick_uniform_transversal(f, regularity.h(), regularity.h_prime(), &plain, &mut rng, cfg.max_tries)?;
    let gamma = BigRational::from_float(counting_constants(&eps8.clone().min(BigRational::new(1.into(), 2.into())), 3)?.gamma)
        .expect("finite");
    let inner = f.restrict_bits(regularity.h_prime(), 0);
    let block = find_structured_block(&inner, cfg.block_dim, &gamma, cfg.budget)?
        .map(|b| lift_block(&b, regularity.h_prime()))
        .transpose()?;
    let modified = build_modified_function(f, &transversal, block.as_ref(), eps)?;
    let distance = distance(f, &modified.f)?;
    let free = is_free(&modified.f, fam)?;
    let pattern = if regularity.h().codim() <= MAX_PATTERN_ORDER {
        Some(pattern_of(&modified.f, regularity.h())?)
    } else {
        None
    };
    let pattern_induces = match (&pattern, free.free) {
        (Some(mu), false) => {
            let systems = fam.realize()?;
            let mut hit = None;
            for (i, s) in systems.iter().enumerate() {
                if partial_witness(mu, s)?.is_some() {
                    hit = Some(i);
                    break;
                }
            }
            Some(hit)
        }
        _ => None,
    };
    Ok(PipelineReport { regularity, transversal, block, modified, distance, free, pattern, pattern_induces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::LinearMap;
    use crate::systems::InducedSystem;
    use rand::Rng;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn identity_transversal(h: &Subspace) -> UniformTransversal {
        let cols = h.complement_basis();
        UniformTransversal {
            h: h.clone(),
            h_prime: h.clone(),
            map: LinearMap::new(h.codim(), h.ambient_dim(), cols).unwrap(),
            tries: 1,
            mismatch_fraction: q(0, 1),
        }
    }

    #[test]
    fn constant_is_untouched() {
        let f = BooleanFunction::constant(8, true).unwrap();
        let t = identity_transversal(&Subspace::standard(8, 3).unwrap());
        let m = build_modified_function(&f, &t, None, &q(1, 2)).unwrap();
        assert_eq!(m.f, f);
        assert!(m.change_log.is_empty());
    }

    #[test]
    fn near_full_coset_is_rounded_up() {
        // ε = 1/2, so a coset of density 1 − 1/16 lies above 1 − ε/4
        let h = Subspace::standard(8, 3).unwrap();
        let rep = h.quotient_rep(5);
        let f = BooleanFunction::from_fn(8, |x| {
            h.quotient_coords(x) == 5 && h.coordinates_of(x ^ rep).map_or(false, |c| c % 16 != 0)
        })
        .unwrap();
        assert_eq!(f.ones(), 30);
        let t = identity_transversal(&h);
        let m = build_modified_function(&f, &t, None, &q(1, 2)).unwrap();
        assert_eq!(m.change_log, vec![Change { coset: CosetRef::Quotient(5), step: 2, old_ones: 30, new_value: true }]);
        assert_eq!(m.f.ones(), 32);
    }

    #[test]
    fn pattern_examples() {
        let one = BooleanFunction::constant(5, true).unwrap();
        let h = Subspace::standard(5, 2).unwrap();
        assert!(pattern_of(&one, &h).unwrap().values().iter().all(|v| *v == Some(true)));
        let a = crate::f2::F2Vector::parse_bits("10000").unwrap();
        let hp = BooleanFunction::hyperplane(&a).unwrap();
        let kernel = Subspace::full(5).character_kernel(a.bits());
        let mu = pattern_of(&hp, &kernel).unwrap();
        assert_eq!(mu.values(), &[Some(true), Some(false)]);
        assert!(pattern_of(&one, &Subspace::zero(5)).is_ok());
    }

    #[test]
    fn initial_orders() {
        assert_eq!(initial_order(&q(1, 2)), 4);
        assert_eq!(initial_order(&q(1, 1)), 3);
        assert_eq!(initial_order(&q(1, 10)), 7);
    }

    #[test]
    fn pipeline_on_random_functions() {
        let fam = Family::new(vec![
            InducedSystem::parse(&["111"], "111").unwrap(),
            InducedSystem::parse(&["111"], "011").unwrap(),
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(80);
        for seed in 0..6 {
            let f = BooleanFunction::random(9, rng.gen_range(0.05..0.95), &mut rng).unwrap();
            let cfg = PipelineConfig { seed, ..PipelineConfig::default() };
            let rep = modification_pipeline(&f, &fam, &q(1, 2), &cfg).unwrap();
            assert!(rep.distance <= q(1, 2));
            if !rep.free.free {
                assert!(matches!(rep.pattern_induces, Some(Some(_))));
            }
        }
    }
}
