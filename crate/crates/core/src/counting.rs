//! Lower bounds on the number of induced copies of a system inside
//! prescribed cosets of a subspace.
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::boolfn::{BooleanFunction, Dyadic};
use crate::error::{check_dim, Error, Result};
use crate::f2::Subspace;
use crate::systems::{complexity, InducedSystem, KernelWalk};

/// Constants of the counting bound for density `eta` and `k` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct CountingConstants {
    /// Largest double not exceeding `(eta^k / 2)^(1/(k−2))`.
    pub gamma: f64,
    /// `eta^k / 2`, exactly.
    pub delta: BigRational,
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// `γ = (η^k/2)^(1/(k−2))` rounded toward zero and `δ = η^k/2`.
pub fn counting_constants(eta: &BigRational, k: usize) -> Result<CountingConstants> {
    if k <= 2 {
        return Err(Error::InvalidArgument(format!("need k > 2, got {k}")));
    }
    if eta <= &BigRational::zero() || eta >= &BigRational::one() {
        return Err(Error::InvalidArgument("eta must lie in (0, 1)".into()));
    }
    let delta = eta.pow(k as i32) / BigRational::from_integer(2.into());
    let e = (k - 2) as i32;
    let approx = num_traits::ToPrimitive::to_f64(&delta).expect("in range").powf(1.0 / f64::from(e));
    let fits = |g: f64| exact(g).pow(e) <= delta;
    let mut gamma = approx;
    while !fits(gamma) {
        gamma = gamma.next_down();
    }
    while fits(gamma.next_up()) {
        gamma = gamma.next_up();
    }
    Ok(CountingConstants { gamma, delta })
}

/// `max^2 ≤ γ^2 (1 − 2^-52)`, which is strictly below the true `γ^2`.
pub fn passes_gamma(max: Dyadic, gamma: f64) -> bool {
    let m = max.abs().to_rational();
    let slack = BigRational::one() - BigRational::new(1.into(), BigInt::from(1u8) << 52);
    &m * &m <= exact(gamma) * exact(gamma) * slack
}

/// The hypothesis of the counting bound, measured on a concrete function.
#[derive(Clone, Debug, PartialEq)]
pub struct CountingHypothesis {
    pub sys: InducedSystem,
    pub h: Subspace,
    /// Quotient coordinates of `u_1, …, u_k` with `Mu = 0`.
    pub u: Vec<u64>,
    pub eta: BigRational,
    pub constants: CountingConstants,
    pub densities: Vec<BigRational>,
    pub max_coeffs: Vec<Dyadic>,
    pub hypothesis_holds: bool,
}

/// Which bound a [`CountReport`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// One equation: the bound is proved and enforced.
    SingleEquation,
    /// Several equations of complexity 1: the threshold is only compared against.
    Empirical,
    /// Complexity above 1: no threshold applies.
    Unsupported,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountReport {
    pub hypothesis: CountingHypothesis,
    pub count: u64,
    pub kind: BoundKind,
    /// `δ |H|^(k−m)`.
    pub threshold: BigRational,
    pub meets_threshold: bool,
}

fn support_weight(sys: &InducedSystem) -> usize {
    sys.matrix().row_bits().iter().fold(0u64, |a, r| a | r).count_ones() as usize
}

impl CountingHypothesis {
    /// Measures densities and largest coefficients of `f` on the cosets `u_i + H`.
    ///
    /// For a single equation the constants use the number of variables that
    /// actually occur in it, so that unused variables only scale the count.
    pub fn measure(
        f: &BooleanFunction,
        sys: &InducedSystem,
        h: &Subspace,
        u: &[u64],
        eta: &BigRational,
    ) -> Result<Self> {
        check_dim(f.n(), h.ambient_dim())?;
        check_dim(sys.k(), u.len())?;
        if u.iter().any(|c| *c >> h.codim() != 0) {
            return Err(Error::InvalidArgument("coset coordinates exceed the quotient dimension".into()));
        }
        for row in sys.matrix().row_bits() {
            let s = u.iter().enumerate().filter(|(i, _)| (row >> i) & 1 == 1).fold(0u64, |a, (_, c)| a ^ c);
            if s != 0 {
                return Err(Error::InvalidArgument("coset tuple does not satisfy the system".into()));
            }
        }
        let k_eff = if sys.m() == 1 { support_weight(sys) } else { sys.k() };
        let constants = counting_constants(eta, k_eff.max(3))?;
        let mut densities = Vec::with_capacity(u.len());
        let mut max_coeffs = Vec::with_capacity(u.len());
        let mut holds = true;
        for (i, c) in u.iter().enumerate() {
            let rec = crate::regularity::partition_record(f, h, h.quotient_rep(*c));
            let rho = BigRational::new(BigInt::from(rec.ones), BigInt::from(1u8) << h.dim());
            let max = Dyadic::new(rec.max_numerator, h.dim() as u32);
            let dense_enough = if (sys.sigma() >> i) & 1 == 1 {
                rho >= *eta
            } else {
                rho <= BigRational::one() - eta
            };
            holds &= dense_enough && passes_gamma(max, constants.gamma);
            densities.push(rho);
            max_coeffs.push(max);
        }
        Ok(CountingHypothesis {
            sys: sys.clone(),
            h: h.clone(),
            u: u.to_vec(),
            eta: eta.clone(),
            constants,
            densities,
            max_coeffs,
            hypothesis_holds: holds,
        })
    }
}

/// Exact number of inducing tuples with `x_i ∈ u_i + H`.
pub fn coset_restricted_count(f: &BooleanFunction, sys: &InducedSystem, h: &Subspace, u: &[u64]) -> Result<u64> {
    check_dim(f.n(), h.ambient_dim())?;
    check_dim(sys.k(), u.len())?;
    let offsets: Vec<u64> = u.iter().map(|c| h.quotient_rep(*c)).collect();
    for row in sys.matrix().row_bits() {
        let s = offsets.iter().enumerate().filter(|(i, _)| (row >> i) & 1 == 1).fold(0u64, |a, (_, v)| a ^ v);
        if s != 0 {
            return Ok(0);
        }
    }
    let sigma = sys.sigma();
    Ok(KernelWalk::new(f, sys.matrix(), h.basis_bits().to_vec(), offsets)?.count(|p| p == sigma))
}

/// Measures the hypothesis, counts exactly and compares with `δ|H|^(k−m)`.
///
/// For a single equation whose hypothesis holds, a count below the bound is
/// reported as [`Error::InvariantViolated`].
pub fn check_and_count(f: &BooleanFunction, hyp: &CountingHypothesis) -> Result<CountReport> {
    let sys = &hyp.sys;
    let count = coset_restricted_count(f, sys, &hyp.h, &hyp.u)?;
    let kind = if sys.m() == 1 {
        BoundKind::SingleEquation
    } else if sys.k() <= crate::systems::MAX_COMPLEXITY_K && complexity(sys.matrix())? == 1 {
        BoundKind::Empirical
    } else {
        BoundKind::Unsupported
    };
    let size = BigRational::from_integer(BigInt::from(1u8) << (hyp.h.dim() * (sys.k() - sys.m())));
    let threshold = &hyp.constants.delta * size;
    let meets_threshold = BigRational::from_integer(count.into()) >= threshold;
    if kind == BoundKind::SingleEquation && hyp.hypothesis_holds && !meets_threshold {
        return Err(Error::InvariantViolated(format!(
            "count {count} below the guaranteed {threshold} for {sys}"
        )));
    }
    Ok(CountReport { hypothesis: hyp.clone(), count, kind, threshold, meets_threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::random_subspace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn constants_at_one_half() {
        let c = counting_constants(&q(1, 2), 3).unwrap();
        assert_eq!(c.gamma, 1.0 / 16.0);
        assert_eq!(c.delta, q(1, 16));
        let c = counting_constants(&q(1, 2), 4).unwrap();
        assert_eq!(c.delta, q(1, 32));
        assert!((c.gamma - 0.176_776_695).abs() < 1e-8);
        assert!(exact(c.gamma).pow(2) <= q(1, 32));
        assert!(exact(c.gamma.next_up()).pow(2) > q(1, 32));
    }

    #[test]
    fn constants_reject_bad_input() {
        assert!(counting_constants(&q(1, 2), 2).is_err());
        assert!(counting_constants(&q(1, 1), 3).is_err());
        assert!(counting_constants(&q(0, 1), 3).is_err());
    }

    #[test]
    fn constants_are_monotone() {
        for k in 3..8 {
            let mut prev = counting_constants(&q(1, 100), k).unwrap();
            for a in 2..100 {
                let c = counting_constants(&q(a, 100), k).unwrap();
                assert!(c.gamma >= prev.gamma && c.delta > prev.delta);
                prev = c;
            }
            let next = counting_constants(&q(1, 3), k + 1).unwrap();
            assert!(next.delta < counting_constants(&q(1, 3), k).unwrap().delta);
        }
    }

    #[test]
    fn full_space_matches_count_induced() {
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        let sys = InducedSystem::parse(&["111"], "110").unwrap();
        let f = BooleanFunction::random(7, 0.5, &mut rng).unwrap();
        let h = Subspace::full(7);
        assert_eq!(
            coset_restricted_count(&f, &sys, &h, &[0, 0, 0]).unwrap(),
            crate::systems::count_induced(&f, &sys).unwrap()
        );
    }

    #[test]
    fn indicator_of_coset() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let h = random_subspace(8, 5, &mut rng).unwrap();
        let v = 5u64;
        let f = BooleanFunction::from_fn(8, |x| h.quotient_coords(x) == v).unwrap();
        let sys = InducedSystem::parse(&["111"], "110").unwrap();
        assert_eq!(coset_restricted_count(&f, &sys, &h, &[v, v, 0]).unwrap(), 1 << 10);
    }

    #[test]
    fn restricted_count_matches_naive_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let sys = InducedSystem::parse(&["111"], "101").unwrap();
        for _ in 0..10 {
            let f = BooleanFunction::random(8, 0.5, &mut rng).unwrap();
            let h = random_subspace(8, rng.gen_range(1..6), &mut rng).unwrap();
            let a = rng.gen_range(0..1u64 << h.codim());
            let b = rng.gen_range(0..1u64 << h.codim());
            let u = [a, b, a ^ b];
            let reps: Vec<u64> = u.iter().map(|c| h.quotient_rep(*c)).collect();
            let els = h.elements_by_coefficients().unwrap();
            let mut naive = 0u64;
            for x in &els {
                for y in &els {
                    let (x1, x2) = (reps[0] ^ x, reps[1] ^ y);
                    naive += (f.get(x1) && !f.get(x2) && f.get(x1 ^ x2)) as u64;
                }
            }
            assert_eq!(coset_restricted_count(&f, &sys, &h, &u).unwrap(), naive);
        }
    }

    #[test]
    fn constant_one_meets_the_bound() {
        let f = BooleanFunction::constant(8, true).unwrap();
        let h = Subspace::standard(8, 2).unwrap();
        let sys = InducedSystem::parse(&["111"], "111").unwrap();
        let hyp = CountingHypothesis::measure(&f, &sys, &h, &[1, 2, 3], &q(1, 2)).unwrap();
        assert!(hyp.hypothesis_holds);
        let rep = check_and_count(&f, &hyp).unwrap();
        assert_eq!(rep.count, 1 << 12);
        assert_eq!(rep.kind, BoundKind::SingleEquation);
        assert!(rep.meets_threshold);
    }

    #[test]
    fn sparse_coset_breaks_hypothesis() {
        let h = Subspace::standard(8, 2).unwrap();
        let f = BooleanFunction::from_fn(8, |x| h.quotient_coords(x) != 3).unwrap();
        let sys = InducedSystem::parse(&["111"], "111").unwrap();
        let hyp = CountingHypothesis::measure(&f, &sys, &h, &[1, 2, 3], &q(1, 2)).unwrap();
        assert!(!hyp.hypothesis_holds);
        let rep = check_and_count(&f, &hyp).unwrap();
        assert_eq!(rep.count, 0);
        assert!(!rep.meets_threshold);
    }
}
