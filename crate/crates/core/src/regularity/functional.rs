use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::partition::{analyze_cosets, below, coset_ones, green_regularize, ratio, RegularityBudget, RegularityPartition};
use crate::boolfn::BooleanFunction;
use crate::error::{check_dim, Error, Result};
use crate::f2::{LinearMap, Subspace};

/// A parameter schedule `r ↦ E(r)`; values are made non-increasing by taking prefix minima.
pub type Schedule<'a> = &'a (dyn Fn(usize) -> BigRational + Sync);

pub(crate) fn prefix_min(e: Schedule<'_>, r: usize) -> BigRational {
    (0..=r).map(e).min().expect("nonempty range")
}

fn pow2(k: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(1u8) << k)
}

/// Coset densities of `f` over `H` against the overall density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectReport {
    /// Fraction of cosets with `|ρ(f_H^{+g}) − ρ(f)| > t`.
    pub deviating_fraction: BigRational,
    pub index: BigRational,
    /// `ρ^2 + t^3/2`.
    pub threshold: BigRational,
    pub premise: bool,
    pub conclusion: bool,
}

impl DefectReport {
    pub fn holds(&self) -> bool {
        !self.premise || self.conclusion
    }
}

/// If at least a `t` fraction of cosets deviate from the mean density by more
/// than `t`, the index exceeds `ρ^2 + t^3/2`.
pub fn defect_check(f: &BooleanFunction, h: &Subspace, t: &BigRational) -> Result<DefectReport> {
    let ones = coset_ones(f, h)?;
    let rho = f.density();
    let size = pow2(h.dim());
    let deviating = ones
        .iter()
        .filter(|o| (&(BigRational::from_integer(BigInt::from(**o)) / &size) - &rho).abs() > *t)
        .count();
    let deviating_fraction = ratio(deviating, ones.len());
    let index = super::partition::index(f, h)?;
    let threshold = &rho * &rho + t * t * t / BigRational::from_integer(2.into());
    Ok(DefectReport {
        premise: deviating_fraction >= *t,
        conclusion: index > threshold,
        deviating_fraction,
        index,
        threshold,
    })
}

/// Density agreement between an `H`-partition and a refinement `H' ≤ H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub gap: BigRational,
    /// Fraction of `g` for which more than `eps|H|` of the `h ∈ H` have
    /// `|ρ(f_H^{+g}) − ρ(f_{H'}^{+g+h})| > eps`.
    pub bad_fraction: BigRational,
    /// `gap ≤ eps^4 / 2`.
    pub premise: bool,
    /// `bad_fraction ≤ eps`.
    pub conclusion: bool,
}

impl GapReport {
    pub fn holds(&self) -> bool {
        !self.premise || self.conclusion
    }
}

/// A small index gap forces most refined cosets to keep the coarse density.
pub fn index_gap_to_density(
    f: &BooleanFunction,
    h: &Subspace,
    h_prime: &Subspace,
    eps: &BigRational,
) -> Result<GapReport> {
    check_dim(h.ambient_dim(), h_prime.ambient_dim())?;
    if !h_prime.is_subspace_of(h) {
        return Err(Error::InvalidArgument("H' must be a subspace of H".into()));
    }
    let coarse = coset_ones(f, h)?;
    let fine = coset_ones(f, h_prime)?;
    let (dh, dp) = (h.dim(), h_prime.dim());
    // |ρ_c − ρ_s| > eps  ⟺  |ones_c·2^dp − ones_s·2^dh| > eps·2^(dh+dp)
    let limit = eps * pow2(dh + dp);
    let mut deviating = vec![0u64; coarse.len()];
    for (s, ones_s) in fine.iter().enumerate() {
        let c = h.quotient_coords(h_prime.quotient_rep(s as u64)) as usize;
        let diff = (i128::from(coarse[c]) << dp) - (i128::from(*ones_s) << dh);
        if BigRational::from_integer(BigInt::from(diff.abs())) > limit {
            deviating[c] += 1u64 << dp;
        }
    }
    let point_limit = eps * pow2(dh);
    let bad = deviating
        .iter()
        .filter(|pts| BigRational::from_integer(BigInt::from(**pts)) > point_limit)
        .count();
    let gap = super::partition::index(f, h_prime)? - super::partition::index(f, h)?;
    let bad_fraction = ratio(bad, coarse.len());
    let threshold = eps.pow(4) / BigRational::from_integer(2.into());
    Ok(GapReport { premise: gap <= threshold, conclusion: bad_fraction <= *eps, gap, bad_fraction })
}

/// Post-hoc checks of the four guarantees of a functional regularization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guarantees {
    /// `m ≤ k ≤ l` for the orders of `H` and `H'`.
    pub orders: bool,
    /// All but an `E(0)` fraction of `H`-cosets are `E(0)`-uniform.
    pub coarse_uniform: bool,
    /// Inside every `H`-coset, all but an `E(k)` fraction of `H'`-subcosets are `E(k)`-uniform.
    pub fine_uniform: bool,
    /// The conclusion of [`index_gap_to_density`] with `eps = E(0)`.
    pub density_agreement: bool,
}

impl Guarantees {
    pub fn all(&self) -> bool {
        self.orders && self.coarse_uniform && self.fine_uniform && self.density_agreement
    }
}

/// A pair `H' ≤ H` produced by [`functional_regularize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalRegularity {
    pub coarse: RegularityPartition,
    pub fine: RegularityPartition,
    pub iterations: usize,
    pub gap: GapReport,
    pub guarantees: Guarantees,
    /// Some refinement hit its budget.
    pub flagged: bool,
}

impl FunctionalRegularity {
    pub fn h(&self) -> &Subspace {
        &self.coarse.h
    }

    pub fn h_prime(&self) -> &Subspace {
        &self.fine.h
    }
}

/// Iterates [`green_regularize`] with parameter `E(k)·2^-k` (`k` the current
/// order), starting from a partition of order `m` regularized at `E(0)`, until
/// the index gains less than `E(0)^4/2`. The last two partitions are `H` and `H'`.
pub fn functional_regularize(
    f: &BooleanFunction,
    m: usize,
    e: Schedule<'_>,
    budget: RegularityBudget,
) -> Result<FunctionalRegularity> {
    let n = f.n();
    if m > n {
        return Err(Error::InvalidArgument(format!("initial order {m} exceeds n = {n}")));
    }
    let eps0 = prefix_min(e, 0);
    if eps0 <= BigRational::zero() || eps0 > BigRational::one() {
        return Err(Error::InvalidArgument("E(0) must lie in (0, 1]".into()));
    }
    let stop = eps0.pow(4) / BigRational::from_integer(2.into());
    let mut flagged = false;
    let mut cur = green_regularize(f, &eps0, &Subspace::standard(n, m)?, budget)?;
    flagged |= cur.flagged;
    let mut iterations = 1;
    loop {
        let k = cur.order;
        let param = prefix_min(e, k) / pow2(k);
        if param <= BigRational::zero() {
            return Err(Error::InvalidArgument(format!("E({k}) must be positive")));
        }
        let next = green_regularize(f, &param, &cur.h, budget)?;
        flagged |= next.flagged;
        iterations += 1;
        let done = &next.index - &cur.index <= stop;
        if done || iterations > budget.max_rounds {
            flagged |= !done;
            return finish(f, m, e, cur, next, iterations, flagged);
        }
        cur = next;
    }
}

fn finish(
    f: &BooleanFunction,
    m: usize,
    e: Schedule<'_>,
    coarse: RegularityPartition,
    fine: RegularityPartition,
    iterations: usize,
    flagged: bool,
) -> Result<FunctionalRegularity> {
    let eps0 = prefix_min(e, 0);
    let k = coarse.order;
    let ek = prefix_min(e, k);
    let coarse_bad = coarse.cosets.iter().filter(|c| !below(c.max_numerator, coarse.h.dim(), &eps0)).count();
    let coarse_uniform = ratio(coarse_bad, coarse.cosets.len()) <= eps0;
    let mut bad_in = vec![0usize; coarse.cosets.len()];
    for (s, c) in fine.cosets.iter().enumerate() {
        if !below(c.max_numerator, fine.h.dim(), &ek) {
            let owner = coarse.h.quotient_coords(fine.h.quotient_rep(s as u64)) as usize;
            bad_in[owner] += 1;
        }
    }
    let per_coset = 1usize << (fine.order - k);
    let fine_uniform = bad_in.iter().all(|b| ratio(*b, per_coset) <= ek);
    let gap = index_gap_to_density(f, &coarse.h, &fine.h, &eps0)?;
    let guarantees = Guarantees {
        orders: m <= k && k <= fine.order,
        coarse_uniform,
        fine_uniform,
        density_agreement: gap.conclusion,
    };
    Ok(FunctionalRegularity { coarse, fine, iterations, gap, guarantees, flagged })
}

/// An affine-linear choice of `H'`-cosets, one inside each `H`-coset.
///
/// `map` sends quotient coordinates `u ∈ F2^k` of `F2^n / H` to `I(u) ∈ u + H`;
/// it is linear and injective, so `I(u) + H' ⊆ u + H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformTransversal {
    pub h: Subspace,
    pub h_prime: Subspace,
    pub map: LinearMap,
    pub tries: usize,
    /// Fraction of `H`-cosets whose density differs from that of their chosen
    /// `H'`-coset by more than `E(0)`.
    pub mismatch_fraction: BigRational,
}

impl UniformTransversal {
    pub fn image(&self, coords: u64) -> u64 {
        self.map.apply_bits(coords)
    }
}

/// Draws `I(u_i) = u_i + v_i` with `v_i` uniform in `H` (mod `H'`) on the
/// quotient basis, until every nonzero `u` lands on an `E(k)`-uniform
/// `H'`-coset and at most an `E(0)` fraction of `H`-cosets disagree in
/// density with their image by more than `E(0)`.
pub fn pick_uniform_transversal<R: Rng + ?Sized>(
    f: &BooleanFunction,
    h: &Subspace,
    h_prime: &Subspace,
    e: Schedule<'_>,
    rng: &mut R,
    max_tries: usize,
) -> Result<UniformTransversal> {
    check_dim(f.n(), h.ambient_dim())?;
    let lifts = h.relative_complement(h_prime)?;
    let k = h.codim();
    let eps0 = prefix_min(e, 0);
    let ek = prefix_min(e, k);
    let coarse = coset_ones(f, h)?;
    let fine = analyze_cosets(f, h_prime)?;
    let (dh, dp) = (h.dim(), h_prime.dim());
    let limit = &eps0 * pow2(dh + dp);
    let uniform: Vec<bool> = fine.iter().map(|c| below(c.max_numerator, dp, &ek)).collect();
    let quotient_basis = h.complement_basis();
    for tries in 1..=max_tries {
        let columns: Vec<u64> = quotient_basis
            .iter()
            .map(|u| {
                let v = lifts.iter().filter(|_| rng.gen::<bool>()).fold(0u64, |a, b| a ^ b);
                u ^ v
            })
            .collect();
        let map = LinearMap::new(k, f.n(), columns)?;
        let mut ok = true;
        let mut mismatched = 0usize;
        for u in 0..1u64 << k {
            let s = h_prime.quotient_coords(map.apply_bits(u)) as usize;
            if u != 0 && !uniform[s] {
                ok = false;
                break;
            }
            let diff = (i128::from(coarse[u as usize]) << dp) - (i128::from(fine[s].ones) << dh);
            if BigRational::from_integer(BigInt::from(diff.abs())) > limit {
                mismatched += 1;
            }
        }
        let mismatch_fraction = ratio(mismatched, coarse.len());
        if ok && mismatch_fraction <= eps0 {
            return Ok(UniformTransversal {
                h: h.clone(),
                h_prime: h_prime.clone(),
                map,
                tries,
                mismatch_fraction,
            });
        }
    }
    Err(Error::BudgetExceeded(format!("no admissible transversal in {max_tries} tries")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::random_subspace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn defect_claim_on_random_partitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for i in 0..200 {
            let f = BooleanFunction::random(8, 0.1 + 0.004 * i as f64, &mut rng).unwrap();
            let h = random_subspace(8, rng.gen_range(0..8), &mut rng).unwrap();
            let t = q(rng.gen_range(1..10), 20);
            let rep = defect_check(&f, &h, &t).unwrap();
            assert!(rep.holds(), "{rep:?}");
        }
    }

    #[test]
    fn gap_claim_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..200 {
            let f = BooleanFunction::random(8, 0.5, &mut rng).unwrap();
            let h = random_subspace(8, rng.gen_range(1..8), &mut rng).unwrap();
            let inner = random_subspace(h.dim(), rng.gen_range(0..=h.dim()), &mut rng).unwrap();
            let gens: Vec<u64> = inner.basis_bits().iter().map(|c| h.combine(*c)).collect();
            let hp = Subspace::from_bits(8, &gens).unwrap();
            let rep = index_gap_to_density(&f, &h, &hp, &q(rng.gen_range(1..8), 8)).unwrap();
            assert!(rep.holds(), "{rep:?}");
        }
    }

    #[test]
    fn gap_is_zero_for_equal_spaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let f = BooleanFunction::random(6, 0.5, &mut rng).unwrap();
        let h = random_subspace(6, 3, &mut rng).unwrap();
        let rep = index_gap_to_density(&f, &h, &h, &q(1, 10)).unwrap();
        assert_eq!(rep.gap, q(0, 1));
        assert_eq!(rep.bad_fraction, q(0, 1));
    }

    #[test]
    fn functional_regularity_guarantees_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let e = |_r: usize| q(1, 4);
        for _ in 0..6 {
            let f = BooleanFunction::random(9, 0.5, &mut rng).unwrap();
            let reg = functional_regularize(&f, 2, &e, RegularityBudget::default()).unwrap();
            assert!(!reg.flagged);
            assert!(reg.guarantees.all(), "{:?}", reg.guarantees);
            assert!(reg.h_prime().is_subspace_of(reg.h()));
        }
    }

    #[test]
    fn coset_structured_function_stops_early() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let v = random_subspace(10, 6, &mut rng).unwrap();
        let colours: Vec<bool> = (0..16).map(|_| rng.gen()).collect();
        let f = BooleanFunction::from_fn(10, |x| colours[v.quotient_coords(x) as usize]).unwrap();
        let e = |_r: usize| q(1, 8);
        let reg = functional_regularize(&f, 1, &e, RegularityBudget::default()).unwrap();
        assert!(reg.guarantees.all());
        assert!(reg.h().dim() >= 5);
        assert!(reg.fine.cosets.iter().all(|c| c.max_numerator == 0));
    }

    #[test]
    fn transversal_stays_inside_cosets() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let e = |_r: usize| q(1, 4);
        for _ in 0..5 {
            let f = BooleanFunction::random(9, 0.5, &mut rng).unwrap();
            let reg = functional_regularize(&f, 2, &e, RegularityBudget::default()).unwrap();
            let t = pick_uniform_transversal(&f, reg.h(), reg.h_prime(), &e, &mut rng, 200).unwrap();
            assert!(t.map.is_injective());
            assert!(t.mismatch_fraction <= q(1, 4));
            for u in 0..1u64 << reg.h().codim() {
                assert_eq!(reg.h().quotient_coords(t.image(u)), u);
            }
        }
    }
}
