use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::f2::{random_point_span, random_subspace, F2Vector, Subspace};
use crate::systems::{induces_at_bits, is_free_systems, Family, InducedSystem, Witness};

/// How a trial picks its subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SampleMode {
    /// Uniform over `d`-dimensional subspaces.
    #[default]
    Subspace,
    /// Span of `d` independent uniform points (dimension may drop).
    Points,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TesterConfig {
    pub eps: BigRational,
    /// Dimension of the sampled subspace.
    pub d: usize,
    pub trials: usize,
    /// Functions on at most this many variables are checked exhaustively.
    pub small_n_cutoff: usize,
    pub seed: u64,
    pub mode: SampleMode,
}

impl TesterConfig {
    pub fn new(eps: BigRational, d: usize, trials: usize) -> Self {
        TesterConfig { eps, d, trials, small_n_cutoff: 0, seed: 0, mode: SampleMode::Subspace }
    }

    fn check(&self) -> Result<()> {
        if self.d == 0 || self.trials == 0 {
            return Err(Error::InvalidArgument("need d ≥ 1 and trials ≥ 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub accept: bool,
    pub witness: Option<Witness>,
    pub queries: u64,
    pub mode: TestMode,
    /// Index of the rejecting trial.
    pub trial: Option<usize>,
}

/// The decision rule: sees the restricted table and nothing else.
pub fn decide(table: &BooleanFunction, systems: &[InducedSystem]) -> Result<Option<Witness>> {
    Ok(is_free_systems(table, systems)?.witness)
}

/// RNG of trial `t`: the seed's ChaCha8 stream number `t`.
pub fn trial_rng(seed: u64, t: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t as u64);
    rng
}

fn sample(n: usize, d: usize, mode: SampleMode, rng: &mut ChaCha8Rng) -> Result<Subspace> {
    match mode {
        SampleMode::Subspace => random_subspace(n, d, rng),
        SampleMode::Points => random_point_span(n, d, rng),
    }
}

/// Maps a witness on the coefficient space of `h` back to F2^n and re-checks it on `f`.
fn lift(f: &BooleanFunction, systems: &[InducedSystem], h: &Subspace, w: Witness) -> Result<Witness> {
    let xs: Vec<u64> = w.x.iter().map(|x| h.combine(x.bits())).collect();
    if !induces_at_bits(f, &systems[w.system], &xs) {
        return Err(Error::InvariantViolated("lifted witness does not induce on f".into()));
    }
    Ok(Witness { system: w.system, x: xs.into_iter().map(|x| F2Vector::truncated(f.n(), x)).collect() })
}

struct Trial {
    queries: u64,
    witness: Option<Witness>,
}

fn run_trial(f: &BooleanFunction, systems: &[InducedSystem], d: usize, mode: SampleMode, seed: u64, t: usize) -> Result<Trial> {
    let mut rng = trial_rng(seed, t);
    let h = sample(f.n(), d, mode, &mut rng)?;
    let table = f.restrict_bits(&h, 0);
    let witness = decide(&table, systems)?.map(|w| lift(f, systems, &h, w)).transpose()?;
    Ok(Trial { queries: 1 << h.dim(), witness })
}

/// One-sided test for freeness from the family: restricts `f` to random
/// `d`-dimensional subspaces and rejects on any induced copy.
pub fn oblivious_test(f: &BooleanFunction, fam: &Family, cfg: &TesterConfig) -> Result<Verdict> {
    cfg.check()?;
    let systems = fam.realize()?;
    let n = f.n();
    if n <= cfg.small_n_cutoff || cfg.d >= n {
        let witness = decide(f, &systems)?;
        return Ok(Verdict {
            accept: witness.is_none(),
            witness,
            queries: f.size() as u64,
            mode: TestMode::Exhaustive,
            trial: None,
        });
    }
    let trials: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(f, &systems, cfg.d, cfg.mode, cfg.seed, t))
        .collect::<Result<_>>()?;
    let first = trials.iter().position(|t| t.witness.is_some());
    let upto = first.map_or(trials.len(), |i| i + 1);
    Ok(Verdict {
        accept: first.is_none(),
        witness: first.and_then(|i| trials[i].witness.clone()),
        queries: trials[..upto].iter().map(|t| t.queries).sum(),
        mode: TestMode::Sampled,
        trial: first,
    })
}

/// Fraction of rejecting single-subspace trials with a Wilson 95% interval.
#[derive(Clone, Debug, PartialEq)]
pub struct RejectEstimate {
    pub rejects: usize,
    pub trials: usize,
    pub estimate: BigRational,
    pub lower: f64,
    pub upper: f64,
}

const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95% for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

pub fn estimate_reject_prob(
    f: &BooleanFunction,
    fam: &Family,
    d: usize,
    trials: usize,
    seed: u64,
    mode: SampleMode,
) -> Result<RejectEstimate> {
    if d == 0 || trials == 0 {
        return Err(Error::InvalidArgument("need d ≥ 1 and trials ≥ 1".into()));
    }
    let systems = fam.realize()?;
    let d = d.min(f.n());
    let outcomes: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(f, &systems, d, mode, seed, t).map(|r| r.witness.is_some()))
        .collect::<Result<_>>()?;
    let rejects = outcomes.iter().filter(|r| **r).count();
    let (lower, upper) = wilson_interval(rejects, trials);
    Ok(RejectEstimate {
        rejects,
        trials,
        estimate: BigRational::new(rejects.into(), trials.into()),
        lower,
        upper,
    })
}

/// The span of a query trace and the values of `f` on it, in coefficient order.
pub fn canonical_wrap(trace: &[F2Vector], f: &BooleanFunction) -> Result<(Subspace, Vec<bool>)> {
    if trace.is_empty() {
        return Err(Error::InvalidArgument("empty query trace".into()));
    }
    let h = Subspace::span(trace)?;
    crate::error::check_dim(f.n(), h.ambient_dim())?;
    let answers = h.elements_by_coefficients()?.into_iter().map(|x| f.get(x)).collect();
    Ok((h, answers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn triangle() -> Family {
        Family::single(InducedSystem::parse(&["111"], "111").unwrap())
    }

    #[test]
    fn constant_one_is_always_rejected() {
        let f = BooleanFunction::constant(10, true).unwrap();
        let mut cfg = TesterConfig::new(BigRational::one(), 3, 5);
        cfg.seed = 9;
        let v = oblivious_test(&f, &triangle(), &cfg).unwrap();
        assert!(!v.accept);
        assert_eq!(v.trial, Some(0));
        assert_eq!(v.mode, TestMode::Sampled);
        assert_eq!(v.queries, 8);
    }

    #[test]
    fn exhaustive_when_small() {
        let f = BooleanFunction::constant(4, true).unwrap();
        let mut cfg = TesterConfig::new(BigRational::one(), 2, 1);
        cfg.small_n_cutoff = 4;
        let v = oblivious_test(&f, &triangle(), &cfg).unwrap();
        assert_eq!(v.mode, TestMode::Exhaustive);
        assert!(!v.accept);
        assert_eq!(v.queries, 16);
    }

    #[test]
    fn free_function_is_accepted() {
        let f = BooleanFunction::constant(9, false).unwrap();
        for mode in [SampleMode::Subspace, SampleMode::Points] {
            let mut cfg = TesterConfig::new(BigRational::one(), 4, 20);
            cfg.mode = mode;
            let v = oblivious_test(&f, &triangle(), &cfg).unwrap();
            assert!(v.accept);
            assert_eq!(v.witness, None);
        }
    }

    #[test]
    fn trials_are_reproducible() {
        let mut rng = trial_rng(3, 0);
        let f = BooleanFunction::random(10, 0.1, &mut rng).unwrap();
        let cfg = TesterConfig { seed: 17, ..TesterConfig::new(BigRational::one(), 3, 30) };
        assert_eq!(oblivious_test(&f, &triangle(), &cfg).unwrap(), oblivious_test(&f, &triangle(), &cfg).unwrap());
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(0, 100);
        assert!(lo.abs() < 1e-12);
        assert!((hi - 0.036_994).abs() < 1e-5);
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.403_832).abs() < 1e-5 && (hi - 0.596_168).abs() < 1e-5);
    }

    #[test]
    fn wrap_of_zero_and_of_a_basis() {
        let f = BooleanFunction::constant(4, true).unwrap();
        let (h, a) = canonical_wrap(&[F2Vector::zero(4)], &f).unwrap();
        assert_eq!((h.dim(), a.len()), (0, 1));
        let trace: Vec<F2Vector> = (0..3).map(|i| F2Vector::unit(4, i)).collect();
        let (h, a) = canonical_wrap(&trace, &f).unwrap();
        assert_eq!((h.dim(), a.len()), (3, 8));
    }
}
