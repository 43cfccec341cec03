use std::collections::{BTreeMap, HashSet};

use super::kernel::KernelWalk;
use super::system::{Family, InducedSystem};
use crate::boolfn::BooleanFunction;
use crate::error::{check_dim, Result};
use crate::f2::{F2Matrix, F2Vector};

/// A tuple inducing system `system` (an index into the realized family).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub system: usize,
    pub x: Vec<F2Vector>,
}

/// `Mx = 0` over F2^n and `f(x_i) = σ_i` for every `i`.
pub fn induces_at(f: &BooleanFunction, sys: &InducedSystem, x: &[F2Vector]) -> Result<bool> {
    check_dim(sys.k(), x.len())?;
    for xi in x {
        check_dim(f.n(), xi.dim())?;
    }
    Ok(induces_at_bits(f, sys, &x.iter().map(|v| v.bits()).collect::<Vec<_>>()))
}

pub(crate) fn induces_at_bits(f: &BooleanFunction, sys: &InducedSystem, x: &[u64]) -> bool {
    let kernel_ok = sys.matrix().row_bits().iter().all(|row| {
        x.iter().enumerate().filter(|(i, _)| (row >> i) & 1 == 1).fold(0u64, |a, (_, v)| a ^ v) == 0
    });
    kernel_ok && x.iter().enumerate().all(|(i, v)| f.get(*v) == ((sys.sigma() >> i) & 1 == 1))
}

/// Exact number of `k`-tuples (repeats allowed) at which `f` induces `sys`.
pub fn count_induced(f: &BooleanFunction, sys: &InducedSystem) -> Result<u64> {
    let sigma = sys.sigma();
    Ok(KernelWalk::full(f, sys.matrix())?.count(|p| p == sigma))
}

/// Counts of every value pattern over all solutions of `Mx = 0` (index = σ bits).
pub fn pattern_counts(f: &BooleanFunction, matrix: &F2Matrix) -> Result<Vec<u64>> {
    if matrix.ncols() > 20 {
        return Err(crate::Error::TooLarge { dim: matrix.ncols(), max: 20 });
    }
    Ok(KernelWalk::full(f, matrix)?.histogram())
}

/// The first inducing tuple in enumeration order, if any.
pub fn find_induced(f: &BooleanFunction, sys: &InducedSystem) -> Result<Option<Vec<F2Vector>>> {
    let sigma = sys.sigma();
    let n = f.n();
    Ok(KernelWalk::full(f, sys.matrix())?
        .first(|p| p == sigma)
        .map(|(_, xs)| xs.into_iter().map(|x| F2Vector::truncated(n, x)).collect()))
}

/// Outcome of a freeness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeReport {
    pub free: bool,
    pub witness: Option<Witness>,
    pub systems_checked: usize,
}

enum SigmaSet {
    Bits(Vec<u64>),
    Hashed(HashSet<u64>),
}

impl SigmaSet {
    fn new(k: usize, sigmas: impl Iterator<Item = u64>) -> Self {
        if k <= 20 {
            let mut bits = vec![0u64; ((1usize << k) + 63) / 64];
            for s in sigmas {
                bits[(s >> 6) as usize] |= 1 << (s & 63);
            }
            SigmaSet::Bits(bits)
        } else {
            SigmaSet::Hashed(sigmas.collect())
        }
    }

    #[inline]
    fn contains(&self, s: u64) -> bool {
        match self {
            SigmaSet::Bits(b) => (b[(s >> 6) as usize] >> (s & 63)) & 1 == 1,
            SigmaSet::Hashed(h) => h.contains(&s),
        }
    }
}

/// Checks `f` against every system of the given list.
///
/// Systems sharing a matrix are checked in one kernel enumeration. The
/// witness comes from the first such group (by smallest member index) that
/// has one, and names the smallest-index system matching its pattern.
pub fn is_free_systems(f: &BooleanFunction, systems: &[InducedSystem]) -> Result<FreeReport> {
    let mut groups: BTreeMap<usize, (F2Matrix, Vec<usize>)> = BTreeMap::new();
    let mut first_of: std::collections::HashMap<&F2Matrix, usize> = std::collections::HashMap::new();
    for (idx, s) in systems.iter().enumerate() {
        let lead = *first_of.entry(s.matrix()).or_insert(idx);
        groups.entry(lead).or_insert_with(|| (s.matrix().clone(), Vec::new())).1.push(idx);
    }
    for (matrix, members) in groups.values() {
        let set = SigmaSet::new(matrix.ncols(), members.iter().map(|i| systems[*i].sigma()));
        let walk = KernelWalk::full(f, matrix)?;
        if let Some((pattern, xs)) = walk.first(|p| set.contains(p)) {
            let system = *members
                .iter()
                .find(|i| systems[**i].sigma() == pattern)
                .expect("pattern came from the member set");
            let x = xs.into_iter().map(|v| F2Vector::truncated(f.n(), v)).collect();
            return Ok(FreeReport { free: false, witness: Some(Witness { system, x }), systems_checked: systems.len() });
        }
    }
    Ok(FreeReport { free: true, witness: None, systems_checked: systems.len() })
}

/// `f` is free of every realized system of `fam`.
pub fn is_free(f: &BooleanFunction, fam: &Family) -> Result<FreeReport> {
    is_free_systems(f, &fam.realize()?)
}
