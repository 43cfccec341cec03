use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use super::pointset::{translate, PointSet, MAX_SEARCH_N};
use crate::error::{Error, Result};
use crate::f2::{AffineCoset, F2Vector, Subspace};

/// Which side of a 2-colouring a certificate lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    InSet,
    InComplement,
}

/// A subspace whose nonzero points all have colour `color`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonochromeCertificate {
    pub subspace: Subspace,
    pub color: Color,
}

/// A strict affine flat (not through 0) inside one colour class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineCertificate {
    pub flat: AffineCoset,
    pub color: Color,
}

fn count(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

/// Points `> after` of a bitset, in increasing order.
fn members_after(words: &[u64], after: u64) -> impl Iterator<Item = u64> + '_ {
    words.iter().enumerate().flat_map(move |(wi, w)| {
        let mut w = *w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as u64;
            w &= w - 1;
            Some(((wi as u64) << 6) | b)
        })
        .filter(move |x| *x > after)
    })
}

/// Extends `basis` to `d` increasing vectors drawn from `cand`.
///
/// `cand` holds the points `w` for which the whole translate `w + span` stays
/// admissible; choosing `v` shrinks it to `cand ∩ (cand + v)`.
fn extend(cand: &[u64], basis: &mut Vec<u64>, span: &mut Vec<u64>, d: usize) -> bool {
    let i = basis.len();
    if i == d {
        return true;
    }
    // cand must still hold the 2^d − 2^i points of the target outside the current span
    let need = (1usize << d) - (1usize << i);
    if count(cand) < need {
        return false;
    }
    let last = basis.last().copied().unwrap_or(0);
    let picks: Vec<u64> = members_after(cand, last).filter(|v| !span.contains(v)).collect();
    for v in picks {
        let next = and(cand, &translate(cand, v));
        basis.push(v);
        let old = span.len();
        for j in 0..old {
            span.push(span[j] ^ v);
        }
        if extend(&next, basis, span, d) {
            return true;
        }
        span.truncate(old);
        basis.pop();
    }
    false
}

fn check_limits(s: &PointSet, d: usize) -> Result<()> {
    if s.n() > MAX_SEARCH_N {
        return Err(Error::TooLarge { dim: s.n(), max: MAX_SEARCH_N });
    }
    if d > s.n() {
        return Err(Error::InvalidArgument(format!("dimension {d} exceeds {}", s.n())));
    }
    Ok(())
}

/// A `d`-dimensional subspace `H` with `H ∖ {0} ⊆ S`, if one exists.
///
/// Bases are built in increasing order; after choosing `v_1, …, v_i` the
/// candidate set is `{w : w + h ∈ S ∖ {0} for all h ∈ span(v_1, …, v_i)}`.
pub fn find_subspace_in_set(s: &PointSet, d: usize) -> Result<Option<Subspace>> {
    check_limits(s, d)?;
    let mut cand = s.words().to_vec();
    cand[0] &= !1;
    let mut basis = Vec::new();
    let mut span = vec![0u64];
    if extend(&cand, &mut basis, &mut span, d) {
        return Ok(Some(Subspace::from_bits(s.n(), &basis)?));
    }
    Ok(None)
}

/// `F2^n ∖ K'` with `K' = span(e_d, …, e_n)`: no `d`-dimensional subspace fits
/// inside it, and it has `2^n − 2^(n−d+1)` points.
pub fn turan_extremal_set(n: usize, d: usize) -> Result<PointSet> {
    if d == 0 || d > n {
        return Err(Error::InvalidArgument(format!("need 1 ≤ d ≤ n, got d = {d}, n = {n}")));
    }
    let k_prime = Subspace::standard(n, d - 1)?;
    PointSet::from_fn(n, |x| !k_prime.contains_bits(x))
}

/// A `d`-dimensional subspace monochromatic (apart from 0) in `S` or its complement.
pub fn ramsey_find(s: &PointSet, d: usize) -> Result<Option<MonochromeCertificate>> {
    if let Some(h) = find_subspace_in_set(s, d)? {
        return Ok(Some(MonochromeCertificate { subspace: h, color: Color::InSet }));
    }
    Ok(find_subspace_in_set(&s.complement(), d)?
        .map(|h| MonochromeCertificate { subspace: h, color: Color::InComplement }))
}

/// `N_a(1) = 1`, `N_a(d) = 2^(N_a(d−1)+1) + N_a(d−1)`.
pub fn affine_ramsey_bound(d: usize) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::InvalidArgument("the affine bound starts at d = 1".into()));
    }
    let mut value = BigUint::one();
    for _ in 1..d {
        let exp = value
            .to_u64()
            .filter(|e| *e < 1 << 24)
            .ok_or(Error::TooLarge { dim: d, max: 4 })?;
        value = (BigUint::one() << (exp + 1)) + value;
    }
    Ok(value)
}

/// Outcome of the minimal-dimension search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamseyMin {
    pub n: usize,
    /// A colouring of F2^(n−1) with no monochromatic `d`-subspace.
    pub counterexample: Option<PointSet>,
    /// Colourings examined at `n` after orbit pruning.
    pub representatives: usize,
}

/// Largest ambient dimension tried by [`ramsey_min_n`].
pub const MAX_RAMSEY_N: usize = 4;

/// Smallest `N` such that every 2-colouring of F2^N admits a monochromatic
/// `d`-dimensional subspace (ignoring 0).
///
/// Colourings are exhausted up to the action of GL(N,2): each orbit is
/// examined through one representative.
pub fn ramsey_min_n(d: usize) -> Result<RamseyMin> {
    if d > 2 {
        return Err(Error::TooLarge { dim: d, max: 2 });
    }
    let mut counterexample = None;
    for n in d..=MAX_RAMSEY_N {
        match first_bad_coloring(n, d)? {
            (Some(bad), _) => counterexample = Some(bad),
            (None, representatives) => return Ok(RamseyMin { n, counterexample, representatives }),
        }
    }
    Err(Error::BudgetExceeded(format!("no N ≤ {MAX_RAMSEY_N} works for d = {d}")))
}

/// Every element of GL(n,2), as column images.
pub fn general_linear_group(n: usize) -> Vec<Vec<u64>> {
    let mask = (1u64 << n) - 1;
    (0..1u64 << (n * n))
        .map(|code| (0..n).map(|j| (code >> (j * n)) & mask).collect::<Vec<u64>>())
        .filter(|cols| crate::f2::rref_rows(cols, n).len() == n)
        .collect()
}

fn first_bad_coloring(n: usize, d: usize) -> Result<(Option<PointSet>, usize)> {
    let points = (1usize << n) - 1;
    if d > n {
        return Ok((Some(PointSet::empty(n)?), 0));
    }
    let group = general_linear_group(n);
    let images: Vec<Vec<u64>> = group
        .iter()
        .map(|cols| {
            (1..=points as u64)
                .map(|x| (0..n).filter(|j| (x >> j) & 1 == 1).fold(0, |a, j| a ^ cols[j]))
                .collect()
        })
        .collect();
    let total = 1usize << points;
    let mut seen = vec![false; total];
    let mut reps = Vec::new();
    for c in 0..total {
        if seen[c] {
            continue;
        }
        reps.push(c as u64);
        for img in &images {
            let mut t = 0usize;
            for (i, y) in img.iter().enumerate() {
                if (c >> i) & 1 == 1 {
                    t |= 1 << (y - 1);
                }
            }
            seen[t] = true;
        }
    }
    let bad = reps
        .par_iter()
        .map(|c| {
            let s = PointSet::from_nonzero_mask(n, *c)?;
            Ok(ramsey_find(&s, d)?.is_none().then_some(s))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    Ok((bad, reps.len()))
}

/// A strict `d`-dimensional affine flat inside `S` or inside its complement.
pub fn strict_affine_ramsey_find(s: &PointSet, d: usize) -> Result<Option<AffineCertificate>> {
    check_limits(s, d)?;
    for (set, color) in [(s.clone(), Color::InSet), (s.complement(), Color::InComplement)] {
        if let Some(flat) = strict_flat_in(&set, d)? {
            return Ok(Some(AffineCertificate { flat, color }));
        }
    }
    Ok(None)
}

fn strict_flat_in(set: &PointSet, d: usize) -> Result<Option<AffineCoset>> {
    let n = set.n();
    let mut admissible = set.words().to_vec();
    admissible[0] &= !1;
    for a in set.points().into_iter().filter(|a| *a != 0) {
        // w is admissible when a + w + span stays in the set
        let cand = translate(&admissible, a);
        let mut basis = Vec::new();
        let mut span = vec![0u64];
        if extend_affine(&cand, &mut basis, &mut span, d) {
            let h = Subspace::from_bits(n, &basis)?;
            return Ok(Some(AffineCoset::new(F2Vector::truncated(n, a), h)?));
        }
    }
    Ok(None)
}

fn extend_affine(cand: &[u64], basis: &mut Vec<u64>, span: &mut Vec<u64>, d: usize) -> bool {
    if basis.len() == d {
        return true;
    }
    let last = basis.last().copied().unwrap_or(0);
    let picks: Vec<u64> = members_after(cand, last).filter(|v| !span.contains(v)).collect();
    for v in picks {
        let next = and(cand, &translate(cand, v));
        basis.push(v);
        let old = span.len();
        for j in 0..old {
            span.push(span[j] ^ v);
        }
        if extend_affine(&next, basis, span, d) {
            return true;
        }
        span.truncate(old);
        basis.pop();
    }
    false
}
