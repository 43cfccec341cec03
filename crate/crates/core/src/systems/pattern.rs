use std::fmt;

use super::system::{Family, InducedSystem};
use crate::error::{Error, Result};

/// A labelling `μ: F2^r -> {0, 1, ⋆}`; `None` is the wildcard `⋆`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialPattern {
    r: usize,
    values: Vec<Option<bool>>,
}

/// Largest `r` for pattern enumeration in [`psi`].
pub const MAX_PSI_R: usize = 3;

/// Step limit of the backtracking search in [`partially_induces`].
pub const PARTIAL_SEARCH_STEPS: u64 = 1 << 28;

impl PartialPattern {
    pub fn new(r: usize, values: Vec<Option<bool>>) -> Result<Self> {
        if r > 20 {
            return Err(Error::TooLarge { dim: r, max: 20 });
        }
        crate::error::check_dim(1 << r, values.len())?;
        Ok(PartialPattern { r, values })
    }

    pub fn constant(r: usize, value: Option<bool>) -> Result<Self> {
        Self::new(r, vec![value; 1 << r])
    }

    /// Parses one symbol per point (`0`, `1`, `*`), points in increasing index order.
    pub fn parse(r: usize, s: &str) -> Result<Self> {
        let values = s
            .chars()
            .map(|c| match c {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '*' => Ok(None),
                other => Err(Error::InvalidArgument(format!("invalid pattern symbol '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(r, values)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn get(&self, u: u64) -> Option<bool> {
        self.values[u as usize]
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.values
    }

    pub fn with(&self, u: u64, value: Option<bool>) -> Self {
        let mut p = self.clone();
        p.values[u as usize] = value;
        p
    }
}

impl fmt::Display for PartialPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            f.write_str(match v {
                Some(true) => "1",
                Some(false) => "0",
                None => "*",
            })?;
        }
        Ok(())
    }
}

/// Some `x ∈ (F2^r)^k` with `Mx = 0` and `μ(x_i) ∈ {σ_i, ⋆}` for all `i`.
///
/// Free coordinates of the reduced matrix range over their admissible points;
/// each pivot coordinate is checked as soon as the free coordinates it
/// depends on are assigned.
pub fn partially_induces(mu: &PartialPattern, sys: &InducedSystem) -> Result<bool> {
    Ok(partial_witness(mu, sys)?.is_some())
}

/// A tuple witnessing [`partially_induces`], if any.
pub fn partial_witness(mu: &PartialPattern, sys: &InducedSystem) -> Result<Option<Vec<u64>>> {
    let k = sys.k();
    let rows = sys.matrix().row_bits();
    let pivots: Vec<usize> = rows.iter().map(|r| r.trailing_zeros() as usize).collect();
    let pivot_mask = pivots.iter().fold(0u64, |m, p| m | (1 << p));
    let free: Vec<usize> = (0..k).filter(|c| (pivot_mask >> c) & 1 == 0).collect();
    let allowed = |i: usize, x: u64| match mu.get(x) {
        None => true,
        Some(v) => v == ((sys.sigma() >> i) & 1 == 1),
    };
    let candidates: Vec<Vec<u64>> = free
        .iter()
        .map(|&i| (0..1u64 << mu.r()).filter(|x| allowed(i, *x)).collect())
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }
    // pivot checks grouped by the position of their last free dependency
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); free.len() + 1];
    for (row_idx, row) in rows.iter().enumerate() {
        let last = free.iter().rposition(|c| (row >> c) & 1 == 1).map_or(0, |p| p + 1);
        checks[last].push(row_idx);
    }
    let pivot_value = |row: u64, assign: &[u64]| {
        free.iter().enumerate().filter(|(_, c)| (row >> **c) & 1 == 1).fold(0u64, |a, (t, _)| a ^ assign[t])
    };
    if checks[0].iter().any(|&ri| !allowed(pivots[ri], 0)) {
        return Ok(None);
    }
    let mut assign = vec![0u64; free.len()];
    let mut steps = 0u64;
    let mut stack = vec![0usize; free.len()];
    let mut depth = 0usize;
    if free.is_empty() {
        return Ok(Some(vec![0; k]));
    }
    loop {
        if stack[depth] == candidates[depth].len() {
            if depth == 0 {
                return Ok(None);
            }
            stack[depth] = 0;
            depth -= 1;
            stack[depth] += 1;
            continue;
        }
        steps += 1;
        if steps > PARTIAL_SEARCH_STEPS {
            return Err(Error::BudgetExceeded("partial-pattern search step limit".into()));
        }
        assign[depth] = candidates[depth][stack[depth]];
        let ok = checks[depth + 1]
            .iter()
            .all(|&ri| allowed(pivots[ri], pivot_value(rows[ri], &assign[..=depth])));
        if !ok {
            stack[depth] += 1;
            continue;
        }
        if depth + 1 == free.len() {
            let mut x = vec![0u64; k];
            for (t, c) in free.iter().enumerate() {
                x[*c] = assign[t];
            }
            for (ri, p) in pivots.iter().enumerate() {
                x[*p] = pivot_value(rows[ri], &assign);
            }
            return Ok(Some(x));
        }
        depth += 1;
    }
}

/// `Ψ_F(r)`: over patterns on F2^r that partially induce some realized system,
/// the largest value of the smallest `k` among the systems they induce.
/// `None` when no pattern induces anything.
pub fn psi(fam: &Family, r: usize) -> Result<Option<usize>> {
    if r > MAX_PSI_R {
        return Err(Error::TooLarge { dim: r, max: MAX_PSI_R });
    }
    let mut systems = fam.realize()?;
    if systems.is_empty() {
        return Ok(None);
    }
    systems.sort_by_key(|s| s.k());
    let points = 1usize << r;
    let total = 3u64.pow(points as u32);
    let mut best: Option<usize> = None;
    for code in 0..total {
        let mut c = code;
        let values = (0..points)
            .map(|_| {
                let v = match c % 3 {
                    0 => Some(false),
                    1 => Some(true),
                    _ => None,
                };
                c /= 3;
                v
            })
            .collect();
        let mu = PartialPattern::new(r, values)?;
        for s in &systems {
            if partially_induces(&mu, s)? {
                best = Some(best.map_or(s.k(), |b| b.max(s.k())));
                break;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> InducedSystem {
        InducedSystem::parse(&["111"], "111").unwrap()
    }

    #[test]
    fn wildcard_pattern_induces_everything() {
        let mu = PartialPattern::constant(2, None).unwrap();
        assert!(partially_induces(&mu, &triangle()).unwrap());
        let rm = crate::families::rm_family(1).unwrap();
        assert!(rm.explicit.iter().all(|s| partially_induces(&mu, s).unwrap()));
    }

    #[test]
    fn zero_pattern_misses_all_ones() {
        let mu = PartialPattern::constant(2, Some(false)).unwrap();
        assert!(!partially_induces(&mu, &triangle()).unwrap());
    }

    #[test]
    fn zero_tuple_suffices() {
        let mu = PartialPattern::parse(1, "10").unwrap();
        assert!(partially_induces(&mu, &triangle()).unwrap());
        assert_eq!(partial_witness(&mu, &triangle()).unwrap(), Some(vec![0, 0, 0]));
    }

    #[test]
    fn witness_is_valid() {
        let sys = InducedSystem::parse(&["1101", "0111"], "1001").unwrap();
        let mu = PartialPattern::parse(2, "01*0").unwrap();
        if let Some(x) = partial_witness(&mu, &sys).unwrap() {
            for row in sys.matrix().row_bits() {
                let s = (0..4).filter(|i| (row >> i) & 1 == 1).fold(0, |a, i| a ^ x[i]);
                assert_eq!(s, 0);
            }
            for (i, xi) in x.iter().enumerate() {
                let want = (sys.sigma() >> i) & 1 == 1;
                assert!(mu.get(*xi).map_or(true, |v| v == want));
            }
        }
    }

    #[test]
    fn psi_of_singleton_and_empty() {
        assert_eq!(psi(&Family::single(triangle()), 1).unwrap(), Some(3));
        assert_eq!(psi(&Family::default(), 1).unwrap(), None);
        assert!(psi(&Family::single(triangle()), 4).is_err());
    }
}
