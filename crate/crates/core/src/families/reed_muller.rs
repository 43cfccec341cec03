use crate::boolfn::{algebraic_degree, BooleanFunction};
use crate::error::{Error, Result};
use crate::f2::F2Matrix;
use crate::systems::{Family, InducedSystem};

/// Largest degree for which the Reed–Muller family is built.
pub const MAX_RM_DEGREE: usize = 3;

/// Relation matrix of the `2^(d+1)` points `α + Σ_{i∈S} α_i`, `S ⊆ [d+1]`.
///
/// Column `S` (a bitmask) is that point. The points with `|S| ≤ 1` form the
/// basis `α, α+α_1, …, α+α_{d+1}`; each other point yields the row expressing
/// it in that basis, `e_S + (1+|S|) e_∅ + Σ_{i∈S} e_{{i}}`.
pub fn rm_matrix(d: usize) -> Result<F2Matrix> {
    if d > MAX_RM_DEGREE {
        return Err(Error::TooLarge { dim: d, max: MAX_RM_DEGREE });
    }
    let k = 1usize << (d + 1);
    let rows = (0..k as u64)
        .filter(|s| s.count_ones() >= 2)
        .map(|s| {
            let mut row = 1u64 << s;
            if (1 + s.count_ones()) % 2 == 1 {
                row |= 1;
            }
            for i in 0..=d {
                if (s >> i) & 1 == 1 {
                    row |= 1u64 << (1u64 << i);
                }
            }
            row
        })
        .collect();
    F2Matrix::new(k, rows)
}

/// Coordinates of the points in the generic basis `α, α_1, …, α_{d+1}`:
/// row `S` is `(1, bits of S)`.
pub fn rm_evaluation_matrix(d: usize) -> Result<F2Matrix> {
    if d > MAX_RM_DEGREE {
        return Err(Error::TooLarge { dim: d, max: MAX_RM_DEGREE });
    }
    let rows = (0..1u64 << (d + 1)).map(|s| 1 | (s << 1)).collect();
    F2Matrix::new(d + 2, rows)
}

/// The forbidden family of RM(d): the relation matrix with every odd-weight pattern.
pub fn rm_family(d: usize) -> Result<Family> {
    let m = rm_matrix(d)?;
    let k = m.ncols();
    let systems = (0..1u64 << k)
        .filter(|s| s.count_ones() % 2 == 1)
        .map(|s| InducedSystem::from_bits(&m, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(Family::new(systems))
}

/// Membership in RM(d) via the algebraic normal form degree.
pub fn rm_membership(f: &BooleanFunction, d: usize) -> bool {
    algebraic_degree(f) as usize <= d
}

/// Budget on `n·(d+2)` for [`rm_membership_identity`].
pub const MAX_IDENTITY_BITS: usize = 30;

/// Membership in RM(d) via the identity
/// `Σ_{S ⊆ [d+1]} f(α + Σ_{i∈S} α_i) = 0` for all `α, α_1, …, α_{d+1}`.
///
/// Checked as vanishing of every `(d+1)`-fold derivative `D_{α_1}⋯D_{α_{d+1}} f`.
pub fn rm_membership_identity(f: &BooleanFunction, d: usize) -> Result<bool> {
    let n = f.n();
    if n * (d + 2) > MAX_IDENTITY_BITS {
        return Err(Error::BudgetExceeded(format!(
            "identity check over n = {n}, d = {d} exceeds the enumeration budget"
        )));
    }
    let table: Vec<bool> = (0..f.size() as u64).map(|x| f.get(x)).collect();
    Ok(derivatives_vanish(&table, d + 1, 0))
}

fn derivatives_vanish(g: &[bool], remaining: usize, min_dir: usize) -> bool {
    if remaining == 0 {
        return g.iter().all(|v| !v);
    }
    if g.iter().all(|v| !v) {
        return true;
    }
    // derivatives commute and D_0 = 0, so nondecreasing nonzero directions suffice
    (min_dir.max(1)..g.len()).all(|a| {
        let dg: Vec<bool> = (0..g.len()).map(|x| g[x] ^ g[x ^ a]).collect();
        derivatives_vanish(&dg, remaining - 1, a)
    })
}
