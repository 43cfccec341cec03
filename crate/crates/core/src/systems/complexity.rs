use crate::error::{Error, Result};
use crate::f2::F2Matrix;

/// Largest number of columns for the partition search.
pub const MAX_COMPLEXITY_K: usize = 12;

/// Cauchy–Schwarz complexity of a system matrix.
///
/// The least `c ≥ 1` such that for every coordinate `i` the remaining
/// coordinates split into `c + 1` parts, none of which supports a row-space
/// vector `v` with `v_i = 1` and `supp(v) ∖ {i}` inside the part.
pub fn complexity(matrix: &F2Matrix) -> Result<usize> {
    let k = matrix.ncols();
    if k > MAX_COMPLEXITY_K {
        return Err(Error::TooLarge { dim: k, max: MAX_COMPLEXITY_K });
    }
    let elements = matrix.rowspace_elements();
    let blockers: Vec<Vec<u64>> = (0..k).map(|i| minimal_blockers(&elements, i)).collect();
    for c in 1..k.max(2) {
        if (0..k).all(|i| partition_exists(k, i, c + 1, &blockers[i])) {
            return Ok(c);
        }
    }
    Err(Error::InvalidArgument(
        "no partition exists for any number of parts; the system is degenerate".into(),
    ))
}

/// Inclusion-minimal sets `supp(v) ∖ {i}` over row-space vectors with `v_i = 1`.
fn minimal_blockers(elements: &[u64], i: usize) -> Vec<u64> {
    let mut sets: Vec<u64> = elements
        .iter()
        .filter(|v| (*v >> i) & 1 == 1)
        .map(|v| v & !(1u64 << i))
        .collect();
    sets.sort_by_key(|s| s.count_ones());
    let mut minimal: Vec<u64> = Vec::new();
    for s in sets {
        if !minimal.iter().any(|m| m & !s == 0) {
            minimal.push(s);
        }
    }
    minimal
}

fn blocked(part: u64, blockers: &[u64]) -> bool {
    blockers.iter().any(|b| b & !part == 0)
}

fn partition_exists(k: usize, i: usize, parts: usize, blockers: &[u64]) -> bool {
    if blockers.iter().any(|b| *b == 0) {
        return false;
    }
    let elems: Vec<usize> = (0..k).filter(|j| *j != i).collect();
    let mut assigned = vec![0u64; parts];
    place(&elems, 0, &mut assigned, 0, blockers)
}

fn place(elems: &[usize], next: usize, parts: &mut [u64], used: usize, blockers: &[u64]) -> bool {
    if next == elems.len() {
        return true;
    }
    let bit = 1u64 << elems[next];
    // a new part is opened only as the first empty one, which removes relabelings
    let limit = (used + 1).min(parts.len());
    for p in 0..limit {
        parts[p] |= bit;
        if !blocked(parts[p], blockers) {
            let now_used = if p == used { used + 1 } else { used };
            if place(elems, next + 1, parts, now_used, blockers) {
                parts[p] &= !bit;
                return true;
            }
        }
        parts[p] &= !bit;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rows_have_complexity_one() {
        for row in ["111", "1111", "11111111", "0111011"] {
            assert_eq!(complexity(&F2Matrix::parse_rows(&[row]).unwrap()).unwrap(), 1, "{row}");
        }
    }

    #[test]
    fn two_independent_triangles_share_nothing() {
        let m = F2Matrix::parse_rows(&["111000", "000111"]).unwrap();
        assert_eq!(complexity(&m).unwrap(), 1);
    }

    #[test]
    fn four_term_progression_like_system() {
        // x1+x2+x3+x4 = 0 and x1+x3+x5+x6 = 0 style overlaps keep complexity one
        let m = F2Matrix::parse_rows(&["111100", "101011"]).unwrap();
        assert_eq!(complexity(&m).unwrap(), 1);
    }

    #[test]
    fn reed_muller_matrices() {
        assert_eq!(complexity(&crate::families::rm_matrix(1).unwrap()).unwrap(), 1);
        assert_eq!(complexity(&crate::families::rm_matrix(2).unwrap()).unwrap(), 2);
    }

    #[test]
    fn degenerate_matrices_are_rejected() {
        assert!(complexity(&F2Matrix::parse_rows(&["110"]).unwrap()).is_err());
        assert!(complexity(&F2Matrix::parse_rows(&["100"]).unwrap()).is_err());
    }
}
