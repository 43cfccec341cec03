use rand::Rng;

use super::linear_map::{LinearMap, Nonsingular};
use super::matrix::rref_rows;
use super::subspace::{check_ambient, Subspace};
use super::vector::low_mask;
use crate::error::{Error, Result};

/// Uniformly random `d`-dimensional subspace of F2^n.
///
/// Draws `d` uniform vectors and retries until they are independent; every
/// subspace has the same number of ordered bases, so the result is uniform.
pub fn random_subspace<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Subspace> {
    check_ambient(n)?;
    if d > n {
        return Err(Error::InvalidArgument(format!("subspace dimension {d} exceeds {n}")));
    }
    if d == n {
        return Ok(Subspace::full(n));
    }
    loop {
        let vs: Vec<u64> = (0..d).map(|_| rng.gen::<u64>() & low_mask(n)).collect();
        if rref_rows(&vs, n).len() == d {
            return Subspace::from_bits(n, &vs);
        }
    }
}

/// Span of `d` independent uniform points of F2^n (dimension at most `d`).
pub fn random_point_span<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Subspace> {
    check_ambient(n)?;
    let vs: Vec<u64> = (0..d).map(|_| rng.gen::<u64>() & low_mask(n)).collect();
    Subspace::from_bits(n, &vs)
}

/// Uniformly random linear map `F2^domain -> F2^codomain`.
pub fn random_linear_map<R: Rng + ?Sized>(
    domain: usize,
    codomain: usize,
    rng: &mut R,
) -> Result<LinearMap> {
    let columns = (0..domain).map(|_| rng.gen::<u64>() & low_mask(codomain)).collect();
    LinearMap::new(domain, codomain, columns)
}

/// Uniformly random element of GL(n,2), by rejection on random matrices.
pub fn random_nonsingular<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Nonsingular> {
    check_ambient(n)?;
    loop {
        let m = random_linear_map(n, n, rng)?;
        if m.is_injective() {
            return Nonsingular::new(m);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn chi_square(counts: &HashMap<Vec<u64>, usize>, cells: usize, total: usize) -> f64 {
        let expected = total as f64 / cells as f64;
        let mut stat: f64 = counts.values().map(|c| (*c as f64 - expected).powi(2) / expected).sum();
        stat += (cells - counts.len()) as f64 * expected;
        stat
    }

    #[test]
    fn extreme_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(random_subspace(5, 5, &mut rng).unwrap(), Subspace::full(5));
        assert_eq!(random_subspace(5, 0, &mut rng).unwrap(), Subspace::zero(5));
        assert!(random_subspace(3, 4, &mut rng).is_err());
    }

    #[test]
    fn two_dim_subspaces_of_f2_4_are_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let total = 100_000;
        let mut counts: HashMap<Vec<u64>, usize> = HashMap::new();
        for _ in 0..total {
            let s = random_subspace(4, 2, &mut rng).unwrap();
            *counts.entry(s.basis_bits().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 35);
        // 34 degrees of freedom; 0.999 quantile is about 65.2
        assert!(chi_square(&counts, 35, total) < 65.2);
    }

    #[test]
    fn gl1_is_trivial_and_inverse_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            assert_eq!(random_nonsingular(1, &mut rng).unwrap().forward(), &LinearMap::identity(1));
        }
        let l = random_nonsingular(9, &mut rng).unwrap();
        for _ in 0..100 {
            let x = rng.gen::<u64>() & 0x1ff;
            assert_eq!(l.inverse().apply_bits(l.forward().apply_bits(x)), x);
        }
    }

    #[test]
    fn gl2_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let total = 100_000;
        let mut counts: HashMap<Vec<u64>, usize> = HashMap::new();
        for _ in 0..total {
            let m = random_nonsingular(2, &mut rng).unwrap();
            *counts.entry(m.forward().columns().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        // 5 degrees of freedom; 0.999 quantile is about 20.5
        assert!(chi_square(&counts, 6, total) < 20.5);
    }
}
