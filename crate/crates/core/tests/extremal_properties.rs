use std::collections::HashSet;

use linvar_core::extremal::{
    affine_ramsey_bound, find_subspace_in_set, ramsey_find, ramsey_min_n, strict_affine_ramsey_find,
    turan_extremal_set, Color, PointSet,
};
use linvar_core::f2::Subspace;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every `d`-dimensional subspace of F2^n, by brute force over ordered bases.
fn all_subspaces(n: usize, d: usize) -> Vec<Subspace> {
    let mut seen = HashSet::new();
    let mut tuple = vec![0u64; d];
    let total = 1u64 << (n * d);
    for code in 0..total {
        for (i, t) in tuple.iter_mut().enumerate() {
            *t = (code >> (i * n)) & ((1 << n) - 1);
        }
        let s = Subspace::from_bits(n, &tuple).unwrap();
        if s.dim() == d {
            seen.insert(s);
        }
    }
    seen.into_iter().collect()
}

fn inside(s: &PointSet, h: &Subspace) -> bool {
    (1..1u64 << h.dim()).all(|c| s.contains(h.combine(c)))
}

fn random_set(n: usize, rng: &mut ChaCha8Rng) -> PointSet {
    let p = rng.gen_range(0.3..1.0);
    PointSet::from_fn(n, |_| rng.gen_bool(p)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn found_subspaces_lie_in_the_set(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=8);
        let d = rng.gen_range(1..=n.min(4));
        let s = random_set(n, &mut rng);
        if let Some(h) = find_subspace_in_set(&s, d).unwrap() {
            prop_assert_eq!(h.dim(), d);
            prop_assert!(inside(&s, &h));
            let mut bigger = s.clone();
            bigger.insert(rng.gen_range(0..1u64 << n));
            prop_assert!(find_subspace_in_set(&bigger, d).unwrap().is_some());
        }
    }

    #[test]
    fn search_is_complete_on_small_spaces(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(1..=n);
        let s = random_set(n, &mut rng);
        let exists = all_subspaces(n, d).iter().any(|h| inside(&s, h));
        prop_assert_eq!(find_subspace_in_set(&s, d).unwrap().is_some(), exists);
    }

    #[test]
    fn affine_certificates_are_strict_and_monochromatic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=6);
        let s = random_set(n, &mut rng);
        if let Some(cert) = strict_affine_ramsey_find(&s, 1).unwrap() {
            prop_assert!(cert.flat.is_strict());
            for p in cert.flat.points().unwrap() {
                prop_assert!(!p.is_zero());
                prop_assert_eq!(s.contains(p.bits()), cert.color == Color::InSet);
            }
        }
    }
}

#[test]
fn every_colouring_of_small_spaces_has_a_monochromatic_plane() {
    let n = ramsey_min_n(2).unwrap().n;
    for n in n..=4 {
        for mask in 0u64..1 << ((1 << n) - 1) {
            let s = PointSet::from_nonzero_mask(n, mask).unwrap();
            let cert = ramsey_find(&s, 2).unwrap().expect("monochromatic plane");
            let colour = match cert.color {
                Color::InSet => s.clone(),
                Color::InComplement => s.complement(),
            };
            assert!(inside(&colour, &cert.subspace));
        }
    }
}

#[test]
fn the_counterexample_below_the_threshold_is_genuine() {
    let min = ramsey_min_n(2).unwrap();
    let bad = min.counterexample.expect("a colouring one dimension lower");
    assert_eq!(bad.n(), min.n - 1);
    for h in all_subspaces(bad.n(), 2) {
        assert!(!inside(&bad, &h) && !inside(&bad.complement(), &h));
    }
}

#[test]
fn turan_sets_are_maximal() {
    for n in 1..=5 {
        for d in 1..=n {
            let s = turan_extremal_set(n, d).unwrap();
            assert_eq!(s.len(), (1 << n) - (1 << (n - d + 1)));
            assert!(find_subspace_in_set(&s, d).unwrap().is_none());
            for x in 1..1u64 << n {
                if !s.contains(x) {
                    let mut t = s.clone();
                    t.insert(x);
                    assert!(find_subspace_in_set(&t, d).unwrap().is_some(), "n={n} d={d} x={x}");
                }
            }
        }
    }
}

#[test]
fn affine_bound_grows() {
    let values: Vec<_> = (1..=4).map(|d| affine_ramsey_bound(d).unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(values[1], 5u32.into());
    assert_eq!(values[2], 69u32.into());
}
