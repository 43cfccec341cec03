use linvar_core::boolfn::BooleanFunction;
use linvar_core::counting::coset_restricted_count;
use linvar_core::f2::{random_nonsingular, random_subspace, F2Matrix};
use linvar_core::families::{obstruction_system, rm_family, rm_matrix};
use linvar_core::systems::{
    complexity, count_induced, is_free, partially_induces, pattern_counts, Family, InducedSystem, PartialPattern,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_function(n: usize, rng: &mut ChaCha8Rng) -> BooleanFunction {
    let p = rng.gen_range(0.0..1.0);
    BooleanFunction::random(n, p, rng).unwrap()
}

/// A full-rank `m × k` matrix whose rowspace has no vector of weight below 3.
fn random_system_matrix(k: usize, m: usize, rng: &mut ChaCha8Rng) -> F2Matrix {
    assert!(m <= max_rank(k));
    loop {
        let rows: Vec<u64> = (0..m).map(|_| rng.gen_range(0..1u64 << k)).collect();
        let mat = F2Matrix::new(k, rows).unwrap();
        if mat.rank() == m && mat.rowspace_elements().iter().skip(1).all(|v| v.count_ones() >= 3) {
            return mat.rref().0;
        }
    }
}

/// Largest rank with such a row space: 1 for k < 5, 2 for k = 5, 3 from k = 6.
fn max_rank(k: usize) -> usize {
    match k {
        0..=4 => 1,
        5 => 2,
        _ => 3,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_symmetry(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(3..=5);
        let m = rng.gen_range(1..=max_rank(k).min(2));
        let mat = random_system_matrix(k, m, &mut rng);
        let n = rng.gen_range(2..=6);
        let f = random_function(n, &mut rng);
        let sigma = rng.gen_range(0..1u64 << k);
        let sys = InducedSystem::from_bits(&mat, sigma).unwrap();
        let dual = InducedSystem::from_bits(&mat, !sigma & ((1 << k) - 1)).unwrap();
        prop_assert_eq!(count_induced(&f, &sys).unwrap(), count_induced(&f.complement(), &dual).unwrap());
    }

    #[test]
    fn patterns_partition_the_kernel(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(3..=6);
        let m = rng.gen_range(1..=max_rank(k).min(2));
        let mat = random_system_matrix(k, m, &mut rng);
        let n = rng.gen_range(1..=(16 / (k - m)).min(5));
        let f = random_function(n, &mut rng);
        let counts = pattern_counts(&f, &mat).unwrap();
        prop_assert_eq!(counts.iter().sum::<u64>(), 1u64 << (n * (k - m)));
        let sigma = rng.gen_range(0..1u64 << k);
        let sys = InducedSystem::from_bits(&mat, sigma).unwrap();
        prop_assert_eq!(counts[sigma as usize], count_induced(&f, &sys).unwrap());
    }

    #[test]
    fn complexity_at_most_rank(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(3..=9);
        let m = rng.gen_range(1..=max_rank(k));
        let mat = random_system_matrix(k, m, &mut rng);
        prop_assert!(complexity(&mat).unwrap() <= m);
    }

    #[test]
    fn wildcards_never_break_partial_inducement(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(1..=4);
        let values: Vec<Option<bool>> = (0..1usize << r)
            .map(|_| match rng.gen_range(0..3) { 0 => Some(false), 1 => Some(true), _ => None })
            .collect();
        let mu = PartialPattern::new(r, values).unwrap();
        let k = rng.gen_range(3..=5);
        let mat = random_system_matrix(k, 1, &mut rng);
        let sys = InducedSystem::from_bits(&mat, rng.gen_range(0..1u64 << k)).unwrap();
        let before = partially_induces(&mu, &sys).unwrap();
        let relaxed = mu.with(rng.gen_range(0..1u64 << r), None);
        prop_assert!(!before || partially_induces(&relaxed, &sys).unwrap());
    }

    #[test]
    fn coset_counts_sum_to_the_total(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..=6);
        let f = random_function(n, &mut rng);
        let h = random_subspace(n, rng.gen_range(1..n), &mut rng).unwrap();
        let sys = InducedSystem::from_bits(&random_system_matrix(3, 1, &mut rng), rng.gen_range(0..8)).unwrap();
        let q = 1u64 << h.codim();
        let mut total = 0;
        for a in 0..q {
            for b in 0..q {
                total += coset_restricted_count(&f, &sys, &h, &[a, b, a ^ b]).unwrap();
            }
        }
        prop_assert_eq!(total, count_induced(&f, &sys).unwrap());
    }
}

#[test]
fn freeness_is_linear_invariant() {
    let families = [
        Family::single(InducedSystem::parse(&["111"], "111").unwrap()),
        Family::new(vec![
            InducedSystem::parse(&["1111"], "1010").unwrap(),
            InducedSystem::parse(&["111"], "001").unwrap(),
        ]),
        rm_family(1).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for fam in &families {
        for n in 1..=3 {
            let maps: Vec<_> = (0..6).map(|_| random_nonsingular(n, &mut rng).unwrap()).collect();
            for table in 0u64..1 << (1 << n) {
                let f = BooleanFunction::from_u64(n, table).unwrap();
                let free = is_free(&f, fam).unwrap().free;
                for l in &maps {
                    assert_eq!(is_free(&f.compose_linear(l.forward()).unwrap(), fam).unwrap().free, free);
                }
            }
        }
    }
}

#[test]
fn reed_muller_matrices_annihilate_evaluations() {
    for d in 1..=3 {
        let m = rm_matrix(d).unwrap();
        let a = linvar_core::families::rm_evaluation_matrix(d).unwrap();
        assert!(m.mul(&a).unwrap().is_zero());
        assert_eq!(m.rank(), m.nrows());
    }
}

#[test]
fn obstruction_matrices_annihilate_points() {
    for d in 0..=4 {
        let o = obstruction_system(d, 0).unwrap();
        assert!(o.matrix.mul(&o.points).unwrap().is_zero());
        assert_eq!(o.matrix.rank(), (1 << d) - d);
    }
}

#[test]
fn obstruction_inducement_matches_linear_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..40 {
        let f = random_function(3, &mut rng);
        for s in 0u64..16 {
            let o = obstruction_system(2, s).unwrap();
            let induced = count_induced(&f, &o.system().unwrap()).unwrap() > 0;
            let mut found = false;
            for a in 0u64..8 {
                for b in 0u64..8 {
                    let image = [0, a, b, a ^ b];
                    let pattern = (0..4).fold(0u64, |acc, i| acc | ((f.get(image[i]) as u64) << i));
                    found |= pattern == s;
                }
            }
            assert_eq!(induced, found, "f = {:?}, S = {s:#x}", f.to_u64());
        }
    }
}
