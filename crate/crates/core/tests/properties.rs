mod common;

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use qfock::chaos::ortho_polys;
use qfock::fock::check_ccr;
use qfock::kernel::{build_anyonic_kernel, random_kernel, validate_kernel, SiteGrid};
use qfock::levy::JumpMeasure;
use qfock::partitions::{enumerate_partitions, PartitionFilter};
use qfock::symmetrize::{q_factorial, symmetrize, symmetry_defect};

fn grid(m: usize) -> SiteGrid {
    SiteGrid::new(
        (0..m).map(|i| i as f64).collect(),
        (0..m).map(|i| 0.5 + 0.25 * i as f64).collect(),
    )
    .unwrap()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_is_an_orthogonal_projection(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_kernel(grid(m), &mut rng);
        prop_assert!(validate_kernel(&k).is_valid());
        let w = k.weights().to_vec();
        let f = random_tensor(m, n, &mut rng);
        let g = random_tensor(m, n, &mut rng);
        let pf = symmetrize(&k, &f);
        prop_assert!(symmetry_defect(&k, &pf) < 1e-10);
        prop_assert!(pf.max_abs_diff(&orbit_average(&k, &f)) < 1e-10);
        let lhs = pf.inner(&g, &w);
        let rhs = f.inner(&symmetrize(&k, &g), &w);
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn anyonic_commutation_relations(theta in -3.1f64..3.1, m in 1usize..=3) {
        let k = build_anyonic_kernel(grid(m), Complex64::from_polar(1.0, theta)).unwrap();
        let r = check_ccr(&Arc::new(k), 3).unwrap();
        prop_assert!(r.mixed.max(r.annihilators).max(r.creators) < 1e-10);
    }

    #[test]
    fn q_factorial_counts_inversions(theta in -3.1f64..3.1, n in 0usize..=6) {
        let q = Complex64::from_polar(1.0, theta);
        prop_assert!((q_factorial(q, n) - inversion_sum(q, n)).norm() < 1e-10);
    }

    #[test]
    fn favard_recursion_on_random_atoms(
        slots in proptest::sample::subsequence((0..12).collect::<Vec<i32>>(), 1..=4),
        raw in proptest::collection::vec(0.1f64..1.0, 4),
    ) {
        let total: f64 = raw[..slots.len()].iter().sum();
        let atoms: Vec<(f64, f64)> = slots
            .iter()
            .zip(&raw)
            .map(|(&s, &w)| (-1.5 + 0.3 * s as f64, w / total))
            .collect();
        let b = ortho_polys(&JumpMeasure::new(atoms.clone()).unwrap()).unwrap();
        prop_assert_eq!(b.len(), atoms.len());
        prop_assert!(b.favard_residual() < 1e-9);
        prop_assert!(b.orthogonality_residual() < 1e-9);
        for k in 0..b.len() {
            // monic: leading coefficient one
            prop_assert!((b.coefficients(k)[k] - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn partition_counts() {
    // Bell numbers by the Bell triangle
    let mut row = vec![1usize];
    let mut bell = vec![1usize];
    for _ in 1..=7 {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        bell.push(next[0]);
        row = next;
    }
    // no singletons: the block of the first element has size j + 1 ≥ 2
    let mut no_single = vec![1usize, 0];
    for n in 2..=7 {
        no_single.push(
            (1..n)
                .map(|j| binomial(n - 1, j) * no_single[n - 1 - j])
                .sum(),
        );
    }
    for n in 1..=7 {
        let all = enumerate_partitions(n, PartitionFilter::All).unwrap();
        assert_eq!(all.len(), bell[n], "all, n = {n}");
        let min2 = enumerate_partitions(n, PartitionFilter::MinBlock2).unwrap();
        assert_eq!(min2.len(), no_single[n], "min block 2, n = {n}");
        let pairs = enumerate_partitions(n, PartitionFilter::Pairs).unwrap();
        let expected = if n % 2 == 0 {
            (1..n).step_by(2).product()
        } else {
            0
        };
        assert_eq!(pairs.len(), expected, "pairs, n = {n}");
    }
}
