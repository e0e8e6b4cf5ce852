use ingleton_core::randomized::random_stable_set;
use ingleton_core::representation::{
    build_pattern, hall_condition, instantiate, matching_exists, represent, verify_represents,
    GenericMatrix, ZeroPattern,
};
use ingleton_core::{BasisMatroid, ElementSet, SparsePavingMatroid};
use num_bigint::BigInt;
use proptest::prelude::*;

fn hall_matroid(n: usize, r: usize, seed: u64) -> Option<(Vec<ElementSet>, BasisMatroid)> {
    let h = random_stable_set(n, r, seed).unwrap();
    hall_condition(&h, r).then(|| {
        let m = SparsePavingMatroid::new(n, r, h.clone()).unwrap();
        (h, m.to_basis().unwrap())
    })
}

fn permute_columns(a: &GenericMatrix, perm: &[usize]) -> GenericMatrix {
    let n = a.pattern.n;
    let entries = a
        .entries
        .iter()
        .map(|row| {
            let mut out = vec![BigInt::from(0); n];
            for (i, v) in row.iter().enumerate() {
                out[perm[i] - 1] = v.clone();
            }
            out
        })
        .collect();
    let pattern = ZeroPattern {
        zero_rows: a.pattern.zero_rows.iter().map(|z| z.permute(perm)).collect(),
        ..a.pattern.clone()
    };
    GenericMatrix { entries, pattern }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matchings_exist_for_every_basis(n in 4usize..=9, r_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let r = 1 + ((n - 1) as f64 * r_frac) as usize;
        prop_assume!(r < n);
        if let Some((h, m)) = hall_matroid(n, r, seed) {
            let pattern = build_pattern(&h, r, n).unwrap();
            for &b in m.bases() {
                prop_assert!(matching_exists(&pattern, b));
            }
            for &x in &h {
                prop_assert!(!matching_exists(&pattern, x));
            }
        }
    }

    #[test]
    fn verification_ignores_column_order(
        seed in any::<u64>(),
        perm in Just((1..=8).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        if let Some((h, m)) = hall_matroid(8, 4, seed) {
            let a = instantiate(&build_pattern(&h, 4, 8).unwrap(), seed, 64).unwrap();
            let expected = verify_represents(&a, &m).unwrap();
            let pa = permute_columns(&a, &perm);
            prop_assert_eq!(verify_represents(&pa, &m.permute(&perm)).unwrap(), expected);
        }
    }
}

#[test]
fn hall_matroids_up_to_nine_are_represented() {
    let mut done = 0;
    for n in 4..=9 {
        for r in 2..n - 1 {
            for seed in 0..6 {
                if let Some((_, m)) = hall_matroid(n, r, seed) {
                    let rep = represent(&m, seed, 64, 3).unwrap();
                    assert!(rep.is_some(), "({n},{r}) seed {seed}");
                    done += 1;
                }
            }
        }
    }
    assert!(done > 50);
}

#[test]
fn failing_hall_is_refused() {
    let x = |e: &[usize]| ElementSet::of(e);
    let h = [x(&[1, 2, 3, 4]), x(&[1, 2, 5, 6]), x(&[1, 2, 7, 8])];
    assert!(!hall_condition(&h, 4));
    assert!(build_pattern(&h, 4, 8).is_err());
    let m = SparsePavingMatroid::new(8, 4, h).unwrap().to_basis().unwrap();
    assert!(represent(&m, 0, 64, 3).is_err());
}
