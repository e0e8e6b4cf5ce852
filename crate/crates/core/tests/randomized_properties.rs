use ingleton_core::ingleton::ingleton_fast_sp;
use ingleton_core::johnson::colex_unrank;
use ingleton_core::randomized::{
    count_edges, count_omega_hits, count_omega_hits_direct, make_params, prune_to_good,
    run_trial, run_trials, sample_indices,
};
use ingleton_core::{binomial, ElementSet, SparsePavingMatroid};
use proptest::prelude::*;

fn random_h(n: usize, r: usize, size: u64, seed: u64) -> Vec<ElementSet> {
    sample_indices(binomial(n, r), size, seed)
        .unwrap()
        .into_iter()
        .map(|i| colex_unrank(i, n, r).unwrap())
        .collect()
}

#[test]
fn hit_counts_match_direct_enumeration() {
    let mut nonzero = 0;
    for (n, r, max) in [(8, 4, 35), (9, 5, 60)] {
        for seed in 0..100 {
            let size = 4 + seed % (max - 4);
            let h = random_h(n, r, size, seed);
            let fast = count_omega_hits(&h, r);
            assert_eq!(fast, count_omega_hits_direct(&h, n, r), "({n},{r}) seed {seed}");
            nonzero += u32::from(fast != (0, 0));
        }
    }
    assert!(nonzero > 10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pruning_meets_the_bound(n in 8usize..=11, size in 0u64..60, seed in any::<u64>()) {
        let r = n / 2;
        let h = random_h(n, r, size, seed);
        let e = count_edges(&h, r);
        let (b5, b6) = count_omega_hits(&h, r);
        let w = prune_to_good(&h, r);
        prop_assert!(w.iter().all(|x| h.contains(x)));
        prop_assert!(w.len() as i64 >= h.len() as i64 - (e + b5 + 2 * b6) as i64);
        prop_assert_eq!(count_edges(&w, r), 0);
        prop_assert_eq!(count_omega_hits(&w, r), (0, 0));
        let m = SparsePavingMatroid::new(n, r, w).unwrap();
        prop_assert!(ingleton_fast_sp(&m).is_none());
    }

    #[test]
    fn trials_are_reproducible(seed in any::<u64>()) {
        let p = make_params(11, 5, 0.95, 0.486).unwrap();
        prop_assert_eq!(run_trial(&p, seed).unwrap(), run_trial(&p, seed).unwrap());
    }
}

#[test]
fn summary_is_independent_of_scheduling() {
    let p = make_params(12, 6, 0.95, 0.486).unwrap();
    let parallel = run_trials(&p, 40, 7).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| run_trials(&p, 40, 7).unwrap());
    assert_eq!(parallel.trials, serial.trials);
    assert_eq!(
        serde_json::to_string(&parallel).unwrap(),
        serde_json::to_string(&serial).unwrap()
    );
    for (i, s) in parallel.trials.iter().enumerate() {
        assert_eq!(s.seed, 7 + i as u64);
    }
}
