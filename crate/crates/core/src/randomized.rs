//! Monte Carlo instrumentation of the random construction of Ingleton sparse
//! paving matroids: sample `k` vertices of `J(n, r)`, count edges and
//! near-complete patterns, and prune to a good set.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingleton::{ingleton_fast_sp, patterns_with_five_or_more, OmegaPattern};
use crate::johnson::{adjacent, colex_unrank, johnson_params, r_subsets, ElementSet};
use crate::matroid::SparsePavingMatroid;

/// Largest vertex count we sample from.
const MAX_SAMPLE_VERTICES: u64 = 1 << 40;

/// `1 - x/2 - x⁴/64`.
pub fn f_of(x: f64) -> f64 {
    1.0 - 0.5 * x - x.powi(4) / 64.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CountingParams {
    pub n: usize,
    pub r: usize,
    pub c: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub epsilon: f64,
    /// `C(n, r)`.
    pub vertices: u64,
    /// `r (n - r)`.
    pub valency: u64,
    /// `⌊c N / d⌋`.
    pub k: u64,
}

impl CountingParams {
    /// `c k / 2`.
    pub fn edge_bound(&self) -> f64 {
        self.c * self.k as f64 / 2.0
    }

    /// `c⁴ k / 64`.
    pub fn b5_bound(&self) -> f64 {
        self.c.powi(4) * self.k as f64 / 64.0
    }

    /// `(1 - α) k`.
    pub fn pruning_threshold(&self) -> f64 {
        (1.0 - self.alpha) * self.k as f64
    }

    /// `γ log₂(d) / d · N`, the claimed log₂ of the number of matroids.
    pub fn claimed_exponent(&self) -> f64 {
        let d = self.valency as f64;
        self.gamma * d.log2() / d * self.vertices as f64
    }
}

/// α is the midpoint of `(γ/c, f(c))`.
pub fn make_params(n: usize, r: usize, c: f64, gamma: f64) -> Result<CountingParams> {
    let jp = johnson_params(n, r)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Params(format!("c = {c} must be positive")));
    }
    let fc = f_of(c);
    if !(gamma > 0.0 && gamma < c * fc) {
        return Err(Error::Params(format!(
            "need 0 < γ < c·f(c) = {}, got γ = {gamma}",
            c * fc
        )));
    }
    let alpha = (gamma / c + fc) / 2.0;
    // Exact floor of c·N/d for the c values used in practice.
    let k = (c * jp.vertices as f64 / jp.valency as f64).floor() as u64;
    Ok(CountingParams {
        n,
        r,
        c,
        gamma,
        alpha,
        epsilon: fc - alpha,
        vertices: jp.vertices,
        valency: jp.valency,
        k: k.min(jp.vertices),
    })
}

/// A uniform `k`-subset of `[0, N)` by partial Fisher–Yates, sorted.
pub fn sample_h(params: &CountingParams, seed: u64) -> Result<Vec<u64>> {
    sample_indices(params.vertices, params.k, seed)
}

pub fn sample_indices(population: u64, k: u64, seed: u64) -> Result<Vec<u64>> {
    if k > population {
        return Err(Error::Params(format!("cannot pick {k} of {population}")));
    }
    if population > MAX_SAMPLE_VERTICES {
        return Err(Error::TooLarge {
            what: "sampling population",
            n: population,
            max: MAX_SAMPLE_VERTICES,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut swapped: HashMap<u64, u64> = HashMap::with_capacity(2 * k as usize);
    let mut out = Vec::with_capacity(k as usize);
    for i in 0..k {
        let j = rng.random_range(i..population);
        let vj = *swapped.get(&j).unwrap_or(&j);
        let vi = *swapped.get(&i).unwrap_or(&i);
        swapped.insert(j, vi);
        out.push(vj);
    }
    out.sort_unstable();
    Ok(out)
}

/// A random stable set of `J(n, r)`: a greedy maximal stable set over a
/// shuffled vertex order, cut to a uniformly random length.
pub fn random_stable_set(n: usize, r: usize, seed: u64) -> Result<Vec<ElementSet>> {
    let jp = johnson_params(n, r)?;
    let mut order: Vec<u64> = (0..jp.vertices).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut h: Vec<ElementSet> = Vec::new();
    for i in order {
        let x = colex_unrank(i, n, r)?;
        if h.iter().all(|&y| !adjacent(x, y, r)) {
            h.push(x);
        }
    }
    h.truncate(rng.random_range(0..=h.len()));
    h.sort_unstable();
    Ok(h)
}

/// Unordered adjacent pairs within `h`.
pub fn count_edges(h: &[ElementSet], r: usize) -> u64 {
    h.iter()
        .enumerate()
        .map(|(i, &x)| h[i + 1..].iter().filter(|&&y| adjacent(x, y, r)).count() as u64)
        .sum()
}

/// `(b5, b6)`: patterns meeting `h` in exactly five or six sets.
pub fn count_omega_hits(h: &[ElementSet], r: usize) -> (u64, u64) {
    let mut sorted = h.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let hits = patterns_with_five_or_more(&sorted, r);
    let b6 = hits.iter().filter(|p| p.hits() == 6).count() as u64;
    (hits.len() as u64 - b6, b6)
}

/// Every pattern on `[n]` for rank `r`, by direct enumeration.
pub fn enumerate_omega(n: usize, r: usize) -> Vec<OmegaPattern> {
    if r < 4 || n < r + 4 {
        return Vec::new();
    }
    let full = ElementSet::full(n);
    let mut out = Vec::new();
    for k in r_subsets(n, r - 4) {
        let rest: Vec<usize> = (full - k).iter().collect();
        for eight in r_subsets(rest.len(), 8) {
            let elems: Vec<usize> = eight.iter().map(|i| rest[i - 1]).collect();
            pairings(&elems, &mut Vec::new(), &mut |p| {
                out.push(OmegaPattern::new(k, [p[0], p[1], p[2], p[3]]).expect("disjoint"));
            });
        }
    }
    out
}

fn pairings(rest: &[usize], acc: &mut Vec<ElementSet>, emit: &mut impl FnMut(&[ElementSet])) {
    let Some((&first, tail)) = rest.split_first() else {
        emit(acc);
        return;
    };
    for i in 0..tail.len() {
        acc.push(ElementSet::of(&[first, tail[i]]));
        let remaining: Vec<usize> = tail
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &e)| e)
            .collect();
        pairings(&remaining, acc, emit);
        acc.pop();
    }
}

/// `(b5, b6)` by scanning every pattern; the small-`n` oracle.
pub fn count_omega_hits_direct(h: &[ElementSet], n: usize, r: usize) -> (u64, u64) {
    let mut sorted = h.to_vec();
    sorted.sort_unstable();
    let (mut b5, mut b6) = (0, 0);
    for w in enumerate_omega(n, r) {
        let hits = w
            .sets()
            .iter()
            .filter(|s| sorted.binary_search(s).is_ok())
            .count();
        match hits {
            5 => b5 += 1,
            6 => b6 += 1,
            _ => {}
        }
    }
    (b5, b6)
}

/// Greedily removes vertices until no edge and no pattern with five or more
/// hits survives. Each removal lowers `e + b5 + 2 b6` by at least one, so at
/// most that many vertices are removed.
pub fn prune_to_good(h: &[ElementSet], r: usize) -> Vec<ElementSet> {
    let mut w: Vec<ElementSet> = h.to_vec();
    w.sort_unstable();
    w.dedup();
    loop {
        let mut load = vec![0usize; w.len()];
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if adjacent(w[i], w[j], r) {
                    load[i] += 1;
                    load[j] += 1;
                }
            }
        }
        if load.iter().all(|&l| l == 0) {
            for hit in patterns_with_five_or_more(&w, r) {
                for s in hit.pattern.sets() {
                    if let Ok(i) = w.binary_search(&s) {
                        load[i] += 1;
                    }
                }
            }
        }
        // Most loaded vertex, smallest on ties.
        let Some((victim, _)) = load
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0)
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        else {
            return w;
        };
        w.remove(victim);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleStats {
    pub seed: u64,
    pub e_h: u64,
    pub b5: u64,
    pub b6: u64,
    pub w_size: usize,
    /// `W` has no edges, no five- or six-hit patterns, and is Ingleton.
    pub good: bool,
}

/// One sample: the statistics of `H` and the pruned set `W`.
pub fn run_trial(params: &CountingParams, seed: u64) -> Result<(SampleStats, Vec<ElementSet>)> {
    let (n, r) = (params.n, params.r);
    let h: Vec<ElementSet> = sample_h(params, seed)?
        .into_iter()
        .map(|i| colex_unrank(i, n, r))
        .collect::<Result<_>>()?;
    let e_h = count_edges(&h, r);
    let (b5, b6) = count_omega_hits(&h, r);
    let w = prune_to_good(&h, r);
    let clean = count_edges(&w, r) == 0 && count_omega_hits(&w, r) == (0, 0);
    let good = clean
        && SparsePavingMatroid::new(n, r, w.iter().copied())
            .map(|m| ingleton_fast_sp(&m).is_none())
            .unwrap_or(false);
    Ok((
        SampleStats {
            seed,
            e_h,
            b5,
            b6,
            w_size: w.len(),
            good,
        },
        w,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
}

impl Moments {
    fn of(values: impl Iterator<Item = f64> + Clone) -> Self {
        let count = values.clone().count() as f64;
        let mean = values.clone().sum::<f64>() / count;
        let variance = if count > 1.0 {
            values.map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0)
        } else {
            0.0
        };
        Moments { mean, variance }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    /// Mean plus three standard errors over `trials` samples.
    pub fn upper_3se(&self, trials: usize) -> f64 {
        self.mean + 3.0 * self.std_dev() / (trials as f64).sqrt()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialSummary {
    pub params: CountingParams,
    pub trials: Vec<SampleStats>,
    pub e_h: Moments,
    pub b5: Moments,
    pub b6: Moments,
    pub w_size: Moments,
    pub edge_bound: f64,
    pub b5_bound: f64,
    pub pruning_threshold: f64,
    /// Fraction of trials with `e + b5 + 2 b6 <= (1 - α) k`.
    pub within_threshold: f64,
    pub all_good: bool,
    /// `|W| >= k - e - b5 - 2 b6` in every trial.
    pub pruning_bound_holds: bool,
    pub claimed_exponent: f64,
}

impl TrialSummary {
    /// Mean edge count at most `ck/2` up to three standard errors.
    pub fn edge_mean_within_bound(&self) -> bool {
        self.e_h.mean <= self.edge_bound + self.slack(&self.e_h)
    }

    /// Mean five-hit count at most `c⁴k/64` up to three standard errors.
    pub fn b5_mean_within_bound(&self) -> bool {
        self.b5.mean <= self.b5_bound + self.slack(&self.b5)
    }

    fn slack(&self, m: &Moments) -> f64 {
        m.upper_3se(self.trials.len()) - m.mean
    }
}

/// Runs `trials` samples with seeds `seed0, seed0 + 1, ...`; the result does
/// not depend on scheduling.
pub fn run_trials(params: &CountingParams, trials: usize, seed0: u64) -> Result<TrialSummary> {
    run_trials_keeping(params, trials, seed0, false).map(|(s, _)| s)
}

/// As [`run_trials`], optionally returning each pruned `W`.
pub fn run_trials_keeping(
    params: &CountingParams,
    trials: usize,
    seed0: u64,
    keep: bool,
) -> Result<(TrialSummary, Vec<Vec<ElementSet>>)> {
    if trials == 0 {
        return Err(Error::Params("need at least one trial".into()));
    }
    let results: Vec<(SampleStats, Vec<ElementSet>)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| run_trial(params, seed0.wrapping_add(i)))
        .collect::<Result<_>>()?;
    let stats: Vec<SampleStats> = results.iter().map(|(s, _)| s.clone()).collect();
    let kept = if keep {
        results.into_iter().map(|(_, w)| w).collect()
    } else {
        Vec::new()
    };
    let k = params.k as f64;
    let threshold = params.pruning_threshold();
    let summary = TrialSummary {
        params: *params,
        e_h: Moments::of(stats.iter().map(|s| s.e_h as f64)),
        b5: Moments::of(stats.iter().map(|s| s.b5 as f64)),
        b6: Moments::of(stats.iter().map(|s| s.b6 as f64)),
        w_size: Moments::of(stats.iter().map(|s| s.w_size as f64)),
        edge_bound: params.edge_bound(),
        b5_bound: params.b5_bound(),
        pruning_threshold: threshold,
        within_threshold: stats
            .iter()
            .filter(|s| (s.e_h + s.b5 + 2 * s.b6) as f64 <= threshold)
            .count() as f64
            / trials as f64,
        all_good: stats.iter().all(|s| s.good),
        pruning_bound_holds: stats
            .iter()
            .all(|s| s.w_size as f64 >= k - (s.e_h + s.b5 + 2 * s.b6) as f64),
        claimed_exponent: params.claimed_exponent(),
        trials: stats,
    };
    Ok((summary, kept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::vamos;

    fn set(e: &[usize]) -> ElementSet {
        ElementSet::of(e)
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_of(0.0), 1.0);
        let expected = 1.0 - 0.475 - 0.81450625 / 64.0;
        assert!((f_of(0.95) - expected).abs() < 1e-15);
        assert!((f_of(0.95) - 0.5122733).abs() < 1e-7);
        assert!(0.486 / 0.95 < f_of(0.95));
        assert!((0.486f64 / 0.95 - 0.511578).abs() < 1e-6);
    }

    #[test]
    fn params_examples() {
        let p = make_params(12, 6, 0.95, 0.486).unwrap();
        assert_eq!((p.vertices, p.valency, p.k), (924, 36, 24));
        assert!(p.alpha > 0.486 / 0.95 && p.alpha < f_of(0.95));
        assert!(p.epsilon > 0.0);
        assert!((p.claimed_exponent() - 64.49).abs() < 0.01);
        let p = make_params(8, 4, 0.95, 0.486).unwrap();
        assert_eq!(p.k, 4);
        assert!(make_params(8, 4, 2.0, 2.0 * f_of(2.0)).is_err());
        assert!(make_params(8, 4, 0.95, 0.5).is_err());
    }

    #[test]
    fn sampling_edge_cases() {
        assert_eq!(sample_indices(10, 10, 3).unwrap(), (0..10).collect::<Vec<_>>());
        assert!(sample_indices(10, 0, 3).unwrap().is_empty());
        assert_eq!(sample_indices(50, 7, 9).unwrap(), sample_indices(50, 7, 9).unwrap());
        assert!(sample_indices(5, 6, 0).is_err());
        let s = sample_indices(924, 24, 1).unwrap();
        assert_eq!(s.len(), 24);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    /// Each vertex should be included with probability k/N; check every
    /// vertex's count over 10⁴ seeds lies within a binomial band.
    #[test]
    fn inclusion_frequency_is_uniform() {
        let (population, k, seeds) = (20u64, 5u64, 10_000u64);
        let mut counts = vec![0u64; population as usize];
        for seed in 0..seeds {
            for v in sample_indices(population, k, seed).unwrap() {
                counts[v as usize] += 1;
            }
        }
        let p = k as f64 / population as f64;
        let mean = seeds as f64 * p;
        let sd = (seeds as f64 * p * (1.0 - p)).sqrt();
        // 4σ per vertex keeps the family-wise false alarm rate below 0.2%.
        for &c in &counts {
            assert!((c as f64 - mean).abs() < 4.0 * sd, "count {c} vs mean {mean}");
        }
    }

    #[test]
    fn edge_examples() {
        assert_eq!(count_edges(vamos().circuit_hyperplanes(), 4), 0);
        assert_eq!(count_edges(&[set(&[1, 2, 3]), set(&[1, 2, 4])], 3), 1);
        // All 3-sets through {1,2}: pairwise adjacent.
        let clique: Vec<_> = (3..=8).map(|e| set(&[1, 2, e])).collect();
        assert_eq!(count_edges(&clique, 3), 15);
    }

    #[test]
    fn omega_hit_examples() {
        assert_eq!(count_omega_hits(vamos().circuit_hyperplanes(), 4), (1, 0));
        let six = OmegaPattern::new(
            ElementSet::EMPTY,
            [[1, 2], [3, 4], [5, 6], [7, 8]].map(|x| set(&x)),
        )
        .unwrap()
        .sets();
        assert_eq!(count_omega_hits(&six, 4), (0, 1));
        assert_eq!(enumerate_omega(8, 4).len(), 105);
        assert_eq!(enumerate_omega(9, 5).len(), 945);
        assert_eq!(count_omega_hits_direct(&six, 8, 4), (0, 1));
    }

    #[test]
    fn pruning_examples() {
        let v = vamos();
        let w = prune_to_good(v.circuit_hyperplanes(), 4);
        assert_eq!(w.len(), 4);
        let six = OmegaPattern::new(
            ElementSet::EMPTY,
            [[1, 2], [3, 4], [5, 6], [7, 8]].map(|x| set(&x)),
        )
        .unwrap()
        .sets();
        // Add vertices far from the pattern (stable, no new patterns).
        let mut h = six.to_vec();
        h.push(set(&[1, 3, 5, 7]));
        let w = prune_to_good(&h, 4);
        assert!(w.len() + 2 >= h.len());
        assert_eq!(count_edges(&w, 4), 0);
        assert_eq!(count_omega_hits(&w, 4), (0, 0));
        let stable = [set(&[1, 2, 3, 4]), set(&[1, 2, 5, 6])];
        assert_eq!(prune_to_good(&stable, 4), stable.to_vec());
    }

    #[test]
    fn random_stable_sets_are_stable() {
        for seed in 0..50 {
            let h = random_stable_set(8, 4, seed).unwrap();
            assert!(crate::johnson::is_stable(&h, 4).unwrap());
            assert_eq!(h, random_stable_set(8, 4, seed).unwrap());
        }
        let sizes: Vec<usize> = (0..50)
            .map(|s| random_stable_set(7, 3, s).unwrap().len())
            .collect();
        assert!(sizes.iter().min() < sizes.iter().max());
    }

    #[test]
    fn trials_are_deterministic() {
        let p = make_params(10, 5, 0.95, 0.486).unwrap();
        let a = run_trials(&p, 8, 42).unwrap();
        let b = run_trials(&p, 8, 42).unwrap();
        assert_eq!(a.trials, b.trials);
        assert!(a.all_good);
        assert!(a.pruning_bound_holds);
        assert!(run_trials(&p, 0, 1).is_err());
    }
}
