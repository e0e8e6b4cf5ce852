//! Ingleton's inequality: direct evaluation, an exhaustive checker for any
//! rank oracle, and the structural checker for sparse paving matroids.
//!
//! For a sparse paving matroid of rank `r`, a violation exists exactly when
//! there are disjoint pairs `P1..P4` and a set `K` of size `r - 4` such that
//! five of the six sets `K ∪ Pi ∪ Pj` are circuit-hyperplanes and the sixth is
//! a basis.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::johnson::ElementSet;
use crate::matroid::{BasisMatroid, RankOracle, SparsePavingMatroid};

/// Ground-set bound for exhaustive checking.
pub const MAX_BRUTE_N: usize = 8;

/// The two sides of Ingleton's inequality for one quadruple.
///
/// `lhs = r(A∪B) + r(A∪C) + r(A∪D) + r(B∪C) + r(B∪D)` and
/// `rhs = r(A) + r(B) + r(A∪B∪C) + r(A∪B∪D) + r(C∪D)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IngletonQuadruple {
    pub a: ElementSet,
    pub b: ElementSet,
    pub c: ElementSet,
    pub d: ElementSet,
    pub lhs: usize,
    pub rhs: usize,
}

impl IngletonQuadruple {
    #[inline]
    pub fn violated(&self) -> bool {
        self.lhs < self.rhs
    }
}

pub fn eval_quadruple<M: RankOracle + ?Sized>(
    m: &M,
    a: ElementSet,
    b: ElementSet,
    c: ElementSet,
    d: ElementSet,
) -> IngletonQuadruple {
    let lhs = m.rank(a | b) + m.rank(a | c) + m.rank(a | d) + m.rank(b | c) + m.rank(b | d);
    let rhs = m.rank(a) + m.rank(b) + m.rank(a | b | c) + m.rank(a | b | d) + m.rank(c | d);
    IngletonQuadruple {
        a,
        b,
        c,
        d,
        lhs,
        rhs,
    }
}

/// Which sets the exhaustive checker ranges over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BruteMode {
    /// Every quadruple of flats. Each of the nine rank terms is unchanged when
    /// an argument is replaced by its closure, so this is still exhaustive.
    #[default]
    Flats,
    /// Every quadruple of subsets, up to the `A↔B` and `C↔D` symmetries.
    AllSubsets,
}

/// Exhaustive Ingleton check over flats. `None` means Ingleton.
pub fn ingleton_brute<M: RankOracle + Sync + ?Sized>(m: &M) -> Result<Option<IngletonQuadruple>> {
    ingleton_brute_with(m, BruteMode::Flats)
}

pub fn ingleton_brute_with<M: RankOracle + Sync + ?Sized>(
    m: &M,
    mode: BruteMode,
) -> Result<Option<IngletonQuadruple>> {
    let n = m.ground_size();
    if n > MAX_BRUTE_N {
        return Err(Error::TooLarge {
            what: "exhaustive Ingleton check (use sampled mode)",
            n: n as u64,
            max: MAX_BRUTE_N as u64,
        });
    }
    let rank = m.rank_table();
    let candidates: Vec<u64> = match mode {
        BruteMode::AllSubsets => (0..1u64 << n).collect(),
        BruteMode::Flats => flats(n, &rank),
    };
    let found = search_quadruples(&rank, &candidates);
    Ok(found.map(|(a, b, c, d)| {
        eval_quadruple(
            m,
            ElementSet::from_bits(a),
            ElementSet::from_bits(b),
            ElementSet::from_bits(c),
            ElementSet::from_bits(d),
        )
    }))
}

fn flats(n: usize, rank: &[u8]) -> Vec<u64> {
    let mut out: Vec<u64> = (0..1u64 << n)
        .map(|x| {
            let rx = rank[x as usize];
            (0..n).fold(x, |cl, e| {
                let bit = 1u64 << e;
                if x & bit == 0 && rank[(x | bit) as usize] == rx {
                    cl | bit
                } else {
                    cl
                }
            })
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// First violating `(A, B, C, D)` in candidate order with `A <= B`, `C <= D`.
fn search_quadruples(rank: &[u8], sets: &[u64]) -> Option<(u64, u64, u64, u64)> {
    let r = |x: u64| rank[x as usize] as i32;
    (0..sets.len()).into_par_iter().find_map_first(|ia| {
        let a = sets[ia];
        let mut g = vec![0i32; sets.len()];
        for (ib, &b) in sets.iter().enumerate().skip(ia) {
            let ab = a | b;
            let base = r(ab) - r(a) - r(b);
            for (gc, &c) in g.iter_mut().zip(sets) {
                *gc = r(a | c) + r(b | c) - r(ab | c);
            }
            for ic in 0..sets.len() {
                let c = sets[ic];
                let partial = base + g[ic];
                for id in ic..sets.len() {
                    let d = sets[id];
                    if partial + g[id] < r(c | d) {
                        return Some((a, sets[ib], c, d));
                    }
                }
            }
        }
        None
    })
}

/// Random quadruples for ground sets too large for the exhaustive check.
pub fn ingleton_sampled<M: RankOracle + ?Sized>(
    m: &M,
    budget: u64,
    seed: u64,
) -> Option<IngletonQuadruple> {
    let full = ElementSet::full(m.ground_size()).bits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || ElementSet::from_bits(rng.random::<u64>() & full);
    (0..budget).find_map(|_| {
        let q = eval_quadruple(m, draw(), draw(), draw(), draw());
        q.violated().then_some(q)
    })
}

/// Disjoint pairs `P1..P4` and a set `K`; the pairs are kept sorted so
/// equal patterns compare equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OmegaPattern {
    k: ElementSet,
    p: [ElementSet; 4],
}

/// Index pairs `{i, j}` (0-based) in the order the six sets are listed.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl OmegaPattern {
    pub fn new(k: ElementSet, p: [ElementSet; 4]) -> Result<Self> {
        let mut seen = k;
        for &x in &p {
            if x.len() != 2 {
                return Err(Error::Cardinality {
                    set: x,
                    expected: 2,
                    got: x.len(),
                });
            }
            if !seen.is_disjoint(x) {
                return Err(Error::Params(format!("{x} meets another part of the pattern")));
            }
            seen |= x;
        }
        Ok(Self::sorted(k, p))
    }

    fn sorted(k: ElementSet, mut p: [ElementSet; 4]) -> Self {
        p.sort_unstable();
        OmegaPattern { k, p }
    }

    pub fn k(&self) -> ElementSet {
        self.k
    }

    pub fn pairs(&self) -> [ElementSet; 4] {
        self.p
    }

    /// Rank of the matroids this pattern lives in.
    pub fn rank(&self) -> usize {
        self.k.len() + 4
    }

    pub fn support(&self) -> ElementSet {
        self.p.iter().fold(self.k, |s, &x| s | x)
    }

    /// `K ∪ Pi ∪ Pj` for `{i, j}` (0-based).
    #[inline]
    pub fn set(&self, i: usize, j: usize) -> ElementSet {
        self.k | self.p[i] | self.p[j]
    }

    /// The six sets `U(ω)`, listed in [`PAIRS`] order.
    pub fn sets(&self) -> [ElementSet; 6] {
        PAIRS.map(|(i, j)| self.set(i, j))
    }

    /// Recovers the pattern from at least four of its six sets.
    pub fn from_sets(sets: &[ElementSet]) -> Option<Self> {
        if sets.len() < 4 {
            return None;
        }
        let k = sets.iter().fold(sets[0], |acc, &s| acc & s);
        let union = sets.iter().fold(ElementSet::EMPTY, |acc, &s| acc | s);
        let mut groups: BTreeMap<u64, ElementSet> = BTreeMap::new();
        for e in (union - k).iter() {
            let signature = sets
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(e))
                .fold(0u64, |sig, (i, _)| sig | 1 << i);
            let g = groups.entry(signature).or_default();
            *g = g.with(e);
        }
        let parts: Vec<ElementSet> = groups.into_values().collect();
        if parts.len() != 4 || parts.iter().any(|p| p.len() != 2) {
            return None;
        }
        let pattern = OmegaPattern::sorted(k, [parts[0], parts[1], parts[2], parts[3]]);
        let all = pattern.sets();
        sets.iter()
            .all(|s| all.contains(s))
            .then_some(pattern)
    }
}

/// A pattern with exactly five of its six sets among the circuit-hyperplanes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ViolationWitness {
    pub pattern: OmegaPattern,
    /// 1-based indices into the sorted pairs; the union with `K` is a basis.
    pub basis_pair: (usize, usize),
}

impl ViolationWitness {
    pub fn basis(&self) -> ElementSet {
        self.pattern.set(self.basis_pair.0 - 1, self.basis_pair.1 - 1)
    }

    /// The five circuit-hyperplanes.
    pub fn circuit_hyperplanes(&self) -> Vec<ElementSet> {
        let basis = self.basis();
        self.pattern
            .sets()
            .into_iter()
            .filter(|&s| s != basis)
            .collect()
    }

    /// `(A, B, C, D)` with `C`, `D` built from the basis pair.
    pub fn quadruple_sets(&self) -> [ElementSet; 4] {
        let (i, j) = (self.basis_pair.0 - 1, self.basis_pair.1 - 1);
        let mut rest = (0..4).filter(|&x| x != i && x != j);
        let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
        let p = self.pattern.pairs();
        let k = self.pattern.k();
        [p[a] | k, p[b] | k, p[i] | k, p[j] | k]
    }
}

/// Pattern found by the opposite-pair scan with at least five hits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatternHit {
    pub pattern: OmegaPattern,
    /// 0-based pair index of the missing set, `None` when all six are hit.
    pub missing: Option<(usize, usize)>,
}

impl PatternHit {
    pub fn hits(&self) -> usize {
        if self.missing.is_some() {
            5
        } else {
            6
        }
    }
}

/// Every pattern meeting the sorted family `h` of `r`-sets in five or six
/// sets, sorted by pattern.
///
/// Any such pattern has two of its three complementary set pairs fully inside
/// `h`; those pairs meet in exactly `K`, so scanning pairs of `h` meeting in
/// `r - 4` elements finds every pattern two or three times.
pub fn patterns_with_five_or_more(h: &[ElementSet], r: usize) -> Vec<PatternHit> {
    if r < 4 || h.len() < 5 {
        return Vec::new();
    }
    let scan_from = |i: usize, out: &mut BTreeMap<OmegaPattern, PatternHit>| {
        let x = h[i];
        for &y in &h[i + 1..] {
            let k = x & y;
            if k.len() != r - 4 {
                continue;
            }
            let (xs, ys) = (splits(x - k), splits(y - k));
            for &(p1, p2) in &xs {
                for &(p3, p4) in &ys {
                    let pattern = OmegaPattern::sorted(k, [p1, p2, p3, p4]);
                    if out.contains_key(&pattern) {
                        continue;
                    }
                    let mut missing = None;
                    let mut misses = 0;
                    for (a, b) in PAIRS {
                        if h.binary_search(&pattern.set(a, b)).is_err() {
                            misses += 1;
                            missing = Some((a, b));
                        }
                    }
                    if misses <= 1 {
                        out.insert(pattern, PatternHit { pattern, missing });
                    }
                }
            }
        }
    };
    let merged: BTreeMap<OmegaPattern, PatternHit> = if h.len() < 96 {
        let mut out = BTreeMap::new();
        (0..h.len()).for_each(|i| scan_from(i, &mut out));
        out
    } else {
        (0..h.len())
            .into_par_iter()
            .fold(BTreeMap::new, |mut out, i| {
                scan_from(i, &mut out);
                out
            })
            .reduce(BTreeMap::new, |mut a, b| {
                a.extend(b);
                a
            })
    };
    merged.into_values().collect()
}

/// The three ways to split a 4-set into two pairs.
fn splits(s: ElementSet) -> [(ElementSet, ElementSet); 3] {
    let e: Vec<usize> = s.iter().collect();
    debug_assert_eq!(e.len(), 4);
    let pair = |a: usize, b: usize| ElementSet::of(&[e[a], e[b]]);
    [
        (pair(0, 1), pair(2, 3)),
        (pair(0, 2), pair(1, 3)),
        (pair(0, 3), pair(1, 2)),
    ]
}

/// All violation witnesses of `m`, sorted.
pub fn violation_witnesses(m: &SparsePavingMatroid) -> Vec<ViolationWitness> {
    if m.r() < 4 || m.n() < 8 {
        return Vec::new();
    }
    patterns_with_five_or_more(m.circuit_hyperplanes(), m.r())
        .into_iter()
        .filter_map(|hit| {
            hit.missing.map(|(i, j)| ViolationWitness {
                pattern: hit.pattern,
                basis_pair: (i + 1, j + 1),
            })
        })
        .collect()
}

/// `None` iff `m` is Ingleton; otherwise the least witness.
pub fn ingleton_fast_sp(m: &SparsePavingMatroid) -> Option<ViolationWitness> {
    violation_witnesses(m).into_iter().next()
}

/// The violating quadruple a witness describes, evaluated in `m`.
pub fn witness_to_quadruple<M: RankOracle + ?Sized>(
    m: &M,
    w: &ViolationWitness,
) -> IngletonQuadruple {
    let [a, b, c, d] = w.quadruple_sets();
    eval_quadruple(m, a, b, c, d)
}

/// `(M / K) | (P1 ∪ P2 ∪ P3 ∪ P4)`, relabeled to `[8]`.
pub fn minor_witness(m: &SparsePavingMatroid, w: &ViolationWitness) -> Result<BasisMatroid> {
    let k = w.pattern.k();
    let keep = w.pattern.support();
    m.to_basis()?.minor(k, ElementSet::full(m.n()) - keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gs_matroid, vamos};

    fn set(e: &[usize]) -> ElementSet {
        ElementSet::of(e)
    }

    /// Vámos with element 9 added to every circuit-hyperplane.
    fn vamos_coned() -> SparsePavingMatroid {
        SparsePavingMatroid::new(
            9,
            5,
            vamos().circuit_hyperplanes().iter().map(|x| x.with(9)),
        )
        .unwrap()
    }

    #[test]
    fn quadruple_examples() {
        let v = vamos();
        let e = ElementSet::EMPTY;
        let q = eval_quadruple(&v, e, e, e, e);
        assert_eq!((q.lhs, q.rhs), (0, 0));
        assert!(!q.violated());
        let [a, b, c, d] = [[1, 2], [3, 4], [5, 6], [7, 8]].map(|p| set(&p));
        let q = eval_quadruple(&v, a, b, c, d);
        assert_eq!((q.lhs, q.rhs), (15, 16));
        assert!(q.violated());
        let u = SparsePavingMatroid::uniform(4, 8).unwrap();
        let q = eval_quadruple(&u, a, b, c, d);
        // Five unions of two pairs have rank 4; the other side is 2 + 2 + 4 + 4 + 4.
        assert_eq!((q.lhs, q.rhs), (20, 16));
        assert!(!q.violated());
    }

    #[test]
    fn brute_examples() {
        for n in 1..=7 {
            for r in 0..=n {
                let u = BasisMatroid::uniform(r, n).unwrap();
                assert_eq!(ingleton_brute(&u).unwrap(), None);
            }
        }
        let q = ingleton_brute(&vamos()).unwrap().expect("Vámos is not Ingleton");
        assert!(q.violated());
        let q = ingleton_brute_with(&vamos(), BruteMode::AllSubsets).unwrap().unwrap();
        assert!(q.violated());
        assert!(matches!(
            ingleton_brute(&vamos_coned()),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn brute_modes_agree_on_small_matroids() {
        for gamma in 0..6 {
            for r in 1..6 {
                let m = gs_matroid(6, r, gamma).unwrap();
                let a = ingleton_brute_with(&m, BruteMode::Flats).unwrap();
                let b = ingleton_brute_with(&m, BruteMode::AllSubsets).unwrap();
                assert_eq!(a.is_none(), b.is_none());
            }
        }
    }

    #[test]
    fn fast_examples() {
        let w = ingleton_fast_sp(&vamos()).expect("witness");
        assert_eq!(w.pattern.k(), ElementSet::EMPTY);
        assert_eq!(w.basis(), set(&[5, 6, 7, 8]));
        assert_eq!(w.basis_pair, (3, 4));
        assert_eq!(violation_witnesses(&vamos()).len(), 1);
        assert_eq!(ingleton_fast_sp(&SparsePavingMatroid::uniform(4, 8).unwrap()), None);
        for gamma in 0..8 {
            assert_eq!(ingleton_fast_sp(&gs_matroid(8, 4, gamma).unwrap()), None);
        }
    }

    #[test]
    fn sampled_mode_on_uniform() {
        assert_eq!(
            ingleton_sampled(&SparsePavingMatroid::uniform(5, 10).unwrap(), 10_000, 1),
            None
        );
    }

    #[test]
    fn witness_to_quadruple_examples() {
        let v = vamos();
        let w = ingleton_fast_sp(&v).unwrap();
        let q = witness_to_quadruple(&v, &w);
        assert_eq!(
            [q.a, q.b, q.c, q.d],
            [[1, 2], [3, 4], [5, 6], [7, 8]].map(|p| set(&p))
        );
        assert_eq!((q.lhs, q.rhs), (15, 16));

        let m = vamos_coned();
        let w = ingleton_fast_sp(&m).unwrap();
        assert_eq!(w.pattern.k(), set(&[9]));
        let q = witness_to_quadruple(&m, &w);
        assert!([q.a, q.b, q.c, q.d].iter().all(|s| s.len() == 3));
        assert!(q.violated());
    }

    #[test]
    fn pattern_recovered_from_quadruple_circuits() {
        let m = vamos_coned();
        let w = ingleton_fast_sp(&m).unwrap();
        let [a, b, c, d] = w.quadruple_sets();
        let five = [a | b, a | c, a | d, b | c, b | d];
        assert!(five.iter().all(|&s| m.is_circuit_hyperplane(s)));
        assert_eq!(OmegaPattern::from_sets(&five), Some(w.pattern));
        assert_eq!(OmegaPattern::from_sets(&five[..4]), Some(w.pattern));
        assert_eq!(OmegaPattern::from_sets(&five[..3]), None);
    }

    #[test]
    fn minor_witness_examples() {
        let v = vamos();
        let w = ingleton_fast_sp(&v).unwrap();
        assert_eq!(minor_witness(&v, &w).unwrap(), v.to_basis().unwrap());

        let m = vamos_coned();
        let w = ingleton_fast_sp(&m).unwrap();
        let minor = minor_witness(&m, &w).unwrap();
        assert_eq!((minor.n(), minor.r()), (8, 4));
        assert!(minor.is_isomorphic(&v.to_basis().unwrap()).unwrap());
        let sp = minor.to_sparse_paving().unwrap();
        assert!(ingleton_fast_sp(&sp).is_some());
    }

    #[test]
    fn pattern_validation() {
        let p = [[1, 2], [3, 4], [5, 6], [7, 8]].map(|x| set(&x));
        assert!(OmegaPattern::new(ElementSet::EMPTY, p).is_ok());
        assert!(OmegaPattern::new(set(&[1]), p).is_err());
        assert!(OmegaPattern::new(ElementSet::EMPTY, [set(&[1, 2, 3]), p[1], p[2], p[3]]).is_err());
        let shuffled = OmegaPattern::new(ElementSet::EMPTY, [p[3], p[1], p[0], p[2]]).unwrap();
        assert_eq!(shuffled, OmegaPattern::new(ElementSet::EMPTY, p).unwrap());
    }

    #[test]
    fn full_six_pattern_is_not_a_violation() {
        let p = OmegaPattern::new(
            ElementSet::EMPTY,
            [[1, 2], [3, 4], [5, 6], [7, 8]].map(|x| set(&x)),
        )
        .unwrap();
        let m = SparsePavingMatroid::new(8, 4, p.sets()).unwrap();
        assert_eq!(ingleton_fast_sp(&m), None);
        assert_eq!(ingleton_brute(&m).unwrap(), None);
        let hits = patterns_with_five_or_more(m.circuit_hyperplanes(), 4);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].hits(), 6);
        // Relaxing any one of the six creates a violation.
        for x in p.sets() {
            assert!(ingleton_fast_sp(&m.relax(x).unwrap()).is_some());
        }
    }
}
