//! Canonical forms of matroids under relabeling of the ground set.
//!
//! The code of a rank-`r` matroid on `[n]` is its basis indicator over the
//! `C(n, r)` colex positions, minimized lexicographically over all `n!`
//! relabelings. For families of equal size a lexicographically smaller
//! indicator is the same thing as a lexicographically smaller ascending list
//! of nonbasis ranks, so the search works on those lists.
//!
//! The search assigns new labels `0, 1, 2, ...` to old elements one at a
//! time. A nonbasis whose elements have all been labeled has a known image,
//! and every nonbasis still incomplete will land at a colex rank of at least
//! `C(k, r)` once `k` labels are used. That gives a sound bound against the
//! best list found so far.

use std::fmt;

use crate::error::{Error, Result};
use crate::johnson::{binomial, colex_rank_unchecked, colex_unrank, ElementSet};

/// Largest ground set the canonical search accepts.
pub const MAX_CANONICAL_N: usize = 12;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub n: usize,
    pub r: usize,
    /// Basis indicator, most significant bit first, so byte order is
    /// lexicographic bit order.
    pub code: Vec<u8>,
}

impl CanonicalForm {
    /// From the ascending nonbasis ranks of a minimal image.
    pub(crate) fn from_minimal_ranks(n: usize, r: usize, ranks: &[u64]) -> Self {
        let positions = binomial(n, r) as usize;
        let mut code = vec![0xffu8; positions.div_ceil(8)];
        if positions % 8 != 0 {
            let last = code.len() - 1;
            code[last] = 0xff << (8 - positions % 8);
        }
        for &p in ranks {
            code[p as usize / 8] &= !(0x80 >> (p % 8));
        }
        CanonicalForm { n, r, code }
    }

    /// Lowercase hex of the code bytes.
    pub fn to_hex(&self) -> String {
        self.code.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(n: usize, r: usize, hex: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse { line: 0, msg };
        if n > MAX_CANONICAL_N || r > n {
            return Err(bad(format!("bad parameters n={n}, r={r}")));
        }
        let positions = binomial(n, r) as usize;
        if hex.len() != 2 * positions.div_ceil(8) {
            return Err(bad(format!(
                "code has {} hex digits, expected {}",
                hex.len(),
                2 * positions.div_ceil(8)
            )));
        }
        let code = (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16))
            .collect::<std::result::Result<Vec<u8>, _>>()
            .map_err(|e| bad(format!("bad code {hex:?}: {e}")))?;
        if positions % 8 != 0 && code[code.len() - 1] & (0xff >> (positions % 8)) != 0 {
            return Err(bad("padding bits set in code".into()));
        }
        Ok(CanonicalForm { n, r, code })
    }

    /// Nonbases of the canonical representative, in colex order.
    pub fn nonbases(&self) -> Vec<ElementSet> {
        let positions = binomial(self.n, self.r);
        (0..positions)
            .filter(|&p| self.code[p as usize / 8] & (0x80 >> (p % 8)) == 0)
            .map(|p| colex_unrank(p, self.n, self.r).expect("position in range"))
            .collect()
    }

    pub fn nonbasis_count(&self) -> usize {
        let positions = binomial(self.n, self.r) as usize;
        positions - self.code.iter().map(|b| b.count_ones() as usize).sum::<usize>()
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({},{}:{})", self.n, self.r, self.to_hex())
    }
}

/// Canonical form of the matroid whose nonbases are `family`.
pub fn canonical_form_of_nonbases(
    n: usize,
    r: usize,
    family: &[ElementSet],
) -> Result<CanonicalForm> {
    let search = Search::new(n, r, family)?;
    let best = search.run(false).1;
    Ok(CanonicalForm::from_minimal_ranks(n, r, &best))
}

/// Minimal image of `family` as an ascending list of colex ranks, together
/// with one relabeling achieving it (`perm[i]` = new label of element `i+1`).
pub fn minimal_image(n: usize, r: usize, family: &[ElementSet]) -> Result<(Vec<u64>, Vec<usize>)> {
    let search = Search::new(n, r, family)?;
    let (_, best, perm) = search.run_with_perm();
    Ok((best, perm))
}

/// True when `family`, read as ascending colex ranks, is already the minimal
/// image of its orbit. Stops at the first strictly smaller image.
pub fn is_minimal_image(n: usize, r: usize, family: &[ElementSet]) -> Result<bool> {
    Ok(Search::new(n, r, family)?.run(true).0)
}

struct Search<'a> {
    n: usize,
    family: &'a [ElementSet],
    containing: Vec<Vec<u32>>,
    /// `C(k, r)` for `k = 0..=n`.
    thresholds: Vec<u64>,
}

struct State {
    new_label: [u8; 64],
    assigned: ElementSet,
    prefix: Vec<u64>,
    best: Vec<u64>,
    best_perm: Vec<u8>,
    found_smaller: bool,
    stop_on_smaller: bool,
}

impl<'a> Search<'a> {
    fn new(n: usize, r: usize, family: &'a [ElementSet]) -> Result<Self> {
        if n > MAX_CANONICAL_N {
            return Err(Error::TooLarge {
                what: "canonical form",
                n: n as u64,
                max: MAX_CANONICAL_N as u64,
            });
        }
        let mut containing = vec![Vec::new(); n];
        for (i, x) in family.iter().enumerate() {
            if x.len() != r || !x.fits(n) {
                return Err(Error::Cardinality {
                    set: *x,
                    expected: r,
                    got: x.len(),
                });
            }
            for e in x.iter() {
                containing[e - 1].push(i as u32);
            }
        }
        Ok(Search {
            n,
            family,
            containing,
            thresholds: (0..=n).map(|k| binomial(k, r)).collect(),
        })
    }

    fn identity_ranks(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.family.iter().map(|&x| colex_rank_unchecked(x)).collect();
        v.sort_unstable();
        v
    }

    fn run(&self, stop_on_smaller: bool) -> (bool, Vec<u64>) {
        let st = self.solve(stop_on_smaller);
        (!st.found_smaller, st.best)
    }

    fn run_with_perm(&self) -> (bool, Vec<u64>, Vec<usize>) {
        let st = self.solve(false);
        let perm = st.best_perm.iter().map(|&l| l as usize + 1).collect();
        (!st.found_smaller, st.best, perm)
    }

    fn solve(&self, stop_on_smaller: bool) -> State {
        let mut st = State {
            new_label: [0; 64],
            assigned: ElementSet::EMPTY,
            prefix: Vec::with_capacity(self.family.len()),
            best: self.identity_ranks(),
            best_perm: (0..self.n as u8).collect(),
            found_smaller: false,
            stop_on_smaller,
        };
        self.descend(0, &mut st);
        st
    }

    /// Returns true to abort the whole search.
    fn descend(&self, depth: usize, st: &mut State) -> bool {
        if st.prefix.len() == self.family.len() || depth == self.n {
            if st.prefix < st.best {
                st.best.clone_from(&st.prefix);
                st.found_smaller = true;
                // Fill the unassigned elements in increasing order.
                let mut next = depth as u8;
                for o in 0..self.n {
                    if !st.assigned.contains(o + 1) {
                        st.new_label[o] = next;
                        next += 1;
                    }
                }
                st.best_perm.clear();
                st.best_perm.extend_from_slice(&st.new_label[..self.n]);
                return st.stop_on_smaller;
            }
            return false;
        }
        let label = depth as u8;
        for o in 0..self.n {
            if st.assigned.contains(o + 1) {
                continue;
            }
            st.new_label[o] = label;
            let assigned = st.assigned.with(o + 1);
            let mark = st.prefix.len();
            for &i in &self.containing[o] {
                let x = self.family[i as usize];
                if x.is_subset(assigned) {
                    let image = x
                        .iter()
                        .fold(ElementSet::EMPTY, |s, e| s.with(st.new_label[e - 1] as usize + 1));
                    st.prefix.push(colex_rank_unchecked(image));
                }
            }
            st.prefix[mark..].sort_unstable();
            if self.worth_descending(depth + 1, st) {
                let saved = st.assigned;
                st.assigned = assigned;
                let abort = self.descend(depth + 1, st);
                st.assigned = saved;
                if abort {
                    return true;
                }
            }
            st.prefix.truncate(mark);
        }
        false
    }

    /// `labeled` labels are in use. Compares the completed prefix with the
    /// best list found so far.
    fn worth_descending(&self, labeled: usize, st: &State) -> bool {
        let p = &st.prefix;
        for (a, b) in p.iter().zip(&st.best) {
            match a.cmp(b) {
                std::cmp::Ordering::Less => return true,
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Equal => {}
            }
        }
        // Equal so far: every later image has rank >= C(labeled, r).
        match st.best.get(p.len()) {
            Some(&next) => next >= self.thresholds[labeled] || p.len() == self.family.len(),
            None => true,
        }
    }
}
