//! Subsets of a small ground set, colex ranking of `r`-subsets and the
//! Johnson graph `J(n, r)`.
//!
//! Elements are 1-based: element `i` of `[n]` lives in bit `i - 1`. With that
//! layout the numeric order of bitmasks of equal popcount is exactly the
//! colexicographic order of the sets they encode.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_N: usize = 64;

/// A subset of `[n]`, `n <= 64`, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{1, ..., n}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_N);
        if n == 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    /// Builds a set from 1-based element labels.
    ///
    /// # Panics
    /// If a label is 0 or exceeds 64.
    pub fn of(elements: &[usize]) -> Self {
        elements.iter().fold(ElementSet::EMPTY, |s, &e| s.with(e))
    }

    #[inline]
    pub fn singleton(e: usize) -> Self {
        assert!((1..=MAX_N).contains(&e), "element {e} out of range");
        ElementSet(1u64 << (e - 1))
    }

    #[inline]
    pub fn with(self, e: usize) -> Self {
        self | ElementSet::singleton(e)
    }

    #[inline]
    pub fn without(self, e: usize) -> Self {
        self - ElementSet::singleton(e)
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, e: usize) -> bool {
        (1..=MAX_N).contains(&e) && self.0 >> (e - 1) & 1 == 1
    }

    #[inline]
    pub const fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub const fn is_disjoint(self, other: ElementSet) -> bool {
        self.0 & other.0 == 0
    }

    /// True when only elements of `[n]` are present.
    #[inline]
    pub fn fits(self, n: usize) -> bool {
        self.is_subset(ElementSet::full(n))
    }

    /// Largest element, if any.
    #[inline]
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    /// Smallest element, if any.
    #[inline]
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// Removes element `e` and shifts every larger element down by one.
    pub fn compress(self, e: usize) -> ElementSet {
        debug_assert!((1..=MAX_N).contains(&e));
        let low = if e == 1 { 0 } else { (1u64 << (e - 1)) - 1 };
        let high = !low & !(1u64 << (e - 1));
        ElementSet((self.0 & low) | ((self.0 & high) >> 1))
    }

    /// Applies a relabeling; `perm[i]` is the new label of element `i + 1`.
    pub fn permute(self, perm: &[usize]) -> ElementSet {
        self.iter().fold(ElementSet::EMPTY, |s, e| s.with(perm[e - 1]))
    }

    /// Lowercase hexadecimal bitmask without prefix.
    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        let digits = s.strip_prefix("0x").unwrap_or(s);
        if digits.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "empty hex mask".into(),
            });
        }
        u64::from_str_radix(digits, 16)
            .map(ElementSet)
            .map_err(|e| Error::Parse {
                line: 0,
                msg: format!("bad hex mask {s:?}: {e}"),
            })
    }
}

impl std::ops::BitOr for ElementSet {
    type Output = ElementSet;
    #[inline]
    fn bitor(self, rhs: Self) -> Self {
        ElementSet(self.0 | rhs.0)
    }
}

impl std::ops::BitAnd for ElementSet {
    type Output = ElementSet;
    #[inline]
    fn bitand(self, rhs: Self) -> Self {
        ElementSet(self.0 & rhs.0)
    }
}

impl std::ops::Sub for ElementSet {
    type Output = ElementSet;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        ElementSet(self.0 & !rhs.0)
    }
}

impl std::ops::BitOrAssign for ElementSet {
    #[inline]
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ElementSet {
    type Err = Error;

    /// Parses the braces form `{1,2,5,6}`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse { line: 0, msg };
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| bad(format!("expected braces in {s:?}")))?;
        let mut set = ElementSet::EMPTY;
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let e: usize = tok
                .parse()
                .map_err(|_| bad(format!("bad element {tok:?}")))?;
            if !(1..=MAX_N).contains(&e) {
                return Err(bad(format!("element {e} outside 1..=64")));
            }
            set = set.with(e);
        }
        Ok(set)
    }
}

static BINOM: [[u64; 65]; 65] = {
    let mut t = [[0u64; 65]; 65];
    let mut n = 0;
    while n <= 64 {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            // C(64, 32) < 2^63, so nothing here overflows.
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
};

/// `C(n, k)`, zero when `k > n`.
#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n || n > MAX_N {
        if n > MAX_N && k <= n {
            panic!("binomial({n}, {k}) outside the table");
        }
        return 0;
    }
    BINOM[n][k]
}

/// Number of `r`-subsets colexicographically smaller than `s`.
pub fn colex_rank(s: ElementSet, r: usize) -> Result<u64> {
    if s.len() != r {
        return Err(Error::Cardinality {
            set: s,
            expected: r,
            got: s.len(),
        });
    }
    Ok(colex_rank_unchecked(s))
}

/// Colex rank of `s` among subsets of its own size.
#[inline]
pub fn colex_rank_unchecked(s: ElementSet) -> u64 {
    s.iter()
        .enumerate()
        .map(|(i, e)| binomial(e - 1, i + 1))
        .sum()
}

/// The `r`-subset of `[n]` with colex rank `index`.
pub fn colex_unrank(index: u64, n: usize, r: usize) -> Result<ElementSet> {
    if n > MAX_N || r > n {
        return Err(Error::Params(format!("no {r}-subsets of [{n}]")));
    }
    let count = binomial(n, r);
    if index >= count {
        return Err(Error::IndexOutOfRange { index, n, r, count });
    }
    let mut rest = index;
    let mut set = ElementSet::EMPTY;
    let mut top = n;
    for i in (1..=r).rev() {
        // Largest c with C(c, i) <= rest; element c + 1.
        let mut c = top - 1;
        while binomial(c, i) > rest {
            c -= 1;
        }
        rest -= binomial(c, i);
        set = set.with(c + 1);
        top = c;
    }
    Ok(set)
}

/// All `r`-subsets of `[n]` in colex order.
pub fn r_subsets(n: usize, r: usize) -> RSubsets {
    assert!(n <= MAX_N && r <= n);
    let end = if n == 64 { None } else { Some(1u64 << n) };
    let first = if r == 0 { 0 } else { u64::MAX >> (64 - r) };
    RSubsets {
        next: Some(first),
        end,
        r,
    }
}

pub struct RSubsets {
    next: Option<u64>,
    end: Option<u64>,
    r: usize,
}

impl Iterator for RSubsets {
    type Item = ElementSet;

    fn next(&mut self) -> Option<ElementSet> {
        let cur = self.next?;
        if let Some(end) = self.end {
            if cur >= end {
                self.next = None;
                return None;
            }
        }
        self.next = if self.r == 0 {
            None
        } else {
            // Gosper's hack.
            let c = cur & cur.wrapping_neg();
            let (rr, overflow) = cur.overflowing_add(c);
            if overflow || rr == 0 {
                None
            } else {
                Some((((rr ^ cur) >> 2) / c) | rr)
            }
        };
        Some(ElementSet(cur))
    }
}

/// Vertex count and valency of `J(n, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JohnsonParams {
    pub n: usize,
    pub r: usize,
    pub vertices: u64,
    pub valency: u64,
}

pub fn johnson_params(n: usize, r: usize) -> Result<JohnsonParams> {
    if r == 0 || r >= n || n > MAX_N {
        return Err(Error::Params(format!("J({n},{r}) needs 0 < r < n <= 64")));
    }
    Ok(JohnsonParams {
        n,
        r,
        vertices: binomial(n, r),
        valency: (r * (n - r)) as u64,
    })
}

fn expect_size(s: ElementSet, r: usize) -> Result<()> {
    if s.len() == r {
        Ok(())
    } else {
        Err(Error::Cardinality {
            set: s,
            expected: r,
            got: s.len(),
        })
    }
}

pub fn johnson_adjacent(x: ElementSet, y: ElementSet, r: usize) -> Result<bool> {
    expect_size(x, r)?;
    expect_size(y, r)?;
    Ok(adjacent(x, y, r))
}

#[inline]
pub(crate) fn adjacent(x: ElementSet, y: ElementSet, r: usize) -> bool {
    r >= 1 && (x & y).len() == r - 1
}

/// First adjacent pair in `h`, if any.
pub fn adjacent_pair(h: &[ElementSet], r: usize) -> Option<(ElementSet, ElementSet)> {
    h.iter().enumerate().find_map(|(i, &x)| {
        h[i + 1..]
            .iter()
            .find(|&&y| adjacent(x, y, r))
            .map(|&y| (x, y))
    })
}

pub fn is_stable(h: &[ElementSet], r: usize) -> Result<bool> {
    for &x in h {
        expect_size(x, r)?;
    }
    Ok(adjacent_pair(h, r).is_none())
}

/// `J(n, r)` with vertices indexed by colex rank.
#[derive(Clone, Debug)]
pub struct JohnsonGraph {
    pub params: JohnsonParams,
    vertices: Vec<ElementSet>,
    neighbors: Vec<Vec<u32>>,
}

impl JohnsonGraph {
    /// Materializes the graph; intended for `C(n, r) <= 2^20` or so.
    pub fn new(n: usize, r: usize) -> Result<Self> {
        let params = johnson_params(n, r)?;
        if params.vertices > 1 << 22 {
            return Err(Error::TooLarge {
                what: "Johnson graph vertex count",
                n: params.vertices,
                max: 1 << 22,
            });
        }
        let vertices: Vec<ElementSet> = r_subsets(n, r).collect();
        let neighbors = vertices
            .iter()
            .map(|&v| {
                let mut nb = Vec::with_capacity(params.valency as usize);
                for x in v.iter() {
                    for y in (ElementSet::full(n) - v).iter() {
                        nb.push(colex_rank_unchecked(v.without(x).with(y)) as u32);
                    }
                }
                nb.sort_unstable();
                nb
            })
            .collect();
        Ok(JohnsonGraph {
            params,
            vertices,
            neighbors,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.params.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.params.r
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn vertex(&self, i: u32) -> ElementSet {
        self.vertices[i as usize]
    }

    pub fn vertices(&self) -> &[ElementSet] {
        &self.vertices
    }

    #[inline]
    pub fn neighbors(&self, i: u32) -> &[u32] {
        &self.neighbors[i as usize]
    }

    pub fn index_of(&self, s: ElementSet) -> Result<u32> {
        if !s.fits(self.n()) {
            return Err(Error::OutsideGround { set: s, n: self.n() });
        }
        colex_rank(s, self.r()).map(|i| i as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> ElementSet {
        ElementSet::of(e)
    }

    #[test]
    fn colex_examples() {
        assert_eq!(colex_rank(set(&[1, 2, 3]), 3).unwrap(), 0);
        assert_eq!(colex_rank(set(&[3, 4, 5]), 3).unwrap(), 9);
        assert_eq!(colex_rank(set(&[1, 2, 4]), 3).unwrap(), 1);
        assert_eq!(colex_unrank(0, 5, 3).unwrap(), set(&[1, 2, 3]));
        assert_eq!(colex_unrank(9, 5, 3).unwrap(), set(&[3, 4, 5]));
        assert_eq!(colex_unrank(1, 5, 3).unwrap(), set(&[1, 2, 4]));
        assert!(matches!(
            colex_rank(set(&[1, 2]), 3),
            Err(Error::Cardinality { .. })
        ));
        assert!(matches!(
            colex_unrank(10, 5, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    /// Independent oracle: sort all 3-subsets of [5] by their reversed
    /// element lists, which is the definition of colex order.
    #[test]
    fn colex_matches_sorted_enumeration() {
        let mut all = Vec::new();
        for a in 1..=5 {
            for b in a + 1..=5 {
                for c in b + 1..=5 {
                    all.push(vec![a, b, c]);
                }
            }
        }
        all.sort_by_key(|v| v.iter().rev().cloned().collect::<Vec<_>>());
        for (i, v) in all.iter().enumerate() {
            assert_eq!(colex_rank(set(v), 3).unwrap(), i as u64);
            assert_eq!(colex_unrank(i as u64, 5, 3).unwrap(), set(v));
        }
    }

    #[test]
    fn round_trip_up_to_twelve() {
        for n in 0..=12 {
            for r in 0..=n {
                let sets: Vec<_> = r_subsets(n, r).collect();
                assert_eq!(sets.len() as u64, binomial(n, r));
                for (i, &s) in sets.iter().enumerate() {
                    assert_eq!(colex_rank(s, r).unwrap(), i as u64);
                    assert_eq!(colex_unrank(i as u64, n, r).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn params_examples() {
        let p = johnson_params(8, 4).unwrap();
        assert_eq!((p.vertices, p.valency), (70, 16));
        let p = johnson_params(12, 6).unwrap();
        assert_eq!((p.vertices, p.valency), (924, 36));
        for n in 2..20 {
            let p = johnson_params(n, 1).unwrap();
            assert_eq!((p.vertices, p.valency), (n as u64, n as u64 - 1));
        }
        assert!(johnson_params(5, 0).is_err());
        assert!(johnson_params(5, 5).is_err());
    }

    #[test]
    fn adjacency_examples() {
        assert!(johnson_adjacent(set(&[1, 2, 3]), set(&[1, 2, 4]), 3).unwrap());
        assert!(!johnson_adjacent(set(&[1, 2, 3]), set(&[1, 2, 3]), 3).unwrap());
        assert!(!johnson_adjacent(set(&[1, 2, 3, 4]), set(&[1, 2, 5, 6]), 4).unwrap());
        assert!(johnson_adjacent(set(&[1, 2]), set(&[1, 2, 3]), 3).is_err());
    }

    #[test]
    fn stability_examples() {
        assert!(is_stable(&[], 4).unwrap());
        assert!(is_stable(&[set(&[1, 2, 3, 4]), set(&[1, 2, 5, 6])], 4).unwrap());
        assert!(!is_stable(&[set(&[1, 2, 3, 4]), set(&[1, 2, 3, 5])], 4).unwrap());
    }

    #[test]
    fn degree_is_regular() {
        for n in 2..=10 {
            for r in 1..n {
                let g = JohnsonGraph::new(n, r).unwrap();
                for i in 0..g.order() as u32 {
                    let nb = g.neighbors(i);
                    assert_eq!(nb.len(), r * (n - r));
                    for &j in nb {
                        assert!(adjacent(g.vertex(i), g.vertex(j), r));
                        assert!(g.neighbors(j).binary_search(&i).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn text_and_hex_forms() {
        let s = set(&[1, 2, 5, 6]);
        assert_eq!(s.to_string(), "{1,2,5,6}");
        assert_eq!(s.to_hex(), "33");
        assert_eq!("{1,2,5,6}".parse::<ElementSet>().unwrap(), s);
        assert_eq!(ElementSet::from_hex("33").unwrap(), s);
        assert!(ElementSet::from_hex("zz").is_err());
        assert_eq!("{}".parse::<ElementSet>().unwrap(), ElementSet::EMPTY);
    }

    #[test]
    fn compress_shifts_down() {
        assert_eq!(set(&[1, 3, 5]).compress(3), set(&[1, 4]));
        assert_eq!(set(&[1, 2]).compress(1), set(&[1]));
        assert_eq!(set(&[8]).compress(8), ElementSet::EMPTY);
    }
}
