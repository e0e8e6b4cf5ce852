//! Sparse paving matroids (stored by their circuit-hyperplanes) and general
//! matroids (stored by their bases).

use std::collections::HashSet;

use crate::canonical::{canonical_form_of_nonbases, CanonicalForm};
use crate::error::{Error, Result};
use crate::johnson::{adjacent_pair, binomial, r_subsets, ElementSet, MAX_N};

/// Anything with a rank function on subsets of `[n]`.
pub trait RankOracle {
    fn ground_size(&self) -> usize;
    fn rank(&self, s: ElementSet) -> usize;

    /// Rank of every subset of `[n]`, indexed by bitmask.
    fn rank_table(&self) -> Vec<u8> {
        let n = self.ground_size();
        assert!(n <= 24, "rank table for n = {n} is too large");
        (0..1u64 << n)
            .map(|m| self.rank(ElementSet::from_bits(m)) as u8)
            .collect()
    }
}

impl<T: RankOracle + ?Sized> RankOracle for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn rank(&self, s: ElementSet) -> usize {
        (**self).rank(s)
    }
}

fn check_ground(n: usize) -> Result<()> {
    if n > MAX_N {
        return Err(Error::TooLarge {
            what: "ground set",
            n: n as u64,
            max: MAX_N as u64,
        });
    }
    Ok(())
}

/// A sparse paving matroid of rank `r` on `[n]`, given by its set of
/// circuit-hyperplanes (equivalently, its nonbases).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePavingMatroid {
    n: usize,
    r: usize,
    /// Sorted ascending, which is colex order.
    h: Vec<ElementSet>,
}

impl SparsePavingMatroid {
    /// Validates that `h` is a stable family of `r`-subsets of `[n]`.
    pub fn new(n: usize, r: usize, h: impl IntoIterator<Item = ElementSet>) -> Result<Self> {
        check_ground(n)?;
        if r > n {
            return Err(Error::Params(format!("rank {r} exceeds ground set size {n}")));
        }
        let mut h: Vec<ElementSet> = h.into_iter().collect();
        for &x in &h {
            if !x.fits(n) {
                return Err(Error::OutsideGround { set: x, n });
            }
            if x.len() != r {
                return Err(Error::Cardinality {
                    set: x,
                    expected: r,
                    got: x.len(),
                });
            }
        }
        h.sort_unstable();
        h.dedup();
        if let Some((x, y)) = adjacent_pair(&h, r) {
            return Err(Error::Unstable {
                x,
                y,
                r_minus_one: r - 1,
            });
        }
        Ok(SparsePavingMatroid { n, r, h })
    }

    pub(crate) fn new_unchecked(n: usize, r: usize, mut h: Vec<ElementSet>) -> Self {
        h.sort_unstable();
        debug_assert!(adjacent_pair(&h, r).is_none());
        SparsePavingMatroid { n, r, h }
    }

    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        Self::new(n, r, [])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    /// Circuit-hyperplanes in colex order.
    #[inline]
    pub fn circuit_hyperplanes(&self) -> &[ElementSet] {
        &self.h
    }

    #[inline]
    pub fn is_circuit_hyperplane(&self, x: ElementSet) -> bool {
        self.h.binary_search(&x).is_ok()
    }

    pub fn is_basis(&self, x: ElementSet) -> bool {
        x.len() == self.r && x.fits(self.n) && !self.is_circuit_hyperplane(x)
    }

    /// Bases are all `r`-subsets outside `H`.
    pub fn to_basis(&self) -> Result<BasisMatroid> {
        if self.h.len() as u64 == binomial(self.n, self.r) {
            return Err(Error::RankDrop {
                n: self.n,
                r: self.r,
            });
        }
        let bases = r_subsets(self.n, self.r)
            .filter(|&s| !self.is_circuit_hyperplane(s))
            .collect();
        Ok(BasisMatroid::from_sorted_unchecked(self.n, self.r, bases))
    }

    /// Turns the circuit-hyperplane `x` into a basis.
    pub fn relax(&self, x: ElementSet) -> Result<Self> {
        let pos = self
            .h
            .binary_search(&x)
            .map_err(|_| Error::NotCircuitHyperplane(x))?;
        let mut h = self.h.clone();
        h.remove(pos);
        Ok(SparsePavingMatroid { h, ..*self })
    }

    /// The dual is sparse paving with the complements as circuit-hyperplanes.
    pub fn dual(&self) -> Self {
        let full = ElementSet::full(self.n);
        Self::new_unchecked(self.n, self.n - self.r, self.h.iter().map(|&x| full - x).collect())
    }

    /// Relabels elements; `perm[i]` is the new label of element `i + 1`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        Self::new_unchecked(
            self.n,
            self.r,
            self.h.iter().map(|x| x.permute(perm)).collect(),
        )
    }

    /// Same circuit-hyperplanes on `[n + extra]`; the new elements are free.
    pub fn extend_ground(&self, extra: usize) -> Result<Self> {
        check_ground(self.n + extra)?;
        Ok(SparsePavingMatroid {
            n: self.n + extra,
            ..self.clone()
        })
    }

    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        canonical_form_of_nonbases(self.n, self.r, &self.h)
    }
}

impl RankOracle for SparsePavingMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    #[inline]
    fn rank(&self, s: ElementSet) -> usize {
        let k = s.len();
        if k == self.r && self.is_circuit_hyperplane(s) {
            self.r - 1
        } else {
            k.min(self.r)
        }
    }
}

/// A matroid given by its family of bases. Intended for small ground sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisMatroid {
    n: usize,
    r: usize,
    /// Sorted ascending.
    bases: Vec<ElementSet>,
}

impl BasisMatroid {
    pub fn new(n: usize, bases: impl IntoIterator<Item = ElementSet>) -> Result<Self> {
        check_ground(n)?;
        let mut bases: Vec<ElementSet> = bases.into_iter().collect();
        bases.sort_unstable();
        bases.dedup();
        for &b in &bases {
            if !b.fits(n) {
                return Err(Error::OutsideGround { set: b, n });
            }
        }
        if !exchange_check(&bases)? {
            return Err(Error::Params("basis exchange axiom fails".into()));
        }
        let r = bases[0].len();
        Ok(BasisMatroid { n, r, bases })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, r: usize, bases: Vec<ElementSet>) -> Self {
        debug_assert!(bases.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(!bases.is_empty());
        BasisMatroid { n, r, bases }
    }

    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        check_ground(n)?;
        if r > n {
            return Err(Error::Params(format!("U({r},{n}) needs r <= n")));
        }
        Ok(Self::from_sorted_unchecked(n, r, r_subsets(n, r).collect()))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn bases(&self) -> &[ElementSet] {
        &self.bases
    }

    #[inline]
    pub fn is_basis(&self, s: ElementSet) -> bool {
        self.bases.binary_search(&s).is_ok()
    }

    /// All `r`-subsets that are not bases, in colex order.
    pub fn nonbases(&self) -> Vec<ElementSet> {
        r_subsets(self.n, self.r)
            .filter(|&s| !self.is_basis(s))
            .collect()
    }

    pub fn dual(&self) -> BasisMatroid {
        let full = ElementSet::full(self.n);
        let mut bases: Vec<_> = self.bases.iter().map(|&b| full - b).collect();
        bases.sort_unstable();
        Self::from_sorted_unchecked(self.n, self.n - self.r, bases)
    }

    /// Deletes element `e`; the ground set is relabeled to `[n - 1]`.
    pub fn delete(&self, e: usize) -> Result<BasisMatroid> {
        if self.n == 0 || !(1..=self.n).contains(&e) {
            return Err(Error::Params(format!(
                "cannot delete {e} from a matroid on [{}]",
                self.n
            )));
        }
        let avoiding: Vec<ElementSet> = self
            .bases
            .iter()
            .copied()
            .filter(|b| !b.contains(e))
            .collect();
        let (r, kept) = if avoiding.is_empty() {
            // Coloop: every basis loses e.
            (self.r - 1, self.bases.iter().map(|b| b.without(e)).collect())
        } else {
            (self.r, avoiding)
        };
        let mut bases: Vec<_> = kept.into_iter().map(|b: ElementSet| b.compress(e)).collect();
        bases.sort_unstable();
        bases.dedup();
        Ok(Self::from_sorted_unchecked(self.n - 1, r, bases))
    }

    pub fn contract(&self, e: usize) -> Result<BasisMatroid> {
        Ok(self.dual().delete(e)?.dual())
    }

    /// Contracts `contract_set`, deletes `delete_set`, and relabels the
    /// remaining elements to `[n']` preserving order.
    pub fn minor(&self, contract_set: ElementSet, delete_set: ElementSet) -> Result<BasisMatroid> {
        if !contract_set.is_disjoint(delete_set) {
            return Err(Error::Params("contract and delete sets overlap".into()));
        }
        let mut m = self.clone();
        // Highest first so lower labels stay put.
        let mut removals: Vec<(usize, bool)> = contract_set
            .iter()
            .map(|e| (e, true))
            .chain(delete_set.iter().map(|e| (e, false)))
            .collect();
        removals.sort_unstable_by_key(|&(e, _)| std::cmp::Reverse(e));
        for (e, contract) in removals {
            m = if contract { m.contract(e)? } else { m.delete(e)? };
        }
        Ok(m)
    }

    /// Every set of size at most `r - 1` is independent.
    pub fn is_paving(&self) -> bool {
        if self.r == 0 {
            return true;
        }
        r_subsets(self.n, self.r - 1).all(|s| self.rank(s) == s.len())
    }

    pub fn is_sparse_paving(&self) -> bool {
        self.is_paving() && self.dual().is_paving()
    }

    /// The same matroid in circuit-hyperplane form, if it is sparse paving.
    pub fn to_sparse_paving(&self) -> Result<SparsePavingMatroid> {
        if !self.is_sparse_paving() {
            return Err(Error::Params("matroid is not sparse paving".into()));
        }
        SparsePavingMatroid::new(self.n, self.r, self.nonbases())
    }

    pub fn permute(&self, perm: &[usize]) -> BasisMatroid {
        let mut bases: Vec<_> = self.bases.iter().map(|b| b.permute(perm)).collect();
        bases.sort_unstable();
        Self::from_sorted_unchecked(self.n, self.r, bases)
    }

    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        canonical_form_of_nonbases(self.n, self.r, &self.nonbases())
    }

    pub fn is_isomorphic(&self, other: &BasisMatroid) -> Result<bool> {
        if (self.n, self.r, self.bases.len()) != (other.n, other.r, other.bases.len()) {
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }
}

impl RankOracle for BasisMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn rank(&self, s: ElementSet) -> usize {
        let mut best = 0;
        for &b in &self.bases {
            best = best.max((b & s).len());
            if best == self.r {
                break;
            }
        }
        best
    }
}

/// Checks the basis-exchange axiom over every ordered pair.
pub fn exchange_check(bases: &[ElementSet]) -> Result<bool> {
    let first = bases.first().ok_or(Error::EmptyFamily)?;
    if let Some(b) = bases.iter().find(|b| b.len() != first.len()) {
        return Err(Error::MixedCardinality(first.len(), b.len()));
    }
    let family: HashSet<ElementSet> = bases.iter().copied().collect();
    Ok(bases.iter().all(|&b1| {
        bases.iter().all(|&b2| {
            (b1 - b2).iter().all(|x| {
                (b2 - b1)
                    .iter()
                    .any(|y| family.contains(&b1.without(x).with(y)))
            })
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{u02_plus_u11, u22_plus_u01, vamos};

    fn set(e: &[usize]) -> ElementSet {
        ElementSet::of(e)
    }

    #[test]
    fn sp_new_examples() {
        let u = SparsePavingMatroid::new(8, 4, []).unwrap();
        assert_eq!(u.to_basis().unwrap().bases().len(), 70);
        let v = vamos();
        assert_eq!(v.circuit_hyperplanes().len(), 5);
        assert_eq!(v.to_basis().unwrap().bases().len(), 65);
        let err = SparsePavingMatroid::new(8, 4, [set(&[1, 2, 3, 4]), set(&[1, 2, 3, 5])]);
        assert!(matches!(err, Err(Error::Unstable { .. })));
        let m = SparsePavingMatroid::new(4, 2, [set(&[1, 2])]).unwrap();
        assert_eq!(m.to_basis().unwrap().bases().len(), 5);
        assert!(SparsePavingMatroid::new(4, 2, [set(&[1, 2, 3])]).is_err());
        assert!(SparsePavingMatroid::new(4, 2, [set(&[1, 5])]).is_err());
    }

    #[test]
    fn to_basis_refuses_rank_drop() {
        let m = SparsePavingMatroid::new(2, 1, [set(&[1]), set(&[2])]);
        // {1} and {2} meet in 0 = r - 1 elements, so this is already unstable.
        assert!(m.is_err());
        let m = SparsePavingMatroid::new(1, 1, [set(&[1])]).unwrap();
        assert!(matches!(m.to_basis(), Err(Error::RankDrop { .. })));
    }

    #[test]
    fn sp_rank_examples() {
        let v = vamos();
        assert_eq!(v.rank(set(&[1, 2, 3, 4])), 3);
        assert_eq!(v.rank(set(&[5, 6, 7, 8])), 4);
        assert_eq!(v.rank(set(&[1, 2])), 2);
        assert_eq!(v.rank(ElementSet::full(8)), 4);
    }

    #[test]
    fn bm_rank_examples() {
        let m = u22_plus_u01();
        assert_eq!(m.rank(set(&[3])), 0);
        assert_eq!(m.rank(ElementSet::EMPTY), 0);
        assert_eq!(m.rank(ElementSet::full(3)), 2);
        let v = vamos().to_basis().unwrap();
        assert_eq!(v.rank(ElementSet::full(8)), 4);
    }

    #[test]
    fn dual_examples() {
        let u = BasisMatroid::uniform(4, 8).unwrap();
        assert_eq!(u.dual(), u);
        let v = vamos().to_basis().unwrap();
        assert_eq!(v.dual().dual(), v);
        assert!(v.dual().is_isomorphic(&v).unwrap());
        assert!(u02_plus_u11().dual().is_isomorphic(&u22_plus_u01()).unwrap());
    }

    #[test]
    fn minor_examples() {
        let u = BasisMatroid::uniform(4, 8).unwrap();
        assert_eq!(u.delete(8).unwrap(), BasisMatroid::uniform(4, 7).unwrap());
        assert_eq!(u.contract(8).unwrap(), BasisMatroid::uniform(3, 7).unwrap());
        let c = vamos().to_basis().unwrap().contract(1).unwrap();
        assert_eq!((c.n(), c.r()), (7, 3));
        assert_eq!(c.nonbases().len(), 3);
        // Oracle: 3-subsets T of {2..8} with T + 1 in H, relabeled down by one.
        let expect: Vec<ElementSet> = vamos()
            .circuit_hyperplanes()
            .iter()
            .filter(|x| x.contains(1))
            .map(|x| x.without(1).compress(1))
            .collect();
        assert_eq!(c.nonbases(), expect);
        // Deleting a coloop drops the rank.
        let m = u02_plus_u11();
        let d = m.delete(3).unwrap();
        assert_eq!((d.n(), d.r()), (2, 0));
        assert!(BasisMatroid::uniform(0, 0).unwrap().delete(1).is_err());
    }

    #[test]
    fn relax_examples() {
        let v = vamos();
        let once = v.relax(set(&[1, 2, 3, 4])).unwrap();
        assert_eq!(once.circuit_hyperplanes().len(), 4);
        let mut m = v.clone();
        for &x in v.circuit_hyperplanes() {
            m = m.relax(x).unwrap();
        }
        assert_eq!(m, SparsePavingMatroid::uniform(4, 8).unwrap());
        assert!(matches!(
            m.relax(set(&[1, 2, 3, 4])),
            Err(Error::NotCircuitHyperplane(_))
        ));
    }

    #[test]
    fn paving_examples() {
        assert!(!u22_plus_u01().is_paving());
        let m = u02_plus_u11();
        assert!(m.is_paving());
        assert!(!m.is_sparse_paving());
        assert!(vamos().to_basis().unwrap().is_sparse_paving());
    }

    #[test]
    fn exchange_examples() {
        let all: Vec<_> = r_subsets(6, 3).collect();
        assert!(exchange_check(&all).unwrap());
        assert!(!exchange_check(&[set(&[1, 2]), set(&[3, 4])]).unwrap());
        assert!(exchange_check(vamos().to_basis().unwrap().bases()).unwrap());
        assert!(matches!(exchange_check(&[]), Err(Error::EmptyFamily)));
        assert!(matches!(
            exchange_check(&[set(&[1]), set(&[1, 2])]),
            Err(Error::MixedCardinality(1, 2))
        ));
        assert!(BasisMatroid::new(4, [set(&[1, 2]), set(&[3, 4])]).is_err());
    }

    #[test]
    fn sp_dual_matches_basis_dual() {
        let v = vamos();
        assert_eq!(v.dual().to_basis().unwrap(), v.to_basis().unwrap().dual());
    }
}
