//! Real representations of matroids whose nonbases satisfy a Hall-type
//! intersection condition.
//!
//! Row `i <= t` of the matrix vanishes exactly on the `i`-th nonbasis and is
//! otherwise filled with independent random integers; the remaining rows are
//! dense. Every `r × r` minor is then checked exactly, so a successful
//! verification is a certificate regardless of the randomness.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::johnson::{r_subsets, ElementSet};
use crate::matroid::BasisMatroid;

/// Every subfamily `W` with `|W| >= 2` has `|∩W| <= r - |W|`.
pub fn hall_condition(nonbases: &[ElementSet], r: usize) -> bool {
    let t = nonbases.len();
    if t <= 1 {
        return true;
    }
    // Any r + 1 of them would need an intersection of negative size.
    if t > r {
        return false;
    }
    (1u64..1 << t).filter(|w| w.count_ones() >= 2).all(|w| {
        let common = (0..t)
            .filter(|i| w >> i & 1 == 1)
            .fold(ElementSet::full(64), |acc, i| acc & nonbases[i]);
        common.len() + w.count_ones() as usize <= r
    })
}

/// Rows `1..=t` carry prescribed zeros on the nonbases; the rest are free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroPattern {
    pub r: usize,
    pub n: usize,
    /// Zero positions of the constrained rows, one nonbasis per row.
    pub zero_rows: Vec<ElementSet>,
}

impl ZeroPattern {
    #[inline]
    pub fn is_zero(&self, row: usize, e: usize) -> bool {
        self.zero_rows.get(row).is_some_and(|z| z.contains(e))
    }

    /// Columns with a nonzero entry in `row` (0-based).
    pub fn support(&self, row: usize) -> ElementSet {
        let full = ElementSet::full(self.n);
        self.zero_rows.get(row).map_or(full, |&z| full - z)
    }
}

pub fn build_pattern(nonbases: &[ElementSet], r: usize, n: usize) -> Result<ZeroPattern> {
    for &x in nonbases {
        if x.len() != r || !x.fits(n) {
            return Err(Error::Cardinality {
                set: x,
                expected: r,
                got: x.len(),
            });
        }
    }
    if !hall_condition(nonbases, r) {
        return Err(Error::HallCondition);
    }
    Ok(ZeroPattern {
        r,
        n,
        zero_rows: nonbases.to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericMatrix {
    /// Row-major, `r` rows of `n` entries.
    pub entries: Vec<Vec<BigInt>>,
    pub pattern: ZeroPattern,
}

impl GenericMatrix {
    /// The `r × r` submatrix on the columns of `cols`.
    pub fn columns(&self, cols: ElementSet) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|row| cols.iter().map(|e| row[e - 1].clone()).collect())
            .collect()
    }
}

/// Fills every non-prescribed entry with a uniform integer in `[1, 2^bit_width)`.
pub fn instantiate(pattern: &ZeroPattern, seed: u64, bit_width: u32) -> Result<GenericMatrix> {
    if bit_width < 32 {
        return Err(Error::Params(format!("bit width {bit_width} is below 32")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = bit_width.div_ceil(32) as usize;
    let top_mask = if bit_width % 32 == 0 {
        u32::MAX
    } else {
        (1u32 << (bit_width % 32)) - 1
    };
    let mut draw = || loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.random()).collect();
        digits[words - 1] &= top_mask;
        let v = BigUint::from_slice(&digits);
        if !v.is_zero() {
            return BigInt::from_biguint(Sign::Plus, v);
        }
    };
    let entries = (0..pattern.r)
        .map(|i| {
            (1..=pattern.n)
                .map(|e| {
                    if pattern.is_zero(i, e) {
                        BigInt::zero()
                    } else {
                        draw()
                    }
                })
                .collect()
        })
        .collect();
    Ok(GenericMatrix {
        entries,
        pattern: pattern.clone(),
    })
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let size = matrix.len();
    if size == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign_flip = false;
    let mut prev = BigInt::one();
    for k in 0..size {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[size - 1][size - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Checks both directions: an `r`-set is a basis of `m` iff its columns are
/// nonsingular.
pub fn verify_represents(a: &GenericMatrix, m: &BasisMatroid) -> Result<bool> {
    if a.entries.len() != m.r() || a.pattern.n != m.n() {
        return Err(Error::Params(format!(
            "{}×{} matrix cannot represent a rank-{} matroid on [{}]",
            a.entries.len(),
            a.pattern.n,
            m.r(),
            m.n()
        )));
    }
    let subsets: Vec<ElementSet> = r_subsets(m.n(), m.r()).collect();
    Ok(subsets
        .par_iter()
        .all(|&s| determinant(&a.columns(s)).is_zero() != m.is_basis(s)))
}

/// Perfect matching between rows and the columns of `b`, using nonzero
/// positions as edges.
pub fn matching_exists(pattern: &ZeroPattern, b: ElementSet) -> bool {
    let cols: Vec<usize> = b.iter().collect();
    if cols.len() != pattern.r {
        return false;
    }
    let adj: Vec<Vec<usize>> = (0..pattern.r)
        .map(|i| {
            let support = pattern.support(i);
            (0..cols.len()).filter(|&c| support.contains(cols[c])).collect()
        })
        .collect();
    let mut col_match: Vec<Option<usize>> = vec![None; cols.len()];
    (0..pattern.r).all(|row| {
        let mut seen = vec![false; cols.len()];
        augment(row, &adj, &mut col_match, &mut seen)
    })
}

fn augment(
    row: usize,
    adj: &[Vec<usize>],
    col_match: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &c in &adj[row] {
        if seen[c] {
            continue;
        }
        seen[c] = true;
        let free = match col_match[c] {
            None => true,
            Some(other) => augment(other, adj, col_match, seen),
        };
        if free {
            col_match[c] = Some(row);
            return true;
        }
    }
    false
}

/// Outcome of trying successive seeds.
#[derive(Clone, Debug)]
pub struct Representation {
    pub matrix: GenericMatrix,
    pub seed: u64,
    pub attempts: u32,
}

/// Builds the pattern and tries seeds `seed, seed + 1, ...` until a matrix
/// verifies. `Ok(None)` when every attempt fails.
pub fn represent(
    m: &BasisMatroid,
    seed: u64,
    bit_width: u32,
    attempts: u32,
) -> Result<Option<Representation>> {
    let pattern = build_pattern(&m.nonbases(), m.r(), m.n())?;
    for i in 0..attempts {
        let s = seed.wrapping_add(i as u64);
        let matrix = instantiate(&pattern, s, bit_width)?;
        if verify_represents(&matrix, m)? {
            return Ok(Some(Representation {
                matrix,
                seed: s,
                attempts: i + 1,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::SparsePavingMatroid;
    use proptest::prelude::*;

    fn set(e: &[usize]) -> ElementSet {
        ElementSet::of(e)
    }

    /// Leibniz expansion, the independent oracle for `determinant`.
    fn leibniz(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0i128;
        loop {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            let term: i128 = (0..n).map(|i| m[i][perm[i]] as i128).product();
            total += if inversions % 2 == 0 { term } else { -term };
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        total
    }

    proptest! {
        #[test]
        fn bareiss_matches_leibniz(
            size in 1usize..=5,
            raw in proptest::collection::vec(-6i64..=6, 25),
        ) {
            let m: Vec<Vec<i64>> = (0..size).map(|i| raw[i * size..(i + 1) * size].to_vec()).collect();
            let big: Vec<Vec<BigInt>> = m.iter().map(|row| row.iter().map(|&v| BigInt::from(v)).collect()).collect();
            prop_assert_eq!(determinant(&big), BigInt::from(leibniz(&m)));
        }
    }

    #[test]
    fn hall_examples() {
        assert!(hall_condition(&[], 4));
        assert!(hall_condition(&[set(&[1, 2, 3, 4])], 4));
        assert!(hall_condition(&[set(&[1, 2, 3, 4]), set(&[1, 2, 5, 6])], 4));
        assert!(!hall_condition(
            &[set(&[1, 2, 3, 4]), set(&[1, 2, 5, 6]), set(&[1, 2, 7, 8])],
            4
        ));
    }

    #[test]
    fn pattern_examples() {
        let p = build_pattern(&[], 4, 8).unwrap();
        assert!(p.zero_rows.is_empty());
        assert_eq!(p.support(0), ElementSet::full(8));
        let x = set(&[1, 2, 3, 4]);
        let p = build_pattern(&[x], 4, 8).unwrap();
        assert_eq!(p.zero_rows, vec![x]);
        assert_eq!(p.support(1), ElementSet::full(8));
        let y = set(&[5, 6, 7, 8]);
        let p = build_pattern(&[x, y], 4, 8).unwrap();
        assert_eq!((p.support(0).len(), p.support(1).len(), p.support(2).len()), (4, 4, 8));
        assert!(matches!(
            build_pattern(&[x, set(&[1, 2, 5, 6]), set(&[1, 2, 7, 8])], 4, 8),
            Err(Error::HallCondition)
        ));
    }

    #[test]
    fn instantiate_examples() {
        let p = build_pattern(&[set(&[1, 2, 3])], 3, 6).unwrap();
        let a = instantiate(&p, 7, 64).unwrap();
        assert_eq!(a, instantiate(&p, 7, 64).unwrap());
        let b = instantiate(&p, 8, 64).unwrap();
        assert_ne!(a, b);
        for m in [&a, &b] {
            for i in 0..3 {
                for e in 1..=6 {
                    assert_eq!(m.entries[i][e - 1].is_zero(), p.is_zero(i, e));
                    assert!(m.entries[i][e - 1].bits() <= 64);
                }
            }
        }
        assert!(instantiate(&p, 1, 16).is_err());
    }

    #[test]
    fn nonbasis_columns_are_singular() {
        let x = set(&[1, 2, 3, 4]);
        let p = build_pattern(&[x], 4, 8).unwrap();
        for seed in 0..5 {
            let a = instantiate(&p, seed, 64).unwrap();
            assert!(determinant(&a.columns(x)).is_zero());
        }
    }

    #[test]
    fn uniform_random_full_matrix() {
        for n in 2..=9 {
            for r in 1..n {
                let m = BasisMatroid::uniform(r, n).unwrap();
                let p = build_pattern(&[], r, n).unwrap();
                let ok = (0..3).any(|s| verify_represents(&instantiate(&p, s, 64).unwrap(), &m).unwrap());
                assert!(ok, "U({r},{n})");
            }
        }
    }

    #[test]
    fn matching_examples() {
        let p = build_pattern(&[], 3, 6).unwrap();
        assert!(matching_exists(&p, set(&[1, 2, 3])));
        let x = set(&[1, 2, 3]);
        let p = build_pattern(&[x], 3, 6).unwrap();
        assert!(!matching_exists(&p, x));
        assert!(matching_exists(&p, set(&[1, 2, 4])));
    }

    #[test]
    fn represents_two_disjoint_nonbases() {
        let m = SparsePavingMatroid::new(8, 4, [set(&[1, 2, 3, 4]), set(&[5, 6, 7, 8])])
            .unwrap()
            .to_basis()
            .unwrap();
        let rep = represent(&m, 1, 64, 3).unwrap().expect("representable");
        assert!(verify_represents(&rep.matrix, &m).unwrap());
        // Scaling a row by a nonzero integer preserves the verdict.
        let mut scaled = rep.matrix.clone();
        for v in scaled.entries[2].iter_mut() {
            *v *= -7;
        }
        assert!(verify_represents(&scaled, &m).unwrap());
        assert!(!verify_represents(&rep.matrix, &BasisMatroid::uniform(4, 8).unwrap()).unwrap());
    }
}
