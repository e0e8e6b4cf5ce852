//! Named matroids and the Graham–Sloane family `S(n, r, γ)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::johnson::{binomial, r_subsets, ElementSet};
use crate::matroid::{BasisMatroid, SparsePavingMatroid};

/// Bound on `C(n, r)` for enumerating color classes.
const MAX_GS_VERTICES: u64 = 1 << 24;

/// The Vámos matroid on the pairs `{1,2}, {3,4}, {5,6}, {7,8}`: every union
/// of two pairs is a circuit-hyperplane except `{5,6,7,8}`.
pub fn vamos() -> SparsePavingMatroid {
    let h = [
        [1, 2, 3, 4],
        [1, 2, 5, 6],
        [1, 2, 7, 8],
        [3, 4, 5, 6],
        [3, 4, 7, 8],
    ]
    .map(|x| ElementSet::of(&x));
    SparsePavingMatroid::new(8, 4, h).expect("Vámos circuit-hyperplanes are stable")
}

/// Two loops and a coloop.
pub fn u02_plus_u11() -> BasisMatroid {
    BasisMatroid::new(3, [ElementSet::of(&[3])]).expect("valid")
}

/// A free pair and a loop.
pub fn u22_plus_u01() -> BasisMatroid {
    BasisMatroid::new(3, [ElementSet::of(&[1, 2])]).expect("valid")
}

/// `Σ x mod n`.
pub fn gs_color(x: ElementSet, n: usize) -> usize {
    x.iter().sum::<usize>() % n
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsColoring {
    pub n: usize,
    pub r: usize,
    /// `class_sizes[γ] = |c⁻¹(γ)|`.
    pub class_sizes: Vec<u64>,
}

fn check_gs(n: usize, r: usize) -> Result<()> {
    if r == 0 || r >= n {
        return Err(Error::Params(format!("S(n,r,γ) needs 0 < r < n, got n={n}, r={r}")));
    }
    if n > crate::johnson::MAX_N || binomial(n, r) > MAX_GS_VERTICES {
        return Err(Error::TooLarge {
            what: "Graham–Sloane enumeration",
            n: n as u64,
            max: 24,
        });
    }
    Ok(())
}

pub fn gs_coloring(n: usize, r: usize) -> Result<GsColoring> {
    check_gs(n, r)?;
    let mut class_sizes = vec![0u64; n];
    for x in r_subsets(n, r) {
        class_sizes[gs_color(x, n)] += 1;
    }
    Ok(GsColoring { n, r, class_sizes })
}

/// `S(n, r, γ)`: the circuit-hyperplanes are the `r`-sets of color `γ`.
pub fn gs_matroid(n: usize, r: usize, gamma: usize) -> Result<SparsePavingMatroid> {
    check_gs(n, r)?;
    if gamma >= n {
        return Err(Error::Params(format!("γ = {gamma} is not in Z_{n}")));
    }
    SparsePavingMatroid::new(
        n,
        r,
        r_subsets(n, r).filter(|&x| gs_color(x, n) == gamma),
    )
}

/// The largest color class, smallest `γ` on ties.
pub fn gs_best(n: usize, r: usize) -> Result<(usize, SparsePavingMatroid)> {
    let coloring = gs_coloring(n, r)?;
    let best = coloring.class_sizes.iter().copied().max().unwrap_or(0);
    let gamma = coloring
        .class_sizes
        .iter()
        .position(|&s| s == best)
        .expect("nonempty");
    Ok((gamma, gs_matroid(n, r, gamma)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Named {
    Vamos,
    Uniform { r: usize, n: usize },
    U02PlusU11,
    U22PlusU01,
}

impl FromStr for Named {
    type Err = Error;

    /// `vamos`, `uniform:R,N`, `u02_plus_u11`, `u22_plus_u01`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "vamos" | "v8" => return Ok(Named::Vamos),
            "u02_plus_u11" => return Ok(Named::U02PlusU11),
            "u22_plus_u01" => return Ok(Named::U22PlusU01),
            _ => {}
        }
        let args = s
            .strip_prefix("uniform:")
            .or_else(|| s.strip_prefix("uniform(").and_then(|t| t.strip_suffix(')')))
            .ok_or_else(|| Error::UnknownName(s.clone()))?;
        let parts: Vec<usize> = args
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::UnknownName(s.clone()))?;
        match parts[..] {
            [r, n] if r <= n && n <= crate::johnson::MAX_N => Ok(Named::Uniform { r, n }),
            _ => Err(Error::UnknownName(s.clone())),
        }
    }
}

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Named::Vamos => f.write_str("vamos"),
            Named::Uniform { r, n } => write!(f, "uniform:{r},{n}"),
            Named::U02PlusU11 => f.write_str("u02_plus_u11"),
            Named::U22PlusU01 => f.write_str("u22_plus_u01"),
        }
    }
}

/// Either representation, as produced by [`named`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMatroid {
    SparsePaving(SparsePavingMatroid),
    General(BasisMatroid),
}

impl AnyMatroid {
    pub fn n(&self) -> usize {
        match self {
            AnyMatroid::SparsePaving(m) => m.n(),
            AnyMatroid::General(m) => m.n(),
        }
    }

    pub fn r(&self) -> usize {
        match self {
            AnyMatroid::SparsePaving(m) => m.r(),
            AnyMatroid::General(m) => m.r(),
        }
    }

    pub fn to_basis(&self) -> Result<BasisMatroid> {
        match self {
            AnyMatroid::SparsePaving(m) => m.to_basis(),
            AnyMatroid::General(m) => Ok(m.clone()),
        }
    }

    /// The sparse paving form, converting a general matroid when possible.
    pub fn as_sparse_paving(&self) -> Option<SparsePavingMatroid> {
        match self {
            AnyMatroid::SparsePaving(m) => Some(m.clone()),
            AnyMatroid::General(m) => m.to_sparse_paving().ok(),
        }
    }
}

pub fn named(name: &Named) -> Result<AnyMatroid> {
    Ok(match *name {
        Named::Vamos => AnyMatroid::SparsePaving(vamos()),
        Named::Uniform { r, n } => AnyMatroid::SparsePaving(SparsePavingMatroid::uniform(r, n)?),
        Named::U02PlusU11 => AnyMatroid::General(u02_plus_u11()),
        Named::U22PlusU01 => AnyMatroid::General(u22_plus_u01()),
    })
}
