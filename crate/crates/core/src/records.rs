//! JSON forms of matroids, witnesses and quadruples.

use serde::{Deserialize, Serialize};

use crate::constructions::AnyMatroid;
use crate::error::{Error, Result};
use crate::ingleton::{IngletonQuadruple, OmegaPattern, ViolationWitness};
use crate::johnson::ElementSet;
use crate::matroid::{BasisMatroid, SparsePavingMatroid};

fn hex_list(sets: &[ElementSet]) -> Vec<String> {
    sets.iter().map(|s| s.to_hex()).collect()
}

fn parse_list(list: &[String]) -> Result<Vec<ElementSet>> {
    list.iter().map(|s| ElementSet::from_hex(s)).collect()
}

/// `{"n":8,"r":4,"ch":[...]}` or `{"n":3,"r":1,"bases":[...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatroidRecord {
    SparsePaving { n: usize, r: usize, ch: Vec<String> },
    General { n: usize, r: usize, bases: Vec<String> },
}

impl MatroidRecord {
    pub fn from_sparse_paving(m: &SparsePavingMatroid) -> Self {
        MatroidRecord::SparsePaving {
            n: m.n(),
            r: m.r(),
            ch: hex_list(m.circuit_hyperplanes()),
        }
    }

    pub fn from_basis(m: &BasisMatroid) -> Self {
        MatroidRecord::General {
            n: m.n(),
            r: m.r(),
            bases: hex_list(m.bases()),
        }
    }

    pub fn from_any(m: &AnyMatroid) -> Self {
        match m {
            AnyMatroid::SparsePaving(m) => Self::from_sparse_paving(m),
            AnyMatroid::General(m) => Self::from_basis(m),
        }
    }

    /// Parses and validates.
    pub fn to_matroid(&self) -> Result<AnyMatroid> {
        match self {
            MatroidRecord::SparsePaving { n, r, ch } => Ok(AnyMatroid::SparsePaving(
                SparsePavingMatroid::new(*n, *r, parse_list(ch)?)?,
            )),
            MatroidRecord::General { n, r, bases } => {
                let m = BasisMatroid::new(*n, parse_list(bases)?)?;
                if m.r() != *r {
                    return Err(Error::Params(format!(
                        "record says rank {r} but bases have size {}",
                        m.r()
                    )));
                }
                Ok(AnyMatroid::General(m))
            }
        }
    }

    pub fn parse(text: &str) -> Result<AnyMatroid> {
        let rec: MatroidRecord = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        rec.to_matroid()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    #[serde(rename = "K")]
    pub k: String,
    #[serde(rename = "P")]
    pub p: Vec<String>,
    pub basis_pair: [usize; 2],
}

impl From<&ViolationWitness> for WitnessRecord {
    fn from(w: &ViolationWitness) -> Self {
        WitnessRecord {
            k: w.pattern.k().to_hex(),
            p: hex_list(&w.pattern.pairs()),
            basis_pair: [w.basis_pair.0, w.basis_pair.1],
        }
    }
}

impl WitnessRecord {
    pub fn to_witness(&self) -> Result<ViolationWitness> {
        let p = parse_list(&self.p)?;
        let p: [ElementSet; 4] = p
            .try_into()
            .map_err(|_| Error::Params("witness needs four pairs".into()))?;
        let pattern = OmegaPattern::new(ElementSet::from_hex(&self.k)?, p)?;
        // Indices refer to the pairs as written; re-sorting may move them.
        let [i, j] = self.basis_pair;
        if !(1..=4).contains(&i) || !(1..=4).contains(&j) || i == j {
            return Err(Error::Params(format!("bad basis pair [{i},{j}]")));
        }
        let (x, y) = (p[i - 1], p[j - 1]);
        let sorted = pattern.pairs();
        let pos = |s: ElementSet| sorted.iter().position(|&q| q == s).unwrap() + 1;
        let (a, b) = (pos(x), pos(y));
        Ok(ViolationWitness {
            pattern,
            basis_pair: (a.min(b), a.max(b)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrupleRecord {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "D")]
    pub d: String,
    pub lhs: usize,
    pub rhs: usize,
}

impl From<&IngletonQuadruple> for QuadrupleRecord {
    fn from(q: &IngletonQuadruple) -> Self {
        QuadrupleRecord {
            a: q.a.to_hex(),
            b: q.b.to_hex(),
            c: q.c.to_hex(),
            d: q.d.to_hex(),
            lhs: q.lhs,
            rhs: q.rhs,
        }
    }
}
