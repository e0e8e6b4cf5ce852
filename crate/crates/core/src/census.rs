//! Isomorph-free enumeration of sparse paving matroids at small `(n, r)`.
//!
//! A sparse paving matroid of rank `r` on `[n]` is the same thing as a stable
//! set of `J(n, r)`. Two independent routes produce one representative per
//! isomorphism class:
//!
//! * [`enumerate_iso_classes`] is an orderly generator: a family is kept only
//!   when its ascending list of colex ranks is the minimal image of its orbit,
//!   and children extend a kept family by a vertex beyond its last one.
//!   Dropping the last vertex of a minimal family leaves a minimal family, so
//!   every class is reached exactly once.
//! * [`enumerate_iso_classes_dedup`] walks every labeled stable set through
//!   the colex-least vertex (all vertices are in one orbit) and deduplicates
//!   canonical forms.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_form_of_nonbases, is_minimal_image, CanonicalForm};
use crate::constructions::{u02_plus_u11, u22_plus_u01, vamos};
use crate::error::{Error, Result};
use crate::ingleton::{ingleton_brute, ingleton_fast_sp, violation_witnesses, ViolationWitness};
use crate::johnson::{binomial, ElementSet, JohnsonGraph};
use crate::matroid::{BasisMatroid, SparsePavingMatroid};
use crate::records::WitnessRecord;

/// Version of the census file format.
pub const CENSUS_FORMAT_VERSION: u32 = 1;

/// Bound on `C(n, r)` for walking stable sets.
pub const MAX_STABLE_WALK_VERTICES: u64 = 1 << 16;

/// Ground-set bound for isomorphism-class enumeration.
pub const MAX_CENSUS_N: usize = 9;

fn check_params(n: usize, r: usize) -> Result<()> {
    if r == 0 || r >= n {
        return Err(Error::Params(format!("census needs 0 < r < n, got n={n}, r={r}")));
    }
    Ok(())
}

/// Bitset over the vertices of a Johnson graph.
#[derive(Clone, Debug)]
struct VertexSet(Vec<u64>);

impl VertexSet {
    fn full(len: usize) -> Self {
        let mut words = vec![u64::MAX; len.div_ceil(64)];
        if len % 64 != 0 {
            *words.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
        }
        VertexSet(words)
    }

    #[inline]
    fn remove(&mut self, v: u32) {
        self.0[v as usize / 64] &= !(1u64 << (v % 64));
    }

    /// Keeps only vertices strictly greater than `v`.
    fn retain_above(&mut self, v: u32) {
        let w = v as usize / 64;
        for word in &mut self.0[..w] {
            *word = 0;
        }
        let bit = v % 64;
        self.0[w] &= if bit == 63 { 0 } else { u64::MAX << (bit + 1) };
    }

    fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros();
                    w &= w - 1;
                    (i * 64) as u32 + b
                })
            })
        })
    }
}

/// Depth-first walk over stable sets extending `chosen` by vertices from
/// `candidates`, each larger than everything chosen so far.
fn walk<F: FnMut(&[u32])>(
    g: &JohnsonGraph,
    chosen: &mut Vec<u32>,
    candidates: &VertexSet,
    max_size: usize,
    visit: &mut F,
) -> u64 {
    if chosen.len() >= max_size {
        return 0;
    }
    let mut count = 0;
    for v in candidates.iter() {
        chosen.push(v);
        visit(chosen);
        count += 1;
        if chosen.len() < max_size {
            let mut next = candidates.clone();
            next.retain_above(v);
            for &u in g.neighbors(v) {
                next.remove(u);
            }
            count += walk(g, chosen, &next, max_size, visit);
        }
        chosen.pop();
    }
    count
}

fn graph_for_walk(n: usize, r: usize) -> Result<JohnsonGraph> {
    check_params(n, r)?;
    let count = binomial(n, r);
    if count > MAX_STABLE_WALK_VERTICES {
        return Err(Error::TooLarge {
            what: "stable-set walk over C(n,r) vertices",
            n: count,
            max: MAX_STABLE_WALK_VERTICES,
        });
    }
    JohnsonGraph::new(n, r)
}

/// Visits every stable set of `J(n, r)` once (vertex indices in colex order,
/// the empty set first) and returns how many were visited.
pub fn enumerate_stable_sets<F: FnMut(&[u32])>(n: usize, r: usize, visit: F) -> Result<u64> {
    enumerate_stable_sets_upto(n, r, usize::MAX, visit)
}

/// As [`enumerate_stable_sets`], restricted to sets of at most `max_size`.
pub fn enumerate_stable_sets_upto<F: FnMut(&[u32])>(
    n: usize,
    r: usize,
    max_size: usize,
    mut visit: F,
) -> Result<u64> {
    let g = graph_for_walk(n, r)?;
    visit(&[]);
    let all = VertexSet::full(g.order());
    Ok(1 + walk(&g, &mut Vec::new(), &all, max_size, &mut visit))
}

/// One isomorphism class of sparse paving matroids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub n: usize,
    pub r: usize,
    pub code: CanonicalForm,
    /// Number of circuit-hyperplanes.
    pub h: usize,
    pub ingleton: bool,
    pub witness: Option<ViolationWitness>,
    /// Position in generation order.
    pub index: usize,
}

impl CensusRecord {
    fn classify(code: CanonicalForm, index: usize) -> Self {
        let m = SparsePavingMatroid::new_unchecked(code.n, code.r, code.nonbases());
        let witness = ingleton_fast_sp(&m);
        CensusRecord {
            n: code.n,
            r: code.r,
            h: m.circuit_hyperplanes().len(),
            ingleton: witness.is_none(),
            witness,
            code,
            index,
        }
    }

    /// The canonical representative.
    pub fn matroid(&self) -> Result<SparsePavingMatroid> {
        SparsePavingMatroid::new(self.n, self.r, self.code.nonbases())
    }
}

fn check_census(n: usize, r: usize) -> Result<JohnsonGraph> {
    check_params(n, r)?;
    if n > MAX_CENSUS_N {
        return Err(Error::TooLarge {
            what: "isomorphism-class census",
            n: n as u64,
            max: MAX_CENSUS_N as u64,
        });
    }
    JohnsonGraph::new(n, r)
}

/// Orderly generation; records sorted by canonical code.
pub fn enumerate_iso_classes(n: usize, r: usize) -> Result<Vec<CensusRecord>> {
    let g = check_census(n, r)?;
    let mut level: Vec<Vec<u32>> = vec![Vec::new()];
    let mut in_order: Vec<Vec<u32>> = Vec::new();
    while !level.is_empty() {
        let mut next: Vec<Vec<u32>> = level
            .par_iter()
            .flat_map_iter(|parent| canonical_children(&g, parent))
            .collect();
        next.sort_unstable();
        in_order.append(&mut level);
        level = next;
    }
    let mut records: Vec<CensusRecord> = in_order
        .into_par_iter()
        .enumerate()
        .map(|(index, family)| {
            let ranks: Vec<u64> = family.iter().map(|&v| v as u64).collect();
            CensusRecord::classify(CanonicalForm::from_minimal_ranks(n, r, &ranks), index)
        })
        .collect();
    records.sort_by(|a, b| a.code.cmp(&b.code));
    Ok(records)
}

fn canonical_children(g: &JohnsonGraph, parent: &[u32]) -> Vec<Vec<u32>> {
    let start = parent.last().map_or(0, |&v| v + 1);
    let sets: Vec<ElementSet> = parent.iter().map(|&v| g.vertex(v)).collect();
    let mut children = Vec::new();
    let mut family = sets.clone();
    for v in start..g.order() as u32 {
        if parent.iter().any(|&u| g.neighbors(v).binary_search(&u).is_ok()) {
            continue;
        }
        family.push(g.vertex(v));
        if is_minimal_image(g.n(), g.r(), &family).expect("census bounds checked") {
            let mut child = parent.to_vec();
            child.push(v);
            children.push(child);
        }
        family.pop();
    }
    children
}

/// Canonical-form deduplication over labeled stable sets through vertex 0;
/// records sorted by canonical code.
pub fn enumerate_iso_classes_dedup(n: usize, r: usize) -> Result<Vec<CensusRecord>> {
    let g = check_census(n, r)?;
    let code_of = |family: &[u32]| {
        let sets: Vec<ElementSet> = family.iter().map(|&v| g.vertex(v)).collect();
        canonical_form_of_nonbases(n, r, &sets).expect("census bounds checked")
    };
    let root = 0u32;
    let mut after_root = VertexSet::full(g.order());
    after_root.retain_above(root);
    for &u in g.neighbors(root) {
        after_root.remove(u);
    }
    let seconds: Vec<u32> = after_root.iter().collect();
    // One job per second vertex; the singleton and the empty set separately.
    let mut codes: BTreeSet<CanonicalForm> = seconds
        .par_iter()
        .map(|&second| {
            let mut local = BTreeSet::new();
            let mut next = after_root.clone();
            next.retain_above(second);
            for &u in g.neighbors(second) {
                next.remove(u);
            }
            let mut chosen = vec![root, second];
            local.insert(code_of(&chosen));
            walk(&g, &mut chosen, &next, usize::MAX, &mut |f: &[u32]| {
                local.insert(code_of(f));
            });
            local
        })
        .reduce(BTreeSet::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });
    codes.insert(code_of(&[]));
    codes.insert(code_of(&[root]));
    Ok(codes
        .into_iter()
        .enumerate()
        .map(|(index, code)| CensusRecord::classify(code, index))
        .collect())
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub ingleton: usize,
    pub non_ingleton: usize,
    pub records: Vec<CensusRecord>,
}

pub fn classify_ingleton(n: usize, r: usize) -> Result<Classification> {
    let records = enumerate_iso_classes(n, r)?;
    let non_ingleton = records.iter().filter(|r| !r.ingleton).count();
    Ok(Classification {
        ingleton: records.len() - non_ingleton,
        non_ingleton,
        records,
    })
}

/// Whether relaxing every circuit-hyperplane outside some violating
/// five-set pattern leaves a copy of the Vámos matroid.
pub fn vamos_reachable(m: &SparsePavingMatroid) -> Result<bool> {
    if (m.n(), m.r()) != (8, 4) {
        return Err(Error::Params("Vámos reachability needs n = 8, r = 4".into()));
    }
    let target = vamos().canonical_form()?;
    for w in violation_witnesses(m) {
        let five = w.circuit_hyperplanes();
        let mut relaxed = m.clone();
        for &x in m.circuit_hyperplanes() {
            if !five.contains(&x) {
                relaxed = relaxed.relax(x)?;
            }
        }
        if relaxed.canonical_form()? == target {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome of the excluded-minor verification.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExcludedMinorReport {
    /// Candidates examined.
    pub checked: usize,
    /// Candidates confirmed outside the class with all single-element minors inside.
    pub minimal: usize,
    pub failures: Vec<String>,
}

impl ExcludedMinorReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.minimal == self.checked
    }
}

/// Membership in the class of Ingleton sparse paving matroids. Both the
/// structural and the exhaustive checker must agree.
fn in_class(m: &BasisMatroid) -> std::result::Result<bool, String> {
    if !m.is_sparse_paving() {
        return Ok(false);
    }
    let sp = m.to_sparse_paving().map_err(|e| e.to_string())?;
    let fast = ingleton_fast_sp(&sp).is_none();
    let brute = ingleton_brute(m).map_err(|e| e.to_string())?.is_none();
    if fast != brute {
        return Err(format!("checkers disagree on {:?}", sp.circuit_hyperplanes()));
    }
    Ok(fast)
}

fn single_element_minors(m: &BasisMatroid) -> Result<Vec<(String, BasisMatroid)>> {
    let mut out = Vec::with_capacity(2 * m.n());
    for e in 1..=m.n() {
        out.push((format!("\\{e}"), m.delete(e)?));
        out.push((format!("/{e}"), m.contract(e)?));
    }
    Ok(out)
}

fn check_excluded(name: &str, m: &BasisMatroid, report: &mut ExcludedMinorReport) -> Result<()> {
    report.checked += 1;
    let mut ok = true;
    match in_class(m) {
        Ok(false) => {}
        Ok(true) => {
            report.failures.push(format!("{name} is itself in the class"));
            ok = false;
        }
        Err(e) => {
            report.failures.push(format!("{name}: {e}"));
            ok = false;
        }
    }
    for (op, minor) in single_element_minors(m)? {
        match in_class(&minor) {
            Ok(true) => {}
            Ok(false) => {
                report.failures.push(format!("{name}{op} is outside the class"));
                ok = false;
            }
            Err(e) => {
                report.failures.push(format!("{name}{op}: {e}"));
                ok = false;
            }
        }
    }
    if ok {
        report.minimal += 1;
    }
    Ok(())
}

/// Checks that each given rank-4, eight-element class and the two named
/// non-sparse-paving matroids are excluded minors for the class of Ingleton
/// sparse paving matroids, and that the two named ones are dual.
pub fn verify_excluded_minors_with(classes: &[SparsePavingMatroid]) -> Result<ExcludedMinorReport> {
    let mut report = ExcludedMinorReport::default();
    for (i, m) in classes.iter().enumerate() {
        let b = m.to_basis()?;
        if !b.is_sparse_paving() {
            report.failures.push(format!("class {i} is not sparse paving"));
        }
        check_excluded(&format!("class {i}"), &b, &mut report)?;
    }
    let (a, b) = (u02_plus_u11(), u22_plus_u01());
    for (name, m) in [("u02_plus_u11", &a), ("u22_plus_u01", &b)] {
        if m.is_sparse_paving() {
            report.failures.push(format!("{name} is sparse paving"));
        }
        check_excluded(name, m, &mut report)?;
    }
    if !a.dual().is_isomorphic(&b)? {
        report
            .failures
            .push("u02_plus_u11 and u22_plus_u01 are not dual".into());
    }
    Ok(report)
}

/// Runs the `(8, 4)` census and verifies all 41 excluded minors.
pub fn verify_excluded_minors() -> Result<ExcludedMinorReport> {
    let classes = classify_ingleton(8, 4)?;
    let non_ingleton: Vec<SparsePavingMatroid> = classes
        .records
        .iter()
        .filter(|r| !r.ingleton)
        .map(CensusRecord::matroid)
        .collect::<Result<_>>()?;
    verify_excluded_minors_with(&non_ingleton)
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Serialize, Deserialize)]
struct Line {
    n: usize,
    r: usize,
    code: String,
    h: usize,
    ingleton: bool,
    witness: Option<WitnessRecord>,
    index: usize,
}

const FORMAT_NAME: &str = "ingleton-census";

/// Writes a header line and one JSON line per record, sorted by code.
pub fn census_write_to<W: Write>(records: &[CensusRecord], out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    let header = Header {
        format: FORMAT_NAME.into(),
        version: CENSUS_FORMAT_VERSION,
    };
    let json = |e: serde_json::Error| Error::Io(e.to_string());
    writeln!(out, "{}", serde_json::to_string(&header).map_err(json)?)?;
    let mut sorted: Vec<&CensusRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.code.cmp(&b.code));
    for rec in sorted {
        let line = Line {
            n: rec.n,
            r: rec.r,
            code: rec.code.to_hex(),
            h: rec.h,
            ingleton: rec.ingleton,
            witness: rec.witness.as_ref().map(WitnessRecord::from),
            index: rec.index,
        };
        writeln!(out, "{}", serde_json::to_string(&line).map_err(json)?)?;
    }
    out.flush()?;
    Ok(())
}

pub fn census_write(records: &[CensusRecord], path: &Path) -> Result<()> {
    census_write_to(records, std::fs::File::create(path)?)
}

pub fn census_read_from<R: std::io::Read>(input: R) -> Result<Vec<CensusRecord>> {
    let mut lines = BufReader::new(input).lines();
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    let first = lines
        .next()
        .ok_or_else(|| err(1, "missing header line".into()))??;
    let header: Header = serde_json::from_str(&first).map_err(|e| err(1, e.to_string()))?;
    if header.format != FORMAT_NAME || header.version != CENSUS_FORMAT_VERSION {
        return Err(err(
            1,
            format!("unsupported format {} v{}", header.format, header.version),
        ));
    }
    let mut out = Vec::new();
    for (i, text) in lines.enumerate() {
        let lineno = i + 2;
        let text = text?;
        if text.trim().is_empty() {
            continue;
        }
        let line: Line = serde_json::from_str(&text).map_err(|e| err(lineno, e.to_string()))?;
        let code = CanonicalForm::from_hex(line.n, line.r, &line.code)
            .map_err(|e| err(lineno, e.to_string()))?;
        if code.nonbasis_count() != line.h {
            return Err(err(lineno, format!("code has {} nonbases, h = {}", code.nonbasis_count(), line.h)));
        }
        let witness = line
            .witness
            .as_ref()
            .map(WitnessRecord::to_witness)
            .transpose()
            .map_err(|e| err(lineno, e.to_string()))?;
        if witness.is_some() == line.ingleton {
            return Err(err(lineno, "witness present iff not Ingleton".into()));
        }
        out.push(CensusRecord {
            n: line.n,
            r: line.r,
            code,
            h: line.h,
            ingleton: line.ingleton,
            witness,
            index: line.index,
        });
    }
    Ok(out)
}

pub fn census_read(path: &Path) -> Result<Vec<CensusRecord>> {
    census_read_from(std::fs::File::open(path)?)
}

/// Counts classes by number of circuit-hyperplanes.
pub fn histogram(records: &[CensusRecord]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for r in records {
        *h.entry(r.h).or_insert(0) += 1;
    }
    h
}
