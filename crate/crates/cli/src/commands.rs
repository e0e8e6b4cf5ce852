use std::fs;
use std::path::{Path, PathBuf};

use ingleton_core::census::{
    census_write, enumerate_iso_classes, enumerate_iso_classes_dedup, histogram,
    vamos_reachable, verify_excluded_minors_with, CensusRecord, ExcludedMinorReport,
};
use ingleton_core::constructions::{gs_best, gs_coloring, gs_matroid, named};
use ingleton_core::ingleton::{
    ingleton_brute, ingleton_fast_sp, ingleton_sampled, minor_witness, violation_witnesses,
    witness_to_quadruple, IngletonQuadruple, MAX_BRUTE_N,
};
use ingleton_core::randomized::{make_params, run_trials_keeping, SampleStats};
use ingleton_core::records::{MatroidRecord, QuadrupleRecord, WitnessRecord};
use ingleton_core::representation::{hall_condition, represent};
use ingleton_core::{binomial, AnyMatroid, Error, SparsePavingMatroid};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Format, Strategy};

/// Why a run did not succeed; each kind has its own exit code.
#[derive(Debug)]
pub enum Failure {
    /// A checked claim did not hold, or the run failed.
    Assertion(String),
    Usage(String),
    Scale(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Assertion(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Scale(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Assertion(m) | Failure::Usage(m) | Failure::Scale(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge { .. } => Failure::Scale(e.to_string()),
            Error::Io(_) => Failure::Assertion(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Assertion(format!("{}: {e}", path.display()))
}

/// Where a matroid comes from.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Named(String),
    Gs { n: usize, r: usize, gamma: usize },
    GsBest { n: usize, r: usize },
    File(PathBuf),
}

/// A fully resolved invocation; printed as the effective-config banner.
#[derive(Debug, Serialize)]
pub struct Plan {
    pub version: &'static str,
    pub census_format: u32,
    pub jobs: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    #[serde(flatten)]
    pub task: Task,
}

#[derive(Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Task {
    Check {
        input: Source,
        brute: bool,
        sampled: Option<u64>,
    },
    Census {
        n: usize,
        r: usize,
        classify: bool,
        verify_theorem_forty: bool,
        strategy: Strategy,
    },
    Construct {
        input: Source,
    },
    Sample {
        n: usize,
        r: usize,
        c: f64,
        gamma: f64,
        trials: usize,
        emit_matroids: Option<PathBuf>,
    },
    Represent {
        input: Source,
        bit_width: u32,
        attempts: u32,
    },
    Witness {
        input: Source,
    },
}

/// What a command produced.
pub struct Report {
    /// Main output, written to `--out` or standard output.
    pub body: String,
    /// Written to standard output when `body` goes to a file.
    pub summary: Option<String>,
    pub failures: Vec<String>,
}

impl Report {
    fn new(body: String) -> Self {
        Report {
            body,
            summary: None,
            failures: Vec::new(),
        }
    }
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| Failure::Assertion(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Assertion(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

struct Loaded {
    matroid: AnyMatroid,
    /// Colour class data for Graham–Sloane inputs.
    gs: Option<Value>,
}

fn load(source: &Source) -> Result<Loaded, Failure> {
    let gs_meta = |n: usize, r: usize, gamma: usize| -> Result<Value, Failure> {
        let coloring = gs_coloring(n, r)?;
        Ok(json!({
            "n": n,
            "r": r,
            "gamma": gamma,
            "class_sizes": coloring.class_sizes,
            "vertices": binomial(n, r),
        }))
    };
    Ok(match source {
        Source::Named(name) => Loaded {
            matroid: named(&name.parse()?)?,
            gs: None,
        },
        Source::Gs { n, r, gamma } => Loaded {
            matroid: AnyMatroid::SparsePaving(gs_matroid(*n, *r, *gamma)?),
            gs: Some(gs_meta(*n, *r, *gamma)?),
        },
        Source::GsBest { n, r } => {
            let (gamma, m) = gs_best(*n, *r)?;
            Loaded {
                matroid: AnyMatroid::SparsePaving(m),
                gs: Some(gs_meta(*n, *r, gamma)?),
            }
        }
        Source::File(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Loaded {
                matroid: MatroidRecord::parse(&text)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                gs: None,
            }
        }
    })
}

fn describe(m: &AnyMatroid) -> Value {
    let sp = m.as_sparse_paving();
    json!({
        "n": m.n(),
        "r": m.r(),
        "sparse_paving": sp.is_some(),
        "circuit_hyperplanes": sp.map(|s| s.circuit_hyperplanes().len()),
    })
}

fn witness_json(m: &SparsePavingMatroid, w: &ingleton_core::ViolationWitness) -> Result<Value, Failure> {
    Ok(json!({
        "witness": WitnessRecord::from(w),
        "quadruple": QuadrupleRecord::from(&witness_to_quadruple(m, w)),
        "minor_witness": MatroidRecord::from_basis(&minor_witness(m, w)?),
    }))
}

pub fn check(source: &Source, brute: bool, sampled: Option<u64>, seed: u64, format: Format) -> Result<Report, Failure> {
    let Loaded { matroid, .. } = load(source)?;
    let n = matroid.n();
    let mut failures = Vec::new();
    let mut out = json!({ "matroid": describe(&matroid) });
    let exhaustive_fits = n <= MAX_BRUTE_N;

    let quadruple_of = |q: Option<IngletonQuadruple>| q.map(|q| QuadrupleRecord::from(&q));
    let verdict = match matroid.as_sparse_paving() {
        Some(sp) => {
            let witness = ingleton_fast_sp(&sp);
            let ingleton = witness.is_none();
            out["method"] = json!("fast");
            out["exhaustive"] = json!(true);
            if let Some(w) = &witness {
                out["violation"] = witness_json(&sp, w)?;
            }
            if brute || sampled.is_some() {
                if brute && exhaustive_fits {
                    let b = ingleton_brute(&sp)?;
                    let agrees = b.is_none() == ingleton;
                    out["brute_agrees"] = json!(agrees);
                    out["brute_quadruple"] = json!(quadruple_of(b));
                    if !agrees {
                        failures.push("fast and exhaustive checkers disagree".into());
                    }
                } else if let Some(budget) = sampled {
                    let q = ingleton_sampled(&sp, budget, seed);
                    if q.is_some() && ingleton {
                        failures.push("sampling found a violation the fast checker missed".into());
                    }
                    out["sampled_quadruple"] = json!(quadruple_of(q));
                } else {
                    return Err(Failure::Scale(format!(
                        "exhaustive check needs n <= {MAX_BRUTE_N}; pass --sampled <budget>"
                    )));
                }
            }
            ingleton
        }
        None => {
            let basis = matroid.to_basis()?;
            let (q, exhaustive) = if exhaustive_fits {
                out["method"] = json!("brute");
                (ingleton_brute(&basis)?, true)
            } else if let Some(budget) = sampled {
                out["method"] = json!("sampled");
                (ingleton_sampled(&basis, budget, seed), false)
            } else {
                return Err(Failure::Scale(format!(
                    "exhaustive check needs n <= {MAX_BRUTE_N}; pass --sampled <budget>"
                )));
            };
            out["exhaustive"] = json!(exhaustive);
            let ingleton = q.is_none();
            if let Some(q) = q {
                out["violation"] = json!({ "quadruple": QuadrupleRecord::from(&q) });
            }
            ingleton
        }
    };
    out["ingleton"] = json!(verdict);
    let body = match format {
        Format::Json => to_json(&out),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                r: usize,
                sparse_paving: bool,
                ingleton: bool,
                method: String,
            }
            to_csv(&[Row {
                n,
                r: matroid.r(),
                sparse_paving: out["matroid"]["sparse_paving"].as_bool().unwrap_or(false),
                ingleton: verdict,
                method: out["method"].as_str().unwrap_or_default().to_string(),
            }])?
        }
    };
    Ok(Report {
        failures,
        ..Report::new(body)
    })
}

#[derive(Serialize)]
struct CensusRow {
    index: usize,
    code: String,
    h: usize,
    ingleton: bool,
}

pub fn census(
    n: usize,
    r: usize,
    classify: bool,
    verify: bool,
    strategy: Strategy,
    out_path: Option<&Path>,
    format: Format,
) -> Result<Report, Failure> {
    if verify && (n, r) != (8, 4) {
        return Err(Failure::Usage(
            "--verify-theorem-forty needs --n 8 --r 4".into(),
        ));
    }
    let records: Vec<CensusRecord> = match strategy {
        Strategy::Orderly => enumerate_iso_classes(n, r)?,
        Strategy::Dedup => enumerate_iso_classes_dedup(n, r)?,
    };
    if let Some(path) = out_path {
        census_write(&records, path).map_err(|e| io_failure(path, e))?;
    }
    let mut failures = Vec::new();
    let mut summary = json!({
        "n": n,
        "r": r,
        "strategy": strategy,
        "classes": records.len(),
        "histogram": histogram(&records)
            .into_iter()
            .map(|(h, classes)| json!({ "h": h, "classes": classes }))
            .collect::<Vec<_>>(),
    });
    let non_ingleton: Vec<&CensusRecord> = records.iter().filter(|rec| !rec.ingleton).collect();
    let headline = (n, r) == (8, 4);
    if classify || verify {
        summary["ingleton_classes"] = json!(records.len() - non_ingleton.len());
        summary["non_ingleton_classes"] = json!(non_ingleton.len());
        if headline {
            if non_ingleton.len() != 39 {
                failures.push(format!(
                    "expected 39 non-Ingleton classes at (8,4), found {}",
                    non_ingleton.len()
                ));
            }
            let mut reachable = 0;
            for rec in &non_ingleton {
                if vamos_reachable(&rec.matroid()?)? {
                    reachable += 1;
                }
            }
            summary["vamos_reachable"] = json!(reachable);
            if reachable != non_ingleton.len() {
                failures.push(format!(
                    "{reachable}/{} classes reach the Vámos matroid",
                    non_ingleton.len()
                ));
            }
        }
    }
    if verify {
        let classes: Vec<SparsePavingMatroid> = non_ingleton
            .iter()
            .map(|rec| rec.matroid())
            .collect::<Result<_, _>>()?;
        let report: ExcludedMinorReport = verify_excluded_minors_with(&classes)?;
        if !report.passed() || report.checked != 41 {
            failures.push(format!(
                "excluded minors: {}/{} minimal",
                report.minimal, report.checked
            ));
            failures.extend(report.failures.iter().cloned());
        }
        summary["excluded_minors"] = json!(report);
    }
    if let Some(path) = out_path {
        summary["out"] = json!(path);
    }
    let body = match format {
        Format::Json => to_json(&summary),
        Format::Csv => to_csv(
            &records
                .iter()
                .map(|rec| CensusRow {
                    index: rec.index,
                    code: rec.code.to_hex(),
                    h: rec.h,
                    ingleton: rec.ingleton,
                })
                .collect::<Vec<_>>(),
        )?,
    };
    Ok(Report {
        failures,
        ..Report::new(body)
    })
}

/// The matroid record goes to `--out`; metadata to standard output.
pub fn construct(source: &Source) -> Result<Report, Failure> {
    let Loaded { matroid, gs } = load(source)?;
    let record = MatroidRecord::from_any(&matroid);
    let mut failures = Vec::new();
    let mut meta = json!({
        "source": source,
        "matroid": describe(&matroid),
        "record": record,
    });
    if let Some(gs) = gs {
        let sp = matroid.as_sparse_paving().expect("colour classes are sparse paving");
        let ingleton = ingleton_fast_sp(&sp).is_none();
        if !ingleton {
            failures.push("colour class is not Ingleton".into());
        }
        let (n, r) = (sp.n(), sp.r());
        if matches!(source, Source::GsBest { .. })
            && (sp.circuit_hyperplanes().len() as u64) * (n as u64) < binomial(n, r)
        {
            failures.push("largest colour class is below C(n,r)/n".into());
        }
        meta["graham_sloane"] = gs;
        meta["ingleton"] = json!(ingleton);
    }
    Ok(Report {
        body: serde_json::to_string(&record).expect("serializable") + "\n",
        summary: Some(to_json(&meta)),
        failures,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn sample(
    n: usize,
    r: usize,
    c: f64,
    gamma: f64,
    trials: usize,
    seed: u64,
    emit: Option<&Path>,
    format: Format,
) -> Result<Report, Failure> {
    let params = make_params(n, r, c, gamma)?;
    let (summary, ws) = run_trials_keeping(&params, trials, seed, emit.is_some())?;
    if let Some(dir) = emit {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        for (stats, w) in summary.trials.iter().zip(&ws) {
            let m = SparsePavingMatroid::new(n, r, w.iter().copied())?;
            let path = dir.join(format!("trial-{:06}.json", stats.seed));
            let text = serde_json::to_string(&MatroidRecord::from_sparse_paving(&m))
                .expect("serializable")
                + "\n";
            fs::write(&path, text).map_err(|e| io_failure(&path, e))?;
        }
    }
    let mut failures = Vec::new();
    if !summary.all_good {
        failures.push("some pruned set is not good".into());
    }
    if !summary.pruning_bound_holds {
        failures.push("pruning removed more than e + b5 + 2 b6 vertices".into());
    }
    let body = match format {
        Format::Json => to_json(&json!({
            "summary": summary,
            "checks": {
                "all_good": summary.all_good,
                "pruning_bound_holds": summary.pruning_bound_holds,
                "edge_mean_within_bound": summary.edge_mean_within_bound(),
                "b5_mean_within_bound": summary.b5_mean_within_bound(),
            },
        })),
        Format::Csv => to_csv::<SampleStats>(&summary.trials)?,
    };
    Ok(Report {
        failures,
        ..Report::new(body)
    })
}

pub fn represent_cmd(source: &Source, seed: u64, bit_width: u32, attempts: u32) -> Result<Report, Failure> {
    let Loaded { matroid, .. } = load(source)?;
    let basis = matroid.to_basis()?;
    let nonbases = basis.nonbases();
    let hall = hall_condition(&nonbases, basis.r());
    let mut out = json!({
        "matroid": describe(&matroid),
        "nonbases": nonbases.len(),
        "hall_condition": hall,
        "seed": seed,
        "bit_width": bit_width,
    });
    let mut failures = Vec::new();
    if !hall {
        failures.push("nonbases do not satisfy the Hall condition".into());
        out["represented"] = json!(false);
    } else {
        match represent(&basis, seed, bit_width, attempts)? {
            Some(rep) => {
                out["represented"] = json!(true);
                out["certificate"] = json!({
                    "seed": rep.seed,
                    "attempts": rep.attempts,
                    "matrix": rep
                        .matrix
                        .entries
                        .iter()
                        .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                });
            }
            None => {
                out["represented"] = json!(false);
                out["retry"] = json!({
                    "attempted_seeds": (0..attempts).map(|i| seed.wrapping_add(u64::from(i))).collect::<Vec<_>>(),
                    "next_seed": seed.wrapping_add(u64::from(attempts)),
                });
                failures.push(format!("no verified representation in {attempts} attempts"));
            }
        }
    }
    Ok(Report {
        failures,
        ..Report::new(to_json(&out))
    })
}

pub fn witness(source: &Source) -> Result<Report, Failure> {
    let Loaded { matroid, .. } = load(source)?;
    let sp = matroid
        .as_sparse_paving()
        .ok_or_else(|| Failure::Usage("witnesses are defined for sparse paving matroids".into()))?;
    let witnesses = violation_witnesses(&sp)
        .iter()
        .map(|w| witness_json(&sp, w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Report::new(to_json(&json!({
        "matroid": describe(&matroid),
        "ingleton": witnesses.is_empty(),
        "witnesses": witnesses,
    }))))
}
