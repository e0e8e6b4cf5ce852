use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ingleton_core::Named;
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "ingleton", about = "Ingleton checks, censuses and constructions for sparse paving matroids")]
pub struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "INGLETON_JOBS")]
    pub jobs: Option<usize>,

    /// TOML file with default settings.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output file; for `census` the census file, for `construct` the matroid record.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Orderly,
    Dedup,
}

/// Exactly one way of naming a matroid.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// `vamos`, `uniform:R,N`, `u02_plus_u11` or `u22_plus_u01`.
    #[arg(long)]
    pub named: Option<Named>,

    /// Graham–Sloane colour class.
    #[arg(long, value_name = "N,R,GAMMA", value_parser = parse_triple)]
    pub gs: Option<(usize, usize, usize)>,

    /// Largest Graham–Sloane colour class.
    #[arg(long, value_name = "N,R", value_parser = parse_pair)]
    pub gs_best: Option<(usize, usize)>,

    /// JSON matroid record.
    #[arg(long, value_name = "FILE")]
    pub matroid: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a matroid satisfies the Ingleton inequality.
    Check {
        #[command(flatten)]
        input: Input,
        /// Cross-check with the exhaustive checker (n <= 8).
        #[arg(long)]
        brute: bool,
        /// Check this many random quadruples instead of all of them.
        #[arg(long, value_name = "BUDGET")]
        sampled: Option<u64>,
    },
    /// Enumerate isomorphism classes of sparse paving matroids.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Report Ingleton and non-Ingleton class counts.
        #[arg(long)]
        classify: bool,
        /// Verify the 41 excluded minors (needs n = 8, r = 4).
        #[arg(long)]
        verify_theorem_forty: bool,
        #[arg(long, value_enum, default_value_t)]
        strategy: Strategy,
    },
    /// Build a named or Graham–Sloane matroid.
    Construct {
        #[command(flatten)]
        input: Input,
    },
    /// Sample and prune random stable sets of J(n, r).
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        trials: Option<usize>,
        /// Write each pruned matroid to this directory.
        #[arg(long, value_name = "DIR")]
        emit_matroids: Option<PathBuf>,
    },
    /// Find an integer representation of a matroid meeting the Hall condition.
    Represent {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        bit_width: Option<u32>,
        #[arg(long)]
        attempts: Option<u32>,
    },
    /// List every violation witness of a sparse paving matroid.
    Witness {
        #[command(flatten)]
        input: Input,
    },
}

fn parse_numbers(s: &str, count: usize) -> Result<Vec<usize>, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("{s:?}: {e}"))?;
    if parts.len() != count {
        return Err(format!("expected {count} comma-separated numbers, got {s:?}"));
    }
    Ok(parts)
}

fn parse_triple(s: &str) -> Result<(usize, usize, usize), String> {
    let p = parse_numbers(s, 3)?;
    Ok((p[0], p[1], p[2]))
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let p = parse_numbers(s, 2)?;
    Ok((p[0], p[1]))
}
