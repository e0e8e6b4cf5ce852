//! Sparse paving matroids as stable sets of the Johnson graph, with
//! Ingleton checks, isomorphism-class censuses, generic representations and
//! Monte Carlo tools for the random construction.

pub mod canonical;
pub mod census;
pub mod constructions;
pub mod error;
pub mod ingleton;
pub mod johnson;
pub mod matroid;
pub mod randomized;
pub mod records;
pub mod representation;

pub use canonical::CanonicalForm;
pub use constructions::{named, vamos, AnyMatroid, Named};
pub use error::{Error, Result};
pub use ingleton::{
    ingleton_brute, ingleton_fast_sp, IngletonQuadruple, OmegaPattern, ViolationWitness,
};
pub use johnson::{binomial, colex_rank, colex_unrank, ElementSet, JohnsonGraph};
pub use matroid::{BasisMatroid, RankOracle, SparsePavingMatroid};
