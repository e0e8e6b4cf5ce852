use thiserror::Error;

use crate::johnson::ElementSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("expected a set of size {expected}, got {set} of size {got}")]
    Cardinality {
        set: ElementSet,
        expected: usize,
        got: usize,
    },
    #[error("index {index} out of range for C({n},{r}) = {count}")]
    IndexOutOfRange { index: u64, n: usize, r: usize, count: u64 },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("set {set} is not contained in the ground set [{n}]")]
    OutsideGround { set: ElementSet, n: usize },
    #[error("{x} and {y} meet in {r_minus_one} elements; family is not stable")]
    Unstable {
        x: ElementSet,
        y: ElementSet,
        r_minus_one: usize,
    },
    #[error("{0} is not a circuit-hyperplane")]
    NotCircuitHyperplane(ElementSet),
    #[error("every {r}-subset of [{n}] is a nonbasis; the rank would drop")]
    RankDrop { n: usize, r: usize },
    #[error("family of bases is empty")]
    EmptyFamily,
    #[error("family mixes cardinalities {0} and {1}")]
    MixedCardinality(usize, usize),
    #[error("{what}: n = {n} exceeds the supported bound {max}")]
    TooLarge { what: &'static str, n: u64, max: u64 },
    #[error("unknown matroid name {0:?}")]
    UnknownName(String),
    #[error("nonbases violate the Hall condition")]
    HallCondition,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
