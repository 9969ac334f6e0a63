use thiserror::Error;

use crate::radio::Label;
use crate::reductions::Stage;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("label {0} is not a node of the network")]
    UnknownLabel(Label),

    #[error("no action supplied for node {0}")]
    MissingAction(Label),

    #[error("node {label} transmitted in round {round} without having received a message")]
    SpontaneityViolation { label: Label, round: u64 },

    #[error("node {0} transmitted in round 0; only the source may")]
    NonSourceRoundZero(Label),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid C2 parameters m={m}, k={k}")]
    InvalidParams { m: usize, k: usize },

    #[error("component {component}: topology {tau} is outside [1, 2^k)")]
    InvalidTau { component: usize, tau: u64 },

    #[error("topology vector has {found} entries, expected {expected}")]
    VectorLength { expected: usize, found: usize },

    #[error("enumerating {count} networks exceeds the cap of {cap}")]
    EnumerationTooLarge { count: u128, cap: u64 },

    #[error("protocol {name} is at stage {found}, expected {expected}")]
    StageMismatch {
        name: String,
        expected: Stage,
        found: Stage,
    },

    #[error("source sent {0} in an echo round; protocol is not in class Π3")]
    NotInClass(String),

    #[error("family universe {found} does not match component size k={expected}")]
    IndexOutOfUniverse { expected: usize, found: usize },

    #[error("set {set:#x} is not a subset of a universe of size {universe}")]
    SetOutsideUniverse { set: u64, universe: usize },

    #[error("universe of size {n} exceeds the brute-force cap of {cap}")]
    UniverseTooLarge { n: usize, cap: usize },

    #[error("selectivity needs 1 <= k <= n, got n={n}, k={k}")]
    SelectivityRange { n: usize, k: usize },

    #[error("every component is marked; no free component remains")]
    FreeComponentMissing,

    #[error("witness {network} failed the direct cross-check")]
    UnverifiedWitness { network: String },

    #[error("network is not a C2 instance")]
    NotC2,

    #[error("unknown protocol {0:?}")]
    UnknownProtocol(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
