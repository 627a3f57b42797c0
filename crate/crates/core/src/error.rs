use alloc::string::String;

use crate::field::FieldSpec;
use crate::norm::Vector;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors must have at least one coordinate")]
    EmptyVector,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("cannot parse {token:?}: {reason}")]
    Parse { token: String, reason: &'static str },
    #[error("weight {0} is not strictly positive")]
    NonPositiveWeight(String),
    #[error("segment has 2^{k} points, more than the cap of {cap}")]
    SegmentTooLarge { k: usize, cap: u64 },
    #[error("search over {size} points exceeds the cap of {cap}")]
    SearchTooLarge { size: u64, cap: u64 },
    #[error("distances {d1} + {d2} do not add up to {total}")]
    DistanceSum {
        d1: String,
        d2: String,
        total: String,
    },
    #[error("operation requires dimension {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("operation requires {expected}, got {found}")]
    UnsupportedField {
        expected: &'static str,
        found: FieldSpec,
    },
    #[error("multiplier {0} does not have valuation 1")]
    NotUnit(String),
    #[error("not a bijection: {0}")]
    NotBijection(&'static str),
    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("scalar isometry table has no entry for {0}")]
    OutsideTable(String),
    #[error("probe map has {domain} domain points but {images} images")]
    ProbeLength { domain: usize, images: usize },
    #[error("duplicate probe {0}")]
    DuplicateProbe(Vector),
    #[error("probe map does not contain the origin")]
    MissingOrigin,
    #[error("no probes determine axis {axis}")]
    UnderDetermined { axis: usize },
    #[error("not an axial isometry at probe {probe}: {reason}")]
    DecompositionFailure { probe: Vector, reason: &'static str },
    #[error("hypothesis violated: {0}")]
    Hypothesis(&'static str),
}
