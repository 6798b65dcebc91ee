use thiserror::Error;

use crate::relation::MAX_ALTERNATIVES;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("universe size {0} is outside the supported range 1..={max}", max = MAX_ALTERNATIVES)]
    UniverseSize(usize),

    #[error("alternative index {index} is outside a universe of {n} alternatives")]
    AlternativeOutOfRange { index: usize, n: usize },

    #[error("unknown alternative label {0:?}")]
    UnknownLabel(String),

    #[error("menu must be nonempty")]
    EmptyMenu,

    #[error("relation does not satisfy the required property: {0}")]
    NotAdmissible(&'static str),

    #[error("menu size {size} is outside 1..={n}")]
    MenuSize { size: usize, n: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dataset has no observations")]
    EmptyDataset,

    #[error("no admissible relations of this model exist on {0} alternatives")]
    NoAdmissibleRelations(usize),

    #[error("dataset universe ({dataset}) does not match relation universe ({relation})")]
    UniverseMismatch { dataset: usize, relation: usize },

    #[error("rational choice instance produced an empty choice; relation is not a weak order")]
    CorruptedInstance,

    #[error("unknown axiom {0:?}")]
    UnknownAxiom(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("percentile {0} must lie strictly between 0 and 100")]
    Percentile(f64),

    #[error("empty input")]
    EmptyInput,

    #[error("observation {0} has no list-order data")]
    MissingOrder(usize),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
