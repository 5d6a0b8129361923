//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("element has {got} coordinates, group has {want} cyclic factors")]
    ShapeMismatch { got: usize, want: usize },

    #[error("generators span a proper subgroup of order {subgroup} inside order {order}")]
    NotIrreducible { subgroup: u64, order: u64 },

    #[error("type condition violated: group order {order} < pi^{rank}")]
    TypeCondition { order: u64, rank: usize },

    #[error("threshold {level} exceeds the initial distance {initial}")]
    ThresholdUndefined { level: f64, initial: f64 },

    #[error("threshold scan for level {level} exceeded the step cap {cap}")]
    CapExceeded { level: f64, cap: u64 },

    #[error("short-mode premise not satisfied: |.|_inf = {linf} > 1/(2*pi)")]
    BoundNotApplicable { linf: f64 },

    #[error("operation requires a cyclic group, got moduli {0:?}")]
    NotCyclic(Vec<u64>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("family instance N={n}: {source}")]
    FamilyInstance {
        n: u64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
