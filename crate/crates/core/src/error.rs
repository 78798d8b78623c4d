use thiserror::Error;

use crate::exactla::RVec;
use crate::lp::Farkas;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("malformed rational literal {0:?}")]
    Rational(String),

    #[error("cone is not pointed: both {witness} and its negation lie in the cone")]
    NotPointed { witness: RVec },

    #[error("seminorm rows do not separate points: stacked rank {rank} < dimension {dim}")]
    NotSpanning { rank: usize, dim: usize },

    #[error("seminorm {name:?} has no nonzero rows")]
    EmptySeminorm { name: String },

    #[error("seminorm index {index} out of range ({count} seminorms)")]
    BadIndex { index: usize, count: usize },

    #[error("{0} is not an order unit")]
    NotOrderUnit(RVec),

    #[error("functional {0} is not positive on the cone")]
    NotPositive(RVec),

    #[error("functional {0} does not vanish on the seminorm kernel (infinite norm)")]
    InfiniteNorm(RVec),

    #[error("instance too large for vertex enumeration: dim {dim}, rows {rows} (caps: dim {max_dim}, rows {max_rows})")]
    TooLarge {
        dim: usize,
        rows: usize,
        max_dim: usize,
        max_rows: usize,
    },

    #[error("subspace basis is rank deficient ({rank} independent rows out of {rows})")]
    DependentBasis { rank: usize, rows: usize },

    #[error("{context}: linear program is infeasible")]
    Infeasible {
        context: &'static str,
        farkas: Box<Farkas>,
    },

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
}
