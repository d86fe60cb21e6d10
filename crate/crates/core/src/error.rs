use thiserror::Error;

use crate::fock::GridIndex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("q must be nonzero")]
    ZeroQ,

    #[error("parameter `{0}` is required in this space")]
    MissingParameter(&'static str),

    #[error("exponent {exponent} at x{index} is not allowed in a {space} space")]
    InvalidMonomial {
        index: GridIndex,
        exponent: i64,
        space: &'static str,
    },

    #[error("degree query on the zero vector")]
    ZeroVector,

    #[error("inverse e21{found} does not match the distinguished index {expected}")]
    InverseMismatch {
        found: GridIndex,
        expected: GridIndex,
    },

    #[error("inverse e21{0} used outside a localized or twisted space")]
    InverseOutsideLocalized(GridIndex),

    #[error("theta series did not terminate within {bound} terms")]
    NilpotencyBound { bound: usize },

    #[error("not a weight vector: {generator} does not act by a scalar")]
    NotWeightVector { generator: String },

    #[error("evaluation hits a pole")]
    Pole,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("criterion violated: {0}")]
    Criterion(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("construction failed: {0}")]
    Construction(String),
}
