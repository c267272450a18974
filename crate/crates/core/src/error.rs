use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A dimension or configuration count exceeds the configured cap.
    #[error("size {requested} exceeds the limit of {limit}")]
    Size { requested: u128, limit: u128 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("index {index} out of range for {len} entries")]
    Index { index: usize, len: usize },

    #[error("validation failed: {0}")]
    Validation(String),

    /// The state carries no weight (trace or norm is not strictly positive).
    #[error("degenerate state: {0}")]
    Degenerate(String),

    /// A lattice rule that is not a bijection on configuration space cannot be lifted to a unitary.
    #[error("rule `{0}` is not injective on configuration space; the permutation lift is not unitary")]
    NonUnitaryRule(String),

    /// The operation's precondition does not apply to the input (not a failure of the input itself).
    #[error("inapplicable: {0}")]
    Inapplicable(String),

    /// The CHSH criterion and the vertex-mixture LP disagreed on a table.
    #[error("locality oracles disagree: chsh says {chsh}, lp says {lp}")]
    OracleDisagreement { chsh: bool, lp: bool },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Size { .. } => "size",
            Error::Shape(_) => "shape",
            Error::Index { .. } => "index",
            Error::Validation(_) => "validation",
            Error::Degenerate(_) => "degenerate",
            Error::NonUnitaryRule(_) => "non_unitary_rule",
            Error::Inapplicable(_) => "inapplicable",
            Error::OracleDisagreement { .. } => "oracle_disagreement",
        }
    }
}
