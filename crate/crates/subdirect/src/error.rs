use thiserror::Error;

/// Errors reported by group construction, searches, and verifications.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("multiplication table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociativeTable { a: usize, b: usize, c: usize },

    #[error("element set is not closed into a group: {reason}")]
    NotAGroup { reason: String },

    #[error("group order {order} exceeds the configured cap of {cap} elements")]
    OrderCapExceeded { order: usize, cap: usize },

    #[error("search budget exceeded: {needed} evaluations needed, budget is {budget}{hint}")]
    BudgetExceeded {
        needed: u128,
        budget: u128,
        hint: String,
    },

    #[error("closure exceeded the cap of {cap} tuples")]
    ClosureCapExceeded { cap: usize },

    #[error("operands live in different ambient direct powers")]
    AmbientMismatch,

    #[error("coordinate index set must be non-empty")]
    EmptyIndexSet,

    #[error("subgroup is not subdirect: coordinate {coordinate} projects onto {projection_size} of {factor_order} elements")]
    NotSubdirect {
        coordinate: usize,
        projection_size: usize,
        factor_order: usize,
    },

    #[error("base group {name} is {defect}; a non-abelian simple base is required")]
    BaseNotSimple { name: String, defect: String },

    #[error("subgroup is subdirect but not a product of full strips: {witness}")]
    NotAStripProduct { witness: String },

    #[error("point count {points} exceeds the cap of {cap}")]
    PointCapExceeded { points: u128, cap: u128 },

    #[error("the action has simple diagonal type; no product-action embedding exists")]
    SimpleTypeNoEmbedding,

    #[error("hypothesis not certified: {0}")]
    HypothesisNotCertified(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code for the CLI contract: 2 = invalid input, 3 = cap or budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::OrderCapExceeded { .. }
            | Error::BudgetExceeded { .. }
            | Error::ClosureCapExceeded { .. }
            | Error::PointCapExceeded { .. } => 3,
            _ => 2,
        }
    }
}
