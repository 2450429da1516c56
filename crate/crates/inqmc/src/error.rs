use crate::formula::ParseError;

/// Errors surfaced by the checker, attributed to the pipeline stage that
/// produced them.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse: {0}")]
    Parse(#[from] ParseError),

    #[error("structure: {0}")]
    Structure(String),

    #[error("formula uses propositions not declared by the structure: {0:?}")]
    UnknownAtoms(Vec<String>),

    #[error("formula is not left-positive: offending antecedent `{0}`")]
    NotLeftPositive(String),

    #[error("state budget exceeded during {stage}: needed more than {budget} states")]
    BudgetExceeded { stage: &'static str, budget: usize },

    #[error("oracle: {0}")]
    Oracle(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
