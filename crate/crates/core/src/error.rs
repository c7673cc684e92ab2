use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("invalid expression: {0}")]
    InvalidExpression(String),
    #[error("equation is not linear in the unknowns: {0}")]
    NonLinearInUnknowns(String),
    #[error("every sample point hit a vanishing denominator")]
    AllSamplesDegenerate,
    #[error("coframe is degenerate")]
    CoframeDegenerate,
    #[error("not a linear Pfaffian system: {0}")]
    NotLinearPfaffian(String),
    #[error("the locus is empty: {0}")]
    EmptyLocus(String),
    #[error("missing jet structure: {0}")]
    MissingJetStructure(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("constraint needs a user-chosen branch: {0}")]
    NeedsUserBranch(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
