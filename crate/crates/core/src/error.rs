use thiserror::Error;

use crate::graphgroup::VertexId;

/// Every failure the library can report. Variant names double as the
/// machine-readable codes printed by the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge ({0},{0}) is a loop")]
    LoopEdge(VertexId),
    #[error("vertex {0} is not declared")]
    UnknownVertex(VertexId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),

    #[error("multiplication is not associative at ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("identity element {0} is not two-sided")]
    BadIdentity(usize),
    #[error("inverse of {0} is wrong")]
    BadInverse(usize),
    #[error("multiplication table is not a Latin square ({0})")]
    NotLatinSquare(String),
    #[error("group order {0} exceeds the limit of {1}")]
    TooLarge(usize, usize),

    #[error("element {elem} is out of range for the group at vertex {vertex}")]
    ElementOutOfRange { vertex: VertexId, elem: usize },
    #[error("element does not belong to this context: {0}")]
    ContextMismatch(String),
    #[error("search budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("set is empty")]
    EmptySet,
    #[error("word has no letter at vertex {0}")]
    NoV0Letter(VertexId),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("element is not central")]
    NotCentral,
    #[error("block structures do not match")]
    StructureMismatch,
    #[error("invalid automorphism: {0}")]
    BadAutomorphism(String),
    #[error("action is not a homomorphism at ({0},{1})")]
    NotHomomorphism(usize, usize),
    #[error("edge ({v},{w}) violates commutation at elements ({g},{h})")]
    EdgeViolation { v: VertexId, w: VertexId, g: usize, h: usize },
    #[error("setup is invalid: {0}")]
    SetupInvalid(String),

    #[error("multiplier norm {0} exceeds 1/2")]
    NormTooLarge(f64),
    #[error("multiplier value at the identity is not in [0,1]")]
    BadIdentityValue,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("Gram matrix is not positive (lambda_min = {0:e})")]
    NotPositive(f64),
    #[error("translation leaves the support")]
    SupportEscape,
    #[error("multiplier is not unital")]
    NotUnital,
    #[error("value at element {0} is not positive")]
    NotPositiveValue(usize),

    #[error("{0}")]
    Config(String),
}

impl Error {
    /// Stable code used in CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::LoopEdge(_) => "LoopEdge",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::DuplicateVertex(_) => "DuplicateVertex",
            Error::NotAssociative(..) => "NotAssociative",
            Error::BadIdentity(_) => "BadIdentity",
            Error::BadInverse(_) => "BadInverse",
            Error::NotLatinSquare(_) => "NotLatinSquare",
            Error::TooLarge(..) => "TooLarge",
            Error::ElementOutOfRange { .. } => "ElementOutOfRange",
            Error::ContextMismatch(_) => "ContextMismatch",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::EmptySet => "EmptySet",
            Error::NoV0Letter(_) => "NoV0Letter",
            Error::NotHermitian(_) => "NotHermitian",
            Error::NotCentral => "NotCentral",
            Error::StructureMismatch => "StructureMismatch",
            Error::BadAutomorphism(_) => "BadAutomorphism",
            Error::NotHomomorphism(..) => "NotHomomorphism",
            Error::EdgeViolation { .. } => "EdgeViolation",
            Error::SetupInvalid(_) => "SetupInvalid",
            Error::NormTooLarge(_) => "NormTooLarge",
            Error::BadIdentityValue => "BadIdentityValue",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::NotPositive(_) => "NotPositive",
            Error::SupportEscape => "SupportEscape",
            Error::NotUnital => "NotUnital",
            Error::NotPositiveValue(_) => "NotPositiveValue",
            Error::Config(_) => "ConfigError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
