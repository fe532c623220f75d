//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("jet order {order} exceeds the configured maximum {max}")]
    MaxOrderExceeded { order: u32, max: u32 },

    #[error("jet order shift by {shift} would take u{order} below order 0")]
    JetOrderUnderflow { order: u32, shift: i32 },

    #[error("jet variable u{order} carries a negative exponent {exp}")]
    NegativeJetExponent { order: u32, exp: i32 },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("expression is not a total derivative (nonzero variational derivative)")]
    NotExact,

    #[error("non-integrable term {term} survived integration by parts despite a vanishing variational derivative")]
    NonIntegrableMonomial { term: String },

    #[error("no antiderivative for the coefficient {expr} within the bounded monomial span")]
    CoefficientPrimitive { expr: String },

    #[error("expected a single-monomial separant, found {found}")]
    NotAMonomial { found: String },

    #[error("separant {found} has no exact {degree}-th root")]
    RootNotExact { found: String, degree: u32 },

    #[error("unsupported combination: family {family} supports base levels {supported}, got {base}")]
    UnsupportedCombination {
        family: &'static str,
        supported: &'static str,
        base: u32,
    },

    #[error("operator output is not proportional to a normalized flow: {reason}")]
    NotProportional { reason: String },

    #[error("identity is nonlinear in unknown {unknown}")]
    NonlinearInUnknowns { unknown: String },

    #[error("expression leaves the catalog class: {reason}")]
    InvalidExpression { reason: String },

    #[error("no flow of order {order} found: solution space has dimension {dim}, expected 1")]
    SymmetrySpaceDimension { order: u32, dim: usize },

    #[error("coefficient fit failed: {reason}")]
    FitFailed { reason: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
