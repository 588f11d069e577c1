use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Validation failures (bad input, failed hypotheses) are distinguished from
/// [`Error::Inconsistency`], which signals that two independent computations
/// disagreed and is never expected on valid input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("non-integer coefficient at position {pos}")]
    NonIntegerCoefficient { pos: usize },

    #[error("inexact polynomial division at position {pos}")]
    InexactDivision { pos: usize },

    #[error("polynomial must be monic: {0}")]
    NonMonic(String),

    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("polynomial does not factor completely into cyclotomic polynomials")]
    IncompleteFactorization,

    #[error("degree mismatch: deg f = {f}, deg g = {g}")]
    DegreeMismatch { f: usize, g: usize },

    #[error("f and g are not coprime (common factor {0})")]
    NotCoprime(String),

    #[error("wrong constant terms f(0) = {f0}, g(0) = {g0}; expected f(0) = -1, g(0) = 1{hint}")]
    ConstantTerms { f0: String, g0: String, hint: String },

    #[error("constant term {0} is not a unit")]
    ConstantNotUnit(String),

    #[error("f(0)/g(0) = 1 with odd degree {0}: no symplectic structure exists")]
    InconsistentSymplectic(usize),

    #[error("pair is of symplectic type; quadratic-form machinery applies only to orthogonal pairs")]
    Symplectic,

    #[error("invariant form solution space has dimension {0}, expected 1")]
    SolutionSpace(usize),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("quadratic form is degenerate")]
    DegenerateForm,

    #[error("parameter {0} occurs in both alpha and beta")]
    SharedParameter(String),

    #[error("vector is not isotropic")]
    NotIsotropic,

    #[error("cannot reflect in an isotropic vector")]
    IsotropicReflection,

    #[error("reflection matrix is not integral")]
    NonIntegralReflection,

    #[error("element does not lie in the unipotent radical of the line stabilizer")]
    NotUnipotent,

    #[error("group element does not preserve the line through the isotropic vector")]
    LineNotFixed,

    #[error("group element does not preserve the invariant form")]
    NotAnIsometry,

    #[error("padding hypothesis failed: {0}")]
    PaddingHypothesis(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
