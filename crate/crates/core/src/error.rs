//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("not invertible at this truncation: {0}")]
    NotInvertible(String),

    #[error("fractional power requires monic leading term (leading coefficient {0})")]
    FractionalPowerNonMonic(String),

    #[error("{op}: exponent {exponent} outside admissible domain")]
    DomainExponent { op: &'static str, exponent: String },

    #[error("series log requires constant p^0 coefficient 1, found {0}")]
    NonUnitConstant(String),

    #[error("coefficient at {0} is outside the exact window")]
    OutOfWindow(String),

    #[error("exponent window insufficient: missing c({m}, {n})")]
    WindowInsufficient { m: i64, n: String },

    #[error("extracted exponent at (m, n) = ({m}, {n}) is not an integer: {value}")]
    NonIntegerExponent { m: i64, n: String, value: String },

    #[error("catalog parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("catalog invariant violated for class {class}: {msg}")]
    CatalogInvariant { class: String, msg: String },

    #[error("unknown class {0}")]
    UnknownClass(String),

    #[error("cannot expand non-zero-weight expression at a cusp")]
    NonzeroWeight,

    #[error("E2 cannot be expanded under a nontrivial cusp transformation")]
    E2AtCusp,

    #[error("expression parse error: {0}")]
    ExprParse(String),

    #[error("not of non-Fricke inversion form: {0}")]
    NotInversionForm(String),

    #[error("unclassifiable at this truncation: {0}")]
    Unclassifiable(String),

    #[error("not a GKM datum: negative simple-root multiplicity {mult} at degree {degree}")]
    NotGkmDatum { degree: String, mult: String },

    #[error("empty divisor: Q(lambda) = {0} is non-negative")]
    EmptyDivisor(String),

    #[error("unsupported cusp vector {0}")]
    UnsupportedCusp(String),

    #[error("non-isotropic vector {0} has no cusp")]
    NonIsotropic(String),

    #[error("{0}")]
    Other(String),
}
