use thiserror::Error;

/// Errors raised by the computational modules.
///
/// Variants that carry a witness (a generator pair, an identity name, an
/// order) echo it verbatim so that front ends can report the failure without
/// re-deriving it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("results differ between precision {low} and {high}: {detail}")]
    PrecisionUnstable {
        low: usize,
        high: usize,
        detail: String,
    },

    #[error("operator is not nilpotent: {0}")]
    NotNilpotent(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("map does not commute with the differentials: {0}")]
    NotChainMap(String),

    #[error("map does not square to the identity: {0}")]
    NotInvolution(String),

    #[error("relation {identity} violated at order {order}: {witness}")]
    RelationViolated {
        identity: String,
        order: usize,
        witness: String,
    },

    #[error("degree contract of {operator} violated by entry {from} -> {to}")]
    DegreeViolated {
        operator: String,
        from: String,
        to: String,
    },

    #[error("action filtration violated by {operator} entry {from} -> {to}")]
    FiltrationViolated {
        operator: String,
        from: String,
        to: String,
    },

    #[error("subcomplex is not acyclic in degree {degree} (cohomology dimension {dimension})")]
    AcyclicityFailed { degree: i64, dimension: usize },

    #[error("chain map identity fails at generator {0}")]
    ChainMapViolated(String),

    #[error("no normalizing exponent m <= {0} linearizes the localization map")]
    NoLinearizingM(usize),

    #[error("differential does not square to zero: {0}")]
    DifferentialNotSquareZero(String),

    #[error("inconsistent double cover data: {0}")]
    InconsistentCover(String),

    #[error("unknown example {0:?}")]
    UnknownExample(String),

    #[error("product requires one-dimensional moduli data: {0}")]
    UnsupportedProduct(String),

    #[error("divisor contains a fibre of the hyperelliptic involution: {0}")]
    HyperellipticFibre(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("polynomial does not split over the field: {0}")]
    DoesNotSplit(String),

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
