use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("T({p},{q}): p and q are not coprime")]
    NotCoprime { p: u64, q: u64 },

    #[error("T({p},{q}): only torus knots T(2,n) have a bundled Seifert matrix")]
    UnsupportedTorusKnot { p: u64, q: u64 },

    #[error("not a knot Seifert matrix: |det(M - M^T)| = {0}, expected 1")]
    NotKnotSeifert(String),

    #[error("signature jump point: the cyclotomic polynomial Phi_{n} divides the Alexander polynomial")]
    SingularOmega { n: u64 },

    #[error(
        "singular omega at infection site {label}: Phi_{n} divides the Alexander polynomial of the companion"
    )]
    SingularOmegaAtSite { label: u32, n: u64 },

    #[error("polynomial is not a symmetric even-degree reciprocal polynomial")]
    NonReciprocal,

    #[error("polynomial vanishes at t = 1 or t = -1")]
    RootAtPlusMinusOne,

    #[error("det(A + A^T) = 0: the double branched cover is not a rational homology sphere")]
    ZeroDeterminant,

    #[error("enumeration of {requested} elements exceeds the cap of {cap}")]
    CapExceeded { requested: String, cap: u64 },

    #[error("characters with different moduli ({0} and {1})")]
    MixedModuli(u64, u64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("unsupported subgroup order {0}: only p and p^2 can be enumerated")]
    UnsupportedSubgroupOrder(u64),

    #[error("even m = {0} rejected: the generalized Hopf link formula needs m odd")]
    EvenM(u64),

    #[error("dataset validation failed: {0}")]
    Validation(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn cap(requested: impl ToString, cap: u64) -> Self {
        Error::CapExceeded {
            requested: requested.to_string(),
            cap,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
