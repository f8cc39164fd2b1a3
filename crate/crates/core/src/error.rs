use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular matrix")]
    Singular,

    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("variable sets differ")]
    VarMismatch,

    #[error("negative exponent on polynomial variable `{0}`")]
    NegativeExponent(String),

    #[error("invalid manifold spec: {0}")]
    InvalidSpec(String),

    #[error("invalid GW table: {0}")]
    InvalidTable(String),

    #[error("unknown class name `{0}`")]
    UnknownClass(String),

    #[error("basis index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("cone generator {0} has nonpositive symplectic area")]
    NonpositiveGenerator(usize),

    #[error("curve class {0} is not in the enumerated cone")]
    NotInCone(String),

    #[error("regime mismatch: {0}")]
    Regime(String),

    #[error("evaluated exponential coordinate z{0} is zero")]
    ZeroUnit(usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("rule table is not total: {0}")]
    RuleGap(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error at line {line}, column {column}: {msg}")]
    Json {
        line: usize,
        column: usize,
        msg: String,
    },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
