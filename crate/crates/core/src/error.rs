use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate identifier `{0}`")]
    DuplicateName(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("coherence fails at arity elements: {}", .0.join(", "))]
    Incoherent(Vec<String>),

    #[error("base mismatch: {0}")]
    BaseMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("polynomial has reductions; plain tree enumeration refused")]
    HasReductions,

    #[error("polynomial is not locally decidable")]
    NotLocallyDecidable,

    #[error("carrier is not finite within the budget (last complete level {0})")]
    NotFinite(usize),

    #[error("internal contradiction: {0}")]
    InternalContradiction(String),

    #[error("not an algebra: {0}")]
    NotAnAlgebra(String),

    #[error("combinatorial cap exceeded: {what} needs {needed} > {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("ill-defined map: {0}")]
    IllDefined(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }
}
