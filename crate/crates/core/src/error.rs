use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("unknown symbol `{name}` at column {column}")]
    UnknownSymbol { name: String, column: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid chart: {0}")]
    Chart(String),

    #[error("index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("variance mismatch: expected {expected}, got {found}")]
    VarianceMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("grade mismatch: {0}")]
    Grade(String),

    #[error("invalid algebroid: {0}")]
    Algebroid(String),

    #[error("invalid Nambu structure: {0}")]
    Nambu(String),

    #[error("invalid volume: {0}")]
    Volume(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("line {line}, column {column}: {message}")]
    ModelParse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("missing section `{0}` in model")]
    MissingSection(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
