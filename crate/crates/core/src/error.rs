use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the engine. Each variant maps onto one of the CLI exit
/// codes through [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("ingestion error at row {row}, column `{column}`: {reason}")]
    Ingestion {
        row: usize,
        column: String,
        reason: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("model specification error: {0}")]
    Model(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient data: {rows} rows for {params} parameters (need at least {needed})")]
    InsufficientData {
        rows: usize,
        params: usize,
        needed: usize,
    },

    #[error("singular fit{}: design matrix is rank deficient (subset too small or collinear columns)", context_suffix(.subset, .model))]
    SingularFit {
        subset: Option<usize>,
        model: Option<String>,
    },

    #[error("degenerate interval: {0}")]
    DegenerateInterval(String),

    #[error("privacy budget refused: requested epsilon {requested}, spent {spent}, cap {cap}")]
    BudgetRefused {
        requested: f64,
        spent: f64,
        cap: f64,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record: {0}")]
    Format(String),
}

fn context_suffix(subset: &Option<usize>, model: &Option<String>) -> String {
    match (subset, model) {
        (Some(s), Some(m)) => format!(" in subset {s} (model {m})"),
        (Some(s), None) => format!(" in subset {s}"),
        (None, Some(m)) => format!(" (model {m})"),
        (None, None) => String::new(),
    }
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Attach a subset index (and optionally a model label) to a singular-fit error.
    pub fn in_subset(self, subset: usize, model: Option<&str>) -> Self {
        match self {
            Error::SingularFit { .. } => Error::SingularFit {
                subset: Some(subset),
                model: model.map(str::to_owned),
            },
            Error::InsufficientData { .. } => Error::SingularFit {
                subset: Some(subset),
                model: model.map(str::to_owned),
            },
            other => other,
        }
    }

    /// Process exit code: 2 configuration/input, 3 budget refusal, 4 singular fit.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetRefused { .. } => 3,
            Error::SingularFit { .. } | Error::InsufficientData { .. } => 4,
            Error::Io { .. } => 1,
            _ => 2,
        }
    }
}
