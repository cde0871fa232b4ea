use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: affine rank {rank} < dimension {dim}")]
    DegenerateInput { dim: usize, rank: usize },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("unbounded in the requested direction")]
    Unbounded,

    #[error("operation requires dimension 2 or 3, got {0}")]
    UnsupportedDimension(usize),

    #[error("region chain ends at depth {max}, requested {requested}")]
    EmptyRegion { requested: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("index range m = {m} is below 16/epsilon = {min:.3}")]
    MTooSmall { m: usize, min: f64 },

    #[error("grid kernel needs {cells} cells, cap is {cap}; raise alpha or lower c_d")]
    CellBudgetOverflow { cells: usize, cap: usize },

    #[error("no direction passed the noisy depth test")]
    BoxSearchFailed,

    #[error("dataset too small: noisy count {noisy:.1} cannot support any feasible index range")]
    AbortTooSmall { noisy: f64, required: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("points outside [0,1]^d or off the 2^-{upsilon} grid at rows {rows:?}")]
    OffGrid { upsilon: u32, rows: Vec<usize> },

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn stage(stage: &'static str, source: Error) -> Self {
        Error::Stage {
            stage,
            source: Box::new(source),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
