use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("invalid sparse structure: {0}")]
    InvalidStructure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The triangular factor of the sketched matrix has a (numerically) vanishing diagonal.
    #[error("rank deficient: min |R_ii| = {min_diag:e} vs max |R_ii| = {max_diag:e}")]
    RankDeficient { min_diag: f64, max_diag: f64 },

    #[error("SVD did not converge")]
    SvdNoConvergence,

    #[error("matrix is identically zero")]
    ZeroMatrix,

    #[error("singular triangular factor: zero pivot at {index}")]
    SingularTriangular { index: usize },

    #[error("no singular value exceeds rcond * sigma_max (rcond = {rcond:e})")]
    EmptyTruncation { rcond: f64 },

    #[error("every trial direction lies in the null space of A")]
    AllDirectionsAnnihilated,

    #[error("matrix market, line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config: {0}")]
    Config(String),

    #[error("{rows}x{cols} exceeds the dense size guard of {limit} entries")]
    TooLarge { rows: usize, cols: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dims(op: &'static str, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            op,
            expected,
            found,
        }
    }
}
