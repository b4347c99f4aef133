use thiserror::Error;

/// Errors raised by network construction, assembly and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fracture {index} lies outside the domain or on its boundary")]
    SegmentOutsideDomain { index: usize },

    #[error("fracture {index} has a degenerate span")]
    DegenerateSegment { index: usize },

    #[error("fractures {first} and {second} overlap along a common line")]
    OverlappingFractures { first: usize, second: usize },

    #[error("unsupported fracture junction with {valence} incident ends at ({x}, {y})")]
    UnsupportedValence { valence: usize, x: f64, y: f64 },

    #[error("fracture coordinates cannot be resolved by a uniform grid with at most {max_cells} cells per direction")]
    NotGridAligned { max_cells: usize },

    #[error("invalid tip condition on fracture {index}: {reason}")]
    InvalidTip { index: usize, reason: &'static str },

    #[error("invalid model parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("field `{field}` is not defined at ({x}, {y})")]
    ConfigMismatch { field: &'static str, x: f64, y: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("local block matrix of size {size} is singular")]
    SingularBlock { size: usize },

    #[error("matrix is singular (zero pivot at column {column})")]
    SingularSystem { column: usize },

    #[error("no convergence after {iterations} iterations (relative residual {relative_residual:e})")]
    NoConvergence {
        iterations: usize,
        relative_residual: f64,
    },

    #[error("requested grid {nx}x{ny} is not a refinement of the coarsest grid {coarse_nx}x{coarse_ny}")]
    UnreachableGrid {
        nx: usize,
        ny: usize,
        coarse_nx: usize,
        coarse_ny: usize,
    },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
