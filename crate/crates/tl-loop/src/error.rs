use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("generator index {index} out of range for L={l} ({bc})")]
    IndexOutOfRange { index: usize, l: usize, bc: String },

    #[error("diagram size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("defect count {defects} incompatible with L={l} under {bc}")]
    ParityMismatch { l: usize, defects: usize, bc: String },

    #[error("unsupported sector: L={l}, bc={bc}, defects={defects}")]
    UnsupportedSector { l: usize, bc: String, defects: usize },

    #[error("size {0} exceeds configured bound {1}")]
    BoundExceeded(usize, usize),

    #[error("basis not closed: generator {generator} maps state {state} outside the basis")]
    BasisNotClosed { generator: usize, state: String },

    #[error("kernel dimension is {0}, expected 1")]
    KernelDimension(usize),

    #[error("kernel vector is not sign-definite")]
    NonSignDefiniteKernel,

    #[error("fpl engines disagree on grid {0}")]
    EnginesDisagree(String),

    #[error("simulation and exact vector refer to different sectors")]
    SectorMismatch,

    #[error("absorbing state reached: {0}")]
    AbsorbingState(String),

    #[error("eigenvalue solver failed: dgeev info={0}")]
    EigenSolver(i32),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
