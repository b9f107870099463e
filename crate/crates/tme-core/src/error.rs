//! Error type shared across the crate.

use crate::iteration::IterationTrace;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid needs an odd point count of at least 3, got {0}")]
    BadPointCount(usize),

    #[error("grid half-width must be positive and finite, got {0}")]
    BadHalfWidth(f64),

    #[error("operands live on different frequency grids")]
    GridMismatch,

    #[error("kernel matrix is {rows}x{cols} but the grids require {expected_rows}x{expected_cols}")]
    KernelShape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },

    #[error("kernel entries must all be finite")]
    NonFiniteKernel,

    #[error("kernel has zero quadrature norm")]
    ZeroKernel,

    #[error("filter has {got} values but the grid has {expected} points")]
    FilterLength { got: usize, expected: usize },

    #[error("filter values must lie in [0, 1], found {0}")]
    FilterRange(f64),

    #[error("amplitude values must all be finite")]
    NonFiniteAmplitude,

    #[error("amplitude has zero norm")]
    ZeroAmplitude,

    #[error("amplitude is not unit-normalized (norm {0})")]
    NotNormalized(f64),

    #[error("deflation basis is not orthonormal (worst deviation {0:.3e})")]
    NonOrthonormalBasis(f64),

    #[error("mode {mode}: prior list holds {got} pairs, expected {expected}")]
    PriorCount {
        mode: usize,
        got: usize,
        expected: usize,
    },

    #[error("mode {mode}: seed lies in the span of the prior modes")]
    SeedAnnihilated { mode: usize },

    #[error(
        "mode {mode}: output annihilated by deflation at step {step}; \
         no further mode above the numerical floor"
    )]
    SpectrumExhausted { mode: usize, step: usize },

    #[error("mode {mode}: no shape convergence within {max_steps} iterations")]
    NotConverged {
        mode: usize,
        max_steps: usize,
        trace: Box<IterationTrace>,
    },

    #[error(
        "mode {mode}: power ratio stabilized at {ratio:.6e} without shape convergence; \
         the remaining mode numbers appear degenerate"
    )]
    DegenerateModes { mode: usize, ratio: f64 },

    #[error("invalid iteration config: {0}")]
    BadConfig(String),

    #[error("trace for mode {0} did not converge")]
    UnconvergedTrace(usize),

    #[error("singular value factorization produced non-finite values")]
    FactorizationFailed,

    #[error("temporal grid must hold at least two points")]
    EmptyTauGrid,

    #[error("temporal grid is not uniform")]
    NonUniformTauGrid,

    #[error("magnitude floor must be positive and finite, got {0}")]
    BadFloor(f64),

    #[error("magnitude floor {floor} excludes every grid point (max magnitude {max})")]
    FloorTooHigh { floor: f64, max: f64 },

    #[error("kernel file: {0}")]
    KernelFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
