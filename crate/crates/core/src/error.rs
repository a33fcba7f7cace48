use thiserror::Error;

/// Errors raised by the trajectory-coherent state library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TcsError {
    #[error("parameter `{name}` must be finite (got {value})")]
    NonFinite { name: &'static str, value: f64 },

    #[error("Im b must be positive (got {0})")]
    NonPositiveImB(f64),

    #[error("mass must be positive (got {0})")]
    NonPositiveMass(f64),

    #[error("hbar must be positive (got {0})")]
    NonPositiveHbar(f64),

    #[error("damping rate gamma must be non-negative (got {0})")]
    NegativeGamma(f64),

    #[error("singular focal point: z(t) vanishes at sample {index}")]
    FocalPoint { index: usize },

    #[error("branch path needs refinement: argument jump {jump:.3} rad between samples {index} and {}", index + 1)]
    RefinementRequired { index: usize, jump: f64 },

    #[error("quadrature did not converge on [{a}, {b}]: achieved error {achieved:e}")]
    QuadratureNonConvergence { a: f64, b: f64, achieved: f64 },

    #[error("ODE integration diverged at step {step}")]
    Divergence { step: usize },

    #[error("states belong to different parameters or times")]
    MismatchedStates,

    #[error("Fock level {n} exceeds the degree cap {cap}")]
    DegreeCap { n: usize, cap: usize },

    #[error("truncation tail {tail:e} above tolerance {tol:e}; use n_max >= {required}")]
    TruncationTail {
        tail: f64,
        tol: f64,
        required: usize,
    },

    #[error("closed theta/mu forms assume Re b = 0 (got Re b = {0})")]
    NonzeroReB(f64),

    #[error("operation undefined in the critical regime (omega = 0)")]
    CriticalRegime,

    #[error("mu must be positive (got {0})")]
    NonPositiveMu(f64),

    #[error("no positive mu solves g = 0: {condition} violated ({detail})")]
    NoMuSolution {
        condition: &'static str,
        detail: String,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("boundary leak: edge amplitude {edge:e} exceeds {limit:e} of peak")]
    BoundaryLeak { edge: f64, limit: f64 },

    #[error("box too small: edge mass {edge_mass:e} exceeds {limit:e}")]
    BoxTooSmall { edge_mass: f64, limit: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, TcsError>;
