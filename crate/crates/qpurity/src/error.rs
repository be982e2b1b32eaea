use thiserror::Error;

/// Errors for domain violations and numerical failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("impurity {0} outside [0, 1/2]")]
    ImpurityOutOfRange(f64),

    #[error("Renyi order must be positive, got {0}")]
    InvalidOrder(f64),

    #[error("Bloch vector (x={x}, z={z}) has norm > 1")]
    BlochOutOfRange { x: f64, z: f64 },

    #[error("derivatives of S_alpha diverge at L = 0 for alpha = {alpha} < 1")]
    SingularDerivative { alpha: f64 },

    #[error("control value {0} outside [-1, 1]")]
    ControlOutOfRange(f64),

    #[error("root not bracketed on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    RootNotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("quadrature did not converge: {context} (last estimate {estimate:e}, last delta {delta:e})")]
    QuadratureNonconvergence {
        context: String,
        estimate: f64,
        delta: f64,
    },

    #[error("value grid too small: need at least {min} nodes per axis, got {rows} x {cols}")]
    GridTooSmall { min: usize, rows: usize, cols: usize },

    #[error("grid axis not uniform near index {index}: spacing {found:e} vs {expected:e}")]
    NonUniformAxis {
        index: usize,
        found: f64,
        expected: f64,
    },

    #[error("value grid cell (L={l}, tau={tau}) failed: {source}")]
    GridCell {
        l: f64,
        tau: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
