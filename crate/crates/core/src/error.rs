use thiserror::Error;

/// Precondition and domain failures raised by the library.
///
/// Every variant is a mathematical precondition violation; the CLI maps all
/// of them to exit code 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("root of unity order N={0} is too small (need N >= 3)")]
    OrderTooSmall(u32),

    #[error("q-factorial [{n}]! vanishes at this root of unity (need n < r = {r})")]
    VanishingFactorial { n: u32, r: u32 },

    #[error("logarithm of zero is undefined")]
    LogOfZero,

    #[error("kappa is zero (|kappa| = {0:e})")]
    ZeroKappa(f64),

    #[error("color (kappa = {re}{im:+}i) is not admissible: kappa must avoid 0 and +-1")]
    NotAdmissible { re: f64, im: f64 },

    #[error("alpha = {re}{im:+}i is within tolerance of an integer")]
    IntegralAlpha { re: f64, im: f64 },

    #[error("invalid braid word: {0}")]
    InvalidBraid(String),

    #[error("coloring has {got} entries but the braid has {expected} strands")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{what}: expected {expected} entries (one per closure component), got {got}")]
    ComponentCount {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("kappa is not constant on closure component {0}")]
    KappaNotConstant(usize),

    #[error("branch is not constant on closure component {0}")]
    BranchNotConstant(usize),

    #[error("coloring is not a fixed point of the braid action (residual {0:e})")]
    NotFixedPoint(f64),

    #[error("braid is not a stabilization: {0}")]
    NotStabilized(String),

    #[error("matrix is singular or numerically not invertible")]
    Singular,

    #[error("operator on {strands} strands of dimension {dim} exceeds the size budget")]
    TooLarge { strands: usize, dim: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
