use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration has no centers")]
    EmptyConfiguration,
    #[error("non-finite entry in configuration: {0}")]
    NonFiniteEntry(String),
    #[error("centers {0} and {1} are closer than the separation floor (distance {2:e})")]
    DuplicateCenters(usize, usize, f64),
    #[error("{centers} centers but {alphas} coupling constants")]
    ArityMismatch { centers: usize, alphas: usize },
    #[error("unknown registry entry `{0}`")]
    UnknownName(String),
    #[error("bad parameter count for `{name}`: got {got}, expected {expected}")]
    BadParameterCount {
        name: String,
        got: usize,
        expected: String,
    },
    #[error("I/O failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed configuration file: {0}")]
    Parse(String),
    #[error("configuration failed validation: {0}")]
    Validation(Box<Error>),
    #[error("points coincide")]
    CoincidentPoints,
    #[error("evaluation point coincides with center {0}")]
    CoincidentWithCenter(usize),
    #[error("eigenvalue branch {branch} is still negative at lambda_max = {lambda_max}")]
    BranchNotBracketed { branch: usize, lambda_max: f64 },
    #[error("coefficient vector is not a zero mode (|Γ₀c| = {gamma0_residual:e}, |Σc| = {sum:e})")]
    NotAZeroMode { gamma0_residual: f64, sum: f64 },
    #[error("A + P is singular (condition number {0:e})")]
    APlusPSingular(f64),
    #[error("B restricted to range(P) is singular, so A is singular")]
    BSingular,
    #[error("restricted block P·Γ{order}·P is singular on range(P)")]
    RestrictedBlockSingular { order: usize },
    #[error("Γ(z) is singular on the contour |z| = {0}")]
    SingularOnContour(f64),
    #[error("contour extraction did not converge after {0} radius halvings")]
    NoConvergence(usize),
    #[error("Γ(z) is singular at z = {0}")]
    GammaSingular(crate::C64),
    #[error("resolvent kernel requires Im z > 0 or real z ≠ 0, got {0}")]
    OutsideResolventDomain(crate::C64),
    #[error("vector components do not sum to zero (sum = {0:e})")]
    SumNotZero(f64),
    #[error("component {0} of the kernel vector is zero but the consistency condition fails (residual {1:e})")]
    InconsistentZeroComponent(usize, f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
