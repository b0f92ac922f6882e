use thiserror::Error;

/// Errors raised by the library. Numeric payloads are reported as `f64`
/// regardless of the scalar type used for the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval ({lo}, {hi})")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {error:e})")]
    NonConvergence { subdivisions: usize, error: f64 },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("w is not odd: w({x}) + w(-{x}) = {residual:e}")]
    OddnessViolation { x: f64, residual: f64 },
    #[error("not a perturbation function at x = {x}: {reason}")]
    NotAPerturbation { x: f64, reason: String },
    #[error("not a density: integral = {integral}")]
    NotADensity { integral: f64 },
    #[error("moment of order {order} undefined: {reason}")]
    MomentUndefined { order: u32, reason: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("premise not met: {0}")]
    PremiseNotMet(String),
    #[error("derivative unavailable at x = {x}")]
    NonDifferentiable { x: f64 },
    #[error("super-level set at u = {level} is empty on the grid")]
    EmptyLevelSet { level: f64 },
    #[error("composition rule not covered: {0}")]
    RuleNotCovered(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("base density {density:e} too small to divide by")]
    DegenerateBase { density: f64 },
    #[error("representation check failed at y = {at:?}: G(y) + G(-y) = {sum}")]
    RepresentationViolated { at: Vec<f64>, sum: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
