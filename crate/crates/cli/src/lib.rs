//! Library side of the `skewlab` command: figure data, verification suites
//! and single-law analysis, each producing deterministic text output.

pub mod analyze;
pub mod figure;
pub mod json;
pub mod verify;
pub mod wexpr;

use skewlab_core::QuadSpec;
use thiserror::Error;

pub use wexpr::ParseError;

/// Environment variable overriding the quadrature tolerance.
pub const QUAD_TOL_ENV: &str = "SKEWLAB_QUAD_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Compute(#[from] skewlab_core::Error),
}

impl CliError {
    /// 2 for usage and parse errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Io(_) | CliError::Compute(_) => 1,
        }
    }
}

/// Quadrature settings, with both tolerances taken from
/// `SKEWLAB_QUAD_TOL` when it is set.
pub fn quad_spec_from_env() -> Result<QuadSpec, CliError> {
    match std::env::var(QUAD_TOL_ENV) {
        Err(_) => Ok(QuadSpec::default()),
        Ok(text) => {
            let tol: f64 = text
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{QUAD_TOL_ENV}={text} is not a number")))?;
            if !(tol > 0.0 && tol < 1.0) {
                return Err(CliError::Usage(format!("{QUAD_TOL_ENV} must lie in (0, 1), got {tol}")));
            }
            Ok(QuadSpec::default().with_abs_tol(tol).with_rel_tol(tol))
        }
    }
}

/// Output of a command: text for stdout and whether every property held.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub pass: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}
