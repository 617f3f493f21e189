use std::fmt;

use thiserror::Error;

/// Which basis a one-dimensional amplitude array is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Position,
    Momentum,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Position => f.write_str("position"),
            Representation::Momentum => f.write_str("momentum"),
        }
    }
}

#[derive(Debug, Error)]
pub enum KickError {
    #[error("expected a {expected}-representation input, got {found}")]
    RepresentationMismatch {
        expected: Representation,
        found: Representation,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("input has zero norm")]
    ZeroNorm,

    #[error("{what} is under-resolved: {have} < required {need}")]
    UnderResolved {
        what: &'static str,
        have: f64,
        need: f64,
    },

    #[error("{0} does not fit inside the grid")]
    DoesNotFit(String),

    #[error("{what} = {value} is not an integer multiple of the grid spacing {spacing}")]
    OffGrid {
        what: &'static str,
        value: f64,
        spacing: f64,
    },

    /// A physical precondition failed; the message names the inequality.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("packets overlap: no gap between psi_A and psi_B at the support threshold")]
    OverlappingPackets,

    #[error("conditional slice at k_p = {k_p} carries probability {mass:e}, below the 1e-9 floor")]
    EmptySlice { k_p: f64, mass: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl KickError {
    /// Process exit code for the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            KickError::InvalidConfig(_) | KickError::Io(_) | KickError::Json(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, KickError>;
