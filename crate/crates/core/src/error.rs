use thiserror::Error;

use crate::fock::PhotonCount;

pub type Result<T> = std::result::Result<T, PadError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PadError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("photon number {total} exceeds the configured maximum {max}")]
    PhotonLimit { total: PhotonCount, max: PhotonCount },

    #[error("ensemble target {target} does not match ancilla photon number {ancilla}")]
    TargetMismatch {
        target: PhotonCount,
        ancilla: PhotonCount,
    },

    #[error("density is not rotationally symmetric (relative spread {spread:e})")]
    SymmetryViolation { spread: f64 },

    #[error("acceptance probability {p_delta:e} is too small to normalise the conditional state")]
    Degenerate { p_delta: f64 },

    #[error("target rate {target} is not reachable (maximum achievable rate {max})")]
    UnreachableRate { target: f64, max: f64 },

    #[error("PAD fidelity {fidelity} is outside the ideal-counter range ({floor}, 1]")]
    OutOfRange { fidelity: f64, floor: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
}

impl PadError {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            PadError::SymmetryViolation { .. }
                | PadError::Degenerate { .. }
                | PadError::UnreachableRate { .. }
                | PadError::OutOfRange { .. }
                | PadError::NoBracket { .. }
        )
    }
}
