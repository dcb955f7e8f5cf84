//! Exit-code-carrying error type for the command line.
//!
//! | code | meaning                                  |
//! |------|------------------------------------------|
//! | 0    | success                                  |
//! | 1    | internal/other failure                   |
//! | 2    | non-physical input matrix                |
//! | 3    | no coherent core (holonomy undefined)    |
//! | 4    | unreadable or malformed input            |
//! | 5    | phase undefined at a requested probe     |

use polarlab_core::Error as CoreError;

#[derive(Debug)]
pub struct RunError {
    pub exit_code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl RunError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            exit_code: 4,
            kind: "parse",
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            exit_code: 4,
            kind: "io",
            message: message.into(),
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for RunError {}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        let (exit_code, kind) = match &e {
            CoreError::NonPhysical { .. } => (2, "nonphysical"),
            CoreError::NoCoherentCore { .. } => (3, "no-coherent-core"),
            CoreError::PhaseUndefined { .. } => (5, "phase-undefined"),
            CoreError::EmptyKrausSet => (4, "parse"),
            _ => (1, "analysis"),
        };
        Self {
            exit_code,
            kind,
            message: e.to_string(),
        }
    }
}
