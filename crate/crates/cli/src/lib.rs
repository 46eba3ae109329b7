//! Front end for `wfs-core`: evaluation pipeline, benchmarks and fuzzing.

pub mod bench;
pub mod eval;
pub mod fuzz;
pub mod pipeline;

use std::fmt;

/// A failed command. Input problems exit with 1, semantic mismatches
/// (oracle disagreement, broken engine invariants) with 2.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Mismatch(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Mismatch(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "error: {m}"),
            Failure::Mismatch(m) => write!(f, "mismatch: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<wfs_core::rewrite::EngineError> for Failure {
    fn from(e: wfs_core::rewrite::EngineError) -> Self {
        match e {
            wfs_core::rewrite::EngineError::MissingMagicMeta(_) => Failure::Input(e.to_string()),
            wfs_core::rewrite::EngineError::Invariant(_) => Failure::Mismatch(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

pub(crate) fn input<E: fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use wfs_core::rewrite::EngineError;
    use wfs_core::Letter;

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::from(EngineError::Invariant("fact p deleted".into())).exit_code(), 2);
        assert_eq!(Failure::from(EngineError::MissingMagicMeta(Letter::M)).exit_code(), 1);
    }
}
