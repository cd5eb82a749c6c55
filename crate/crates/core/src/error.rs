use thiserror::Error;

use crate::games::GameError;
use crate::kripke::LoadError;
use crate::semantics::EvalError;
use crate::syntax::ParseError;

/// A computation hit one of the configured size ceilings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what} exceeds the configured cap of {cap}")]
pub struct ResourceError {
    pub what: &'static str,
    pub cap: usize,
}

impl ResourceError {
    pub fn new(what: &'static str, cap: usize) -> Self {
        Self { what, cap }
    }
}

/// Umbrella error for callers that drive several modules at once (the CLI).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("formula parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Load(#[from] LoadError),
    #[error("evaluation error: {0}")]
    Eval(#[from] EvalError),
    #[error("resource cap: {0}")]
    Resource(#[from] ResourceError),
    #[error("game error: {0}")]
    Game(#[from] GameError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
