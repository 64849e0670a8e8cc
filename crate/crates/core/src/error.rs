use thiserror::Error;

use crate::model::Agent;

/// Errors reported by the solver, verifiers and oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input (unknown ids, violated preconditions).
    #[error("input error: {0}")]
    Input(String),

    /// The requested operation does not apply to this instance or exceeds a size guard.
    #[error("capability error: {0}")]
    Capability(String),

    /// No complete feasible allocation exists.
    #[error("infeasible instance: {0}")]
    Infeasible(String),

    /// A fair allocation of the requested kind may not exist in this setting.
    #[error("refused: {reason} (counterexample fixture `{fixture}`)")]
    Impossible { reason: String, fixture: &'static str },

    /// Two bases have no feasible exchange bijection, so single-item swaps cannot repair envy.
    #[error(
        "no feasible exchange bijection between the bundles of agents {envious} and {envied}: \
         the constraint matroid is not base-orderable (see fixture `k4-graphic`)"
    )]
    NotBaseOrderable { envious: Agent, envied: Agent },

    /// A mid-run invariant failed in verification mode.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn capability<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capability(msg.into()))
}
