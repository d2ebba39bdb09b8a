//! Common engine surface shared by the three online engines and the
//! oracle.

use crate::command::{Command, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("no value has been processed yet")]
    NoValueYet,
    #[error("position {0} was never marked")]
    UnknownPosition(Position),
    #[error("position {0} is not active")]
    InactivePosition(Position),
}

/// A command processor. `apply` returns `Some(answer)` exactly for
/// `Query` commands.
pub trait RmqEngine {
    fn apply(&mut self, cmd: Command) -> Result<Option<i64>, EngineError>;

    fn name(&self) -> &'static str;

    /// Peak number of elements the structure was sized for.
    fn peak_capacity(&self) -> usize;

    /// Peak number of simultaneously active (marked, not closed)
    /// positions observed.
    fn peak_active(&self) -> usize;
}
