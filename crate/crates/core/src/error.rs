use thiserror::Error;

/// Errors raised by the simulation, analytics and PDE layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A simulation produced more particles than the configured guard allows.
    #[error("population guard exceeded: more than {guard} particles")]
    Guard { guard: usize },

    /// A particle id that is not part of the genealogy.
    #[error("unknown particle id {0}")]
    UnknownId(usize),

    /// An operation was applied to a value in the wrong state.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A numerical routine could not produce a trustworthy result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A grid violates the stability contract of its stepper.
    #[error("unstable grid: {0}")]
    Stability(String),

    /// The traveling front touched a truncation edge of the domain.
    #[error("front reached the {edge} domain edge at t = {time}")]
    FrontAtEdge { time: f64, edge: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
