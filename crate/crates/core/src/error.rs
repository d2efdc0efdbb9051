use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("probability {name} = {value} is outside [0, 1]")]
    Probability { name: &'static str, value: f64 },

    #[error("stationary solve is singular (|det| = {det:e})")]
    SingularChain { det: f64 },

    #[error("no fair game for p1 = {p1}: required p0 = {p0} is outside [0, 1]")]
    NoFairGame { p1: f64, p0: f64 },

    #[error("ratchet geometry needs {0}")]
    RatchetPrecondition(&'static str),

    #[error("breakpoint b = {0} is outside (0, 1)")]
    Breakpoint(f64),

    #[error("smoothing needs consecutive times, got {0}, {1}, {2}")]
    NonConsecutive(u64, u64, u64),

    #[error("schedule must contain at least one game")]
    EmptySchedule,

    #[error("unknown game label {0:?} (expected 'A' or 'B')")]
    UnknownLabel(char),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("monte carlo needs at least one run")]
    NoRuns,
}

pub type Result<T> = std::result::Result<T, Error>;
