use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("invalid value for `{key}`: {msg}")]
    InvalidValue { key: String, msg: String },

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("trace line {line}: {msg}")]
    Trace { line: usize, msg: String },

    #[error("unknown satellite `{0}` in trace")]
    UnknownSatellite(String),

    #[error("time {t} s outside the trace span [{start}, {end}] for satellite `{sat}`")]
    TraceOutOfRange {
        sat: String,
        t: f64,
        start: f64,
        end: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no feasible destination for task")]
    NoFeasibleCandidate,

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that stem from user-supplied configuration.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::Syntax { .. }
                | Error::InvalidValue { .. }
                | Error::UnknownKey(_)
                | Error::Trace { .. }
                | Error::UnknownSatellite(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
