use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("infeasible geometry: {0}")]
    InfeasibleGeometry(String),

    #[error("adjacent-channel mode requires an FDR entry for a {offset_mhz} MHz offset")]
    MissingFdr { offset_mhz: f64 },

    #[error("scenario has no sectors; call sectorize first")]
    NotSectorized,

    #[error("config: missing section [{0}]")]
    MissingSection(String),

    #[error("config: {0}")]
    Config(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidInput(msg()))
    }
}
