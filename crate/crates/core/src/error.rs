use thiserror::Error;

/// Errors raised by generators, index evaluation and the statistics pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("calibration did not converge: best bracket [{lo}, {hi}], estimate {estimate}")]
    Calibration { lo: f64, hi: f64, estimate: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("fit did not converge after {iterations} iterations (sigma={sigma}, mu={mu}, beta={beta}, sse={sse})")]
    FitNotConverged {
        iterations: usize,
        sigma: f64,
        mu: f64,
        beta: f64,
        sse: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
