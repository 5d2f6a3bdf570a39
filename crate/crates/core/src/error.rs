use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("momentum must be positive, got {0}")]
    NonPositiveMomentum(f64),
    #[error("invalid barrier: {0}")]
    InvalidBarrier(String),
    #[error("packet widths differ ({0} vs {1}); all packets share one width")]
    WidthMismatch(f64, f64),
    #[error("invalid packet: {0}")]
    InvalidPacket(String),
    #[error("superposition coefficients not normalized: |a|^2 + |b|^2 = {0}")]
    Coefficients(f64),
    #[error("quantity is undefined: {0}")]
    Undefined(&'static str),
    #[error("grid: {0}")]
    Grid(String),
    #[error("integration did not converge: {0}")]
    Integration(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("plot: {0}")]
    Plot(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
