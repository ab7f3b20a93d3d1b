use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("accuracy error: requested tolerance not met, achieved {achieved:.3e}")]
    Accuracy { achieved: f64 },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("ill-posed system: {0}; consider enabling second-difference regularization")]
    IllPosed(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn mesh(msg: impl Into<String>) -> Self {
        Error::Mesh(msg.into())
    }
    pub fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
