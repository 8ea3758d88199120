use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("embedding is not plane: {0}")]
    NotPlane(String),
    #[error("graph has {vertices} vertices, above the brute-force bound of {bound}; try the kasteleyn engine")]
    TooLarge { vertices: usize, bound: usize },
    #[error("rewrite pattern mismatch: {0}")]
    Pattern(String),
    #[error("step {index}: {source}")]
    Step {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
