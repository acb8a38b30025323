use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("framing error: {0}")]
    Framing(String),

    #[error("singular channel at bin {bin}: |H| = {magnitude:e}")]
    SingularChannel { bin: usize, magnitude: f64 },

    #[error("LMS diverged at step {step} (mu = {mu}){}", .bin.map(|b| format!(" on bin {b}")).unwrap_or_default())]
    Divergence { step: u64, mu: f64, bin: Option<usize> },

    #[error("{context}: {source}")]
    Point {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
