use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by every fallible operation in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("patch size {patch} exceeds image dimensions {width}x{height}")]
    ZeroDimension { patch: u32, width: u32, height: u32 },

    #[error("malformed image: {0}")]
    MalformedImage(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("insert count {insert_count} is not valid for {num_layers} layers with strategy {strategy}")]
    CountExceedsLayers {
        num_layers: usize,
        insert_count: usize,
        strategy: &'static str,
    },

    #[error("invalid episode: {0}")]
    InvalidEpisode(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("action {0:?} is not part of the action space")]
    SpaceMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Image(#[from] image::ImageError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable name of the variant, used by foreign bindings to pick exception types.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ZeroDimension { .. } => "ZeroDimension",
            Error::MalformedImage(_) => "MalformedImage",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::CountExceedsLayers { .. } => "CountExceedsLayers",
            Error::InvalidEpisode(_) => "InvalidEpisode",
            Error::InvalidAction(_) => "InvalidAction",
            Error::Parse { .. } => "ParseError",
            Error::SpaceMismatch(_) => "SpaceMismatch",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Io { .. } => "IoError",
            Error::Image(_) => "ImageError",
            Error::Json(_) => "JsonError",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Rejects ratios outside `[0, 1]` (including NaN).
pub(crate) fn check_ratio(ratio: f64) -> Result<()> {
    if (0.0..=1.0).contains(&ratio) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "ratio must lie in [0, 1], got {ratio}"
        )))
    }
}
