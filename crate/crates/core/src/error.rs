use thiserror::Error;

/// Errors produced anywhere in the stroking, rendering and ingest pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate vector (norm {norm:e})")]
    DegenerateVector { norm: f64 },

    #[error("degenerate segment: endpoints coincide at ({x}, {y})")]
    DegenerateSegment { x: f64, y: f64 },

    #[error("near-reversal join: turn angle {turn_angle} rad is too close to pi")]
    NearReversal { turn_angle: f64 },

    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),

    #[error("invalid stroke style: {0}")]
    InvalidStyle(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid viewport: {0}")]
    InvalidViewport(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed JSON at byte {offset}: {message}")]
    Json { offset: usize, message: String },

    #[error("malformed GeoJSON: {0}")]
    GeoJson(String),

    #[error("scene contains no polylines")]
    EmptyScene,

    #[error("degenerate scene bounds")]
    DegenerateBounds,

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by unreadable or malformed input, as opposed to
    /// parameters that fail validation.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Json { .. } | Error::GeoJson(_) | Error::Io(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
