use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the transform library.
#[derive(Debug)]
pub enum Error {
    /// Malformed input data (empty signals, bad axes, unparsable files).
    InvalidInput(String),
    /// Parameter matrix violates a constraint (B = 0, unimodularity).
    InvalidParams(String),
    /// Scale must be positive where a grid axis is concerned.
    InvalidScale(f64),
    /// Window with no usable energy or bad shape parameter.
    InvalidWindow(String),
    /// Zero or degenerate signal where a nonzero one is required.
    InvalidSignal(String),
    /// Two sampled objects live on incommensurate grids.
    GridMismatch(String),
    /// Admissibility integral vanished; the window cannot be inverted.
    NotAdmissible(String),
    /// Grid provenance does not match the supplied window/parameters.
    ProvenanceError(String),
    /// Fractional Stockwell angle theta = n*pi degenerates (B = sin theta = 0).
    DegenerateAngle(f64),
    /// Requested sampling violates the anti-aliasing bound.
    AliasError(String),
    /// A moment integral has too much mass at the axis edge to be trusted.
    MomentTruncation(String),
    Io(std::io::Error),
    /// File format violation (magic, version, geometry).
    Format(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to input validation).
    /// The CLI maps these to a distinct exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotAdmissible(_) | Error::AliasError(_) | Error::MomentTruncation(_)
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::InvalidParams(m) => write!(f, "invalid parameters: {m}"),
            Error::InvalidScale(a) => write!(f, "invalid scale {a}: scales must be positive"),
            Error::InvalidWindow(m) => write!(f, "invalid window: {m}"),
            Error::InvalidSignal(m) => write!(f, "invalid signal: {m}"),
            Error::GridMismatch(m) => write!(f, "grid mismatch: {m}"),
            Error::NotAdmissible(m) => write!(f, "window not admissible: {m}"),
            Error::ProvenanceError(m) => write!(f, "provenance mismatch: {m}"),
            Error::DegenerateAngle(t) => {
                write!(f, "degenerate angle {t}: theta = n*pi gives B = 0")
            }
            Error::AliasError(m) => write!(f, "aliasing: {m}"),
            Error::MomentTruncation(m) => write!(f, "moment truncation: {m}"),
            Error::Io(e) => write!(f, "io error: {e}"),
            Error::Format(m) => write!(f, "format error: {m}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
