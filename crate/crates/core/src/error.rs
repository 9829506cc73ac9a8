use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    VertexOutOfRange { vertex: usize, n: usize },
    NotAnEdge { u: usize, v: usize },
    DuplicateVertex(usize),
    /// Two vertex sets that must be disjoint share `0`.
    Overlap(usize),
    EmptySide,
    CapExceeded { what: &'static str, limit: usize, actual: usize },
    SizeMismatch { expected: usize, actual: usize },
    /// A trace step failed; `index` is zero-based.
    Step { index: usize, cause: Box<Error> },
    Overflow(&'static str),
    GroundMismatch,
    UnknownChord(String),
    Malformed(String),
    Precondition(String),
    /// A multi-stage procedure could not continue past `stage`.
    Stage { stage: &'static str, detail: String },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn stage(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::Stage { stage, detail: detail.into() }
    }

    /// True for refusals caused by an explicit size cap.
    pub fn is_cap(&self) -> bool {
        match self {
            Error::CapExceeded { .. } => true,
            Error::Step { cause, .. } => cause.is_cap(),
            _ => false,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for {n}-vertex graph")
            }
            Error::NotAnEdge { u, v } => write!(f, "{u}{v} is not an edge"),
            Error::DuplicateVertex(v) => write!(f, "vertex {v} listed twice"),
            Error::Overlap(v) => write!(f, "sets are not disjoint (both contain {v})"),
            Error::EmptySide => f.write_str("vertex set must be nonempty"),
            Error::CapExceeded { what, limit, actual } => {
                write!(f, "{what} is {actual}, above the cap of {limit}")
            }
            Error::SizeMismatch { expected, actual } => {
                write!(f, "expected size {expected}, got {actual}")
            }
            Error::Step { index, cause } => write!(f, "step {index}: {cause}"),
            Error::Overflow(what) => write!(f, "{what} overflows 128-bit arithmetic"),
            Error::GroundMismatch => f.write_str("matroids have different ground sets"),
            Error::UnknownChord(c) => write!(f, "no chord named {c:?}"),
            Error::Malformed(msg) => write!(f, "malformed input: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition failed: {msg}"),
            Error::Stage { stage, detail } => write!(f, "stage {stage}: {detail}"),
        }
    }
}

impl core::error::Error for Error {}
