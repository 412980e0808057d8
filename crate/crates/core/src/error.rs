use std::fmt;

use thiserror::Error;

/// Which geometric verification rejected its input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    NotContact,
    NotCalibrated,
    NotSasakian,
    NotCcy,
    NotHypo,
    NotRContact,
    NotRContactCcy,
    NotAlphaEinstein,
    TransverseRicciMismatch,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FailureKind::NotContact => "NotContact",
            FailureKind::NotCalibrated => "NotCalibrated",
            FailureKind::NotSasakian => "NotSasakian",
            FailureKind::NotCcy => "NotCCY",
            FailureKind::NotHypo => "NotHypo",
            FailureKind::NotRContact => "NotRContact",
            FailureKind::NotRContactCcy => "NotRContactCCY",
            FailureKind::NotAlphaEinstein => "NotAlphaEinstein",
            FailureKind::TransverseRicciMismatch => "TransverseRicciMismatch",
        };
        f.write_str(s)
    }
}

/// A failed geometric check, with the clause that failed and exact witnesses
/// rendered as strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub kind: FailureKind,
    pub clause: String,
    pub witness: Vec<(String, String)>,
}

impl CheckFailure {
    pub fn new(kind: FailureKind, clause: impl Into<String>) -> Self {
        CheckFailure {
            kind,
            clause: clause.into(),
            witness: Vec::new(),
        }
    }

    pub fn with(mut self, name: impl Into<String>, value: impl fmt::Display) -> Self {
        self.witness.push((name.into(), value.to_string()));
        self
    }

    pub fn witness(&self, name: &str) -> Option<&str> {
        self.witness
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.clause)?;
        for (k, v) in &self.witness {
            write!(f, "; {k} = {v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for CheckFailure {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("parse error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("Jacobi identity fails: d(d e{generator}) = {value}")]
    Jacobi { generator: usize, value: String },
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("degenerate metric")]
    DegenerateMetric,
    #[error("unsupported metric: det g = {0} is not the square of a rational")]
    UnsupportedMetric(String),
    #[error("form is not closed: d = {0}")]
    NotClosed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Check(#[from] CheckFailure),
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// True for geometric verdicts, false for malformed input.
    pub fn is_check_failure(&self) -> bool {
        matches!(self, Error::Check(_))
    }

    pub fn as_check(&self) -> Option<&CheckFailure> {
        match self {
            Error::Check(c) => Some(c),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
