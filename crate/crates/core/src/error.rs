use std::fmt;

use crate::hkfit::FitFailure;

/// Location-aware parse failure for the text grammars (polynomials, ring
/// specs, HN data, curves, split bundles).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: 1,
            column,
            message: message.into(),
        }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = line;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("{q} is not a power of the characteristic {p}")]
    InvalidPower { q: u64, p: u64 },
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),
    #[error("ideal is not R_+-primary: no vanishing graded piece up to degree bound {bound}")]
    NotPrimary { bound: u64 },
    #[error("{0}")]
    FitFailure(Box<FitFailure>),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("inconsistent exact sequence: {0}")]
    InconsistentSequence(String),
    #[error("inconsistent syzygy data: {0}")]
    InconsistentSyzygy(String),
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
