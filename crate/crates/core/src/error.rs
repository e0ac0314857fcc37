use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{value} is not a unit modulo {modulus} (gcd = {gcd})")]
    NotAUnit { value: u64, modulus: u64, gcd: u64 },

    #[error("{0} is not prime")]
    InvalidModulus(u64),

    #[error("x -> x^{k} does not permute Z_{p} (gcd(k, p - 1) = {gcd})")]
    NotAPermutation { k: u64, p: u64, gcd: u64 },

    #[error("{what} = {value} out of range: {expected}")]
    OutOfRange {
        what: &'static str,
        value: u64,
        expected: &'static str,
    },

    #[error("{tau} is not a primitive root mod {p} (order {order})")]
    InvalidGenerator { tau: u64, p: u64, order: u64 },

    #[error("fractional parts of {s}*alpha and {t}*alpha coincide")]
    AmbiguousOrder { s: u64, t: u64 },

    #[error("invalid size {n}: {reason}")]
    InvalidSize { n: usize, reason: &'static str },

    #[error("exact arithmetic width exceeded in {0}")]
    WidthExceeded(&'static str),

    #[error("size {n} refused by {op} (limit {limit})")]
    SizeRefused {
        op: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("parse error in field `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
