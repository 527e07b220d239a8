//! Crate-wide error type.

use std::fmt;
use std::io;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// `encode_extension` hit a (symbol, context) pair the table does not map.
    MissingTableEntry {
        symbol: u8,
        context: Vec<u8>,
    },
    /// The brute-force injectivity check was asked to enumerate too many strings.
    EnumerationTooLarge {
        states: u128,
        limit: u128,
    },
    /// Malformed container, fixture or flag value.
    Format(String),
    /// A container or payload that cannot have been produced by the encoder.
    Corrupt(String),
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MissingTableEntry { symbol, context } => write!(
                f,
                "no codeword for symbol 0x{symbol:02x} in context {context:02x?}"
            ),
            Error::EnumerationTooLarge { states, limit } => write!(
                f,
                "injectivity enumeration of {states} strings exceeds limit {limit}"
            ),
            Error::Format(msg) => write!(f, "format error: {msg}"),
            Error::Corrupt(msg) => write!(f, "corrupt stream: {msg}"),
            Error::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(err: io::Error) -> Self {
        Error::Io(err)
    }
}
