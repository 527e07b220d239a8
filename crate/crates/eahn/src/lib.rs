//! Lossless compression built on context-conditioned Huffman coding.
//!
//! Instead of one Huffman code over global symbol frequencies, the codec
//! gives every n-symbol context its own code over the frequencies of the
//! symbols that follow it. Contexts with a single follower cost zero bits
//! per position, and conditional-entropy structure (natural text, source
//! code) compresses well below the order-0 bound.
//!
//! The crate provides:
//!
//! - [`adaptive_code`]: explicit (symbol, context) -> codeword tables, the
//!   extension encoder, and prefix/injectivity verification;
//! - [`huffman`]: the deterministic canonical Huffman kernel with entropy
//!   and rate formulas;
//! - [`codec`]: the offline encoder/decoder over byte inputs;
//! - [`online`]: the streaming variant with escape-coded first occurrences;
//! - [`parallel`]: a multi-worker encoder with bit-identical output;
//! - [`container`]: the envelope and bit-exact file bodies (see FORMAT.md);
//! - [`entropy`]: per-context entropy/rate reports and bound checks;
//! - [`bench`]: a corpus harness comparing against an order-0 Huffman
//!   baseline.
//!
//! Start with the `examples/` directory: each major capability has a
//! runnable walkthrough (`cargo run --example offline_roundtrip`, ...).
//!
//! ```
//! use eahn::container::{compress, decompress, Options};
//!
//! let data = b"an example string with enough repetition to compress";
//! let file = compress(data, &Options::default());
//! assert_eq!(decompress(&file).unwrap(), data);
//! ```

pub mod adaptive_code;
pub mod bench;
pub mod bits;
pub mod codec;
pub mod container;
pub mod entropy;
pub mod error;
pub mod huffman;
pub mod online;
pub mod parallel;

pub use adaptive_code::{AdaptiveCodeTable, Alphabet};
pub use bits::Bits;
pub use codec::{eahn_decode, eahn_encode, EahnOutput};
pub use container::{compress, decompress, Format, Mode, Options};
pub use entropy::{eahn_entropy, EntropyReport};
pub use error::{Error, Result};
pub use online::{online_decode, online_encode, OnlineCodec};
pub use parallel::eahn_encode_parallel;
