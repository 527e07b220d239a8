//! Streaming variant: codewords chosen from counts seen so far.
//!
//! Each symbol is coded under its n-symbol context using a canonical
//! Huffman code built over the followers already observed in that context
//! plus an escape pseudo-symbol of count 1; a first occurrence emits the
//! escape codeword followed by an 8-bit literal. Counts update only after
//! a symbol is coded, so the decoder — which cannot see the current symbol
//! in advance — transitions through exactly the same states.
//!
//! Followers are kept in first-seen order: the decoder reconstructs that
//! order without lookahead, which ascending order would require.

use std::collections::BTreeMap;

use crate::bits::{BitCursor, Bits};
use crate::error::{Error, Result};
use crate::huffman::build_huffman;

const LITERAL_BITS: usize = 8;

/// Follower counts for one context, in first-seen order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Followers {
    seen: Vec<(u8, u64)>,
}

impl Followers {
    fn index_of(&self, symbol: u8) -> Option<usize> {
        self.seen.iter().position(|&(s, _)| s == symbol)
    }

    /// Codewords over (count₁, …, count_k, 1): followers first-seen order,
    /// the escape last. `None` when nothing has been seen yet.
    fn code(&self) -> Option<Vec<Bits>> {
        if self.seen.is_empty() {
            return None;
        }
        let mut freqs: Vec<u64> = self.seen.iter().map(|&(_, c)| c).collect();
        freqs.push(1);
        Some(build_huffman(&freqs))
    }

    fn record(&mut self, symbol: u8) {
        match self.seen.iter_mut().find(|(s, _)| *s == symbol) {
            Some((_, count)) => *count += 1,
            None => self.seen.push((symbol, 1)),
        }
    }
}

/// Shared encoder/decoder state machine. Encoder and decoder instances fed
/// the same symbol sequence hold identical state after every step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OnlineCodec {
    order: usize,
    processed: u64,
    recent: Vec<u8>,
    contexts: BTreeMap<Vec<u8>, Followers>,
}

impl OnlineCodec {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "order must be positive");
        Self {
            order,
            ..Self::default()
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn symbols_processed(&self) -> u64 {
        self.processed
    }

    /// The instantaneous code of the current context, as (symbol, codeword)
    /// pairs with the escape codeword carried as `None`. Empty before any
    /// follower has been seen.
    pub fn current_code(&self) -> Vec<(Option<u8>, Bits)> {
        let Some(followers) = self.contexts.get(&self.recent) else {
            return Vec::new();
        };
        let Some(words) = followers.code() else {
            return Vec::new();
        };
        let mut pairs: Vec<(Option<u8>, Bits)> = followers
            .seen
            .iter()
            .zip(&words)
            .map(|(&(s, _), cw)| (Some(s), cw.clone()))
            .collect();
        pairs.push((None, words.last().unwrap().clone()));
        pairs
    }

    pub fn encode_symbol(&mut self, symbol: u8, out: &mut Bits) {
        if self.processed < self.order as u64 {
            push_literal(out, symbol);
        } else {
            let followers = self.contexts.entry(self.recent.clone()).or_default();
            match (followers.index_of(symbol), followers.code()) {
                (Some(idx), Some(words)) => out.extend(&words[idx]),
                (None, Some(words)) => {
                    // escape, then the literal
                    out.extend(words.last().unwrap());
                    push_literal(out, symbol);
                }
                // virgin context: the decoder knows it too; literal only
                (_, None) => push_literal(out, symbol),
            }
            followers.record(symbol);
        }
        self.advance(symbol);
    }

    pub fn decode_symbol(&mut self, cursor: &mut BitCursor<'_>) -> Result<u8> {
        let symbol = if self.processed < self.order as u64 {
            read_literal(cursor)?
        } else {
            let followers = self.contexts.entry(self.recent.clone()).or_default();
            let symbol = match followers.code() {
                None => read_literal(cursor)?,
                Some(words) => match read_codeword(cursor, &words)? {
                    idx if idx + 1 == words.len() => read_literal(cursor)?,
                    idx => followers.seen[idx].0,
                },
            };
            followers.record(symbol);
            symbol
        };
        self.advance(symbol);
        Ok(symbol)
    }

    fn advance(&mut self, symbol: u8) {
        if self.recent.len() == self.order {
            self.recent.remove(0);
        }
        self.recent.push(symbol);
        self.processed += 1;
    }
}

fn push_literal(out: &mut Bits, symbol: u8) {
    for k in (0..LITERAL_BITS).rev() {
        out.push(symbol >> k & 1 == 1);
    }
}

fn read_literal(cursor: &mut BitCursor<'_>) -> Result<u8> {
    cursor
        .read_value(LITERAL_BITS)
        .map(|v| v as u8)
        .map_err(|_| Error::Corrupt("truncated literal".into()))
}

/// Matches the next bits against a prefix-free codeword set, returning the
/// matched index.
fn read_codeword(cursor: &mut BitCursor<'_>, words: &[Bits]) -> Result<usize> {
    let max_len = words.iter().map(Bits::len).max().unwrap();
    let mut current = Bits::new();
    while current.len() < max_len {
        current.push(cursor.read_bit()?);
        if let Some(idx) = words.iter().position(|w| *w == current) {
            return Ok(idx);
        }
    }
    Err(Error::Corrupt("unknown codeword".into()))
}

/// Encodes `x` as a single streamed bit sequence. Inputs shorter than the
/// order come out as plain literals.
pub fn online_encode(x: &[u8], n: usize) -> Bits {
    let mut codec = OnlineCodec::new(n);
    let mut out = Bits::new();
    for &sym in x {
        codec.encode_symbol(sym, &mut out);
    }
    out
}

/// Decodes a stream produced by [`online_encode`] with the same order;
/// `t` is the symbol count carried by the container envelope.
pub fn online_decode(stream: &Bits, n: usize, t: u64) -> Result<Vec<u8>> {
    let mut codec = OnlineCodec::new(n);
    let mut cursor = BitCursor::new(stream);
    let len = usize::try_from(t)
        .map_err(|_| Error::Corrupt("symbol count exceeds address space".into()))?;
    let mut x = Vec::with_capacity(len);
    for _ in 0..len {
        x.push(codec.decode_symbol(&mut cursor)?);
    }
    if !cursor.at_end() {
        return Err(Error::Corrupt(format!(
            "{} stream bits remain after {} symbols",
            stream.len() - cursor.position(),
            t
        )));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn repeated_symbol_trace() {
        // "aaaa", n=1: literal (8) + virgin-context literal (8) + two 1-bit
        // codewords once the context has a counted follower
        let stream = online_encode(b"aaaa", 1);
        assert_eq!(stream.len(), 8 + 8 + 1 + 1);
        assert_eq!(online_decode(&stream, 1, 4).unwrap(), b"aaaa");
    }

    #[test]
    fn prefix_only_inputs_are_all_literals() {
        for n in 1..=3usize {
            let x = &b"xyz"[..n];
            let stream = online_encode(x, n);
            assert_eq!(stream.len(), 8 * n);
            assert_eq!(online_decode(&stream, n, n as u64).unwrap(), x);
        }
    }

    #[test]
    fn empty_input() {
        let stream = online_encode(b"", 1);
        assert!(stream.is_empty());
        assert_eq!(online_decode(&stream, 1, 0).unwrap(), b"");
    }

    #[test]
    fn named_roundtrip() {
        let stream = online_encode(b"abracadabra", 1);
        assert_eq!(online_decode(&stream, 1, 11).unwrap(), b"abracadabra");
    }

    #[test]
    fn roundtrip_random_inputs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(61);
        for _ in 0..500 {
            let n = rng.gen_range(1..=2usize);
            let len = rng.gen_range(0..400);
            let p: u8 = rng.gen_range(2..=8);
            let x: Vec<u8> = (0..len).map(|_| rng.gen_range(0..p)).collect();
            let stream = online_encode(&x, n);
            assert_eq!(
                online_decode(&stream, n, len as u64).unwrap(),
                x,
                "roundtrip failed at n={n} len={len}"
            );
        }
    }

    #[test]
    fn encoder_decoder_states_stay_in_lockstep() {
        let x = b"the rain in spain falls mainly on the plain";
        for n in [1usize, 2] {
            let mut enc = OnlineCodec::new(n);
            let mut dec = OnlineCodec::new(n);
            let mut stream = Bits::new();
            let mut consumed = 0;
            for &sym in x {
                enc.encode_symbol(sym, &mut stream);
                // re-walk a fresh cursor to the decoder's position
                let mut cursor = BitCursor::new(&stream);
                for _ in 0..consumed {
                    cursor.read_bit().unwrap();
                }
                let decoded = dec.decode_symbol(&mut cursor).unwrap();
                consumed = cursor.position();
                assert_eq!(decoded, sym);
                assert_eq!(enc, dec, "state diverged after {consumed} bits");
            }
        }
    }

    #[test]
    fn instantaneous_codes_are_prefix_free() {
        use crate::adaptive_code::AdaptiveCodeTable;
        let mut rng = rand::rngs::StdRng::seed_from_u64(67);
        let x: Vec<u8> = (0..300).map(|_| rng.gen_range(0..4u8)).collect();
        let mut codec = OnlineCodec::new(1);
        let mut stream = Bits::new();
        for (i, &sym) in x.iter().enumerate() {
            // snapshot the instantaneous code of every context before the step
            let mut table = AdaptiveCodeTable::new(1);
            let snapshot = codec.clone();
            for ctx_sym in 0..4u8 {
                let mut probe = snapshot.clone();
                probe.recent = vec![ctx_sym];
                for (symbol, cw) in probe.current_code() {
                    // the escape shares the code space under a reserved key
                    let key = symbol.unwrap_or(0xFF);
                    table.insert(key, &[ctx_sym], cw);
                }
            }
            assert!(table.verify_prefix_contexts(), "step {i}");
            codec.encode_symbol(sym, &mut stream);
        }
    }

    #[test]
    fn mutated_streams_never_hang() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(71);
        let x: Vec<u8> = (0..200).map(|_| rng.gen_range(b'a'..=b'd')).collect();
        let clean = online_encode(&x, 1);
        for _ in 0..200 {
            let flip = rng.gen_range(0..clean.len());
            let mut corrupted = Bits::new();
            for (i, bit) in clean.iter().enumerate() {
                corrupted.push(if i == flip { !bit } else { bit });
            }
            // must terminate: either an error or some (possibly wrong) output
            match online_decode(&corrupted, 1, x.len() as u64) {
                Ok(decoded) => assert_eq!(decoded.len(), x.len()),
                Err(Error::Corrupt(_)) => {}
                Err(other) => panic!("unexpected error {other:?}"),
            }
        }
    }
}
