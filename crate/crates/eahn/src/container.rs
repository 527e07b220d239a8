//! Bit-exact container formats.
//!
//! Every file starts with a 12-byte envelope:
//!
//! ```text
//! magic 0xEA 0x48 | version u8 | order u8 | original length u64 LE
//! ```
//!
//! versions: 0 = raw literal bytes, 1 = order-1 body, 2 = generalized body
//! for any order, 3 = online stream. See FORMAT.md for worked dumps.
//!
//! The v1 body packs nine bit fields Z1..Z9 in order:
//!
//! ```text
//! Z1  8 bits        padding bit count (0..7)
//! Z2  Z1 bits       zero padding
//! Z3  8 bits        first input symbol
//! Z4  8 bits        MAXLC, the longest codeword in Y (0 if Y is empty)
//! Z5  256 bits      bitmap of symbols occurring in x1..x(t-1)   (NC ones)
//! Z6  256 bits      bitmap of symbols occurring in x2..xt       (NL ones)
//! Z7  NL*NC bits    occurrence matrix, context-major, both ascending
//! Z8  LenY*(MAXLC+1) bits   fixed-width codewords, in Y order
//! Z9  |Z| bits      payload
//! ```
//!
//! Z1 is chosen so the total is a multiple of 8. Bit packing is MSB-first
//! throughout.

use std::collections::{BTreeMap, BTreeSet};

use crate::bits::{BitReader, BitWriter, Bits};
use crate::codec::{eahn_decode, eahn_encode, EahnOutput};
use crate::error::{Error, Result};
use crate::online::{online_decode, online_encode};
use crate::parallel::eahn_encode_parallel;

pub const MAGIC: [u8; 2] = [0xEA, 0x48];
pub const ENVELOPE_LEN: usize = 12;

pub const VERSION_RAW: u8 = 0;
pub const VERSION_V1: u8 = 1;
pub const VERSION_V2: u8 = 2;
pub const VERSION_ONLINE: u8 = 3;

/// Offline body format selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    V1,
    V2,
    /// v1 when the order is 1, v2 otherwise.
    #[default]
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Offline,
    Online,
}

/// Compression options for the high-level entry points.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub order: usize,
    pub mode: Mode,
    pub format: Format,
    /// Worker count for the offline encoder; 1 = sequential.
    pub threads: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            order: 1,
            mode: Mode::Offline,
            format: Format::Auto,
            threads: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub version: u8,
    pub order: u8,
    pub original_len: u64,
}

fn write_envelope(out: &mut Vec<u8>, env: &Envelope) {
    out.extend_from_slice(&MAGIC);
    out.push(env.version);
    out.push(env.order);
    out.extend_from_slice(&env.original_len.to_le_bytes());
}

pub fn read_envelope(data: &[u8]) -> Result<Envelope> {
    if data.len() < ENVELOPE_LEN {
        return Err(Error::Corrupt("file shorter than envelope".into()));
    }
    if data[..2] != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:02x} {:02x}",
            data[0], data[1]
        )));
    }
    let version = data[2];
    if version > VERSION_ONLINE {
        return Err(Error::Format(format!("unknown version {version}")));
    }
    Ok(Envelope {
        version,
        order: data[3],
        original_len: u64::from_le_bytes(data[4..12].try_into().unwrap()),
    })
}

// ---------------------------------------------------------------------------
// Fixed-width codeword encoding (field Z8)
// ---------------------------------------------------------------------------

/// Packs a codeword of length 1..=maxlc into exactly maxlc+1 bits.
///
/// With B the codeword's first bit: a full-length codeword is written as
/// B then the codeword; a shorter one as B, a run of complement(B) filling
/// the slack, then the codeword.
pub fn encode_codeword_fixed(cw: &Bits, maxlc: usize) -> Bits {
    assert!(!cw.is_empty(), "cannot pack an empty codeword");
    assert!(
        cw.len() <= maxlc,
        "codeword length {} exceeds maxlc {}",
        cw.len(),
        maxlc
    );
    let first = cw.get(0);
    let mut out = Bits::with_capacity(maxlc + 1);
    out.push(first);
    for _ in 0..maxlc - cw.len() {
        out.push(!first);
    }
    out.extend(cw);
    out
}

/// Inverse of [`encode_codeword_fixed`]; the input is the full maxlc+1-bit
/// field. Total on its domain: any bit pattern decodes to some codeword.
pub fn decode_codeword_fixed(field: &Bits) -> Bits {
    assert!(field.len() >= 2, "field must be at least two bits");
    let c1 = field.get(0);
    let c2 = field.get(1);
    // j = end of the constant run starting at the second bit
    let mut j = 1;
    while j + 1 < field.len() && field.get(j + 1) == c2 {
        j += 1;
    }
    let start = if c1 == c2 || j + 1 == field.len() {
        1
    } else {
        j + 1
    };
    let mut cw = Bits::with_capacity(field.len() - start);
    for i in start..field.len() {
        cw.push(field.get(i));
    }
    cw
}

fn max_codeword_len(out: &EahnOutput) -> usize {
    out.codewords.iter().map(Bits::len).max().unwrap_or(0)
}

fn read_codewords(r: &mut BitReader<'_>, len_y: usize, maxlc: usize) -> Result<Vec<Bits>> {
    let mut codewords = Vec::with_capacity(len_y);
    for _ in 0..len_y {
        if maxlc == 0 {
            return Err(Error::Corrupt("codewords present but maxlc is 0".into()));
        }
        let field = r.read_bits(maxlc + 1)?;
        codewords.push(decode_codeword_fixed(&field));
    }
    Ok(codewords)
}

fn bitmap256(symbols: impl Iterator<Item = u8>) -> [bool; 256] {
    let mut map = [false; 256];
    for s in symbols {
        map[s as usize] = true;
    }
    map
}

fn ones(map: &[bool; 256]) -> Vec<u8> {
    (0..=255u8).filter(|&s| map[s as usize]).collect()
}

// ---------------------------------------------------------------------------
// v1 body (order 1)
// ---------------------------------------------------------------------------

/// Serializes an order-1 output as the Z1..Z9 body inside an envelope.
pub fn serialize_v1(out: &EahnOutput) -> Vec<u8> {
    assert_eq!(out.order(), 1, "v1 body requires order 1");
    let contexts = ones(&bitmap256(out.occurrence.keys().map(|ctx| ctx[0])));
    let followers = ones(&bitmap256(
        out.occurrence.values().flat_map(|f| f.iter().copied()),
    ));
    let maxlc = max_codeword_len(out);
    let variable = (followers.len() * contexts.len()
        + out.codewords.len() * (maxlc + 1)
        + out.payload.len()) as u64;
    let pad = (8 - (variable % 8) as usize) % 8;

    let mut w = BitWriter::new();
    w.write_value(pad as u64, 8); // Z1
    w.write_value(0, pad); // Z2
    w.write_value(out.prefix[0] as u64, 8); // Z3
    w.write_value(maxlc as u64, 8); // Z4
    for bit in bitmap256(contexts.iter().copied()) {
        w.write_bit(bit); // Z5
    }
    for bit in bitmap256(followers.iter().copied()) {
        w.write_bit(bit); // Z6
    }
    for &ctx in &contexts {
        // Z7: context-major occurrence matrix
        let follower_set = out
            .occurrence
            .get([ctx].as_slice())
            .expect("context present");
        for &fol in &followers {
            w.write_bit(follower_set.contains(&fol));
        }
    }
    for cw in &out.codewords {
        // Z8
        w.write_bits(&encode_codeword_fixed(cw, maxlc));
    }
    w.write_bits(&out.payload); // Z9

    let mut file = Vec::new();
    write_envelope(
        &mut file,
        &Envelope {
            version: VERSION_V1,
            order: 1,
            original_len: out.original_len,
        },
    );
    file.extend_from_slice(&w.into_bytes());
    file
}

fn parse_v1_body(body: &[u8], env: &Envelope) -> Result<EahnOutput> {
    let mut r = BitReader::new(body);
    let pad = r.read_value(8)? as usize;
    if pad > 7 {
        return Err(Error::Corrupt(format!("padding count {pad} exceeds 7")));
    }
    r.read_value(pad)?;
    let first_symbol = r.read_value(8)? as u8;
    let maxlc = r.read_value(8)? as usize;
    let mut contexts = Vec::new();
    for s in 0..=255u8 {
        if r.read_bit()? {
            contexts.push(s);
        }
    }
    let mut followers = Vec::new();
    for s in 0..=255u8 {
        if r.read_bit()? {
            followers.push(s);
        }
    }

    let mut occurrence: BTreeMap<Vec<u8>, BTreeSet<u8>> = BTreeMap::new();
    let mut len_y = 0usize;
    for &ctx in &contexts {
        let mut set = BTreeSet::new();
        for &fol in &followers {
            if r.read_bit()? {
                set.insert(fol);
            }
        }
        if set.is_empty() {
            return Err(Error::Corrupt(format!(
                "context 0x{ctx:02x} flagged but has no followers"
            )));
        }
        if set.len() >= 2 {
            len_y += set.len();
        }
        occurrence.insert(vec![ctx], set);
    }

    let codewords = read_codewords(&mut r, len_y, maxlc)?;
    let payload = r.read_bits(r.remaining())?;
    Ok(EahnOutput {
        prefix: vec![first_symbol],
        occurrence,
        codewords,
        payload,
        original_len: env.original_len,
    })
}

// ---------------------------------------------------------------------------
// v2 body (any order)
// ---------------------------------------------------------------------------

/// Serializes an output of any order n. Body layout:
///
/// ```text
/// pad count (8) | pad zeros | prefix symbols (n*8) | context count (32)
/// per context ascending: n raw symbols (n*8) + follower bitmap (256)
/// MAXLC (8) | LenY*(MAXLC+1) codeword bits | payload
/// ```
///
/// The prefix field plays Z3's role for n > 1: the first n symbols cannot
/// be recovered from the context set alone.
pub fn serialize_v2(out: &EahnOutput) -> Vec<u8> {
    let n = out.order();
    assert!((1..=255).contains(&n), "order {n} out of range");
    let maxlc = max_codeword_len(out);
    let nc = out.occurrence.len();
    let variable =
        (nc * (n * 8 + 256) + out.codewords.len() * (maxlc + 1) + out.payload.len()) as u64;
    // pad byte, prefix, count and maxlc fields are whole bytes already
    let pad = (8 - (variable % 8) as usize) % 8;

    let mut w = BitWriter::new();
    w.write_value(pad as u64, 8);
    w.write_value(0, pad);
    for &sym in &out.prefix {
        w.write_value(sym as u64, 8);
    }
    w.write_value(nc as u64, 32);
    for (ctx, follower_set) in &out.occurrence {
        for &sym in ctx {
            w.write_value(sym as u64, 8);
        }
        for bit in bitmap256(follower_set.iter().copied()) {
            w.write_bit(bit);
        }
    }
    w.write_value(maxlc as u64, 8);
    for cw in &out.codewords {
        w.write_bits(&encode_codeword_fixed(cw, maxlc));
    }
    w.write_bits(&out.payload);

    let mut file = Vec::new();
    write_envelope(
        &mut file,
        &Envelope {
            version: VERSION_V2,
            order: n as u8,
            original_len: out.original_len,
        },
    );
    file.extend_from_slice(&w.into_bytes());
    file
}

fn parse_v2_body(body: &[u8], env: &Envelope) -> Result<EahnOutput> {
    let n = env.order as usize;
    if n == 0 {
        return Err(Error::Corrupt("v2 container with order 0".into()));
    }
    let mut r = BitReader::new(body);
    let pad = r.read_value(8)? as usize;
    if pad > 7 {
        return Err(Error::Corrupt(format!("padding count {pad} exceeds 7")));
    }
    r.read_value(pad)?;
    let mut prefix = Vec::with_capacity(n);
    for _ in 0..n {
        prefix.push(r.read_value(8)? as u8);
    }
    let nc = r.read_value(32)? as usize;

    let mut occurrence: BTreeMap<Vec<u8>, BTreeSet<u8>> = BTreeMap::new();
    let mut len_y = 0usize;
    let mut previous: Option<Vec<u8>> = None;
    for _ in 0..nc {
        let mut ctx = Vec::with_capacity(n);
        for _ in 0..n {
            ctx.push(r.read_value(8)? as u8);
        }
        if previous.as_ref().is_some_and(|prev| *prev >= ctx) {
            return Err(Error::Corrupt("contexts not strictly ascending".into()));
        }
        previous = Some(ctx.clone());
        let mut set = BTreeSet::new();
        for s in 0..=255u8 {
            if r.read_bit()? {
                set.insert(s);
            }
        }
        if set.is_empty() {
            return Err(Error::Corrupt(format!(
                "context {ctx:02x?} has no followers"
            )));
        }
        if set.len() >= 2 {
            len_y += set.len();
        }
        occurrence.insert(ctx, set);
    }

    let maxlc = r.read_value(8)? as usize;
    let codewords = read_codewords(&mut r, len_y, maxlc)?;
    let payload = r.read_bits(r.remaining())?;
    Ok(EahnOutput {
        prefix,
        occurrence,
        codewords,
        payload,
        original_len: env.original_len,
    })
}

// ---------------------------------------------------------------------------
// raw body
// ---------------------------------------------------------------------------

/// Raw literal container: the input bytes verbatim. Used when the input is
/// shorter than the order or when encoding would expand past this size.
pub fn serialize_raw(data: &[u8]) -> Vec<u8> {
    let mut file = Vec::with_capacity(ENVELOPE_LEN + data.len());
    write_envelope(
        &mut file,
        &Envelope {
            version: VERSION_RAW,
            order: 0,
            original_len: data.len() as u64,
        },
    );
    file.extend_from_slice(data);
    file
}

pub fn parse_raw(file: &[u8]) -> Result<Vec<u8>> {
    let env = read_envelope(file)?;
    if env.version != VERSION_RAW {
        return Err(Error::Format(format!(
            "expected raw container, found version {}",
            env.version
        )));
    }
    let body = &file[ENVELOPE_LEN..];
    if body.len() as u64 != env.original_len {
        return Err(Error::Corrupt(format!(
            "raw body is {} bytes, envelope says {}",
            body.len(),
            env.original_len
        )));
    }
    Ok(body.to_vec())
}

// ---------------------------------------------------------------------------
// online body
// ---------------------------------------------------------------------------

/// Online stream container: pad count byte, pad zeros, then the stream bits.
pub fn serialize_online(stream: &Bits, order: usize, original_len: u64) -> Vec<u8> {
    assert!((1..=255).contains(&order), "order {order} out of range");
    let pad = (8 - stream.len() % 8) % 8;
    let mut w = BitWriter::new();
    w.write_value(pad as u64, 8);
    w.write_value(0, pad);
    w.write_bits(stream);

    let mut file = Vec::new();
    write_envelope(
        &mut file,
        &Envelope {
            version: VERSION_ONLINE,
            order: order as u8,
            original_len,
        },
    );
    file.extend_from_slice(&w.into_bytes());
    file
}

fn parse_online_body(body: &[u8]) -> Result<Bits> {
    let mut r = BitReader::new(body);
    let pad = r.read_value(8)? as usize;
    if pad > 7 {
        return Err(Error::Corrupt(format!("padding count {pad} exceeds 7")));
    }
    r.read_value(pad)?;
    r.read_bits(r.remaining())
}

// ---------------------------------------------------------------------------
// High-level compress / decompress
// ---------------------------------------------------------------------------

/// Serializes an offline output, resolving the format against its order.
/// A v1 request for an output of higher order routes to v2.
pub fn serialize(out: &EahnOutput, format: Format) -> Vec<u8> {
    match format {
        Format::V1 | Format::Auto if out.order() == 1 => serialize_v1(out),
        _ => serialize_v2(out),
    }
}

/// Parses any offline container back into the encoder's output tuple.
pub fn parse(file: &[u8]) -> Result<EahnOutput> {
    let env = read_envelope(file)?;
    let body = &file[ENVELOPE_LEN..];
    match env.version {
        VERSION_V1 => parse_v1_body(body, &env),
        VERSION_V2 => parse_v2_body(body, &env),
        v => Err(Error::Format(format!(
            "version {v} is not an offline container"
        ))),
    }
}

/// Compresses `data` into a self-describing container.
///
/// Falls back to the raw container whenever the selected mode would produce
/// a larger file, bounding worst-case expansion to the envelope size.
pub fn compress(data: &[u8], opts: &Options) -> Vec<u8> {
    assert!((1..=255).contains(&opts.order), "order out of range");
    let candidate = match opts.mode {
        Mode::Offline if data.len() >= opts.order => {
            let out = if opts.threads > 1 {
                eahn_encode_parallel(data, opts.order, opts.threads)
            } else {
                eahn_encode(data, opts.order)
            };
            Some(serialize(&out, opts.format))
        }
        Mode::Online => {
            let stream = online_encode(data, opts.order);
            Some(serialize_online(&stream, opts.order, data.len() as u64))
        }
        _ => None,
    };
    match candidate {
        Some(file) if file.len() <= ENVELOPE_LEN + data.len() => file,
        _ => serialize_raw(data),
    }
}

/// Decompresses any container produced by [`compress`], dispatching on the
/// envelope.
pub fn decompress(file: &[u8]) -> Result<Vec<u8>> {
    let env = read_envelope(file)?;
    match env.version {
        VERSION_RAW => parse_raw(file),
        VERSION_V1 | VERSION_V2 => eahn_decode(&parse(file)?),
        VERSION_ONLINE => {
            let stream = parse_online_body(&file[ENVELOPE_LEN..])?;
            online_decode(&stream, env.order as usize, env.original_len)
        }
        _ => unreachable!("read_envelope validates the version"),
    }
}

// ---------------------------------------------------------------------------
// Inspection
// ---------------------------------------------------------------------------

/// Decoded view of a v1 container's fields, for inspection and tests.
#[derive(Clone, Debug)]
pub struct V1Fields {
    pub original_len: u64,
    pub pad_bits: u8,
    pub first_symbol: u8,
    pub maxlc: u8,
    /// Symbols set in the context bitmap (Z5).
    pub context_symbols: Vec<u8>,
    /// Symbols set in the follower bitmap (Z6).
    pub follower_symbols: Vec<u8>,
    pub codeword_count: u64,
    pub payload_bits: u64,
}

impl V1Fields {
    /// Field widths in bits, Z1..Z9 in order.
    pub fn widths(&self) -> [u64; 9] {
        let nc = self.context_symbols.len() as u64;
        let nl = self.follower_symbols.len() as u64;
        [
            8,
            self.pad_bits as u64,
            8,
            8,
            256,
            256,
            nl * nc,
            self.codeword_count * (self.maxlc as u64 + 1),
            self.payload_bits,
        ]
    }

    pub fn total_bits(&self) -> u64 {
        self.widths().iter().sum()
    }
}

/// Reads a v1 container's field layout without decoding the payload.
pub fn inspect_v1(file: &[u8]) -> Result<V1Fields> {
    let env = read_envelope(file)?;
    if env.version != VERSION_V1 {
        return Err(Error::Format(format!(
            "inspect expects a v1 container, found version {}",
            env.version
        )));
    }
    let out = parse_v1_body(&file[ENVELOPE_LEN..], &env)?;
    let contexts = ones(&bitmap256(out.occurrence.keys().map(|ctx| ctx[0])));
    let followers = ones(&bitmap256(
        out.occurrence.values().flat_map(|f| f.iter().copied()),
    ));
    Ok(V1Fields {
        original_len: env.original_len,
        // Z1 is the first body byte
        pad_bits: file[ENVELOPE_LEN],
        first_symbol: out.prefix[0],
        maxlc: max_codeword_len(&out) as u8,
        context_symbols: contexts,
        follower_symbols: followers,
        codeword_count: out.codewords.len() as u64,
        payload_bits: out.payload_bits(),
    })
}
