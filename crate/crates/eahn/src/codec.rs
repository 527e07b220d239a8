//! Offline context-conditioned Huffman codec.
//!
//! Encoding runs in three passes over the input `x = x₁…x_t`:
//!
//! 1. scan: count, for every position past the first n, how often each
//!    symbol follows each n-symbol context;
//! 2. codebook: give every context with two or more distinct followers its
//!    own canonical Huffman code over the follower frequencies; a context
//!    with a single follower encodes that follower in zero bits;
//! 3. emit: the output is the 4-tuple (first n symbols, occurrence flags,
//!    codeword list Y, payload Z), where Z concatenates the codeword of
//!    each position's symbol under its context.
//!
//! The decoder rebuilds the codebook from the occurrence flags and Y alone:
//! contexts and followers are enumerated in ascending order, so codewords
//! re-associate positionally without access to the frequencies.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::adaptive_code::AdaptiveCodeTable;
use crate::bits::{BitCursor, Bits};
use crate::error::{Error, Result};
use crate::huffman::build_huffman;

/// Follower occurrence flags and frequencies per n-symbol context.
///
/// Storage is sparse: only contexts that occur in the input are present.
/// Context iteration order is ascending lexicographic over symbol values,
/// which fixes the global codeword order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContextModel {
    order: usize,
    contexts: BTreeMap<Vec<u8>, BTreeMap<u8, u64>>,
}

impl ContextModel {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn context_count(&self) -> usize {
        self.contexts.len()
    }

    /// (context, follower counts) in ascending context order.
    pub fn contexts(&self) -> impl Iterator<Item = (&[u8], &BTreeMap<u8, u64>)> {
        self.contexts.iter().map(|(ctx, f)| (ctx.as_slice(), f))
    }

    pub fn follower_counts(&self, context: &[u8]) -> Option<&BTreeMap<u8, u64>> {
        self.contexts.get(context)
    }

    /// Occurrence flag: true iff `symbol` was seen at least once after `context`.
    pub fn occurrence(&self, symbol: u8, context: &[u8]) -> bool {
        self.contexts
            .get(context)
            .is_some_and(|f| f.contains_key(&symbol))
    }

    /// Total frequency mass; equals `t - n` for an input of length t.
    pub fn total_count(&self) -> u64 {
        self.contexts.values().flat_map(|f| f.values()).sum()
    }
}

/// Counts follower occurrences for every position i in n+1..=t.
pub fn scan_frequencies(x: &[u8], n: usize) -> ContextModel {
    assert!(n >= 1, "order must be positive");
    assert!(x.len() >= n, "input shorter than the order");
    if n == 1 {
        return scan_order1(x);
    }
    if n <= PACK_LIMIT {
        return scan_packed(x, n);
    }
    let mut contexts: BTreeMap<Vec<u8>, BTreeMap<u8, u64>> = BTreeMap::new();
    for i in n..x.len() {
        let window = &x[i - n..i];
        match contexts.get_mut(window) {
            Some(followers) => *followers.entry(x[i]).or_insert(0) += 1,
            None => {
                let mut followers = BTreeMap::new();
                followers.insert(x[i], 1);
                contexts.insert(window.to_vec(), followers);
            }
        }
    }
    ContextModel { order: n, contexts }
}

/// Contexts up to this many symbols pack into a rolling u64 key.
const PACK_LIMIT: usize = 8;

fn pack_mask(n: usize) -> u64 {
    debug_assert!((1..=PACK_LIMIT).contains(&n));
    if n == PACK_LIMIT {
        u64::MAX
    } else {
        (1 << (8 * n)) - 1
    }
}

fn pack_context(ctx: &[u8]) -> u64 {
    ctx.iter().fold(0u64, |key, &b| key << 8 | b as u64)
}

fn unpack_context(key: u64, n: usize) -> Vec<u8> {
    key.to_be_bytes()[8 - n..].to_vec()
}

/// Scan with contexts packed big-endian into u64 keys; packing preserves
/// lexicographic order for fixed-length contexts, so sorting the keys
/// recovers ascending context order.
fn scan_packed(x: &[u8], n: usize) -> ContextModel {
    let mask = pack_mask(n);
    let mut counts: HashMap<u64, BTreeMap<u8, u64>> = HashMap::new();
    let mut key = pack_context(&x[..n]);
    for &sym in &x[n..] {
        *counts.entry(key).or_default().entry(sym).or_insert(0) += 1;
        key = (key << 8 | sym as u64) & mask;
    }
    let contexts = counts
        .into_iter()
        .map(|(key, followers)| (unpack_context(key, n), followers))
        .collect();
    ContextModel { order: n, contexts }
}

/// Order-1 scan over a dense 256x256 count table.
fn scan_order1(x: &[u8]) -> ContextModel {
    let mut counts = vec![0u64; 256 * 256];
    for w in x.windows(2) {
        counts[(w[0] as usize) << 8 | w[1] as usize] += 1;
    }
    let mut contexts = BTreeMap::new();
    for ctx in 0..256usize {
        let row = &counts[ctx << 8..(ctx + 1) << 8];
        let followers: BTreeMap<u8, u64> = row
            .iter()
            .enumerate()
            .filter(|&(_, &count)| count > 0)
            .map(|(sym, &count)| (sym as u8, count))
            .collect();
        if !followers.is_empty() {
            contexts.insert(vec![ctx as u8], followers);
        }
    }
    ContextModel { order: 1, contexts }
}

/// Canonical Huffman codewords for one context's follower counts, in
/// ascending follower order. `None` when the context has fewer than two
/// followers (its single follower costs zero bits).
pub(crate) fn context_codewords(followers: &BTreeMap<u8, u64>) -> Option<Vec<Bits>> {
    if followers.len() < 2 {
        return None;
    }
    let freqs: Vec<u64> = followers.values().copied().collect();
    Some(build_huffman(&freqs))
}

/// Per-context code assignment for a scanned model, as a partial adaptive
/// code table: only followers of multi-follower contexts get entries.
pub fn build_codebook(model: &ContextModel) -> AdaptiveCodeTable {
    let mut table = AdaptiveCodeTable::new(model.order());
    for (ctx, followers) in model.contexts() {
        if let Some(words) = context_codewords(followers) {
            for (&sym, cw) in followers.keys().zip(words) {
                table.insert(sym, ctx, cw);
            }
        }
    }
    table
}

/// The encoder's output 4-tuple plus the original length.
///
/// `codewords` (Y) lists every assigned codeword in (context ascending,
/// follower ascending) order; `payload` (Z) is the concatenated encoding of
/// positions n+1..=t. The original length is carried explicitly: contexts
/// with a single follower emit zero bits, so the payload alone cannot
/// delimit inputs such as a run of one repeated byte.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EahnOutput {
    /// First n symbols, stored verbatim.
    pub prefix: Vec<u8>,
    /// Follower occurrence flags: context -> set of symbols seen after it.
    pub occurrence: BTreeMap<Vec<u8>, BTreeSet<u8>>,
    /// All nonempty codewords, context-major, followers ascending (Y).
    pub codewords: Vec<Bits>,
    /// Concatenated per-position codewords (Z).
    pub payload: Bits,
    /// Original input length t in symbols.
    pub original_len: u64,
}

impl EahnOutput {
    pub fn order(&self) -> usize {
        self.prefix.len()
    }

    /// Payload length in bits.
    pub fn payload_bits(&self) -> u64 {
        self.payload.len() as u64
    }
}

/// Encodes `x` with context order `n`. Requires `|x| >= n`; shorter inputs
/// are the caller's raw-literal case.
pub fn eahn_encode(x: &[u8], n: usize) -> EahnOutput {
    let model = scan_frequencies(x, n);
    let table = build_codebook(&model);
    assemble_output(x, n, &model, &table)
}

/// Shared final phase of the sequential and parallel encoders.
pub(crate) fn assemble_output(
    x: &[u8],
    n: usize,
    model: &ContextModel,
    table: &AdaptiveCodeTable,
) -> EahnOutput {
    let occurrence: BTreeMap<Vec<u8>, BTreeSet<u8>> = model
        .contexts()
        .map(|(ctx, followers)| (ctx.to_vec(), followers.keys().copied().collect()))
        .collect();

    // Y: table iteration is already (context, follower) ascending.
    let codewords: Vec<Bits> = table.entries().map(|(_, _, cw)| cw.clone()).collect();

    let mut payload = Bits::new();
    if n == 1 {
        // dense (context, follower) lookup for the per-byte hot loop
        let mut dense: Vec<Option<&Bits>> = vec![None; 256 * 256];
        for (ctx, sym, cw) in table.entries() {
            dense[(ctx[0] as usize) << 8 | sym as usize] = Some(cw);
        }
        for w in x.windows(2) {
            if let Some(cw) = dense[(w[0] as usize) << 8 | w[1] as usize] {
                payload.extend(cw);
            }
        }
    } else if n <= PACK_LIMIT {
        let mut lookup: HashMap<u64, Vec<(u8, &Bits)>> = HashMap::new();
        for (ctx, sym, cw) in table.entries() {
            lookup.entry(pack_context(ctx)).or_default().push((sym, cw));
        }
        let mask = pack_mask(n);
        let mut key = pack_context(&x[..n]);
        for &sym in &x[n..] {
            if let Some(entries) = lookup.get(&key) {
                if let Ok(k) = entries.binary_search_by_key(&sym, |&(s, _)| s) {
                    payload.extend(entries[k].1);
                }
            }
            key = (key << 8 | sym as u64) & mask;
        }
    } else {
        // borrowed per-context lookup: no allocation per position
        let mut lookup: BTreeMap<&[u8], Vec<(u8, &Bits)>> = BTreeMap::new();
        for (ctx, sym, cw) in table.entries() {
            lookup.entry(ctx).or_default().push((sym, cw));
        }
        for i in n..x.len() {
            if let Some(entries) = lookup.get(&x[i - n..i]) {
                if let Ok(k) = entries.binary_search_by_key(&x[i], |&(s, _)| s) {
                    payload.extend(entries[k].1);
                }
            }
        }
    }

    EahnOutput {
        prefix: x[..n].to_vec(),
        occurrence,
        codewords,
        payload,
        original_len: x.len() as u64,
    }
}

/// Per-context decoding entry rebuilt from the occurrence flags and Y.
enum ContextDecoder {
    /// Single follower: zero payload bits.
    Single(u8),
    /// Two or more followers: walk the prefix-code trie bit by bit.
    Code(PrefixTrie),
}

/// Binary trie over a prefix code; leaves carry the decoded symbol.
struct PrefixTrie {
    children: Vec<[u32; 2]>,
    symbol: Vec<i32>,
}

impl PrefixTrie {
    const NONE: u32 = u32::MAX;

    fn new() -> Self {
        Self {
            children: vec![[Self::NONE; 2]],
            symbol: vec![-1],
        }
    }

    fn insert(&mut self, codeword: &Bits, symbol: u8) -> Result<()> {
        let mut node = 0usize;
        for bit in codeword.iter() {
            if self.symbol[node] >= 0 {
                return Err(Error::Corrupt("codeword set is not prefix-free".into()));
            }
            let slot = bit as usize;
            if self.children[node][slot] == Self::NONE {
                self.children[node][slot] = self.children.len() as u32;
                self.children.push([Self::NONE; 2]);
                self.symbol.push(-1);
            }
            node = self.children[node][slot] as usize;
        }
        if self.symbol[node] >= 0 || self.children[node] != [Self::NONE; 2] {
            return Err(Error::Corrupt("codeword set is not prefix-free".into()));
        }
        self.symbol[node] = symbol as i32;
        Ok(())
    }

    fn decode(&self, cursor: &mut BitCursor<'_>) -> Result<u8> {
        let mut node = 0usize;
        loop {
            if self.symbol[node] >= 0 {
                return Ok(self.symbol[node] as u8);
            }
            let bit = cursor.read_bit()? as usize;
            let next = self.children[node][bit];
            if next == Self::NONE {
                return Err(Error::Corrupt("codeword not in context's code".into()));
            }
            node = next as usize;
        }
    }
}

/// Inverse of [`eahn_encode`]: reconstructs the input exactly.
///
/// Codewords re-associate positionally from Y — contexts ascending,
/// followers ascending, multi-follower contexts only — so no frequency
/// information is needed.
pub fn eahn_decode(out: &EahnOutput) -> Result<Vec<u8>> {
    let n = out.order();
    let t = usize::try_from(out.original_len)
        .map_err(|_| Error::Corrupt("original length exceeds address space".into()))?;
    if t < n {
        return Err(Error::Corrupt(format!(
            "original length {t} shorter than prefix {n}"
        )));
    }

    let mut decoders: Vec<ContextDecoder> = Vec::with_capacity(out.occurrence.len());
    let mut next_codeword = out.codewords.iter();
    for followers in out.occurrence.values() {
        if followers.is_empty() {
            return Err(Error::Corrupt("context with no followers".into()));
        }
        if followers.len() == 1 {
            decoders.push(ContextDecoder::Single(*followers.iter().next().unwrap()));
        } else {
            let mut trie = PrefixTrie::new();
            for &sym in followers {
                let cw = next_codeword
                    .next()
                    .ok_or_else(|| Error::Corrupt("codeword list too short".into()))?;
                trie.insert(cw, sym)?;
            }
            decoders.push(ContextDecoder::Code(trie));
        }
    }
    if next_codeword.next().is_some() {
        return Err(Error::Corrupt("codeword list too long".into()));
    }

    let mut x = Vec::with_capacity(t);
    x.extend_from_slice(&out.prefix);
    let mut cursor = BitCursor::new(&out.payload);

    let step = |decoder: Option<&ContextDecoder>,
                cursor: &mut BitCursor<'_>,
                context: &[u8]|
     -> Result<u8> {
        match decoder {
            Some(ContextDecoder::Single(sym)) => Ok(*sym),
            Some(ContextDecoder::Code(trie)) => trie.decode(cursor),
            None => Err(Error::Corrupt(format!(
                "decoded context {context:02x?} has no code"
            ))),
        }
    };

    if n <= PACK_LIMIT {
        let by_key: HashMap<u64, &ContextDecoder> = out
            .occurrence
            .keys()
            .zip(&decoders)
            .map(|(ctx, dec)| (pack_context(ctx), dec))
            .collect();
        let mask = pack_mask(n);
        let mut key = pack_context(&out.prefix);
        for i in n..t {
            let symbol = step(by_key.get(&key).copied(), &mut cursor, &x[i - n..i])?;
            x.push(symbol);
            key = (key << 8 | symbol as u64) & mask;
        }
    } else {
        let by_ctx: BTreeMap<&[u8], &ContextDecoder> = out
            .occurrence
            .keys()
            .zip(&decoders)
            .map(|(ctx, dec)| (ctx.as_slice(), dec))
            .collect();
        for i in n..t {
            let symbol = {
                let context = &x[i - n..i];
                step(by_ctx.get(context).copied(), &mut cursor, context)?
            };
            x.push(symbol);
        }
    }
    if !cursor.at_end() {
        return Err(Error::Corrupt(format!(
            "{} payload bits remain after {} symbols",
            out.payload.len() - cursor.position(),
            t
        )));
    }
    Ok(x)
}
