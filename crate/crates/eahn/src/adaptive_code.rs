//! Adaptive variable-length codes of order n as explicit tables.
//!
//! An order-n adaptive code maps a (symbol, context) pair to a codeword,
//! where the context is the up-to-n symbols preceding the one being
//! encoded. The extension encoder concatenates per-position codewords;
//! a table is a valid code when the extension is injective, for which
//! per-context prefix-freeness is a sufficient condition.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Ordered set of distinct symbol values, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
}

impl Alphabet {
    pub fn new(mut symbols: Vec<u8>) -> Result<Self> {
        symbols.sort_unstable();
        let before = symbols.len();
        symbols.dedup();
        if symbols.len() != before {
            return Err(Error::Format("alphabet symbols must be distinct".into()));
        }
        if symbols.is_empty() {
            return Err(Error::Format("alphabet must be nonempty".into()));
        }
        Ok(Self { symbols })
    }

    /// The full byte alphabet 0x00..=0xFF.
    pub fn bytes() -> Self {
        Self {
            symbols: (0..=255).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false: the constructor rejects empty symbol sets.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }
}

/// Explicit mapping (symbol, context) -> codeword.
///
/// Hand-authored tables are total over symbol × context; tables generated
/// by the codec are partial, with absent entries standing for the empty
/// codeword. Stored codewords are always nonempty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdaptiveCodeTable {
    order: usize,
    entries: BTreeMap<(Vec<u8>, u8), Bits>,
}

impl AdaptiveCodeTable {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "order must be positive");
        Self {
            order,
            entries: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn insert(&mut self, symbol: u8, context: &[u8], codeword: Bits) {
        assert!(
            context.len() <= self.order,
            "context length {} exceeds order {}",
            context.len(),
            self.order
        );
        assert!(!codeword.is_empty(), "stored codewords must be nonempty");
        self.entries.insert((context.to_vec(), symbol), codeword);
    }

    pub fn get(&self, symbol: u8, context: &[u8]) -> Option<&Bits> {
        self.entries.get(&(context.to_vec(), symbol))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in (context, symbol) ascending order.
    pub fn entries(&self) -> impl Iterator<Item = (&[u8], u8, &Bits)> {
        self.entries
            .iter()
            .map(|((ctx, sym), cw)| (ctx.as_slice(), *sym, cw))
    }

    /// Distinct symbols appearing in the table keys, ascending.
    pub fn symbols(&self) -> Vec<u8> {
        let mut syms: Vec<u8> = self.entries.keys().map(|(_, s)| *s).collect();
        syms.sort_unstable();
        syms.dedup();
        syms
    }

    /// Concatenation of per-position codewords: position i is encoded under
    /// the context of the preceding min(i, n) symbols.
    ///
    /// Errors if some required (symbol, context) pair has no entry; a partial
    /// table never silently contributes an empty codeword here.
    pub fn encode_extension(&self, input: &[u8]) -> Result<Bits> {
        let mut out = Bits::new();
        for (i, &sym) in input.iter().enumerate() {
            let start = i.saturating_sub(self.order);
            let context = &input[start..i];
            match self.get(sym, context) {
                Some(cw) => out.extend(cw),
                None => {
                    return Err(Error::MissingTableEntry {
                        symbol: sym,
                        context: context.to_vec(),
                    })
                }
            }
        }
        Ok(out)
    }

    /// True iff every per-context codeword set is a prefix code
    /// (pairwise distinct, none a proper prefix of another).
    ///
    /// A true result is sufficient for the extension to be injective.
    pub fn verify_prefix_contexts(&self) -> bool {
        let mut current: Option<&[u8]> = None;
        let mut group: Vec<&Bits> = Vec::new();
        for ((ctx, _), cw) in &self.entries {
            if current != Some(ctx.as_slice()) {
                if !is_prefix_code(&group) {
                    return false;
                }
                group.clear();
                current = Some(ctx.as_slice());
            }
            group.push(cw);
        }
        is_prefix_code(&group)
    }

    /// The table's own symbol set as an alphabet; `None` for an empty table.
    pub fn alphabet(&self) -> Option<Alphabet> {
        let symbols = self.symbols();
        if symbols.is_empty() {
            None
        } else {
            Some(Alphabet::new(symbols).expect("table symbols are distinct"))
        }
    }

    /// Bounded oracle for injectivity of the extension: encodes every string
    /// of length <= `max_len` over the table's own alphabet and checks for
    /// collisions. Intended for desk-scale alphabets only; a guard rejects
    /// enumerations past ~4 million strings.
    pub fn check_injectivity_bruteforce(&self, max_len: usize) -> Result<bool> {
        const LIMIT: u128 = 1 << 22;
        let Some(alphabet) = self.alphabet() else {
            return Ok(true); // only the empty string is encodable
        };
        let p = alphabet.len() as u128;
        let mut states: u128 = 0;
        let mut pow: u128 = 1;
        for _ in 0..=max_len {
            states += pow;
            pow = pow.saturating_mul(p);
            if states > LIMIT {
                return Err(Error::EnumerationTooLarge {
                    states,
                    limit: LIMIT,
                });
            }
        }

        let mut seen: BTreeMap<Bits, Vec<u8>> = BTreeMap::new();
        let mut input: Vec<u8> = Vec::new();
        loop {
            let encoded = self.encode_extension(&input)?;
            if let Some(other) = seen.get(&encoded) {
                if *other != input {
                    return Ok(false);
                }
            } else {
                seen.insert(encoded, input.clone());
            }
            if !next_string(&mut input, alphabet.symbols(), max_len) {
                return Ok(true);
            }
        }
    }

    /// Parses the plain-text table format:
    ///
    /// ```text
    /// a b -            header: one context per column, "-" for the empty context
    /// a 010 110 11     one line per symbol: codeword per context, "-" for none
    /// b 011 0 01
    /// ```
    pub fn from_fixture_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty table fixture".into()))?;
        let contexts: Vec<Vec<u8>> = header.split_whitespace().map(parse_context).collect();
        if contexts.is_empty() {
            return Err(Error::Format("table fixture has no context columns".into()));
        }
        let order = contexts.iter().map(Vec::len).max().unwrap().max(1);

        let mut table = AdaptiveCodeTable::new(order);
        for line in lines {
            let mut tokens = line.split_whitespace();
            let symbol = parse_symbol(tokens.next().unwrap())?;
            let codewords: Vec<&str> = tokens.collect();
            if codewords.len() != contexts.len() {
                return Err(Error::Format(format!(
                    "row for symbol {:?} has {} codewords, expected {}",
                    symbol as char,
                    codewords.len(),
                    contexts.len()
                )));
            }
            for (context, token) in contexts.iter().zip(codewords) {
                if token == "-" {
                    continue;
                }
                table.insert(symbol, context, token.parse()?);
            }
        }
        Ok(table)
    }

    pub fn load_fixture(path: &Path) -> Result<Self> {
        Self::from_fixture_str(&std::fs::read_to_string(path)?)
    }
}

impl fmt::Display for AdaptiveCodeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (ctx, sym, cw) in self.entries() {
            let ctx_str = if ctx.is_empty() {
                "-".to_string()
            } else {
                ctx.iter().map(|&b| b as char).collect()
            };
            writeln!(f, "{} | {} -> {}", sym as char, ctx_str, cw)?;
        }
        Ok(())
    }
}

fn is_prefix_code(codewords: &[&Bits]) -> bool {
    for (i, a) in codewords.iter().enumerate() {
        for b in &codewords[i + 1..] {
            if a == b || a.is_proper_prefix_of(b) || b.is_proper_prefix_of(a) {
                return false;
            }
        }
    }
    true
}

/// Advances `input` to the next string in (length, lexicographic-by-symbol)
/// order over `symbols`, up to `max_len`. Returns false after the last one.
fn next_string(input: &mut Vec<u8>, symbols: &[u8], max_len: usize) -> bool {
    for slot in input.iter_mut().rev() {
        let idx = symbols.iter().position(|s| s == slot).unwrap();
        if idx + 1 < symbols.len() {
            *slot = symbols[idx + 1];
            return true;
        }
        *slot = symbols[0];
    }
    // carry ran off the end: every slot is back at the first symbol
    if input.len() < max_len {
        input.push(symbols[0]);
        return true;
    }
    false
}

fn parse_context(token: &str) -> Vec<u8> {
    if token == "-" {
        Vec::new()
    } else {
        token.bytes().collect()
    }
}

fn parse_symbol(token: &str) -> Result<u8> {
    if let Some(hex) = token.strip_prefix("0x") {
        return u8::from_str_radix(hex, 16)
            .map_err(|_| Error::Format(format!("bad symbol token {token:?}")));
    }
    let bytes = token.as_bytes();
    if bytes.len() == 1 {
        Ok(bytes[0])
    } else {
        Err(Error::Format(format!("bad symbol token {token:?}")))
    }
}
