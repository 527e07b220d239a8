//! Per-context entropy and rate analysis.
//!
//! The payload rate of the codec decomposes over contexts: each context i
//! contributes N(i) positions encoded by its own Huffman code, so the
//! classical entropy/rate bounds apply within every context independently.
//! The report carries both the plain sum of per-context entropies and the
//! position-weighted mean; only the weighted form bounds the payload size
//! (`Σ N(i)·E_i ≤ |Z| ≤ Σ N(i)·(E_i + 1)`).

use std::fmt::Write as _;

use crate::codec::scan_frequencies;
use crate::huffman::{entropy_h, huffman_lengths};

/// Slack for floating-point comparisons of entropies and rates.
pub const ENTROPY_SLACK: f64 = 1e-9;

/// One context's follower statistics and realized code cost.
#[derive(Clone, Debug)]
pub struct ContextEntropyRecord {
    pub context: Vec<u8>,
    /// Distinct followers, ascending (C(i)).
    pub followers: Vec<u8>,
    /// Follower frequencies, aligned with `followers` (F(i,j)).
    pub frequencies: Vec<u64>,
    /// Realized codeword lengths, aligned with `followers`; all zero for a
    /// single-follower context.
    pub lengths: Vec<u32>,
    /// Number of positions encoded under this context (N(i)).
    pub positions: u64,
    /// Follower entropy in bits per position (E_i).
    pub entropy: f64,
    /// Realized bits per position (R_i).
    pub rate: f64,
}

impl ContextEntropyRecord {
    /// Recomputes the realized rate from frequencies and lengths.
    pub fn realized_rate(&self) -> f64 {
        rate_from(&self.frequencies, &self.lengths, self.positions)
    }
}

fn rate_from(frequencies: &[u64], lengths: &[u32], positions: u64) -> f64 {
    let bits: u64 = frequencies
        .iter()
        .zip(lengths)
        .map(|(&f, &l)| f * l as u64)
        .sum();
    bits as f64 / positions as f64
}

/// Entropy and rate figures for one input under one context order.
#[derive(Clone, Debug, Default)]
pub struct EntropyReport {
    pub order: usize,
    pub original_len: u64,
    pub records: Vec<ContextEntropyRecord>,
    /// Plain sum of per-context entropies.
    pub entropy_sum: f64,
    /// Position-weighted mean entropy `Σ N(i)E_i / Σ N(i)`.
    pub weighted_entropy: f64,
    /// Payload bits the codec will emit for this input.
    pub payload_bits: u64,
    /// Payload rate in bits per input symbol (payload bits / t).
    pub payload_rate: f64,
}

impl EntropyReport {
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Human-readable rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "order {}  length {}  contexts {}",
            self.order,
            self.original_len,
            self.records.len()
        );
        let _ = writeln!(
            out,
            "entropy sum {:.5}  weighted entropy {:.5}  payload {} bits  rate {:.5} bits/sym",
            self.entropy_sum, self.weighted_entropy, self.payload_bits, self.payload_rate
        );
        out
    }

    /// One machine-readable line per context: context, N, E, R.
    pub fn render_lines(&self) -> String {
        let mut out = String::new();
        for rec in &self.records {
            let hex: String = rec.context.iter().map(|b| format!("{b:02x}")).collect();
            let _ = writeln!(
                out,
                "ctx={hex} n={} e={:.6} r={:.6}",
                rec.positions, rec.entropy, rec.rate
            );
        }
        out
    }
}

/// Compression rate in bits per symbol: output bits over input length.
pub fn compression_rate(compressed_bits: u64, t: u64) -> f64 {
    assert!(t >= 1, "rate undefined for empty input");
    compressed_bits as f64 / t as f64
}

/// Analyzes `x` under order `n` without encoding it. Inputs no longer than
/// `n` produce an empty report.
pub fn eahn_entropy(x: &[u8], n: usize) -> EntropyReport {
    if x.len() <= n {
        return EntropyReport {
            order: n,
            original_len: x.len() as u64,
            ..EntropyReport::default()
        };
    }

    let model = scan_frequencies(x, n);
    let mut records = Vec::with_capacity(model.context_count());
    for (ctx, follower_counts) in model.contexts() {
        let followers: Vec<u8> = follower_counts.keys().copied().collect();
        let frequencies: Vec<u64> = follower_counts.values().copied().collect();
        let positions: u64 = frequencies.iter().sum();
        let entropy = entropy_h(&frequencies, positions);
        let lengths = if followers.len() >= 2 {
            huffman_lengths(&frequencies)
        } else {
            vec![0]
        };
        let rate = rate_from(&frequencies, &lengths, positions);
        records.push(ContextEntropyRecord {
            context: ctx.to_vec(),
            followers,
            frequencies,
            lengths,
            positions,
            entropy,
            rate,
        });
    }

    let total_positions: u64 = records.iter().map(|r| r.positions).sum();
    let entropy_sum: f64 = records.iter().map(|r| r.entropy).sum();
    let weighted_entropy = records
        .iter()
        .map(|r| r.positions as f64 * r.entropy)
        .sum::<f64>()
        / total_positions as f64;
    let payload_bits: u64 = records
        .iter()
        .map(|r| {
            r.frequencies
                .iter()
                .zip(&r.lengths)
                .map(|(&f, &l)| f * l as u64)
                .sum::<u64>()
        })
        .sum();

    EntropyReport {
        order: n,
        original_len: x.len() as u64,
        records,
        entropy_sum,
        weighted_entropy,
        payload_bits,
        payload_rate: compression_rate(payload_bits, x.len() as u64),
    }
}

/// A context whose realized rate escapes the one-bit entropy envelope.
#[derive(Clone, Debug)]
pub struct BoundViolation {
    pub context: Vec<u8>,
    pub entropy: f64,
    pub rate: f64,
}

/// Checks `E_i ≤ R_i ≤ E_i + 1` for every multi-follower context, with the
/// rate recomputed from the attached lengths. Empty iff all bounds hold.
pub fn check_context_bounds(report: &EntropyReport) -> Vec<BoundViolation> {
    let mut violations = Vec::new();
    for rec in &report.records {
        if rec.followers.len() < 2 {
            continue;
        }
        let rate = rec.realized_rate();
        if rate + ENTROPY_SLACK < rec.entropy || rate > rec.entropy + 1.0 + ENTROPY_SLACK {
            violations.push(BoundViolation {
                context: rec.context.clone(),
                entropy: rec.entropy,
                rate,
            });
        }
    }
    violations
}
