//! Deterministic canonical Huffman kernel over frequency tuples.
//!
//! Huffman's algorithm only pins codeword *lengths*; bit patterns and
//! tie-breaks are left open. Everything downstream (container bytes,
//! parallel encoding) needs bit-identical output for equal input, so this
//! module fixes both:
//!
//! - tree merges prefer lower weight, then earlier creation order
//!   (leaves first, leaves by index);
//! - bits are assigned canonically, sorting by (length, index).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::bits::Bits;

/// Optimal prefix codewords for a tuple of positive frequencies,
/// index-aligned with the input.
///
/// Deterministic: equal inputs give bit-identical outputs.
pub fn build_huffman(freqs: &[u64]) -> Vec<Bits> {
    canonical_codes(&huffman_lengths(freqs))
}

/// Codeword lengths of an optimal prefix code for `freqs`.
pub fn huffman_lengths(freqs: &[u64]) -> Vec<u32> {
    let h = freqs.len();
    assert!(h >= 2, "Huffman needs at least two frequencies, got {h}");
    assert!(
        freqs.iter().all(|&f| f >= 1),
        "frequencies must be positive"
    );

    // Nodes 0..h are leaves, h.. are merges in creation order; the heap
    // orders by (weight, creation index) which realizes the tie-break rule.
    let mut parent = vec![usize::MAX; 2 * h - 1];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> = freqs
        .iter()
        .enumerate()
        .map(|(i, &f)| Reverse((f, i)))
        .collect();
    let mut next = h;
    while heap.len() >= 2 {
        let Reverse((wa, a)) = heap.pop().unwrap();
        let Reverse((wb, b)) = heap.pop().unwrap();
        parent[a] = next;
        parent[b] = next;
        heap.push(Reverse((wa + wb, next)));
        next += 1;
    }

    (0..h)
        .map(|leaf| {
            let mut depth = 0;
            let mut node = leaf;
            while parent[node] != usize::MAX {
                node = parent[node];
                depth += 1;
            }
            depth
        })
        .collect()
}

/// Canonical bit assignment: indices sorted by (length, index) receive
/// increasing codes.
pub fn canonical_codes(lengths: &[u32]) -> Vec<Bits> {
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| (lengths[i], i));

    let mut words = vec![Bits::new(); lengths.len()];
    let mut code = 0u64;
    let mut prev_len = 0u32;
    for &i in &order {
        let len = lengths[i];
        assert!(len <= 64, "codeword length {len} exceeds supported width");
        if prev_len > 0 {
            code = (code + 1) << (len - prev_len);
        }
        words[i] = Bits::from_value(code, len as usize);
        prev_len = len;
    }
    words
}

/// Empirical entropy of a frequency tuple in bits per symbol:
/// `(1/t) Σ Fᵢ log₂(t/Fᵢ)` where `t` must equal `Σ Fᵢ`.
pub fn entropy_h(freqs: &[u64], t: u64) -> f64 {
    assert!(!freqs.is_empty());
    assert!(
        freqs.iter().all(|&f| f >= 1),
        "frequencies must be positive"
    );
    assert_eq!(
        t,
        freqs.iter().sum::<u64>(),
        "t must equal the frequency total"
    );
    freqs
        .iter()
        .map(|&f| f as f64 * (t as f64 / f as f64).log2())
        .sum::<f64>()
        / t as f64
}

/// Realized rate in bits per symbol: `(1/t) Σ FᵢLᵢ`.
pub fn rate_h(freqs: &[u64], lengths: &[u32], t: u64) -> f64 {
    assert_eq!(
        freqs.len(),
        lengths.len(),
        "lengths must align with frequencies"
    );
    assert_eq!(
        t,
        freqs.iter().sum::<u64>(),
        "t must equal the frequency total"
    );
    freqs
        .iter()
        .zip(lengths)
        .map(|(&f, &l)| (f * l as u64) as f64)
        .sum::<f64>()
        / t as f64
}
