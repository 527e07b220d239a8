//! Multi-worker offline encoder with bit-identical output.
//!
//! Per-context code construction touches disjoint data — each context owns
//! its follower counts and its result slot — so it parallelizes without
//! synchronization beyond the final join. The phases are:
//!
//! 1. frequency scan (sequential);
//! 2. per-context Huffman builds, occurring contexts partitioned
//!    round-robin across workers (parallel, disjoint ownership);
//! 3. per-context codeword list assembly (parallel, merged with 2);
//! 4. global codeword concatenation in context order and payload emission
//!    (sequential: the output order is fixed).
//!
//! Output is byte-identical to the sequential encoder for any worker count.

use crate::adaptive_code::AdaptiveCodeTable;
use crate::bits::Bits;
use crate::codec::{assemble_output, context_codewords, scan_frequencies, EahnOutput};

/// Encodes like `eahn_encode` using up to `workers` threads for the
/// per-context code construction phase.
pub fn eahn_encode_parallel(x: &[u8], n: usize, workers: usize) -> EahnOutput {
    assert!(workers >= 1, "worker count must be positive");
    let model = scan_frequencies(x, n);
    let contexts: Vec<_> = model.contexts().collect();

    // One result slot per context; each is written by exactly one worker.
    let mut slots: Vec<Option<Vec<Bits>>> = vec![None; contexts.len()];

    // fanning out is pointless below a couple of contexts per worker
    if workers == 1 || contexts.len() < 2 * workers {
        for (slot, (_, followers)) in slots.iter_mut().zip(&contexts) {
            *slot = context_codewords(followers);
        }
    } else {
        // In debug builds, record every claim to audit exclusive ownership.
        #[cfg(debug_assertions)]
        let claims: Vec<std::sync::atomic::AtomicU8> = (0..contexts.len())
            .map(|_| std::sync::atomic::AtomicU8::new(0))
            .collect();

        let worker_count = workers.min(contexts.len());
        let mut partial: Vec<Vec<(usize, Option<Vec<Bits>>)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..worker_count)
                .map(|w| {
                    let contexts = &contexts;
                    #[cfg(debug_assertions)]
                    let claims = &claims;
                    scope.spawn(move || {
                        let mut built = Vec::new();
                        let mut idx = w;
                        while idx < contexts.len() {
                            #[cfg(debug_assertions)]
                            {
                                let prev =
                                    claims[idx].fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                                debug_assert_eq!(prev, 0, "context {idx} claimed twice");
                            }
                            built.push((idx, context_codewords(contexts[idx].1)));
                            idx += worker_count;
                        }
                        built
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });

        #[cfg(debug_assertions)]
        for (idx, claim) in claims.iter().enumerate() {
            debug_assert_eq!(
                claim.load(std::sync::atomic::Ordering::SeqCst),
                1,
                "context {idx} not claimed exactly once"
            );
        }

        for built in partial.drain(..) {
            for (idx, words) in built {
                slots[idx] = words;
            }
        }
    }

    // Join: fold the per-context results into one table, in context order.
    let mut table = AdaptiveCodeTable::new(n);
    for ((ctx, followers), words) in contexts.iter().zip(slots) {
        if let Some(words) = words {
            for (&sym, cw) in followers.keys().zip(words) {
                table.insert(sym, ctx, cw);
            }
        }
    }
    assemble_output(x, n, &model, &table)
}
