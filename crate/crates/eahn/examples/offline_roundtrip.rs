//! The offline codec, inside out.
//!
//! Walks through the three encoding passes on a nine-byte string — the
//! frequency scan, the per-context codebook, and the emitted output tuple —
//! then decodes it back and roundtrips a larger piece of text.
//!
//! ```sh
//! cargo run --example offline_roundtrip
//! ```

use eahn::codec::{build_codebook, eahn_decode, eahn_encode, scan_frequencies};

fn main() {
    let input = b"baabbabab";
    let n = 2;
    println!("input: {:?}, order {n}", String::from_utf8_lossy(input));

    // pass 1: count followers per 2-symbol context
    let model = scan_frequencies(input, n);
    println!("\nfollower counts:");
    for (ctx, followers) in model.contexts() {
        for (&sym, &count) in followers {
            println!(
                "  {}{} after {:?}: {count}",
                sym as char,
                if count == 1 { " " } else { "s" },
                String::from_utf8_lossy(ctx)
            );
        }
    }

    // pass 2: one canonical Huffman code per multi-follower context
    let table = build_codebook(&model);
    println!("\ncodebook (single-follower contexts cost zero bits):");
    print!("{table}");

    // pass 3: the output tuple
    let out = eahn_encode(input, n);
    println!("\noutput tuple:");
    println!("  prefix   : {:?}", String::from_utf8_lossy(&out.prefix));
    println!("  contexts : {}", out.occurrence.len());
    let codewords: Vec<String> = out.codewords.iter().map(|c| c.to_string()).collect();
    println!("  codewords: ({})", codewords.join(", "));
    println!(
        "  payload  : {} ({} bits for {} encoded symbols)",
        out.payload,
        out.payload.len(),
        out.original_len as usize - n
    );

    let decoded = eahn_decode(&out).unwrap();
    assert_eq!(decoded, input);
    println!("\ndecoded back: {:?}", String::from_utf8_lossy(&decoded));

    // something bigger: compare payload size against the 8-bit baseline
    let text = b"the quick brown fox jumps over the lazy dog, \
                 and the slow black cat naps under the warm gray roof. "
        .repeat(50);
    for n in 1..=3 {
        let out = eahn_encode(&text, n);
        assert_eq!(eahn_decode(&out).unwrap(), text);
        println!(
            "order {n}: {} input bytes -> {} payload bits ({:.3} bits/symbol)",
            text.len(),
            out.payload_bits(),
            out.payload_bits() as f64 / text.len() as f64
        );
    }
}
