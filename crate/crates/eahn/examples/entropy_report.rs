//! Entropy analysis: how compressible is an input, before encoding it?
//!
//! The payload rate decomposes over contexts, and each context's realized
//! rate is pinned between its follower entropy and that entropy plus one
//! bit. This example analyzes the bundled English text at several orders
//! and verifies the bounds.
//!
//! ```sh
//! cargo run --example entropy_report
//! ```

use std::path::Path;

use eahn::entropy::{check_context_bounds, eahn_entropy};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join("english.txt");
    let text = std::fs::read(&path).expect("bundled fixture");
    println!("analyzing {} bytes of English text\n", text.len());

    for n in 1..=3 {
        let report = eahn_entropy(&text, n);
        let violations = check_context_bounds(&report);
        println!(
            "order {n}: {:>6} contexts, weighted entropy {:.4}, payload rate {:.4} bits/symbol, bounds {}",
            report.records.len(),
            report.weighted_entropy,
            report.payload_rate,
            if violations.is_empty() { "ok" } else { "VIOLATED" }
        );
    }

    // the busiest order-1 contexts, with their entropy/rate envelope
    let report = eahn_entropy(&text, 1);
    let mut records = report.records.clone();
    records.sort_by_key(|r| std::cmp::Reverse(r.positions));
    println!("\nbusiest order-1 contexts:");
    println!("  ctx   positions  followers  entropy  rate");
    for rec in records.iter().take(10) {
        println!(
            "  {:>3?}  {:>9}  {:>9}  {:>7.4}  {:>5.4}",
            rec.context[0] as char,
            rec.positions,
            rec.followers.len(),
            rec.entropy,
            rec.rate
        );
    }
}
