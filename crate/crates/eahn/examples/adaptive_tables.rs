//! Hand-authored adaptive code tables: loading, encoding, verification.
//!
//! An adaptive code of order n picks the codeword for each symbol based on
//! the n symbols before it. This example loads the two bundled reference
//! tables, encodes sample strings with them, and runs both validity checks:
//! the per-context prefix condition and the brute-force injectivity oracle.
//!
//! ```sh
//! cargo run --example adaptive_tables
//! ```

use std::path::Path;

use eahn::adaptive_code::AdaptiveCodeTable;

fn fixture(name: &str) -> AdaptiveCodeTable {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    AdaptiveCodeTable::load_fixture(&path).expect("bundled fixture")
}

fn main() {
    for (file, input) in [
        ("order1_code.txt", &b"abbaba"[..]),
        ("order2_code.txt", &b"ababba"[..]),
    ] {
        let table = fixture(file);
        println!("== {file} (order {}) ==", table.order());
        print!("{table}");

        let encoded = table.encode_extension(input).unwrap();
        println!(
            "encode {:?} -> {encoded}  ({} bits for {} symbols)",
            String::from_utf8_lossy(input),
            encoded.len(),
            input.len()
        );

        println!(
            "per-context prefix condition: {}",
            table.verify_prefix_contexts()
        );
        println!(
            "injective over all inputs up to length 8: {}",
            table.check_injectivity_bruteforce(8).unwrap()
        );
        println!();
    }

    // a broken table: "0" is a proper prefix of "01" in one context
    let mut broken = AdaptiveCodeTable::new(1);
    broken.insert(b'a', b"x", "0".parse().unwrap());
    broken.insert(b'b', b"x", "01".parse().unwrap());
    println!(
        "table with codewords 0 and 01 in one context passes the check: {}",
        broken.verify_prefix_contexts()
    );
}
