//! Corpus benchmark: the context codec versus order-0 Huffman.
//!
//! Builds a three-file corpus in a temporary directory — bundled English
//! text, synthetic four-letter DNA, and uniform noise — and prints the
//! comparison table. Point the binary's `bench` subcommand at any directory
//! to run the same comparison on your own files.
//!
//! ```sh
//! cargo run --release --example corpus_bench
//! ```

use std::path::Path;

use eahn::bench::run_bench;
use eahn::Mode;

fn main() {
    let dir = std::env::temp_dir().join(format!("eahn-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let english = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join("english.txt");
    std::fs::copy(&english, dir.join("english.txt")).unwrap();

    // four-symbol DNA-like data: near the order-0 bound, no context structure
    let mut state = 0x9E3779B97F4A7C15u64;
    let mut step = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let dna: Vec<u8> = (0..1_000_000)
        .map(|_| b"ACGT"[(step() % 4) as usize])
        .collect();
    std::fs::write(dir.join("dna.txt"), &dna).unwrap();

    // incompressible noise: the raw fallback keeps the codec honest
    let noise: Vec<u8> = (0..262_144).map(|_| (step() >> 24) as u8).collect();
    std::fs::write(dir.join("random.bin"), &noise).unwrap();

    for order in [1, 2] {
        let report = run_bench(&dir, order, Mode::Offline, 1, true).unwrap();
        print!("{}", report.render_table());
        println!();
    }

    println!("English text sits well below the order-0 bound; DNA and noise do not.");
    std::fs::remove_dir_all(&dir).ok();
}
