//! Container formats: one envelope, four bodies.
//!
//! Every file starts with a 12-byte envelope (magic, version, order,
//! original length); the body is the order-1 layout (v1), the generalized
//! layout (v2), an online stream, or raw literal bytes — whichever the
//! options select, with an automatic raw fallback when encoding would
//! expand. See FORMAT.md for the bit-level field layouts.
//!
//! ```sh
//! cargo run --example container_formats
//! ```

use eahn::container::{compress, decompress, inspect_v1, read_envelope, Options};
use eahn::{Format, Mode};

fn hex_head(bytes: &[u8], n: usize) -> String {
    bytes.iter().take(n).map(|b| format!("{b:02x} ")).collect()
}

fn main() {
    let data = b"a container example with enough repeated content to leave \
                 the raw fallback unused. "
        .repeat(500);

    let configs = [
        (
            "v1 (order 1)",
            Options {
                order: 1,
                format: Format::V1,
                ..Options::default()
            },
        ),
        (
            "v2 (order 2)",
            Options {
                order: 2,
                format: Format::V2,
                ..Options::default()
            },
        ),
        (
            "online",
            Options {
                order: 1,
                mode: Mode::Online,
                ..Options::default()
            },
        ),
    ];
    for (name, opts) in configs {
        let file = compress(&data, &opts);
        let env = read_envelope(&file).unwrap();
        assert_eq!(decompress(&file).unwrap(), data);
        println!(
            "{name:<12} {:>6} bytes  version {}  first bytes: {}",
            file.len(),
            env.version,
            hex_head(&file, 16)
        );
    }

    // incompressible input: the raw fallback caps expansion at the envelope
    let noise: Vec<u8> = (0..4096u32)
        .map(|i| (i.wrapping_mul(2654435761) >> 13) as u8)
        .collect();
    let file = compress(&noise, &Options::default());
    let env = read_envelope(&file).unwrap();
    println!(
        "{:<12} {:>6} bytes  version {}  (input was {} bytes)",
        "raw fallback",
        file.len(),
        env.version,
        noise.len()
    );

    // field-by-field view of a v1 body
    let file = compress(&data, &Options::default());
    let fields = inspect_v1(&file).unwrap();
    println!("\nv1 field widths (bits): {:?}", fields.widths());
    println!(
        "maxlc {}, {} contexts, {} followers, {} codewords, {} payload bits",
        fields.maxlc,
        fields.context_symbols.len(),
        fields.follower_symbols.len(),
        fields.codeword_count,
        fields.payload_bits
    );
}
