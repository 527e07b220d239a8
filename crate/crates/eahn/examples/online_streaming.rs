//! Streaming mode: encode symbols as they arrive.
//!
//! The online codec picks codewords from the counts seen so far, so the
//! decoder can mirror every step without lookahead. First occurrences in a
//! context are escape-coded. This example shows the bits emitted for each
//! symbol of a short string, then roundtrips a full sentence.
//!
//! ```sh
//! cargo run --example online_streaming
//! ```

use eahn::bits::{BitCursor, Bits};
use eahn::online::{online_decode, OnlineCodec};

fn main() {
    let input = b"abracadabra";
    let n = 1;
    println!("input: {:?}, order {n}\n", String::from_utf8_lossy(input));

    let mut codec = OnlineCodec::new(n);
    let mut stream = Bits::new();
    let mut previous = 0;
    for &sym in input {
        codec.encode_symbol(sym, &mut stream);
        let emitted: String = (previous..stream.len())
            .map(|i| if stream.get(i) { '1' } else { '0' })
            .collect();
        println!(
            "  {:?} -> {emitted:<12} ({} bits)",
            sym as char,
            emitted.len()
        );
        previous = stream.len();
    }
    println!(
        "\ntotal {} bits for {} symbols ({:.2} bits/symbol; 8-bit literals dominate early)",
        stream.len(),
        input.len(),
        stream.len() as f64 / input.len() as f64
    );

    // decode with a second codec instance walking the same state transitions
    let mut decoder = OnlineCodec::new(n);
    let mut cursor = BitCursor::new(&stream);
    let decoded: Vec<u8> = (0..input.len())
        .map(|_| decoder.decode_symbol(&mut cursor).unwrap())
        .collect();
    assert_eq!(decoded, input);
    println!("decoded: {:?}", String::from_utf8_lossy(&decoded));

    // longer input: the adaptive codes take over from the literals
    let text = b"she sells sea shells by the sea shore; the shells she sells \
                 are surely sea shells. "
        .repeat(30);
    let stream = eahn::online_encode(&text, 2);
    assert_eq!(online_decode(&stream, 2, text.len() as u64).unwrap(), text);
    println!(
        "\n{} bytes of text -> {} stream bits ({:.3} bits/symbol at order 2)",
        text.len(),
        stream.len(),
        stream.len() as f64 / text.len() as f64
    );
}
