//! Cross-module property tests.

use proptest::prelude::*;

use eahn::adaptive_code::AdaptiveCodeTable;
use eahn::codec::{eahn_decode, eahn_encode};
use eahn::container::{self, parse, serialize};
use eahn::online::{online_decode, online_encode};
use eahn::{Format, Mode, Options};

fn order1_table() -> AdaptiveCodeTable {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join("order1_code.txt");
    AdaptiveCodeTable::load_fixture(&path).unwrap()
}

fn abc_string() -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(proptest::sample::select(vec![b'a', b'b', b'c']), 0..=8)
}

proptest! {
    /// Distinct inputs encode to distinct bit strings under a table whose
    /// per-context codeword sets are prefix codes.
    #[test]
    fn extension_is_injective_on_short_strings(x in abc_string(), y in abc_string()) {
        let table = order1_table();
        prop_assume!(x != y);
        let ex = table.encode_extension(&x).unwrap();
        let ey = table.encode_extension(&y).unwrap();
        prop_assert_ne!(ex, ey, "collision between {:?} and {:?}", x, y);
    }

    /// The extension length is exactly the sum of per-position codeword lengths.
    #[test]
    fn extension_length_adds_up(x in abc_string()) {
        let table = order1_table();
        let mut expected = 0;
        for (i, &sym) in x.iter().enumerate() {
            let start = i.saturating_sub(1);
            expected += table.get(sym, &x[start..i]).unwrap().len();
        }
        prop_assert_eq!(table.encode_extension(&x).unwrap().len(), expected);
    }

    #[test]
    fn offline_roundtrip(
        x in proptest::collection::vec(any::<u8>(), 0..600),
        n in 1usize..=3,
    ) {
        prop_assume!(x.len() >= n);
        let out = eahn_encode(&x, n);
        prop_assert_eq!(eahn_decode(&out).unwrap(), x);
    }

    #[test]
    fn online_roundtrip(
        x in proptest::collection::vec(any::<u8>(), 0..400),
        n in 1usize..=2,
    ) {
        let stream = online_encode(&x, n);
        prop_assert_eq!(online_decode(&stream, n, x.len() as u64).unwrap(), x);
    }

    /// parse(serialize(out)) is the identity on encoder outputs, for both
    /// body formats.
    #[test]
    fn container_parse_inverts_serialize(
        x in proptest::collection::vec(0u8..6, 1..400),
        n in 1usize..=2,
        v1 in any::<bool>(),
    ) {
        prop_assume!(x.len() >= n);
        let out = eahn_encode(&x, n);
        let format = if v1 && n == 1 { Format::V1 } else { Format::V2 };
        let file = serialize(&out, format);
        prop_assert_eq!(parse(&file).unwrap(), out);
    }

    /// The full stack honors every mode/format combination.
    #[test]
    fn compress_decompress_is_identity(
        x in proptest::collection::vec(any::<u8>(), 0..800),
        order in 1usize..=3,
        online in any::<bool>(),
        v2 in any::<bool>(),
    ) {
        let opts = Options {
            order,
            mode: if online { Mode::Online } else { Mode::Offline },
            format: if v2 { Format::V2 } else { Format::Auto },
            threads: 1,
        };
        let file = container::compress(&x, &opts);
        prop_assert_eq!(container::decompress(&file).unwrap(), x);
    }
}
