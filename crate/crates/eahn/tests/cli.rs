//! End-to-end tests of the command-line binary.

use std::fs;
use std::process::{Command, Output};

fn eahn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eahn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn compress_decompress_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("input.txt");
    let packed = dir.path().join("input.eahn");
    let restored = dir.path().join("restored.txt");
    let content = b"a roundtrip through the command line interface ".repeat(40);
    fs::write(&input, &content).unwrap();

    let out = eahn(&[
        "compress",
        input.to_str().unwrap(),
        packed.to_str().unwrap(),
        "--order",
        "2",
        "--verify",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(fs::metadata(&packed).unwrap().len() < content.len() as u64);

    let out = eahn(&[
        "decompress",
        packed.to_str().unwrap(),
        restored.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read(&restored).unwrap(), content);
}

#[test]
fn empty_file_roundtrips_through_raw() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty");
    let packed = dir.path().join("empty.eahn");
    let restored = dir.path().join("restored");
    fs::write(&input, b"").unwrap();

    assert!(eahn(&[
        "compress",
        input.to_str().unwrap(),
        packed.to_str().unwrap()
    ])
    .status
    .success());
    let file = fs::read(&packed).unwrap();
    assert_eq!(file.len(), 12, "empty input must produce a bare envelope");
    assert_eq!(file[2], 0, "raw container version");

    assert!(eahn(&[
        "decompress",
        packed.to_str().unwrap(),
        restored.to_str().unwrap()
    ])
    .status
    .success());
    assert_eq!(fs::read(&restored).unwrap(), b"");
}

#[test]
fn thread_counts_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("input");
    fs::write(&input, b"deterministic across worker counts ".repeat(200)).unwrap();
    let mut files = Vec::new();
    for threads in ["1", "4"] {
        let packed = dir.path().join(format!("out.{threads}"));
        let out = eahn(&[
            "compress",
            input.to_str().unwrap(),
            packed.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert!(out.status.success());
        files.push(fs::read(&packed).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(eahn(&[]).status.code(), Some(1));
    assert_eq!(eahn(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(eahn(&["compress", "only-one-arg"]).status.code(), Some(1));
    assert_eq!(
        eahn(&["compress", "a", "b", "--order", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        eahn(&["compress", "a", "b", "--mode", "sideways"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn io_errors_exit_2() {
    let out = eahn(&["compress", "/nonexistent/input", "/nonexistent/output"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupt_streams_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bogus = dir.path().join("bogus.eahn");
    fs::write(&bogus, b"not a container at all").unwrap();
    let out = eahn(&[
        "decompress",
        bogus.to_str().unwrap(),
        dir.path().join("x").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    // valid container, truncated body
    let input = dir.path().join("input");
    let packed = dir.path().join("packed");
    fs::write(
        &input,
        b"some compressible content, repeated and repeated".repeat(20),
    )
    .unwrap();
    assert!(eahn(&[
        "compress",
        input.to_str().unwrap(),
        packed.to_str().unwrap()
    ])
    .status
    .success());
    let mut file = fs::read(&packed).unwrap();
    file.truncate(file.len() - 3);
    fs::write(&packed, &file).unwrap();
    let out = eahn(&[
        "decompress",
        packed.to_str().unwrap(),
        dir.path().join("y").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn failed_compress_leaves_no_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing-input");
    let output = dir.path().join("must-not-exist");
    let out = eahn(&[
        "compress",
        missing.to_str().unwrap(),
        output.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!output.exists());
}

#[test]
fn entropy_reports_reference_figures() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ref.txt");
    fs::write(&input, b"baabbabab").unwrap();
    let out = eahn(&[
        "entropy",
        input.to_str().unwrap(),
        "--order",
        "2",
        "--verify",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("entropy sum 1.91830"), "got: {text}");
    assert!(text.contains("bounds: ok"), "got: {text}");
    // one machine-readable line per context
    assert_eq!(text.lines().filter(|l| l.starts_with("ctx=")).count(), 4);
}

#[test]
fn empty_input_entropy_is_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty");
    fs::write(&input, b"").unwrap();
    let out = eahn(&["entropy", input.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("contexts 0"));
}

#[test]
fn inspect_dumps_v1_fields() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("input");
    let packed = dir.path().join("packed");
    fs::write(&input, b"abracadabra, abracadabra, abracadabra!".repeat(10)).unwrap();
    assert!(eahn(&[
        "compress",
        input.to_str().unwrap(),
        packed.to_str().unwrap()
    ])
    .status
    .success());
    let out = eahn(&["inspect", packed.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    for field in [
        "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "total",
    ] {
        assert!(text.contains(field), "missing {field} in: {text}");
    }
    assert!(text.contains("version 1 (v1)"));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    fs::write(corpus.join("a.txt"), b"text with structure ".repeat(300)).unwrap();
    fs::write(corpus.join("b.bin"), vec![0u8; 2000]).unwrap();
    let csv = dir.path().join("report.csv");

    let out = eahn(&[
        "bench",
        corpus.to_str().unwrap(),
        "--order",
        "1,2",
        "--csv",
        csv.to_str().unwrap(),
        "--verify",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("a.txt") && text.contains("total"));

    let csv_text = fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("file,order,mode,original,huffman,eahn,improvement_percent"));
    // header + 2 files x 2 orders
    assert_eq!(csv_text.lines().count(), 5);
}

#[test]
fn bench_rejects_missing_directory() {
    let out = eahn(&["bench", "/nonexistent-dir"]);
    assert_eq!(out.status.code(), Some(2));
}
