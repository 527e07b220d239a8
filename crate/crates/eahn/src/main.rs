//! Thin command-line front end over the library.
//!
//! ```text
//! eahn compress <input> <output> [--order N] [--mode offline|online]
//!                                [--format v1|v2|auto] [--threads K] [--verify]
//! eahn decompress <input> <output>
//! eahn entropy <input> [--order N] [--verify]
//! eahn bench <dir> [--order N[,N...]] [--mode offline|online|both]
//!                  [--threads K] [--csv PATH] [--verify]
//! eahn inspect <input>
//! ```
//!
//! Exit codes: 0 success, 1 usage, 2 i/o, 3 corrupt or malformed stream.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use eahn::container::{self, ENVELOPE_LEN};
use eahn::entropy::{check_context_bounds, eahn_entropy};
use eahn::error::Error;
use eahn::{bench, Format, Mode, Options};

/// Print-and-exit-quietly when the reader closed the pipe (`... | head`).
fn emit(args: std::fmt::Arguments<'_>) {
    if std::io::stdout().write_fmt(args).is_err() {
        std::process::exit(0);
    }
}

macro_rules! outln {
    () => { emit(format_args!("\n")) };
    ($($arg:tt)*) => {{
        emit(format_args!($($arg)*));
        emit(format_args!("\n"));
    }};
}

macro_rules! out {
    ($($arg:tt)*) => { emit(format_args!($($arg)*)) };
}

const USAGE: &str = "\
usage:
  eahn compress <input> <output> [--order N] [--mode offline|online]
                                 [--format v1|v2|auto] [--threads K] [--verify]
  eahn decompress <input> <output>
  eahn entropy <input> [--order N] [--verify]
  eahn bench <dir> [--order N[,N...]] [--mode offline|online|both]
                   [--threads K] [--csv PATH] [--verify]
  eahn inspect <input>

  --threads defaults to 1; the EAHN_THREADS environment variable overrides
  the default when the flag is absent.";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(()) => ExitCode::from(0),
        Err(CliError::Usage(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            eprintln!("{USAGE}");
            ExitCode::from(1)
        }
        Err(CliError::Lib(Error::Io(err))) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(CliError::Lib(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
    }
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Lib(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Lib(Error::Io(err))
    }
}

fn run(args: &[String]) -> Result<(), CliError> {
    let Some(command) = args.first() else {
        return Err(CliError::Usage(String::new()));
    };
    let rest = &args[1..];
    match command.as_str() {
        "compress" => cmd_compress(rest),
        "decompress" => cmd_decompress(rest),
        "entropy" => cmd_entropy(rest),
        "bench" => cmd_bench(rest),
        "inspect" => cmd_inspect(rest),
        other => Err(CliError::Usage(format!("unknown command {other:?}"))),
    }
}

/// Parsed flags; positional arguments collected separately.
#[derive(Default)]
struct Flags {
    order: Option<String>,
    mode: Option<String>,
    format: Option<String>,
    threads: Option<String>,
    csv: Option<PathBuf>,
    verify: bool,
}

fn parse_args(args: &[String], max_positional: usize) -> Result<(Vec<&str>, Flags), CliError> {
    let mut positional = Vec::new();
    let mut flags = Flags::default();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let mut take = |name: &str| -> Result<String, CliError> {
            it.next()
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("{name} needs a value")))
        };
        match arg.as_str() {
            "--order" => flags.order = Some(take("--order")?),
            "--mode" => flags.mode = Some(take("--mode")?),
            "--format" => flags.format = Some(take("--format")?),
            "--threads" => flags.threads = Some(take("--threads")?),
            "--csv" => flags.csv = Some(PathBuf::from(take("--csv")?)),
            "--verify" => flags.verify = true,
            flag if flag.starts_with("--") => {
                return Err(CliError::Usage(format!("unknown flag {flag:?}")))
            }
            positional_arg => positional.push(positional_arg),
        }
    }
    if positional.len() > max_positional {
        return Err(CliError::Usage(format!(
            "unexpected argument {:?}",
            positional[max_positional]
        )));
    }
    Ok((positional, flags))
}

fn parse_order(flag: &Option<String>) -> Result<usize, CliError> {
    let Some(text) = flag else { return Ok(1) };
    match text.parse::<usize>() {
        Ok(n) if (1..=255).contains(&n) => Ok(n),
        _ => Err(CliError::Usage(format!(
            "--order must be 1..=255, got {text:?}"
        ))),
    }
}

fn parse_order_list(flag: &Option<String>) -> Result<Vec<usize>, CliError> {
    let Some(text) = flag else { return Ok(vec![1]) };
    text.split(',')
        .map(|tok| match tok.trim().parse::<usize>() {
            Ok(n) if (1..=255).contains(&n) => Ok(n),
            _ => Err(CliError::Usage(format!(
                "bad order {tok:?} in --order list"
            ))),
        })
        .collect()
}

fn parse_mode(flag: &Option<String>) -> Result<Mode, CliError> {
    match flag.as_deref() {
        None | Some("offline") => Ok(Mode::Offline),
        Some("online") => Ok(Mode::Online),
        Some(other) => Err(CliError::Usage(format!(
            "--mode must be offline or online, got {other:?}"
        ))),
    }
}

fn parse_format(flag: &Option<String>) -> Result<Format, CliError> {
    match flag.as_deref() {
        None | Some("auto") => Ok(Format::Auto),
        Some("v1") => Ok(Format::V1),
        Some("v2") => Ok(Format::V2),
        Some(other) => Err(CliError::Usage(format!(
            "--format must be v1, v2 or auto, got {other:?}"
        ))),
    }
}

/// Flag wins; otherwise the EAHN_THREADS environment variable; otherwise 1.
fn parse_threads(flag: &Option<String>) -> Result<usize, CliError> {
    let from_env = || {
        std::env::var("EAHN_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&k| k >= 1)
    };
    match flag {
        Some(text) => match text.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(CliError::Usage(format!(
                "--threads must be >= 1, got {text:?}"
            ))),
        },
        None => Ok(from_env().unwrap_or(1)),
    }
}

/// Writes via a temporary sibling then renames, so failures never leave a
/// partial output file behind.
fn write_atomic(path: &Path, data: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, data)?;
    fs::rename(&tmp, path)
}

fn cmd_compress(args: &[String]) -> Result<(), CliError> {
    let (positional, flags) = parse_args(args, 2)?;
    let [input, output] = positional[..] else {
        return Err(CliError::Usage("compress needs <input> <output>".into()));
    };
    let opts = Options {
        order: parse_order(&flags.order)?,
        mode: parse_mode(&flags.mode)?,
        format: parse_format(&flags.format)?,
        threads: parse_threads(&flags.threads)?,
    };
    let data = fs::read(input)?;
    let file = container::compress(&data, &opts);
    write_atomic(Path::new(output), &file)?;

    if flags.verify {
        let reread = fs::read(output)?;
        if container::decompress(&reread)? != data {
            return Err(CliError::Lib(Error::Corrupt(
                "verification decompression does not match the input".into(),
            )));
        }
    }
    let rate = if data.is_empty() {
        0.0
    } else {
        file.len() as f64 * 8.0 / data.len() as f64
    };
    outln!(
        "{} -> {}: {} -> {} bytes, {rate:.4} bits/symbol",
        input,
        output,
        data.len(),
        file.len()
    );
    Ok(())
}

fn cmd_decompress(args: &[String]) -> Result<(), CliError> {
    let (positional, _) = parse_args(args, 2)?;
    let [input, output] = positional[..] else {
        return Err(CliError::Usage("decompress needs <input> <output>".into()));
    };
    let file = fs::read(input)?;
    let data = container::decompress(&file)?;
    write_atomic(Path::new(output), &data)?;
    outln!(
        "{} -> {}: {} -> {} bytes",
        input,
        output,
        file.len(),
        data.len()
    );
    Ok(())
}

fn cmd_entropy(args: &[String]) -> Result<(), CliError> {
    let (positional, flags) = parse_args(args, 1)?;
    let [input] = positional[..] else {
        return Err(CliError::Usage("entropy needs <input>".into()));
    };
    let order = parse_order(&flags.order)?;
    let data = fs::read(input)?;
    let report = eahn_entropy(&data, order);
    out!("{}", report.render_text());
    out!("{}", report.render_lines());
    if flags.verify {
        let violations = check_context_bounds(&report);
        if violations.is_empty() {
            outln!("bounds: ok ({} contexts)", report.records.len());
        } else {
            for v in &violations {
                eprintln!(
                    "bound violated: ctx {:02x?} entropy {:.6} rate {:.6}",
                    v.context, v.entropy, v.rate
                );
            }
            return Err(CliError::Lib(Error::Corrupt(format!(
                "{} context rate bounds violated",
                violations.len()
            ))));
        }
    }
    Ok(())
}

fn cmd_bench(args: &[String]) -> Result<(), CliError> {
    let (positional, flags) = parse_args(args, 1)?;
    let [dir] = positional[..] else {
        return Err(CliError::Usage("bench needs <dir>".into()));
    };
    let orders = parse_order_list(&flags.order)?;
    let modes: Vec<Mode> = match flags.mode.as_deref() {
        None | Some("offline") => vec![Mode::Offline],
        Some("online") => vec![Mode::Online],
        Some("both") => vec![Mode::Offline, Mode::Online],
        Some(other) => {
            return Err(CliError::Usage(format!(
                "--mode must be offline, online or both, got {other:?}"
            )))
        }
    };
    let threads = parse_threads(&flags.threads)?;

    let mut csv = String::new();
    for mode in &modes {
        for &order in &orders {
            let report = bench::run_bench(Path::new(dir), order, *mode, threads, flags.verify)?;
            out!("{}", report.render_table());
            outln!();
            let part = report.render_csv();
            if csv.is_empty() {
                csv.push_str(&part);
            } else {
                // drop the repeated header
                for line in part.lines().skip(1) {
                    csv.push_str(line);
                    csv.push('\n');
                }
            }
        }
    }
    if let Some(path) = &flags.csv {
        write_atomic(path, csv.as_bytes())?;
        outln!("csv written to {}", path.display());
    }
    Ok(())
}

fn cmd_inspect(args: &[String]) -> Result<(), CliError> {
    let (positional, _) = parse_args(args, 1)?;
    let [input] = positional[..] else {
        return Err(CliError::Usage("inspect needs <input>".into()));
    };
    let file = fs::read(input)?;
    let env = container::read_envelope(&file)?;
    let kind = match env.version {
        container::VERSION_RAW => "raw",
        container::VERSION_V1 => "v1",
        container::VERSION_V2 => "v2",
        container::VERSION_ONLINE => "online",
        _ => unreachable!(),
    };
    outln!(
        "envelope: magic ea48  version {} ({kind})  order {}  length {}",
        env.version, env.order, env.original_len
    );
    outln!("body: {} bytes", file.len() - ENVELOPE_LEN);

    if env.version == container::VERSION_V1 {
        let fields = container::inspect_v1(&file)?;
        let widths = fields.widths();
        let names = ["Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9"];
        let notes = [
            format!("padding bit count = {}", fields.pad_bits),
            "zero padding".to_string(),
            format!("first symbol = 0x{:02x}", fields.first_symbol),
            format!("maxlc = {}", fields.maxlc),
            format!("context bitmap, NC = {}", fields.context_symbols.len()),
            format!("follower bitmap, NL = {}", fields.follower_symbols.len()),
            "occurrence matrix".to_string(),
            format!("{} codewords", fields.codeword_count),
            "payload".to_string(),
        ];
        for ((name, width), note) in names.iter().zip(widths).zip(notes) {
            outln!("{name}  {width:>10} bits  {note}");
        }
        outln!("total {:>10} bits", fields.total_bits());
    }
    Ok(())
}
