use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use loco_core::codec::codec;
use loco_core::enumeration::{cardinality, rates};
use loco_core::galois::{format_levels, parse_levels};
use loco_core::patterns::grid_scan;
use loco_core::tdmr_sim::{read_csv, reconfigure, run_sweep, write_csv, write_schedule};
use loco_core::{
    capacity, BitGrid, BuiltinSet, CodeKind, Field, FrameOutcome, PatternSet, SimCode, SimConfig, StreamCodec,
    SweepKind,
};

/// Constrained codes for TDMR track groups.
#[derive(Parser)]
#[command(name = "loco", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Capacity of a forbidden-pattern set.
    Capacity {
        #[arg(long, value_enum)]
        code: CapCode,
        /// Pattern file for `--code custom`, one pattern per line.
        #[arg(long, required_if_eq("code", "custom"))]
        patterns: Option<PathBuf>,
        /// Field order for custom patterns.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u8).range(4..=8))]
        q: u8,
    },
    /// Rate table as CSV.
    Rates {
        #[arg(long)]
        code: CodeKind,
        #[arg(long, value_delimiter = ',', required = true)]
        m_list: Vec<u32>,
    },
    /// Number of codewords of length m.
    Enumerate {
        #[arg(long)]
        code: CodeKind,
        #[arg(long)]
        m: u32,
    },
    /// Encode indices or bits.
    Encode(CodecArgs),
    /// Decode codewords, a stream or a grid.
    Decode(CodecArgs),
    /// List rotated-T isolated cells on the middle track of a grid.
    Scan {
        #[arg(long)]
        grid: PathBuf,
    },
    /// Run a density or energy sweep.
    Simulate {
        #[arg(long)]
        sweep: SweepKind,
        /// ot, st, op or uncoded.
        #[arg(long)]
        code: SimCode,
        #[arg(long)]
        frames: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        m: Option<usize>,
        /// key = value settings file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Keep the uncoded geometry for coded runs.
        #[arg(long)]
        no_rate_scaling: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Switch from OP to OT where the OP middle-track BER crosses a threshold.
    Reconfigure {
        #[arg(long)]
        threshold: f64,
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        ot: PathBuf,
        /// Only points with sweep value in lo,hi may trigger the switch.
        #[arg(long, value_parser = parse_range)]
        range: Option<(f64, f64)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum CapCode {
    Ot,
    St,
    Op,
    Os,
    Custom,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    /// One codeword index or codeword per line.
    Words,
    /// Framed symbol stream with bridges.
    Stream,
    /// Framed stream as a 3-row bit grid.
    Grid,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BitsFormat {
    /// 0/1 characters, one frame per line on output.
    Text,
    /// Binary container with a header.
    Loco1,
}

#[derive(Args)]
struct CodecArgs {
    #[arg(long)]
    code: CodeKind,
    #[arg(long)]
    m: usize,
    /// Input file, stdin when absent.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Stream)]
    format: Format,
    #[arg(long, value_enum, default_value_t = BitsFormat::Text)]
    bits_format: BitsFormat,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Ok(n) = std::env::var("LOCO_THREADS") {
        let n: usize = n.parse().context("LOCO_THREADS must be a positive integer")?;
        ensure!(n > 0, "LOCO_THREADS must be a positive integer");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.cmd {
        Cmd::Capacity { code, patterns, q } => {
            let (set, coded) = match code {
                CapCode::Custom => {
                    let path = patterns.expect("required by clap");
                    let Some(field) = Field::from_order(q) else {
                        bail!("--q must be 4 or 8, got {q}");
                    };
                    let set = PatternSet::from_text(field, &read_text(Some(&path))?)
                        .with_context(|| format!("reading patterns from {}", path.display()))?;
                    (set, field.bits())
                }
                CapCode::Ot => (PatternSet::builtin(BuiltinSet::Ot8), 3),
                CapCode::St => (PatternSet::builtin(BuiltinSet::St4), 2),
                CapCode::Op => (PatternSet::builtin(BuiltinSet::Op8), 3),
                CapCode::Os => (PatternSet::builtin(BuiltinSet::Os8), 3),
            };
            let c = capacity(&set, coded, 3)?;
            println!("C={:.4} Cn={:.4}", c.c, c.cn);
        }
        Cmd::Rates { code, m_list } => {
            let mut out = String::from("m,N,s,R,Rn\n");
            for m in m_list {
                ensure!(m > 0, "m must be at least 1");
                let r = rates(code, m);
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.m, r.cardinality, r.s, r.rate, r.normalized
                ));
            }
            print!("{out}");
        }
        Cmd::Enumerate { code, m } => {
            ensure!(m > 0, "m must be at least 1");
            println!("{}", cardinality(code, m));
        }
        Cmd::Encode(a) => encode(&a)?,
        Cmd::Decode(a) => decode(&a)?,
        Cmd::Scan { grid } => {
            let g = BitGrid::parse_text(&read_text(Some(&grid))?)?;
            ensure!(g.rows() == 3, "grid has {} rows, expected 3", g.rows());
            let hits = grid_scan(&g);
            let mut out = String::new();
            for (col, class) in &hits {
                out.push_str(&format!("{col} {class}\n"));
            }
            out.push_str(&format!("rtis={}\n", hits.len()));
            print!("{out}");
        }
        Cmd::Simulate {
            sweep,
            code,
            frames,
            seed,
            m,
            config,
            no_rate_scaling,
            out,
        } => {
            let mut cfg = match &config {
                Some(p) => {
                    SimConfig::parse(&read_text(Some(p))?).with_context(|| format!("reading config {}", p.display()))?
                }
                None => SimConfig::default(),
            };
            if let Some(f) = frames {
                cfg.frames = f;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if m.is_some() {
                cfg.m = m;
            }
            if no_rate_scaling {
                cfg.rate_scaling = false;
            }
            let result = run_sweep(sweep, code, &cfg)?;
            let mut buf = Vec::new();
            write_csv(&result.rows(), &mut buf)?;
            write_output(out.as_deref(), &buf)?;
        }
        Cmd::Reconfigure {
            threshold,
            op,
            ot,
            range,
            out,
        } => {
            ensure!(
                threshold.is_finite() && threshold >= 0.0,
                "threshold must be a non-negative number"
            );
            let op_rows = read_csv(fs::File::open(&op).with_context(|| format!("opening {}", op.display()))?)?;
            let ot_rows = read_csv(fs::File::open(&ot).with_context(|| format!("opening {}", ot.display()))?)?;
            let schedule = reconfigure(&op_rows, &ot_rows, threshold, range)?;
            let mut buf = Vec::new();
            write_schedule(&schedule, &mut buf)?;
            write_output(out.as_deref(), &buf)?;
        }
    }
    Ok(())
}

fn encode(a: &CodecArgs) -> Result<()> {
    if a.format == Format::Words {
        let c = codec(a.code, a.m)?;
        let mut out = String::new();
        for (n, line) in content_lines(&read_text(a.input.as_deref())?) {
            let index = BigUint::from_str(line).with_context(|| format!("line {n}: expected a decimal index"))?;
            let cw = c.codeword(&index).with_context(|| format!("line {n}"))?;
            out.push_str(&format_levels(&cw));
            out.push('\n');
        }
        return write_output(a.out.as_deref(), out.as_bytes());
    }
    let sc = StreamCodec::new(a.code, a.m)?;
    let bits = match a.bits_format {
        BitsFormat::Text => parse_bits(&read_text(a.input.as_deref())?)?,
        BitsFormat::Loco1 => {
            let (from, bits) = StreamCodec::from_container(&read_bytes(a.input.as_deref())?)?;
            ensure!(
                from.kind() == a.code && from.m() == a.m,
                "container holds {} frames with m = {}, not {} with m = {}",
                from.kind(),
                from.m(),
                a.code,
                a.m
            );
            bits
        }
    };
    let stream = sc.encode_bits(&bits)?;
    let text = match a.format {
        Format::Grid => sc.to_grid(&stream)?.to_text(),
        _ => sc.to_text(&stream),
    };
    write_output(a.out.as_deref(), text.as_bytes())
}

fn decode(a: &CodecArgs) -> Result<()> {
    let text = read_text(a.input.as_deref())?;
    if a.format == Format::Words {
        let c = codec(a.code, a.m)?;
        let mut out = String::new();
        for (n, line) in content_lines(&text) {
            let cw = parse_levels(c.field(), line).with_context(|| format!("line {n}"))?;
            let index = c.index(&cw).with_context(|| format!("line {n}"))?;
            out.push_str(&format!("{index}\n"));
        }
        return write_output(a.out.as_deref(), out.as_bytes());
    }
    let sc = StreamCodec::new(a.code, a.m)?;
    let stream = match a.format {
        Format::Grid => sc.from_grid(&BitGrid::parse_text(&text)?)?,
        _ => sc.parse_text(&text)?,
    };
    let frames = sc.decode_stream(&stream)?;
    let mut per_frame = Vec::with_capacity(frames.len());
    for (k, d) in frames.iter().enumerate() {
        match sc.frame_bits_of(d) {
            Some(bits) => per_frame.push(bits),
            None => bail!("frame {k}: {}", outcome_name(d.outcome)),
        }
    }
    match a.bits_format {
        BitsFormat::Text => {
            let mut out = String::new();
            for f in &per_frame {
                out.extend(f.iter().map(|&b| if b == 0 { '0' } else { '1' }));
                out.push('\n');
            }
            write_output(a.out.as_deref(), out.as_bytes())
        }
        BitsFormat::Loco1 => {
            let bits: Vec<u8> = per_frame.concat();
            write_output(a.out.as_deref(), &sc.to_container(&bits)?)
        }
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let bad = || format!("expected lo,hi, got {s:?}");
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn outcome_name(o: FrameOutcome) -> &'static str {
    match o {
        FrameOutcome::Ok => "ok",
        FrameOutcome::ConstraintViolation => "constraint violation",
        FrameOutcome::IndexOutOfMessageRange => "index out of message range",
        FrameOutcome::BridgeMismatch => "bridge pattern not mapped",
        FrameOutcome::MessageMismatch => "message mismatch",
    }
}

/// Non-empty lines with `#` comments removed, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_bits(text: &str) -> Result<Vec<u8>> {
    let mut bits = Vec::new();
    for (n, line) in content_lines(text) {
        for ch in line.chars().filter(|c| !c.is_whitespace()) {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                other => bail!("line {n}: {other:?} is not a bit"),
            }
        }
    }
    Ok(bits)
}

fn read_bytes(path: Option<&Path>) -> Result<Vec<u8>> {
    match path {
        Some(p) => fs::read(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

fn read_text(path: Option<&Path>) -> Result<String> {
    let bytes = read_bytes(path)?;
    String::from_utf8(bytes).context("input is not UTF-8 text")
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}
