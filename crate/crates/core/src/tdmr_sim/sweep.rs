//! Monte-Carlo density and energy sweeps.
//!
//! Frames are written in blocks of [`BLOCK_FRAMES`] contiguous frames so that
//! interference crosses frame boundaries. Every frame owns a ChaCha8 stream
//! selected by `(seed, point, frame)`; it draws the frame's data bits and
//! the media noise on the frame's columns, so results do not depend on how
//! blocks are scheduled across workers.

use std::io;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channel::{add_noise, convolve, read_hard, ChannelParams, Kernel};
use super::config::{SimConfig, SweepKind};
use super::profile::{profile_columns, ErrorProfile};
use super::SimError;
use crate::enumeration::CodeKind;
use crate::framing::{OutcomeCounts, StreamCodec};
use crate::grid::BitGrid;
use crate::patterns::{grid_scan, GridClass};

pub const BLOCK_FRAMES: usize = 64;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SimCode {
    Uncoded,
    Coded(CodeKind),
}

impl SimCode {
    /// 0 for uncoded, otherwise the code family id.
    pub fn id(self) -> u8 {
        match self {
            SimCode::Uncoded => 0,
            SimCode::Coded(k) => k.id(),
        }
    }
}

impl std::str::FromStr for SimCode {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("uncoded") || s.eq_ignore_ascii_case("none") {
            return Ok(SimCode::Uncoded);
        }
        s.parse::<CodeKind>().map(SimCode::Coded).map_err(|_| SimError::Value {
            key: "code".into(),
            value: s.into(),
        })
    }
}

impl std::fmt::Display for SimCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SimCode::Uncoded => f.write_str("uncoded"),
            SimCode::Coded(k) => write!(f, "{k}"),
        }
    }
}

/// Tallies at one sweep point.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub sweep_value: f64,
    /// Geometry actually simulated, after rate scaling.
    pub params: ChannelParams,
    pub frames: u64,
    pub frame_errors_all: u64,
    pub frame_errors_mid: u64,
    pub bits_all: u64,
    pub bit_errors_all: u64,
    pub bits_mid: u64,
    pub bit_errors_mid: u64,
    pub profile: ErrorProfile,
    /// Decoder outcomes; empty for uncoded runs.
    pub outcomes: OutcomeCounts,
    /// Interior middle-row cells of the written grids, and how many of them
    /// are PIS (SIS included) or RTIS centers.
    pub cells_scanned: u64,
    pub pis_written: u64,
    pub rtis_written: u64,
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl SweepPoint {
    pub fn fer_all(&self) -> f64 {
        ratio(self.frame_errors_all, self.frames)
    }

    pub fn fer_mid(&self) -> f64 {
        ratio(self.frame_errors_mid, self.frames)
    }

    pub fn ber_all(&self) -> f64 {
        ratio(self.bit_errors_all, self.bits_all)
    }

    pub fn ber_mid(&self) -> f64 {
        ratio(self.bit_errors_mid, self.bits_mid)
    }

    pub fn row(&self, code: SimCode) -> SweepRow {
        let (pis_share, ipis_share, random_share) = self.profile.shares();
        SweepRow {
            sweep_value: self.sweep_value,
            fer_all: self.fer_all(),
            fer_mid: self.fer_mid(),
            ber_all: self.ber_all(),
            ber_mid: self.ber_mid(),
            pis_share,
            ipis_share,
            random_share,
            code_id: code.id(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub code: SimCode,
    pub m: usize,
    /// Input bits per written bit (1 for uncoded).
    pub normalized_rate: f64,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn rows(&self) -> Vec<SweepRow> {
        self.points.iter().map(|p| p.row(self.code)).collect()
    }
}

/// One CSV record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub fer_all: f64,
    pub fer_mid: f64,
    pub ber_all: f64,
    pub ber_mid: f64,
    pub pis_share: f64,
    pub ipis_share: f64,
    pub random_share: f64,
    pub code_id: u8,
}

pub fn write_csv<W: io::Write>(rows: &[SweepRow], out: W) -> Result<(), SimError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<SweepRow>, SimError> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<Vec<SweepRow>, _>>()?)
}

/// Frame layout of a run.
enum Writer {
    Uncoded { cols: usize },
    Coded(StreamCodec),
}

impl Writer {
    fn cols(&self) -> usize {
        match self {
            Writer::Uncoded { cols } => *cols,
            Writer::Coded(sc) => sc.frame_columns(),
        }
    }

    fn normalized_rate(&self) -> f64 {
        match self {
            Writer::Uncoded { .. } => 1.0,
            Writer::Coded(sc) => sc.frame_bits() as f64 / (3 * sc.frame_columns()) as f64,
        }
    }
}

/// Counter-based frame stream: one key per run, one stream per frame.
fn frame_rng(seed: u64, point: usize, frame: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 40) | frame as u64);
    rng
}

pub fn run_sweep(kind: SweepKind, code: SimCode, cfg: &SimConfig) -> Result<SweepResult, SimError> {
    if cfg.frames == 0 {
        return Err(SimError::NoFrames);
    }
    let m = cfg.m_for(kind);
    let writer = match code {
        SimCode::Coded(k) => Writer::Coded(StreamCodec::new(k, m)?),
        // Same input bits per frame as the OT frame at this length.
        SimCode::Uncoded => Writer::Uncoded {
            cols: StreamCodec::new(CodeKind::Ot, m)?.frame_bits().div_ceil(3),
        },
    };
    let rn = writer.normalized_rate();
    let points = cfg
        .points(kind)
        .iter()
        .enumerate()
        .map(|(pi, &value)| {
            let mut params = cfg.geometry(kind, value)?;
            if cfg.rate_scaling {
                params = params.scaled(rn);
            }
            run_point(&writer, cfg, pi, value, params)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepResult {
        kind,
        code,
        m,
        normalized_rate: rn,
        points,
    })
}

fn run_point(
    writer: &Writer,
    cfg: &SimConfig,
    pi: usize,
    value: f64,
    params: ChannelParams,
) -> Result<SweepPoint, SimError> {
    let kernel = cfg.surrogate.kernel(params.density());
    let sigma = cfg.surrogate.sigma(params.energy());
    let blocks = cfg.frames.div_ceil(BLOCK_FRAMES);
    let tallies = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK_FRAMES;
            let hi = (lo + BLOCK_FRAMES).min(cfg.frames);
            run_block(writer, cfg.seed, pi, lo..hi, &kernel, sigma)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut point = SweepPoint {
        sweep_value: value,
        params,
        frames: 0,
        frame_errors_all: 0,
        frame_errors_mid: 0,
        bits_all: 0,
        bit_errors_all: 0,
        bits_mid: 0,
        bit_errors_mid: 0,
        profile: ErrorProfile::default(),
        outcomes: OutcomeCounts::default(),
        cells_scanned: 0,
        pis_written: 0,
        rtis_written: 0,
    };
    for t in &tallies {
        point.frames += t.frames;
        point.frame_errors_all += t.frame_errors_all;
        point.frame_errors_mid += t.frame_errors_mid;
        point.bits_all += t.bits_all;
        point.bit_errors_all += t.bit_errors_all;
        point.bits_mid += t.bits_mid;
        point.bit_errors_mid += t.bit_errors_mid;
        point.profile.merge(&t.profile);
        let o = &mut point.outcomes;
        o.ok += t.outcomes.ok;
        o.constraint_violation += t.outcomes.constraint_violation;
        o.index_out_of_range += t.outcomes.index_out_of_range;
        o.bridge_mismatch += t.outcomes.bridge_mismatch;
        o.message_mismatch += t.outcomes.message_mismatch;
        point.cells_scanned += t.cells_scanned;
        point.pis_written += t.pis_written;
        point.rtis_written += t.rtis_written;
    }
    Ok(point)
}

#[derive(Default)]
struct Tally {
    frames: u64,
    frame_errors_all: u64,
    frame_errors_mid: u64,
    bits_all: u64,
    bit_errors_all: u64,
    bits_mid: u64,
    bit_errors_mid: u64,
    profile: ErrorProfile,
    outcomes: OutcomeCounts,
    cells_scanned: u64,
    pis_written: u64,
    rtis_written: u64,
}

fn run_block(
    writer: &Writer,
    seed: u64,
    point: usize,
    frames: Range<usize>,
    kernel: &Kernel,
    sigma: f64,
) -> Result<Tally, SimError> {
    let fc = writer.cols();
    let n = frames.len();
    let mut rngs: Vec<ChaCha8Rng> = frames.clone().map(|f| frame_rng(seed, point, f)).collect();

    let (written, sent, sc) = match writer {
        Writer::Uncoded { cols } => {
            let mut g = BitGrid::new(3, n * cols);
            for (k, rng) in rngs.iter_mut().enumerate() {
                for c in k * cols..(k + 1) * cols {
                    for r in 0..3 {
                        g.set(r, c, rng.random_range(0..2u8));
                    }
                }
            }
            (g, Vec::new(), None)
        }
        Writer::Coded(sc) => {
            let fb = sc.frame_bits();
            let bits: Vec<u8> = rngs
                .iter_mut()
                .flat_map(|rng| (0..fb).map(|_| rng.random_range(0..2u8)).collect::<Vec<_>>())
                .collect();
            let sent = sc.frames_from_bits(&bits)?;
            let stream = sc.encode_frames(&sent)?;
            (sc.to_grid(&stream)?, sent, Some(sc))
        }
    };

    let mut readback = convolve(&written.to_signed(), kernel);
    for (k, rng) in rngs.iter_mut().enumerate() {
        add_noise(&mut readback, k * fc..(k + 1) * fc, sigma, rng);
    }
    let read = read_hard(&readback);

    let mut t = Tally {
        frames: n as u64,
        ..Tally::default()
    };
    let scan = grid_scan(&written);
    t.cells_scanned = written.cols().saturating_sub(2) as u64;
    t.rtis_written = scan.len() as u64;
    t.pis_written = scan.iter().filter(|(_, c)| c.is_pis()).count() as u64;
    debug_assert!(scan.iter().all(|(_, c)| *c != GridClass::None));

    let outcomes = match sc {
        Some(sc) => Some(sc.check_stream(&sc.from_grid(&read)?, &sent)?),
        None => None,
    };
    for k in 0..n {
        let cols = k * fc..(k + 1) * fc;
        let mut err_all = 0u64;
        let mut err_mid = 0u64;
        for c in cols.clone() {
            for r in 0..3 {
                if written.get(r, c) != read.get(r, c) {
                    err_all += 1;
                    if r == 1 {
                        err_mid += 1;
                    }
                }
            }
        }
        t.bits_all += 3 * fc as u64;
        t.bits_mid += fc as u64;
        t.bit_errors_all += err_all;
        t.bit_errors_mid += err_mid;
        t.frame_errors_mid += u64::from(err_mid > 0);
        let frame_error = match &outcomes {
            Some(o) => {
                t.outcomes.add(o[k]);
                o[k].is_error()
            }
            None => err_all > 0,
        };
        t.frame_errors_all += u64::from(frame_error);
        t.profile.merge(&profile_columns(&written, &read, cols)?);
    }
    Ok(t)
}
