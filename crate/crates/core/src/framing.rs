//! Frames, bridged symbol streams, written grids, and frame-error accounting.
//!
//! A stream is `cw | bridge | cw | bridge | ...`. Each bridge sees the last
//! two written symbols and the first two of the next codeword; the bridge
//! after the last codeword is computed with an empty head.
//!
//! Frame bits are the `s` message bits (most significant first), then the
//! bridge payload, then for ST the uncoded lower-track bits of the frame's
//! columns.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::codec::{codec, CodecError, ConstrainedCodec};
use crate::enumeration::CodeKind;
use crate::galois::{format_levels, parse_levels, SymbolError};
use crate::grid::{BitGrid, GridError};
use crate::stloco::{TrackError, TrackTriple};

pub const MAGIC: &[u8; 5] = b"LOCO1";

#[derive(Debug, Error)]
pub enum FramingError {
    #[error("{len} bits is not a multiple of the {frame_bits}-bit frame")]
    BitLength { len: usize, frame_bits: usize },
    #[error("{len} columns is not a multiple of the {frame_cols}-column frame")]
    StreamLength { len: usize, frame_cols: usize },
    #[error("frame {frame}: {source}")]
    Codec { frame: usize, source: CodecError },
    #[error("lower track has {found} bits, expected {expected}")]
    LowerTrack { expected: usize, found: usize },
    #[error("bad stream text: {0}")]
    Parse(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error("bad container: {0}")]
    Container(String),
    #[error(transparent)]
    Setup(CodecError),
}

/// Input carried by one frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameInput {
    pub message: BigUint,
    pub payload: u32,
    /// Lower-track bits (ST only; empty otherwise).
    pub lower: Vec<u8>,
}

/// Per-frame decoding result, in priority order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameOutcome {
    Ok,
    ConstraintViolation,
    IndexOutOfMessageRange,
    /// Bridge pattern not mapped, or its payload differs from what was sent.
    BridgeMismatch,
    /// Decoded cleanly but differs from what was sent.
    MessageMismatch,
}

impl FrameOutcome {
    pub fn is_error(self) -> bool {
        self != FrameOutcome::Ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedFrame {
    pub outcome: FrameOutcome,
    pub message: Option<BigUint>,
    pub payload: Option<u32>,
    pub lower: Vec<u8>,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct OutcomeCounts {
    pub ok: usize,
    pub constraint_violation: usize,
    pub index_out_of_range: usize,
    pub bridge_mismatch: usize,
    pub message_mismatch: usize,
}

impl OutcomeCounts {
    pub fn add(&mut self, o: FrameOutcome) {
        match o {
            FrameOutcome::Ok => self.ok += 1,
            FrameOutcome::ConstraintViolation => self.constraint_violation += 1,
            FrameOutcome::IndexOutOfMessageRange => self.index_out_of_range += 1,
            FrameOutcome::BridgeMismatch => self.bridge_mismatch += 1,
            FrameOutcome::MessageMismatch => self.message_mismatch += 1,
        }
    }

    pub fn errors(&self) -> usize {
        self.constraint_violation + self.index_out_of_range + self.bridge_mismatch + self.message_mismatch
    }

    pub fn total(&self) -> usize {
        self.ok + self.errors()
    }
}

/// Written or read symbols with the ST lower track alongside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stream {
    pub symbols: Vec<u8>,
    /// Same length as `symbols` for ST, empty otherwise.
    pub lower: Vec<u8>,
}

#[derive(Clone)]
pub struct StreamCodec {
    codec: Arc<dyn ConstrainedCodec>,
}

impl std::fmt::Debug for StreamCodec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StreamCodec")
            .field("kind", &self.codec.kind())
            .field("m", &self.codec.m())
            .finish()
    }
}

fn tail_of(cw: &[u8]) -> &[u8] {
    &cw[cw.len().saturating_sub(2)..]
}

fn head_of(cw: &[u8]) -> &[u8] {
    &cw[..cw.len().min(2)]
}

impl StreamCodec {
    pub fn new(kind: CodeKind, m: usize) -> Result<StreamCodec, FramingError> {
        Ok(StreamCodec {
            codec: codec(kind, m).map_err(FramingError::Setup)?,
        })
    }

    pub fn from_codec(codec: Arc<dyn ConstrainedCodec>) -> StreamCodec {
        StreamCodec { codec }
    }

    pub fn codec(&self) -> &dyn ConstrainedCodec {
        self.codec.as_ref()
    }

    pub fn kind(&self) -> CodeKind {
        self.codec.kind()
    }

    pub fn m(&self) -> usize {
        self.codec.m()
    }

    pub fn frame_columns(&self) -> usize {
        self.codec.m() + self.codec.bridge_len()
    }

    fn has_lower(&self) -> bool {
        self.codec.tracks_coded() < 3
    }

    fn lower_bits(&self) -> usize {
        if self.has_lower() {
            self.frame_columns()
        } else {
            0
        }
    }

    pub fn frame_bits(&self) -> usize {
        self.codec.message_bits() as usize + self.codec.payload_bits() as usize + self.lower_bits()
    }

    pub fn frames_from_bits(&self, bits: &[u8]) -> Result<Vec<FrameInput>, FramingError> {
        let fb = self.frame_bits();
        if !bits.len().is_multiple_of(fb) {
            return Err(FramingError::BitLength {
                len: bits.len(),
                frame_bits: fb,
            });
        }
        let s = self.codec.message_bits() as usize;
        let p = self.codec.payload_bits() as usize;
        Ok(bits
            .chunks(fb)
            .map(|chunk| {
                let mut message = BigUint::zero();
                for &b in &chunk[..s] {
                    message <<= 1u32;
                    message += u32::from(b & 1);
                }
                let payload = chunk[s..s + p]
                    .iter()
                    .fold(0u32, |acc, &b| (acc << 1) | u32::from(b & 1));
                FrameInput {
                    message,
                    payload,
                    lower: chunk[s + p..].to_vec(),
                }
            })
            .collect())
    }

    pub fn bits_from_frame(&self, message: &BigUint, payload: u32, lower: &[u8]) -> Vec<u8> {
        let s = self.codec.message_bits();
        let p = self.codec.payload_bits();
        let mut bits = Vec::with_capacity(self.frame_bits());
        bits.extend((0..s).rev().map(|i| u8::from(message.bit(i))));
        bits.extend((0..p).rev().map(|i| ((payload >> i) & 1) as u8));
        bits.extend_from_slice(lower);
        bits
    }

    pub fn encode_frames(&self, frames: &[FrameInput]) -> Result<Stream, FramingError> {
        let codewords = frames
            .iter()
            .enumerate()
            .map(|(k, f)| {
                self.codec
                    .encode(&f.message)
                    .map_err(|source| FramingError::Codec { frame: k, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut symbols = Vec::with_capacity(frames.len() * self.frame_columns());
        let mut lower = Vec::new();
        for (k, (cw, f)) in codewords.iter().zip(frames).enumerate() {
            let head = codewords.get(k + 1).map_or(&[][..], |n| head_of(n));
            symbols.extend_from_slice(cw);
            let bridge = self
                .codec
                .bridge_encode(tail_of(&symbols), head, f.payload)
                .map_err(|source| FramingError::Codec { frame: k, source })?;
            symbols.extend_from_slice(&bridge);
            if self.has_lower() {
                if f.lower.len() != self.lower_bits() {
                    return Err(FramingError::LowerTrack {
                        expected: self.lower_bits(),
                        found: f.lower.len(),
                    });
                }
                lower.extend_from_slice(&f.lower);
            }
        }
        Ok(Stream { symbols, lower })
    }

    pub fn encode_bits(&self, bits: &[u8]) -> Result<Stream, FramingError> {
        self.encode_frames(&self.frames_from_bits(bits)?)
    }

    /// Decodes every frame on its own; no reference data is consulted.
    pub fn decode_stream(&self, stream: &Stream) -> Result<Vec<DecodedFrame>, FramingError> {
        let fc = self.frame_columns();
        let n = stream.symbols.len();
        if !n.is_multiple_of(fc) {
            return Err(FramingError::StreamLength { len: n, frame_cols: fc });
        }
        if self.has_lower() && stream.lower.len() != n {
            return Err(FramingError::LowerTrack {
                expected: n,
                found: stream.lower.len(),
            });
        }
        let m = self.m();
        let frames = n / fc;
        Ok((0..frames)
            .map(|k| {
                let base = k * fc;
                let cw = &stream.symbols[base..base + m];
                let tail = tail_of(&stream.symbols[..base + m]);
                let bridge = &stream.symbols[base + m..base + fc];
                let head = if k + 1 < frames {
                    head_of(&stream.symbols[base + fc..base + fc + m])
                } else {
                    &[]
                };
                let lower = if self.has_lower() {
                    stream.lower[base..base + fc].to_vec()
                } else {
                    Vec::new()
                };
                self.decode_frame(cw, tail, bridge, head, lower)
            })
            .collect())
    }

    fn decode_frame(&self, cw: &[u8], tail: &[u8], bridge: &[u8], head: &[u8], lower: Vec<u8>) -> DecodedFrame {
        let fail = |outcome| DecodedFrame {
            outcome,
            message: None,
            payload: None,
            lower: lower.clone(),
        };
        let message = match self.codec.decode(cw) {
            Ok(x) => x,
            Err(CodecError::IndexOutOfMessageRange) => return fail(FrameOutcome::IndexOutOfMessageRange),
            Err(_) => return fail(FrameOutcome::ConstraintViolation),
        };
        match self.codec.bridge_decode(tail, bridge, head) {
            Ok(payload) => DecodedFrame {
                outcome: FrameOutcome::Ok,
                message: Some(message),
                payload: Some(payload),
                lower,
            },
            Err(_) => DecodedFrame {
                outcome: FrameOutcome::BridgeMismatch,
                message: Some(message),
                payload: None,
                lower,
            },
        }
    }

    /// Decodes and compares with the frames that were written.
    pub fn check_stream(&self, stream: &Stream, sent: &[FrameInput]) -> Result<Vec<FrameOutcome>, FramingError> {
        let decoded = self.decode_stream(stream)?;
        if decoded.len() != sent.len() {
            return Err(FramingError::StreamLength {
                len: stream.symbols.len(),
                frame_cols: self.frame_columns(),
            });
        }
        Ok(decoded
            .iter()
            .zip(sent)
            .map(|(d, s)| match d.outcome {
                FrameOutcome::Ok if d.payload != Some(s.payload) => FrameOutcome::BridgeMismatch,
                FrameOutcome::Ok if d.message.as_ref() != Some(&s.message) || d.lower != s.lower => {
                    FrameOutcome::MessageMismatch
                }
                o => o,
            })
            .collect())
    }

    /// Bits recovered from cleanly decoded frames; `None` for failed frames.
    pub fn frame_bits_of(&self, d: &DecodedFrame) -> Option<Vec<u8>> {
        match (d.outcome, &d.message, d.payload) {
            (FrameOutcome::Ok, Some(msg), Some(p)) => Some(self.bits_from_frame(msg, p, &d.lower)),
            _ => None,
        }
    }

    pub fn to_grid(&self, stream: &Stream) -> Result<BitGrid, FramingError> {
        if self.has_lower() {
            Ok(TrackTriple::new(stream.symbols.clone(), stream.lower.clone())?.assemble())
        } else {
            let field = self.codec.field();
            let mut g = BitGrid::new(3, stream.symbols.len());
            for (c, &s) in stream.symbols.iter().enumerate() {
                for r in 0..3 {
                    g.set(r, c, field.column_bit(s, r));
                }
            }
            Ok(g)
        }
    }

    pub fn from_grid(&self, grid: &BitGrid) -> Result<Stream, FramingError> {
        if self.has_lower() {
            let t = TrackTriple::split(grid)?;
            Ok(Stream {
                symbols: t.symbols().to_vec(),
                lower: t.lower().to_vec(),
            })
        } else {
            if grid.rows() != 3 {
                return Err(FramingError::Grid(GridError::RowCount {
                    expected: 3,
                    found: grid.rows(),
                }));
            }
            let symbols = (0..grid.cols())
                .map(|c| (grid.get(0, c) << 2) | (grid.get(1, c) << 1) | grid.get(2, c))
                .collect();
            Ok(Stream {
                symbols,
                lower: Vec::new(),
            })
        }
    }

    /// `cw | bridge | cw | bridge ...`, plus a `lower:` line for ST.
    pub fn to_text(&self, stream: &Stream) -> String {
        let fc = self.frame_columns();
        let m = self.m();
        let parts: Vec<String> = stream
            .symbols
            .chunks(fc)
            .flat_map(|f| {
                let (cw, br) = f.split_at(m.min(f.len()));
                [format_levels(cw), format_levels(br)]
            })
            .filter(|s| !s.is_empty())
            .collect();
        let mut out = parts.join(" | ");
        out.push('\n');
        if self.has_lower() {
            out.push_str("lower: ");
            out.push_str(&format_levels(&stream.lower));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(&self, text: &str) -> Result<Stream, FramingError> {
        let mut symbols = Vec::new();
        let mut lower = Vec::new();
        let mut seen_symbols = false;
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            if let Some(rest) = line.strip_prefix("lower:") {
                lower = rest
                    .split_whitespace()
                    .map(|t| match t {
                        "0" => Ok(0u8),
                        "1" => Ok(1u8),
                        other => Err(FramingError::Parse(format!("lower-track token {other:?}"))),
                    })
                    .collect::<Result<_, _>>()?;
                continue;
            }
            if seen_symbols {
                return Err(FramingError::Parse("more than one symbol line".into()));
            }
            seen_symbols = true;
            let (m, b) = (self.m(), self.codec.bridge_len());
            for (i, seg) in line.split('|').enumerate() {
                let levels = parse_levels(self.codec.field(), seg)?;
                let want = if i % 2 == 0 { m } else { b };
                if levels.len() != want {
                    return Err(FramingError::Parse(format!(
                        "segment {} has {} symbols, expected {want}",
                        i + 1,
                        levels.len()
                    )));
                }
                symbols.extend(levels);
            }
        }
        Ok(Stream { symbols, lower })
    }

    /// Binary container: magic, code id, `m` (u16 BE), frame count (u32 BE),
    /// then each frame's bits packed MSB-first into whole bytes.
    pub fn to_container(&self, bits: &[u8]) -> Result<Vec<u8>, FramingError> {
        let fb = self.frame_bits();
        if !bits.len().is_multiple_of(fb) {
            return Err(FramingError::BitLength {
                len: bits.len(),
                frame_bits: fb,
            });
        }
        let m = u16::try_from(self.m()).map_err(|_| FramingError::Container("m exceeds 16 bits".into()))?;
        let frames = u32::try_from(bits.len() / fb).map_err(|_| FramingError::Container("too many frames".into()))?;
        let mut out = Vec::with_capacity(12 + bits.len() / 8 + 1);
        out.extend_from_slice(MAGIC);
        out.push(self.kind().id());
        out.extend_from_slice(&m.to_be_bytes());
        out.extend_from_slice(&frames.to_be_bytes());
        for frame in bits.chunks(fb) {
            for byte in frame.chunks(8) {
                let v = byte
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | ((b & 1) << (7 - i)));
                out.push(v);
            }
        }
        Ok(out)
    }

    pub fn from_container(bytes: &[u8]) -> Result<(StreamCodec, Vec<u8>), FramingError> {
        let bad = |msg: &str| FramingError::Container(msg.to_string());
        if bytes.len() < 12 || &bytes[..5] != MAGIC {
            return Err(bad("missing LOCO1 header"));
        }
        let kind = CodeKind::from_id(bytes[5]).ok_or_else(|| bad("unknown code id"))?;
        let m = u16::from_be_bytes([bytes[6], bytes[7]]) as usize;
        let frames = u32::from_be_bytes([bytes[8], bytes[9], bytes[10], bytes[11]]) as usize;
        let sc = StreamCodec::new(kind, m)?;
        let fb = sc.frame_bits();
        let per = fb.div_ceil(8);
        let body = &bytes[12..];
        if body.len() != per * frames {
            return Err(bad("payload length does not match the header"));
        }
        let mut bits = Vec::with_capacity(fb * frames);
        for chunk in body.chunks(per) {
            bits.extend((0..fb).map(|i| (chunk[i / 8] >> (7 - i % 8)) & 1));
        }
        Ok((sc, bits))
    }
}

/// Longest run of identical symbols.
pub fn max_run(symbols: &[u8]) -> usize {
    symbols.chunk_by(|a, b| a == b).map(<[u8]>::len).max().unwrap_or(0)
}
