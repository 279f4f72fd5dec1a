//! Common codec interface and codec construction by family.

use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::enumeration::{pow2, CodeKind};
use crate::galois::Field;
use crate::oploco::OpCodec;
use crate::otloco::OtCodec;
use crate::patterns::PatternSet;
use crate::rank_oracle::RankError;
use crate::stloco::StCodec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("codeword length must be at least 1")]
    ZeroLength,
    #[error("codeword has {found} symbols, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("symbol {symbol} at position {position} is outside the alphabet")]
    Alphabet { position: usize, symbol: u8 },
    #[error("constraint violation: forbidden pattern ends at position {0}")]
    ConstraintViolation(usize),
    #[error("codeword index is not below 2^s")]
    IndexOutOfMessageRange,
    #[error("message does not fit in {0} bits")]
    MessageOutOfRange(u64),
    #[error("index does not address a codeword")]
    IndexOutOfRange,
    #[error("bridge pattern is not mapped to a payload")]
    UnknownBridgePattern,
    #[error("payload {0} does not fit the bridge")]
    PayloadOutOfRange(u32),
}

impl From<RankError> for CodecError {
    fn from(e: RankError) -> Self {
        match e {
            RankError::Alphabet { position, symbol } => CodecError::Alphabet { position, symbol },
            RankError::Violation(p) => CodecError::ConstraintViolation(p),
            RankError::OutOfRange(_) => CodecError::IndexOutOfRange,
        }
    }
}

/// A fixed-length LOCO code with inter-codeword bridging.
pub trait ConstrainedCodec: Send + Sync {
    fn kind(&self) -> CodeKind;

    /// Codeword length in symbols.
    fn m(&self) -> usize;

    /// Message bits per codeword, `floor(log2 N(m))`.
    fn message_bits(&self) -> u64;

    fn patterns(&self) -> &PatternSet;

    fn cardinality(&self) -> BigUint;

    /// Lexicographic index of a valid codeword.
    fn index(&self, cw: &[u8]) -> Result<BigUint, CodecError>;

    /// Codeword at a lexicographic index.
    fn codeword(&self, index: &BigUint) -> Result<Vec<u8>, CodecError>;

    /// Symbols per bridge.
    fn bridge_len(&self) -> usize;

    /// Input bits carried by each bridge.
    fn payload_bits(&self) -> u32;

    /// Bridges mapped to payloads `0..2^payload_bits`, in payload order.
    /// `tail` holds up to the last two written symbols, `head` up to the
    /// first two of the next codeword (empty after the last frame).
    fn bridge_table(&self, tail: &[u8], head: &[u8]) -> Vec<Vec<u8>>;

    fn field(&self) -> Field {
        self.patterns().field()
    }

    /// Coded tracks in the group of three.
    fn tracks_coded(&self) -> usize {
        self.field().bits()
    }

    fn encode(&self, message: &BigUint) -> Result<Vec<u8>, CodecError> {
        if message >= &pow2(self.message_bits()) {
            return Err(CodecError::MessageOutOfRange(self.message_bits()));
        }
        self.codeword(message)
    }

    fn decode(&self, cw: &[u8]) -> Result<BigUint, CodecError> {
        let index = self.index(cw)?;
        if index >= pow2(self.message_bits()) {
            return Err(CodecError::IndexOutOfMessageRange);
        }
        Ok(index)
    }

    fn bridge_encode(&self, tail: &[u8], head: &[u8], payload: u32) -> Result<Vec<u8>, CodecError> {
        let table = self.bridge_table(tail, head);
        table
            .get(payload as usize)
            .cloned()
            .ok_or(CodecError::PayloadOutOfRange(payload))
    }

    fn bridge_decode(&self, tail: &[u8], bridge: &[u8], head: &[u8]) -> Result<u32, CodecError> {
        self.bridge_table(tail, head)
            .iter()
            .position(|b| b.as_slice() == bridge)
            .map(|p| p as u32)
            .ok_or(CodecError::UnknownBridgePattern)
    }
}

/// Checks length and alphabet, then returns the first violation if any.
pub(crate) fn validate(set: &PatternSet, m: usize, cw: &[u8]) -> Result<(), CodecError> {
    if cw.len() != m {
        return Err(CodecError::Length {
            expected: m,
            found: cw.len(),
        });
    }
    let q = set.field().order();
    for (position, &symbol) in cw.iter().enumerate() {
        if symbol >= q {
            return Err(CodecError::Alphabet { position, symbol });
        }
        let lo = position.saturating_sub(set.max_len() - 1);
        if set.completes_forbidden(&cw[lo..position], symbol) {
            return Err(CodecError::ConstraintViolation(position));
        }
    }
    Ok(())
}

/// Forbidden patterns of `tail ++ bridge ++ head` that overlap the bridge.
pub fn boundary_violations(set: &PatternSet, tail: &[u8], bridge: &[u8], head: &[u8]) -> usize {
    let window: Vec<u8> = tail.iter().chain(bridge).chain(head).copied().collect();
    let lo = tail.len();
    let hi = lo + bridge.len();
    set.find_forbidden(&window)
        .iter()
        .filter(|o| o.position + o.pattern.len() > lo && o.position < hi)
        .count()
}

pub fn admissible(set: &PatternSet, tail: &[u8], bridge: &[u8], head: &[u8]) -> bool {
    boundary_violations(set, tail, bridge, head) == 0
}

/// Shared codec for a family at codeword length `m`.
pub fn codec(kind: CodeKind, m: usize) -> Result<Arc<dyn ConstrainedCodec>, CodecError> {
    Ok(match kind {
        CodeKind::Ot => Arc::new(OtCodec::new(m)?),
        CodeKind::St => Arc::new(StCodec::new(m)?),
        CodeKind::Op => Arc::new(OpCodec::new(m)?),
    })
}
