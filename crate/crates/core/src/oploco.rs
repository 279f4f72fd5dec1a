//! OP-LOCO over GF(8) through the generic rank engine.

use num_bigint::BigUint;

use crate::codec::{boundary_violations, validate, CodecError, ConstrainedCodec};
use crate::enumeration::{floor_log2, CodeKind};
use crate::patterns::{BuiltinSet, PatternSet};
use crate::rank_oracle::CountingDfa;

#[derive(Debug)]
pub struct OpCodec {
    m: usize,
    s: u64,
    dfa: CountingDfa,
}

impl OpCodec {
    pub fn new(m: usize) -> Result<OpCodec, CodecError> {
        if m == 0 {
            return Err(CodecError::ZeroLength);
        }
        let dfa = CountingDfa::new(PatternSet::builtin(BuiltinSet::Op8));
        let s = floor_log2(&dfa.cardinality(m));
        Ok(OpCodec { m, s, dfa })
    }
}

impl ConstrainedCodec for OpCodec {
    fn kind(&self) -> CodeKind {
        CodeKind::Op
    }

    fn m(&self) -> usize {
        self.m
    }

    fn message_bits(&self) -> u64 {
        self.s
    }

    fn patterns(&self) -> &PatternSet {
        self.dfa.set()
    }

    fn cardinality(&self) -> BigUint {
        self.dfa.cardinality(self.m)
    }

    fn index(&self, cw: &[u8]) -> Result<BigUint, CodecError> {
        validate(self.dfa.set(), self.m, cw)?;
        Ok(self.dfa.rank(cw)?)
    }

    fn codeword(&self, index: &BigUint) -> Result<Vec<u8>, CodecError> {
        Ok(self.dfa.unrank(index, self.m)?)
    }

    fn bridge_len(&self) -> usize {
        1
    }

    fn payload_bits(&self) -> u32 {
        0
    }

    /// The lowest admissible symbol, carrying no payload. Boundaries such as
    /// `beta1 alpha | . | alpha^4 beta2` admit none; there the lowest symbol
    /// with the fewest boundary violations is used.
    fn bridge_table(&self, tail: &[u8], head: &[u8]) -> Vec<Vec<u8>> {
        let best = (0..8u8)
            .min_by_key(|&s| boundary_violations(self.dfa.set(), tail, &[s], head))
            .expect("non-empty alphabet");
        vec![vec![best]]
    }
}
