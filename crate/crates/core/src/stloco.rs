//! ST-LOCO over GF(4) on the upper and middle tracks, with the lower track
//! left uncoded.

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::codec::{admissible, validate, CodecError, ConstrainedCodec};
use crate::enumeration::{floor_log2, CardinalityTable, CodeKind};
use crate::galois::Field;
use crate::grid::BitGrid;
use crate::patterns::{BuiltinSet, PatternSet};

pub const PAYLOAD_BITS: u32 = 2;
pub const BRIDGE_LEN: usize = 3;

/// Merging bits `y1..y5` of one symbol.
pub fn merge_bits(c2: Option<u8>, c1: Option<u8>, c0: u8) -> [u8; 5] {
    let mut y = [0u8; 5];
    let Some(c1) = c1 else {
        match c0 {
            1 => y[0] = 1,
            2 => y[1] = 1,
            3 => y[2] = 1,
            _ => {}
        }
        return y;
    };
    // A missing c2 counts as non-zero.
    let c2_zero = c2 == Some(0);
    match (c1, c0) {
        (0, 2) | (2, 2) => y[0] = 1,
        (0, 3) => y[1] = 1,
        (1, 3) => y[3] = 1,
        (3, 3) if c2_zero => y[3] = 1,
        (3, 3) => y[4] = 1,
        (3, 1) if !c2_zero => y[3] = 1,
        _ => {}
    }
    y
}

#[derive(Debug)]
pub struct StCodec {
    m: usize,
    s: u64,
    set: PatternSet,
    /// `N4(-1..=m)`, offset by one.
    n: Vec<BigUint>,
}

impl StCodec {
    pub fn new(m: usize) -> Result<StCodec, CodecError> {
        if m == 0 {
            return Err(CodecError::ZeroLength);
        }
        let n = CardinalityTable::st().prefix(m);
        Ok(StCodec {
            m,
            s: floor_log2(&n[m + 1]),
            set: PatternSet::builtin(BuiltinSet::St4),
            n,
        })
    }

    fn n_at(&self, i: i64) -> &BigUint {
        &self.n[(i + 1) as usize]
    }

    fn contribution(&self, i: usize, y: [u8; 5]) -> BigUint {
        let [y1, y2, y3, y4, y5] = y.map(u32::from);
        let t1 = y1 + y3 + y4;
        let t2 = y2 + y3 + y5;
        let t3 = y1 + y2 + y3;
        let i = i as i64;
        let num = self.n_at(i) * (t1 + 2 * t2) + self.n_at(i - 1) * t3;
        debug_assert!((&num % 2u32).is_zero(), "index rule terms are integral");
        num / 2u32
    }

    fn context(cw: &[u8], pos: usize) -> (Option<u8>, Option<u8>) {
        (pos.checked_sub(2).map(|p| cw[p]), pos.checked_sub(1).map(|p| cw[p]))
    }
}

impl ConstrainedCodec for StCodec {
    fn kind(&self) -> CodeKind {
        CodeKind::St
    }

    fn m(&self) -> usize {
        self.m
    }

    fn message_bits(&self) -> u64 {
        self.s
    }

    fn patterns(&self) -> &PatternSet {
        &self.set
    }

    fn cardinality(&self) -> BigUint {
        self.n[self.m + 1].clone()
    }

    fn index(&self, cw: &[u8]) -> Result<BigUint, CodecError> {
        validate(&self.set, self.m, cw)?;
        let mut g = BigUint::zero();
        for (pos, &c0) in cw.iter().enumerate() {
            let (c2, c1) = Self::context(cw, pos);
            g += self.contribution(self.m - 1 - pos, merge_bits(c2, c1, c0));
        }
        Ok(g)
    }

    fn codeword(&self, index: &BigUint) -> Result<Vec<u8>, CodecError> {
        if index >= &self.cardinality() {
            return Err(CodecError::IndexOutOfRange);
        }
        let mut residual = index.clone();
        let mut cw: Vec<u8> = Vec::with_capacity(self.m);
        for pos in 0..self.m {
            let i = self.m - 1 - pos;
            let (c2, c1) = Self::context(&cw, pos);
            let lo = pos.saturating_sub(2);
            let (c0, g) = (0..4u8)
                .rev()
                .filter(|&c| !self.set.completes_forbidden(&cw[lo..], c))
                .map(|c| (c, self.contribution(i, merge_bits(c2, c1, c))))
                .find(|(_, g)| g <= &residual)
                .expect("an allowed symbol with zero contribution exists");
            residual -= g;
            cw.push(c0);
        }
        debug_assert!(residual.is_zero());
        Ok(cw)
    }

    fn bridge_len(&self) -> usize {
        BRIDGE_LEN
    }

    fn payload_bits(&self) -> u32 {
        PAYLOAD_BITS
    }

    fn tracks_coded(&self) -> usize {
        2
    }

    fn bridge_table(&self, tail: &[u8], head: &[u8]) -> Vec<Vec<u8>> {
        let mut c = bridge_candidates(&self.set, tail, head);
        c.truncate(1 << PAYLOAD_BITS);
        c
    }
}

/// Non-constant admissible 3-symbol bridges in lexicographic order. Constant
/// bridges are skipped so that runs stay bounded across boundaries.
pub fn bridge_candidates(set: &PatternSet, tail: &[u8], head: &[u8]) -> Vec<Vec<u8>> {
    (0..64u8)
        .map(|k| vec![k >> 4, (k >> 2) & 3, k & 3])
        .filter(|b| !(b[0] == b[1] && b[1] == b[2]))
        .filter(|b| admissible(set, tail, b, head))
        .collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrackError {
    #[error("lower track has {lower} bits for {symbols} symbols")]
    LengthMismatch { symbols: usize, lower: usize },
    #[error("grid must have 3 rows, found {0}")]
    Rows(usize),
    #[error("lower-track value {0} is not a bit")]
    NotABit(u8),
}

/// A GF(4) sequence over the upper/middle tracks plus the uncoded lower track.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackTriple {
    symbols: Vec<u8>,
    lower: Vec<u8>,
}

impl TrackTriple {
    pub fn new(symbols: Vec<u8>, lower: Vec<u8>) -> Result<TrackTriple, TrackError> {
        if symbols.len() != lower.len() {
            return Err(TrackError::LengthMismatch {
                symbols: symbols.len(),
                lower: lower.len(),
            });
        }
        if let Some(&b) = lower.iter().find(|&&b| b > 1) {
            return Err(TrackError::NotABit(b));
        }
        Ok(TrackTriple { symbols, lower })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn lower(&self) -> &[u8] {
        &self.lower
    }

    pub fn assemble(&self) -> BitGrid {
        let n = self.symbols.len();
        let mut g = BitGrid::new(3, n);
        for (c, (&s, &l)) in self.symbols.iter().zip(&self.lower).enumerate() {
            g.set(0, c, Field::Gf4.column_bit(s, 0));
            g.set(1, c, Field::Gf4.column_bit(s, 1));
            g.set(2, c, l);
        }
        g
    }

    pub fn split(grid: &BitGrid) -> Result<TrackTriple, TrackError> {
        if grid.rows() != 3 {
            return Err(TrackError::Rows(grid.rows()));
        }
        let symbols = (0..grid.cols())
            .map(|c| (grid.get(0, c) << 1) | grid.get(1, c))
            .collect();
        TrackTriple::new(symbols, grid.row(2).to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_one() {
        let c = StCodec::new(5).unwrap();
        assert_eq!(c.message_bits(), 7);
        assert_eq!(c.index(&[3; 5]).unwrap(), BigUint::from(139u32));
        assert_eq!(c.codeword(&BigUint::from(139u32)).unwrap(), vec![3; 5]);
        // 139 >= 2^7, so it is not a message.
        assert_eq!(c.decode(&[3; 5]), Err(CodecError::IndexOutOfMessageRange));
    }

    #[test]
    fn single_symbol_indices() {
        let c = StCodec::new(1).unwrap();
        for a in 0..4u8 {
            assert_eq!(c.index(&[a]).unwrap(), BigUint::from(a));
        }
    }

    #[test]
    fn bridge_example_set() {
        let set = PatternSet::builtin(BuiltinSet::St4);
        let c = bridge_candidates(&set, &[1], &[2]);
        for want in [[1, 3, 0], [3, 0, 0], [3, 0, 2], [3, 3, 0]] {
            assert!(c.contains(&want.to_vec()), "{want:?}");
        }
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn tracks_roundtrip() {
        let t = TrackTriple::new(vec![0, 2, 3, 1], vec![1, 0, 1, 1]).unwrap();
        let g = t.assemble();
        assert_eq!(g.row(0), &[0, 1, 1, 0]);
        assert_eq!(g.row(1), &[0, 0, 1, 1]);
        assert_eq!(TrackTriple::split(&g).unwrap(), t);
        assert!(matches!(
            TrackTriple::new(vec![0], vec![]),
            Err(TrackError::LengthMismatch { .. })
        ));
        assert_eq!(TrackTriple::split(&BitGrid::new(2, 2)), Err(TrackError::Rows(2)));
    }
}
