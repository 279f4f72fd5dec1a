//! OT-LOCO over GF(8): closed-form index rule, greedy encoder, and
//! scenario-based bridging with a 3-bit payload.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::codec::{admissible, validate, CodecError, ConstrainedCodec};
use crate::enumeration::{floor_log2, CardinalityTable, CodeKind};
use crate::patterns::{subsets::*, BuiltinSet, PatternSet};

/// Merging variables selected for one symbol.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MergeVector {
    /// 1 is the typical case, 2..=16 the special cases.
    pub case: u8,
    pub y: [u8; 5],
}

impl MergeVector {
    const fn new(case: u8, y: [u8; 5]) -> MergeVector {
        MergeVector { case, y }
    }

    pub fn theta1(self) -> u32 {
        4 * u32::from(self.y[0]) + 2 * u32::from(self.y[1]) + u32::from(self.y[2])
    }

    pub fn theta2(self) -> u32 {
        2 * u32::from(self.y[3]) + u32::from(self.y[4])
    }
}

fn within(set: &[u8], s: Option<u8>) -> bool {
    s.is_some_and(|s| set.contains(&s))
}

/// Case for symbol `c0` given the two symbols before it, first match wins.
pub fn classify_case(c2: Option<u8>, c1: Option<u8>, c0: u8) -> MergeVector {
    const A: [u8; 5] = [0, 1, 0, 0, 0];
    const B: [u8; 5] = [0, 1, 1, 0, 1];
    const C: [u8; 5] = [1, 0, 1, 0, 1];
    const D: [u8; 5] = [1, 0, 0, 1, 1];
    if within(&BETA1P, c2) && within(&BETA3, c1) {
        match c0 {
            2 => return MergeVector::new(2, A),
            3 => return MergeVector::new(3, B),
            6 | 7 => return MergeVector::new(4, C),
            _ => {}
        }
    }
    if within(&BETA2P, c2) && within(&BETA4, c1) && GAMMA2.contains(&c0) {
        return MergeVector::new(5, A);
    }
    if within(&BETA1P, c1) {
        match c0 {
            3 => return MergeVector::new(6, [0, 0, 1, 0, 0]),
            4 | 5 => return MergeVector::new(7, [0, 1, 0, 0, 1]),
            6 => return MergeVector::new(8, [0, 1, 1, 1, 0]),
            7 => return MergeVector::new(9, D),
            _ => {}
        }
    }
    if within(&BETA2P, c1) {
        match c0 {
            2 => return MergeVector::new(10, [0, 0, 1, 0, 1]),
            3 | 4 => return MergeVector::new(11, [0, 1, 0, 1, 0]),
            6 | 7 => return MergeVector::new(12, D),
            _ => {}
        }
    }
    if c1 == Some(ALPHA) {
        match c0 {
            2 => return MergeVector::new(13, A),
            3 => return MergeVector::new(14, B),
            6 | 7 => return MergeVector::new(15, C),
            _ => {}
        }
    }
    if c1 == Some(ALPHA4) && GAMMA2.contains(&c0) {
        return MergeVector::new(16, A);
    }
    match c0 {
        0..=2 => MergeVector::new(1, [0; 5]),
        3..=5 => MergeVector::new(1, [0, 0, 1, 0, 1]),
        _ => MergeVector::new(1, [0, 1, 0, 1, 0]),
    }
}

/// Wildcard-capable symbol template: `None` accepts anything, including a
/// missing symbol.
type Slot = Option<&'static [u8]>;

struct BridgeRow {
    tail: [Slot; 2],
    bridge: [&'static [u8]; 2],
    head: [Slot; 2],
}

const S_ALPHA: &[u8] = &[ALPHA];
const S_ALPHA4: &[u8] = &[ALPHA4];

const fn row(tail: [Slot; 2], bridge: [&'static [u8]; 2], head: [Slot; 2]) -> BridgeRow {
    BridgeRow { tail, bridge, head }
}

/// Bridging scenarios in priority order; rows within a scenario are tried
/// top to bottom.
const SCENARIOS: [&[BridgeRow]; 4] = [
    &[
        row([None, Some(S_ALPHA)], [&BETA2P, &BETA1P], [Some(&BETA1), None]),
        row([None, Some(&BETA1)], [&BETA1P, &BETA2P], [Some(S_ALPHA), None]),
        row([None, Some(S_ALPHA4)], [&BETA1P, &BETA2P], [Some(&BETA2), None]),
        row([None, Some(&BETA2)], [&BETA2P, &BETA1P], [Some(S_ALPHA4), None]),
        row([Some(&BETA1P), Some(&BETA3)], [&BETA2P, &BETA1P], [Some(&BETA1P), None]),
        row([None, Some(&BETA1P)], [&BETA1P, &BETA2P], [Some(&BETA3), Some(&BETA1P)]),
        row([Some(&BETA2P), Some(&BETA4)], [&BETA1P, &BETA2P], [Some(&BETA2P), None]),
        row([None, Some(&BETA2P)], [&BETA2P, &BETA1P], [Some(&BETA4), Some(&BETA2P)]),
    ],
    &[
        row([None, Some(S_ALPHA)], [&BETA2P, &BETA2P], [None, None]),
        row([None, None], [&BETA2P, &BETA2P], [Some(S_ALPHA), None]),
        row([None, Some(S_ALPHA4)], [&BETA1P, &BETA1P], [None, None]),
        row([None, None], [&BETA1P, &BETA1P], [Some(S_ALPHA4), None]),
        row([Some(&BETA1P), Some(&BETA3)], [&BETA2P, &BETA2P], [None, None]),
        row([None, None], [&BETA2P, &BETA2P], [Some(&BETA3), Some(&BETA1P)]),
        row([Some(&BETA2P), Some(&BETA4)], [&BETA1P, &BETA1P], [None, None]),
        row([None, None], [&BETA1P, &BETA1P], [Some(&BETA4), Some(&BETA2P)]),
    ],
    &[
        row([None, Some(&BETA1P)], [&BETA2P, &BETA2P], [Some(&BETA1P), None]),
        row([None, Some(&BETA2P)], [&BETA1P, &BETA1P], [Some(&BETA2P), None]),
        row([None, Some(&BETA1P)], [&BETA1P, &BETA2P], [Some(&BETA2P), None]),
        row([None, Some(&BETA2P)], [&BETA2P, &BETA1P], [Some(&BETA1P), None]),
    ],
    &[row([None, None], [&BETA1P, &BETA2P], [None, None])],
];

fn slot_matches(slot: Slot, s: Option<u8>) -> bool {
    match slot {
        None => true,
        Some(set) => within(set, s),
    }
}

/// Scenario (1-based) and row index used for a boundary. An empty head (end
/// of stream) matches any head template.
pub fn bridge_scenario(tail: &[u8], head: &[u8]) -> (usize, usize) {
    let t1 = tail.len().checked_sub(2).map(|i| tail[i]);
    let t0 = tail.last().copied();
    let h1 = head.first().copied();
    let h0 = head.get(1).copied();
    for (si, rows) in SCENARIOS.iter().enumerate() {
        for (ri, r) in rows.iter().enumerate() {
            if slot_matches(r.tail[0], t1)
                && slot_matches(r.tail[1], t0)
                && (head.is_empty() || slot_matches(r.head[0], h1) && slot_matches(r.head[1], h0))
            {
                return (si + 1, ri);
            }
        }
    }
    unreachable!("the last scenario matches every boundary")
}

/// Admissible bridges for the scenario, in lexicographic order.
pub fn bridge_candidates(set: &PatternSet, tail: &[u8], head: &[u8]) -> Vec<Vec<u8>> {
    let (s, r) = bridge_scenario(tail, head);
    let row = &SCENARIOS[s - 1][r];
    let mut out: Vec<Vec<u8>> = row.bridge[0]
        .iter()
        .flat_map(|&d1| row.bridge[1].iter().map(move |&d0| vec![d1, d0]))
        .filter(|b| admissible(set, tail, b, head))
        .collect();
    out.sort();
    out
}

pub const PAYLOAD_BITS: u32 = 3;

#[derive(Debug)]
pub struct OtCodec {
    m: usize,
    s: u64,
    set: PatternSet,
    /// `N8(0..=m)`.
    n: Vec<BigUint>,
}

impl OtCodec {
    pub fn new(m: usize) -> Result<OtCodec, CodecError> {
        if m == 0 {
            return Err(CodecError::ZeroLength);
        }
        let table = CardinalityTable::ot();
        let n: Vec<BigUint> = (0..=m as i64).map(|k| table.get(k)).collect();
        Ok(OtCodec {
            m,
            s: floor_log2(&n[m]),
            set: PatternSet::builtin(BuiltinSet::Ot8),
            n,
        })
    }

    /// Contribution of level `a` at distance `i` from the right end.
    fn contribution(&self, i: usize, a: u8, v: MergeVector) -> BigUint {
        let t1 = v.theta1();
        let t2 = v.theta2();
        let a = u32::from(a);
        debug_assert!(t1 <= a && t2 <= 3);
        let num = (&self.n[i + 1] - &self.n[i]) * (a - t1) + &self.n[i] * (3 * t2);
        debug_assert!((&num % 6u32).is_zero(), "index rule terms are integral");
        num / 6u32
    }

    fn context(cw: &[u8], pos: usize) -> (Option<u8>, Option<u8>) {
        let c1 = pos.checked_sub(1).map(|p| cw[p]);
        let c2 = pos.checked_sub(2).map(|p| cw[p]);
        (c2, c1)
    }
}

impl ConstrainedCodec for OtCodec {
    fn kind(&self) -> CodeKind {
        CodeKind::Ot
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
        self.n[self.m].clone()
    }

    fn index(&self, cw: &[u8]) -> Result<BigUint, CodecError> {
        validate(&self.set, self.m, cw)?;
        let mut g = BigUint::zero();
        for (pos, &a) in cw.iter().enumerate() {
            let (c2, c1) = Self::context(cw, pos);
            g += self.contribution(self.m - 1 - pos, a, classify_case(c2, c1, a));
        }
        Ok(g)
    }

    fn codeword(&self, index: &BigUint) -> Result<Vec<u8>, CodecError> {
        if index >= &self.n[self.m] {
            return Err(CodecError::IndexOutOfRange);
        }
        let mut residual = index.clone();
        let mut cw: Vec<u8> = Vec::with_capacity(self.m);
        for pos in 0..self.m {
            let i = self.m - 1 - pos;
            let (c2, c1) = Self::context(&cw, pos);
            let lo = pos.saturating_sub(2);
            let (a, g) = (0..8u8)
                .rev()
                .filter(|&a| !self.set.completes_forbidden(&cw[lo..], a))
                .map(|a| (a, self.contribution(i, a, classify_case(c2, c1, a))))
                .find(|(_, g)| g <= &residual)
                .expect("an allowed symbol with zero contribution exists");
            residual -= g;
            cw.push(a);
        }
        debug_assert!(residual.is_zero());
        Ok(cw)
    }

    fn bridge_len(&self) -> usize {
        2
    }

    fn payload_bits(&self) -> u32 {
        PAYLOAD_BITS
    }

    fn bridge_table(&self, tail: &[u8], head: &[u8]) -> Vec<Vec<u8>> {
        let mut c = bridge_candidates(&self.set, tail, head);
        c.truncate(1 << PAYLOAD_BITS);
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_examples() {
        assert_eq!(classify_case(None, Some(2), 2), MergeVector::new(13, [0, 1, 0, 0, 0]));
        assert_eq!(classify_case(None, None, 6), MergeVector::new(1, [0, 1, 0, 1, 0]));
        assert_eq!(classify_case(Some(0), Some(3), 2), MergeVector::new(2, [0, 1, 0, 0, 0]));
        let v = classify_case(Some(7), Some(4), 5);
        assert_eq!((v.case, v.theta1(), v.theta2()), (5, 2, 0));
    }

    #[test]
    fn single_symbol_indices() {
        let c = OtCodec::new(1).unwrap();
        let idx: Vec<u32> = (0..8u8)
            .map(|a| u32::try_from(c.index(&[a]).unwrap()).unwrap())
            .collect();
        assert_eq!(idx, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn last_codeword_is_maximal() {
        for m in 1..=5 {
            let c = OtCodec::new(m).unwrap();
            let last = c.codeword(&(c.cardinality() - 1u32)).unwrap();
            assert_eq!(c.index(&last).unwrap(), c.cardinality() - 1u32);
        }
    }

    #[test]
    fn decoding_errors() {
        let c = OtCodec::new(4).unwrap();
        assert_eq!(c.decode(&[0, 2, 0, 0]), Err(CodecError::ConstraintViolation(1)));
        let top = c.codeword(&(c.cardinality() - 1u32)).unwrap();
        assert_eq!(c.decode(&top), Err(CodecError::IndexOutOfMessageRange));
        assert!(matches!(
            c.encode(&crate::enumeration::pow2(c.message_bits())),
            Err(CodecError::MessageOutOfRange(_))
        ));
        assert_eq!(OtCodec::new(0).unwrap_err(), CodecError::ZeroLength);
    }

    #[test]
    fn scenario_priority() {
        // tail ends beta1' beta3, head starts beta4 beta2'
        assert_eq!(bridge_scenario(&[0, 3], &[1, 7]), (1, 4));
        let set = PatternSet::builtin(BuiltinSet::Ot8);
        let c = bridge_candidates(&set, &[0, 3], &[1, 7]);
        assert_eq!(c.len(), 9);
        assert!(c.iter().all(|b| BETA2P.contains(&b[0]) && BETA1P.contains(&b[1])));
        // With no next codeword the first tail-matching row is used.
        let (sc, _) = bridge_scenario(&[0, 0], &[]);
        assert_eq!(sc, 1);
        assert!(bridge_candidates(&set, &[0, 0], &[]).len() >= 8);
    }

    #[test]
    fn ninth_bridge_is_unmapped() {
        let c = OtCodec::new(3).unwrap();
        let set = PatternSet::builtin(BuiltinSet::Ot8);
        let all = bridge_candidates(&set, &[0, 3], &[1, 7]);
        assert_eq!(
            c.bridge_decode(&[0, 3], &all[8], &[1, 7]),
            Err(CodecError::UnknownBridgePattern)
        );
        for p in 0..8 {
            let b = c.bridge_encode(&[0, 3], &[1, 7], p).unwrap();
            assert_eq!(c.bridge_decode(&[0, 3], &b, &[1, 7]), Ok(p));
        }
    }
}
