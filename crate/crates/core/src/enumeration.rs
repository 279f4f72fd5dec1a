//! Exact cardinalities, message lengths and finite-length rates.

use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::patterns::{BuiltinSet, PatternSet};
use crate::rank_oracle::CountingDfa;

/// Code families with a dedicated codec.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum CodeKind {
    Ot,
    St,
    Op,
}

impl CodeKind {
    pub fn builtin_set(self) -> BuiltinSet {
        match self {
            CodeKind::Ot => BuiltinSet::Ot8,
            CodeKind::St => BuiltinSet::St4,
            CodeKind::Op => BuiltinSet::Op8,
        }
    }

    /// Identifier used in CSV output and binary containers.
    pub fn id(self) -> u8 {
        match self {
            CodeKind::Ot => 1,
            CodeKind::St => 2,
            CodeKind::Op => 3,
        }
    }

    pub fn from_id(id: u8) -> Option<CodeKind> {
        match id {
            1 => Some(CodeKind::Ot),
            2 => Some(CodeKind::St),
            3 => Some(CodeKind::Op),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CodeKind::Ot => "ot",
            CodeKind::St => "st",
            CodeKind::Op => "op",
        }
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown code {0:?} (expected ot, st or op)")]
pub struct UnknownCode(pub String);

impl FromStr for CodeKind {
    type Err = UnknownCode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ot" => Ok(CodeKind::Ot),
            "st" => Ok(CodeKind::St),
            "op" => Ok(CodeKind::Op),
            other => Err(UnknownCode(other.to_string())),
        }
    }
}

/// Second-order recursion `N(m) = a N(m-1) + b N(m-2)`, seeded at `m = 0, 1`.
#[derive(Debug)]
pub struct CardinalityTable {
    coeffs: (u32, u32),
    /// Value at `m = -1`, used only by the GF(4) index rule.
    minus_one: BigUint,
    values: RwLock<Vec<BigUint>>,
}

impl CardinalityTable {
    /// `N8(0) = 2`, `N8(1) = 8`, `N8(m) = 5 N8(m-1) + 5 N8(m-2)`.
    pub fn ot() -> CardinalityTable {
        CardinalityTable {
            coeffs: (5, 5),
            minus_one: BigUint::zero(),
            values: RwLock::new(vec![BigUint::from(2u32), BigUint::from(8u32)]),
        }
    }

    /// `N4(-1) = 0`, `N4(0) = 2`, `N4(1) = 4`, `N4(m) = 2 N4(m-1) + N4(m-2)`.
    pub fn st() -> CardinalityTable {
        CardinalityTable {
            coeffs: (2, 1),
            minus_one: BigUint::zero(),
            values: RwLock::new(vec![BigUint::from(2u32), BigUint::from(4u32)]),
        }
    }

    pub fn get(&self, m: i64) -> BigUint {
        if m < 0 {
            assert_eq!(m, -1, "cardinalities are defined for m >= -1");
            return self.minus_one.clone();
        }
        let m = m as usize;
        if let Some(v) = self.values.read().expect("table lock").get(m) {
            return v.clone();
        }
        let mut values = self.values.write().expect("table lock");
        while values.len() <= m {
            let k = values.len();
            let next = &values[k - 1] * self.coeffs.0 + &values[k - 2] * self.coeffs.1;
            values.push(next);
        }
        values[m].clone()
    }

    /// `N(-1..=m)` as a vector indexed by `m + 1`.
    pub fn prefix(&self, m: usize) -> Vec<BigUint> {
        std::iter::once(self.minus_one.clone())
            .chain((0..=m as i64).map(|k| self.get(k)))
            .collect()
    }
}

pub fn n8(m: u32) -> BigUint {
    CardinalityTable::ot().get(i64::from(m))
}

pub fn n4(m: i64) -> BigUint {
    CardinalityTable::st().get(m)
}

/// Size of the OT group whose codewords start with a given `0`, `1`,
/// `alpha^2`, `alpha^3`, `alpha^5` or `alpha^6`.
pub fn n8_group1(m: u32) -> BigUint {
    assert!(m >= 1);
    let diff = n8(m) - n8(m - 1);
    assert!((&diff % 6u32).is_zero(), "N8(m) - N8(m-1) divisible by 6");
    diff / 6u32
}

/// Size of the OT group whose codewords start with `alpha` or `alpha^4`.
pub fn n8_group3(m: u32) -> BigUint {
    assert!(m >= 1);
    let prev = n8(m - 1);
    assert!((&prev % 2u32).is_zero(), "N8(m-1) even");
    prev / 2u32
}

/// `floor(log2 n)` for `n >= 1`.
pub fn floor_log2(n: &BigUint) -> u64 {
    assert!(!n.is_zero(), "log2 of zero");
    n.bits() - 1
}

/// Number of length-`m` codewords of the family.
pub fn cardinality(code: CodeKind, m: u32) -> BigUint {
    match code {
        CodeKind::Ot => n8(m),
        CodeKind::St => n4(i64::from(m)),
        CodeKind::Op => CountingDfa::new(PatternSet::builtin(BuiltinSet::Op8)).cardinality(m as usize),
    }
}

/// Message length `s = floor(log2 N(m))`.
pub fn message_length(code: CodeKind, m: u32) -> u64 {
    assert!(m >= 1, "codeword length must be positive");
    floor_log2(&cardinality(code, m))
}

/// Exact non-negative rational.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den > 0);
        Ratio { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Rounded half-up to `places` decimals without floating point.
    pub fn round_decimal(self, places: u32) -> String {
        let scale = 10u128.pow(places);
        let scaled = (u128::from(self.num) * scale * 2 + u128::from(self.den)) / (2 * u128::from(self.den));
        let int = scaled / scale;
        let frac = scaled % scale;
        if places == 0 {
            int.to_string()
        } else {
            format!("{int}.{frac:0width$}", width = places as usize)
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.round_decimal(4))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rates {
    pub m: u32,
    pub cardinality: BigUint,
    pub s: u64,
    /// Input bits per written column, bridge included.
    pub rate: Ratio,
    /// Input bits per written bit.
    pub normalized: Ratio,
}

/// Rates with bridging overhead: OT `(s+3)/(m+2)`, ST `(s+2)/(m+3)` plus
/// one uncoded bit per column, OP `s/(m+1)`.
pub fn rates(code: CodeKind, m: u32) -> Rates {
    let cardinality = cardinality(code, m);
    let s = floor_log2(&cardinality);
    let m64 = u64::from(m);
    let (rate, normalized) = match code {
        CodeKind::Ot => (Ratio::new(s + 3, m64 + 2), Ratio::new(s + 3, 3 * (m64 + 2))),
        CodeKind::St => (Ratio::new(s + 2, m64 + 3), Ratio::new(s + 2 + m64 + 3, 3 * (m64 + 3))),
        CodeKind::Op => (Ratio::new(s, m64 + 1), Ratio::new(s, 3 * (m64 + 1))),
    };
    Rates {
        m,
        cardinality,
        s,
        rate,
        normalized,
    }
}

/// `2^s` as a big integer.
pub fn pow2(s: u64) -> BigUint {
    BigUint::one() << s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recursion_seeds() {
        assert_eq!(n8(0), BigUint::from(2u32));
        assert_eq!(n8(2), BigUint::from(50u32));
        assert_eq!(n8(3), BigUint::from(290u32));
        assert_eq!(n4(-1), BigUint::zero());
        assert_eq!(n4(2), BigUint::from(10u32));
        assert_eq!(n4(5), BigUint::from(140u32));
    }

    #[test]
    fn big_values_stay_exact() {
        assert_eq!(message_length(CodeKind::Ot, 81), 207);
        let table = CardinalityTable::ot();
        let far = table.get(200);
        assert_eq!(far, table.get(199) * 5u32 + table.get(198) * 5u32);
    }

    #[test]
    fn group_sizes_partition() {
        for m in 1..40 {
            let total = n8_group1(m) * 6u32 + n8_group3(m) * 2u32;
            assert_eq!(total, n8(m), "m = {m}");
        }
    }

    #[test]
    fn rounding() {
        assert_eq!(Ratio::new(29, 12).round_decimal(4), "2.4167");
        assert_eq!(Ratio::new(1, 8).round_decimal(2), "0.13");
        assert_eq!(Ratio::new(5, 2).round_decimal(0), "3");
        assert_eq!(Ratio::new(5, 2).to_string(), "2.5000");
    }

    #[test]
    fn code_names() {
        assert_eq!("OT".parse::<CodeKind>(), Ok(CodeKind::Ot));
        assert!("xx".parse::<CodeKind>().is_err());
        for c in [CodeKind::Ot, CodeKind::St, CodeKind::Op] {
            assert_eq!(CodeKind::from_id(c.id()), Some(c));
        }
    }

    #[test]
    fn prefix_layout() {
        let p = CardinalityTable::st().prefix(2);
        assert_eq!(
            p,
            vec![0u32, 2, 4, 10].into_iter().map(BigUint::from).collect::<Vec<_>>()
        );
    }
}
