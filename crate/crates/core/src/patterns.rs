//! Forbidden-pattern sets, sequence scanners, and 3x3 isolation classifiers.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::galois::{Field, SymbolError};
use crate::grid::BitGrid;

/// Longest forbidden tuple supported by the scanners and codecs.
pub const MAX_PATTERN_LEN: usize = 3;

/// Named GF(8) and GF(4) symbol subsets (as levels) used to define the
/// built-in sets and the closed-form codec case tables.
pub mod subsets {
    /// Symbols that isolate `alpha` (level 2): `{0, 1, alpha^3, alpha^4}`.
    pub const BETA1: [u8; 4] = [0, 1, 4, 5];
    /// `{0, 1, alpha^3}`.
    pub const BETA1P: [u8; 3] = [0, 1, 4];
    /// Symbols that isolate `alpha^4` (level 5): `{alpha, alpha^2, alpha^5, alpha^6}`.
    pub const BETA2: [u8; 4] = [2, 3, 6, 7];
    /// `{alpha^2, alpha^5, alpha^6}`.
    pub const BETA2P: [u8; 3] = [3, 6, 7];
    /// Middle symbols of the row-wise 1-victim triples: `{alpha^2, alpha^5}`.
    pub const BETA3: [u8; 2] = [3, 6];
    /// Middle symbols of the row-wise 0-victim triples: `{1, alpha^3}`.
    pub const BETA4: [u8; 2] = [1, 4];
    pub const GAMMA1: [u8; 2] = [6, 7];
    pub const GAMMA2: [u8; 2] = [4, 5];
    pub const GAMMA3: [u8; 2] = [3, 4];
    /// GF(4) `{0, alpha}`.
    pub const ZETA1: [u8; 2] = [0, 2];
    /// GF(4) `{1, alpha^2}`.
    pub const ZETA2: [u8; 2] = [1, 3];

    pub const ALPHA: u8 = 2;
    pub const ALPHA4: u8 = 5;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("unknown pattern set {0:?}")]
    UnknownSet(String),
    #[error("pattern {0:?} has unsupported length (1..={MAX_PATTERN_LEN})")]
    Length(Vec<u8>),
    #[error("pattern {pattern:?} uses a symbol outside GF({order})")]
    Alphabet { pattern: Vec<u8>, order: u8 },
    #[error("pattern {inner:?} occurs inside {outer:?}; set is not minimal")]
    NotMinimal { inner: Vec<u8>, outer: Vec<u8> },
    #[error("pattern set is empty")]
    Empty,
    #[error("line {line}: {source}")]
    Parse { line: usize, source: SymbolError },
}

/// Built-in code families.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinSet {
    /// GF(8) square isolation.
    Os8,
    /// GF(8) plus isolation.
    Op8,
    /// GF(8) rotated-T isolation (PIS and middle-track IPIS).
    Ot8,
    /// GF(4) upper/middle-track coding that removes RTIS.
    St4,
}

impl FromStr for BuiltinSet {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "os" | "os8" => Ok(BuiltinSet::Os8),
            "op" | "op8" => Ok(BuiltinSet::Op8),
            "ot" | "ot8" => Ok(BuiltinSet::Ot8),
            "st" | "st4" => Ok(BuiltinSet::St4),
            other => Err(PatternError::UnknownSet(other.to_string())),
        }
    }
}

/// A minimal set of forbidden contiguous symbol tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    field: Field,
    patterns: Vec<Vec<u8>>,
    max_len: usize,
    /// `forbidden[len - 1][code]` where `code` is the base-q value of the tuple.
    forbidden: [Vec<bool>; MAX_PATTERN_LEN],
}

/// One occurrence reported by [`PatternSet::find_forbidden`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub position: usize,
    pub pattern: Vec<u8>,
}

fn tuple_code(q: usize, tuple: &[u8]) -> usize {
    tuple.iter().fold(0, |acc, &s| acc * q + s as usize)
}

fn contains_window(outer: &[u8], inner: &[u8]) -> bool {
    inner.len() <= outer.len() && outer.windows(inner.len()).any(|w| w == inner)
}

impl PatternSet {
    /// Builds a set, rejecting out-of-alphabet symbols and non-minimal sets.
    /// Exact duplicates are merged.
    pub fn new(field: Field, patterns: Vec<Vec<u8>>) -> Result<PatternSet, PatternError> {
        let q = field.order();
        let mut patterns = patterns;
        patterns.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        patterns.dedup();
        if patterns.is_empty() {
            return Err(PatternError::Empty);
        }
        for p in &patterns {
            if p.is_empty() || p.len() > MAX_PATTERN_LEN {
                return Err(PatternError::Length(p.clone()));
            }
            if p.iter().any(|&s| s >= q) {
                return Err(PatternError::Alphabet {
                    pattern: p.clone(),
                    order: q,
                });
            }
        }
        for (i, inner) in patterns.iter().enumerate() {
            for outer in &patterns[i + 1..] {
                if contains_window(outer, inner) {
                    return Err(PatternError::NotMinimal {
                        inner: inner.clone(),
                        outer: outer.clone(),
                    });
                }
            }
        }
        let qs = q as usize;
        let mut forbidden: [Vec<bool>; MAX_PATTERN_LEN] =
            std::array::from_fn(|len| vec![false; qs.pow(len as u32 + 1)]);
        for p in &patterns {
            forbidden[p.len() - 1][tuple_code(qs, p)] = true;
        }
        let max_len = patterns.iter().map(Vec::len).max().unwrap_or(0);
        Ok(PatternSet {
            field,
            patterns,
            max_len,
            forbidden,
        })
    }

    pub fn builtin(which: BuiltinSet) -> PatternSet {
        use subsets::*;
        let mut pats: Vec<Vec<u8>> = Vec::new();
        let field = match which {
            BuiltinSet::Os8 => {
                pats.push(vec![0, ALPHA, 0]);
                pats.push(vec![7, ALPHA4, 7]);
                Field::Gf8
            }
            BuiltinSet::Op8 => {
                for &a in &BETA1 {
                    for &b in &BETA1 {
                        pats.push(vec![a, ALPHA, b]);
                    }
                }
                for &a in &BETA2 {
                    for &b in &BETA2 {
                        pats.push(vec![a, ALPHA4, b]);
                    }
                }
                Field::Gf8
            }
            BuiltinSet::Ot8 => {
                for &b in &BETA1 {
                    pats.push(vec![ALPHA, b]);
                    pats.push(vec![b, ALPHA]);
                }
                for &b in &BETA2 {
                    pats.push(vec![ALPHA4, b]);
                    pats.push(vec![b, ALPHA4]);
                }
                for &l in &BETA1P {
                    for &mid in &BETA3 {
                        for &r in &BETA1P {
                            pats.push(vec![l, mid, r]);
                        }
                    }
                }
                for &l in &BETA2P {
                    for &mid in &BETA4 {
                        for &r in &BETA2P {
                            pats.push(vec![l, mid, r]);
                        }
                    }
                }
                Field::Gf8
            }
            BuiltinSet::St4 => {
                pats.extend(
                    [[0, 1], [1, 0], [1, 2], [2, 1], [2, 3], [3, 2]]
                        .iter()
                        .map(|p| p.to_vec()),
                );
                pats.push(vec![0, 3, 0]);
                pats.push(vec![3, 0, 3]);
                Field::Gf4
            }
        };
        PatternSet::new(field, pats).expect("built-in sets are minimal")
    }

    /// Text format: one pattern per line as space-separated level digits;
    /// `#` starts a comment.
    pub fn from_text(field: Field, text: &str) -> Result<PatternSet, PatternError> {
        let mut pats = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let p = crate::galois::parse_levels(field, body)
                .map_err(|source| PatternError::Parse { line: i + 1, source })?;
            pats.push(p);
        }
        PatternSet::new(field, pats)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn patterns(&self) -> &[Vec<u8>] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    #[inline]
    pub fn is_forbidden(&self, tuple: &[u8]) -> bool {
        let len = tuple.len();
        (1..=MAX_PATTERN_LEN).contains(&len) && self.forbidden[len - 1][tuple_code(self.field.order() as usize, tuple)]
    }

    /// True if appending `next` to `history` creates a forbidden pattern
    /// ending at `next`.
    #[inline]
    pub fn completes_forbidden(&self, history: &[u8], next: u8) -> bool {
        let mut buf = [0u8; MAX_PATTERN_LEN];
        for len in 1..=self.max_len {
            if len - 1 > history.len() {
                break;
            }
            let start = history.len() + 1 - len;
            buf[..len - 1].copy_from_slice(&history[start..]);
            buf[len - 1] = next;
            if self.is_forbidden(&buf[..len]) {
                return true;
            }
        }
        false
    }

    pub fn is_valid(&self, seq: &[u8]) -> bool {
        (0..seq.len()).all(|i| !self.completes_forbidden(&seq[..i], seq[i]))
    }

    /// Every contiguous occurrence, ordered by position then length.
    pub fn find_forbidden(&self, seq: &[u8]) -> Vec<Occurrence> {
        let mut out = Vec::new();
        for pos in 0..seq.len() {
            for len in 1..=self.max_len.min(seq.len() - pos) {
                let window = &seq[pos..pos + len];
                if self.is_forbidden(window) {
                    out.push(Occurrence {
                        position: pos,
                        pattern: window.to_vec(),
                    });
                }
            }
        }
        out
    }
}

/// Isolation class of a 3x3 neighborhood.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridClass {
    None,
    /// All 8 neighbors complement the center.
    Sis,
    /// All 4 Manhattan-1 neighbors complement the center.
    Pis,
    /// Exactly 3 of the 4 Manhattan-1 neighbors complement the center.
    Ipis,
}

impl GridClass {
    pub fn is_pis(self) -> bool {
        matches!(self, GridClass::Sis | GridClass::Pis)
    }

    /// RTIS is PIS together with IPIS.
    pub fn is_rtis(self) -> bool {
        !matches!(self, GridClass::None)
    }
}

impl fmt::Display for GridClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridClass::None => "none",
            GridClass::Sis => "SIS",
            GridClass::Pis => "PIS",
            GridClass::Ipis => "IPIS",
        })
    }
}

/// The eight neighbors of a center bit.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Neighborhood {
    pub center: u8,
    pub north: u8,
    pub south: u8,
    pub east: u8,
    pub west: u8,
    /// NW, NE, SW, SE.
    pub corners: [u8; 4],
}

impl Neighborhood {
    /// Neighborhood of an interior cell.
    pub fn of(grid: &BitGrid, row: usize, col: usize) -> Neighborhood {
        Neighborhood {
            center: grid.get(row, col),
            north: grid.get(row - 1, col),
            south: grid.get(row + 1, col),
            east: grid.get(row, col + 1),
            west: grid.get(row, col - 1),
            corners: [
                grid.get(row - 1, col - 1),
                grid.get(row - 1, col + 1),
                grid.get(row + 1, col - 1),
                grid.get(row + 1, col + 1),
            ],
        }
    }

    /// Packs as a 9-bit integer (row-major 3x3, top-left most significant).
    pub fn from_bits(bits: u16) -> Neighborhood {
        let b = |i: u16| ((bits >> (8 - i)) & 1) as u8;
        Neighborhood {
            corners: [b(0), b(2), b(6), b(8)],
            north: b(1),
            west: b(3),
            center: b(4),
            east: b(5),
            south: b(7),
        }
    }
}

pub fn classify_grid(n: &Neighborhood) -> GridClass {
    let comp = |b: u8| b != n.center;
    let manhattan = [n.north, n.south, n.east, n.west].iter().filter(|&&b| comp(b)).count();
    match manhattan {
        4 if n.corners.iter().all(|&b| comp(b)) => GridClass::Sis,
        4 => GridClass::Pis,
        3 => GridClass::Ipis,
        _ => GridClass::None,
    }
}

/// Classifies every interior middle-row cell of a 3-row grid, returning the
/// isolated ones as `(column, class)`. Boundary columns are not classified.
pub fn grid_scan(grid: &BitGrid) -> Vec<(usize, GridClass)> {
    assert_eq!(grid.rows(), 3, "grid_scan expects a 3-track group");
    if grid.cols() < 3 {
        return Vec::new();
    }
    (1..grid.cols() - 1)
        .filter_map(|c| {
            let class = classify_grid(&Neighborhood::of(grid, 1, c));
            class.is_rtis().then_some((c, class))
        })
        .collect()
}
