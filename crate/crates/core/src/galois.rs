//! GF(4) and GF(8) symbols as an ordered alphabet.
//!
//! A symbol is stored by its integer level: `0` for the zero element and
//! `k + 1` for `alpha^k`. Lexicographic order on symbols is numeric order on
//! levels, and the level doubles as the binary column written across the
//! coded down tracks (most significant bit on the upper track).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Field (alphabet) of a constrained code.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// GF(4): 2-bit columns on the upper and middle tracks.
    Gf4,
    /// GF(8): 3-bit columns on all three tracks.
    Gf8,
}

impl Field {
    /// Field order `q`.
    pub const fn order(self) -> u8 {
        match self {
            Field::Gf4 => 4,
            Field::Gf8 => 8,
        }
    }

    /// Number of track bits per symbol.
    pub const fn bits(self) -> usize {
        match self {
            Field::Gf4 => 2,
            Field::Gf8 => 3,
        }
    }

    pub fn from_order(q: u8) -> Option<Field> {
        match q {
            4 => Some(Field::Gf4),
            8 => Some(Field::Gf8),
            _ => None,
        }
    }

    /// Bit of `level` on column row `row` (0 = upper track).
    #[inline]
    pub fn column_bit(self, level: u8, row: usize) -> u8 {
        debug_assert!(row < self.bits());
        (level >> (self.bits() - 1 - row)) & 1
    }

    /// Level assembled from a column, top to bottom.
    pub fn level_from_column(self, column: &[u8]) -> Result<u8, SymbolError> {
        if column.len() != self.bits() {
            return Err(SymbolError::ColumnHeight {
                expected: self.bits(),
                found: column.len(),
            });
        }
        column.iter().try_fold(0u8, |acc, &b| match b {
            0 | 1 => Ok((acc << 1) | b),
            other => Err(SymbolError::NotABit(other)),
        })
    }

    /// All symbols in lexicographic order.
    pub fn symbols(self) -> impl Iterator<Item = Symbol> {
        (0..self.order()).map(move |level| Symbol { level, field: self })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymbolError {
    #[error("level {level} is outside GF({order})")]
    LevelOutOfRange { level: u8, order: u8 },
    #[error("column has {found} bits, expected {expected}")]
    ColumnHeight { expected: usize, found: usize },
    #[error("value {0} is not a bit")]
    NotABit(u8),
    #[error("cannot parse symbol {0:?}")]
    Parse(String),
}

/// A field element identified by its integer level.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    level: u8,
    field: Field,
}

impl Symbol {
    pub fn new(field: Field, level: u8) -> Result<Symbol, SymbolError> {
        if level < field.order() {
            Ok(Symbol { level, field })
        } else {
            Err(SymbolError::LevelOutOfRange {
                level,
                order: field.order(),
            })
        }
    }

    pub const fn zero(field: Field) -> Symbol {
        Symbol { level: 0, field }
    }

    /// `alpha^k` for `k < q - 1`.
    pub fn alpha_pow(field: Field, k: u8) -> Result<Symbol, SymbolError> {
        Symbol::new(field, k.saturating_add(1))
    }

    pub const fn level(self) -> u8 {
        self.level
    }

    pub const fn field(self) -> Field {
        self.field
    }

    /// Symbol whose level sums with this one to `q - 1`.
    pub fn complement(self) -> Symbol {
        Symbol {
            level: self.field.order() - 1 - self.level,
            field: self.field,
        }
    }

    /// Binary column, upper track first.
    pub fn to_column(self) -> Vec<u8> {
        (0..self.field.bits())
            .map(|row| self.field.column_bit(self.level, row))
            .collect()
    }

    pub fn from_column(field: Field, column: &[u8]) -> Result<Symbol, SymbolError> {
        field.level_from_column(column).map(|level| Symbol { level, field })
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.level)
    }
}

/// Parses a single level digit for a known field.
pub fn parse_symbol(field: Field, text: &str) -> Result<Symbol, SymbolError> {
    let level = u8::from_str(text.trim()).map_err(|_| SymbolError::Parse(text.to_string()))?;
    Symbol::new(field, level)
}

/// Parses whitespace-separated level digits.
pub fn parse_levels(field: Field, text: &str) -> Result<Vec<u8>, SymbolError> {
    text.split_whitespace()
        .map(|tok| parse_symbol(field, tok).map(Symbol::level))
        .collect()
}

/// Renders levels as space-separated digits.
pub fn format_levels(levels: &[u8]) -> String {
    let mut out = String::with_capacity(levels.len() * 2);
    for (i, l) in levels.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push(char::from(b'0' + l));
    }
    out
}
