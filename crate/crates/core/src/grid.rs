//! Row-major grids for track data: bits as written/read, signed levels, and
//! real-valued readback.

use std::fmt::Write as _;

use thiserror::Error;

/// Dense `rows x cols` grid, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type BitGrid = Grid<u8>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("grid rows have unequal lengths")]
    Ragged,
    #[error("grid has {found} rows, expected {expected}")]
    RowCount { expected: usize, found: usize },
    #[error("invalid bit token {0:?}")]
    BadBit(String),
    #[error("grid shapes differ: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
}

impl<T: Copy + Default> Grid<T> {
    pub fn new(rows: usize, cols: usize) -> Self {
        Grid {
            rows,
            cols,
            data: vec![T::default(); rows * cols],
        }
    }
}

impl<T: Copy> Grid<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self, GridError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(GridError::Ragged);
        }
        Ok(Grid {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.cols + col]
    }

    /// Value at a signed offset, `None` outside the grid.
    #[inline]
    pub fn get_offset(&self, row: usize, col: usize, dr: isize, dc: isize) -> Option<T> {
        let r = row.checked_add_signed(dr)?;
        let c = col.checked_add_signed(dc)?;
        (r < self.rows && c < self.cols).then(|| self.get(r, c))
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl Fn(T) -> U) -> Grid<U> {
        Grid {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn same_shape<U>(&self, other: &Grid<U>) -> Result<(), GridError> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(GridError::ShapeMismatch(self.rows, self.cols, other.rows, other.cols))
        }
    }
}

impl BitGrid {
    /// Signed levels `-1`/`+1` for bits `0`/`1`.
    pub fn to_signed(&self) -> Grid<f64> {
        self.map(|b| if b == 0 { -1.0 } else { 1.0 })
    }

    /// Text format: one row per line, bits separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.data.len() * 2 + self.rows);
        for r in 0..self.rows {
            for (c, b) in self.row(r).iter().enumerate() {
                if c > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{b}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format; blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<BitGrid, GridError> {
        let rows = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|tok| match tok {
                        "0" => Ok(0u8),
                        "1" => Ok(1u8),
                        other => Err(GridError::BadBit(other.to_string())),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Grid::from_rows(&rows)
    }
}
