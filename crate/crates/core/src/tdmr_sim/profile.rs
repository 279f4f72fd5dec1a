//! Classification of read errors by the written neighborhood of the victim.

use std::ops::Range;

use crate::grid::{BitGrid, GridError};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Pis,
    Ipis,
    Random,
}

impl ErrorKind {
    fn idx(self) -> usize {
        match self {
            ErrorKind::Pis => 0,
            ErrorKind::Ipis => 1,
            ErrorKind::Random => 2,
        }
    }
}

/// Bit-error tallies per track and class.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct ErrorProfile {
    /// `counts[row][kind]` with kinds ordered PIS, IPIS, random.
    pub counts: [[u64; 3]; 3],
}

impl ErrorProfile {
    pub fn record(&mut self, row: usize, kind: ErrorKind) {
        self.counts[row][kind.idx()] += 1;
    }

    pub fn count(&self, kind: ErrorKind) -> u64 {
        self.counts.iter().map(|r| r[kind.idx()]).sum()
    }

    pub fn middle(&self, kind: ErrorKind) -> u64 {
        self.counts[1][kind.idx()]
    }

    pub fn pis(&self) -> u64 {
        self.count(ErrorKind::Pis)
    }

    pub fn ipis(&self) -> u64 {
        self.count(ErrorKind::Ipis)
    }

    pub fn random(&self) -> u64 {
        self.count(ErrorKind::Random)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn track_total(&self, row: usize) -> u64 {
        self.counts[row].iter().sum()
    }

    /// `(pis, ipis, random)` shares, zeros when there are no errors.
    pub fn shares(&self) -> (f64, f64, f64) {
        let t = self.total();
        if t == 0 {
            return (0.0, 0.0, 0.0);
        }
        let t = t as f64;
        (self.pis() as f64 / t, self.ipis() as f64 / t, self.random() as f64 / t)
    }

    pub fn merge(&mut self, other: &ErrorProfile) {
        for (a, b) in self.counts.iter_mut().flatten().zip(other.counts.iter().flatten()) {
            *a += b;
        }
    }
}

/// Class of a victim from its written Manhattan-1 neighbors that exist in
/// the grid: 4 complementary is PIS, exactly 3 is IPIS, anything else random.
pub fn victim_kind(written: &BitGrid, row: usize, col: usize) -> ErrorKind {
    let center = written.get(row, col);
    let comp = [(-1, 0), (1, 0), (0, -1), (0, 1)]
        .iter()
        .filter_map(|&(dr, dc)| written.get_offset(row, col, dr, dc))
        .filter(|&b| b != center)
        .count();
    match comp {
        4 => ErrorKind::Pis,
        3 => ErrorKind::Ipis,
        _ => ErrorKind::Random,
    }
}

pub fn profile_errors(written: &BitGrid, read: &BitGrid) -> Result<ErrorProfile, GridError> {
    profile_columns(written, read, 0..written.cols())
}

/// Profile restricted to a column range; neighbors outside the range still
/// count when they are in the grid.
pub fn profile_columns(written: &BitGrid, read: &BitGrid, cols: Range<usize>) -> Result<ErrorProfile, GridError> {
    written.same_shape(read)?;
    let mut p = ErrorProfile::default();
    for r in 0..written.rows() {
        for c in cols.clone() {
            if written.get(r, c) != read.get(r, c) {
                p.record(r, victim_kind(written, r, c));
            }
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: [&[u8]; 3]) -> BitGrid {
        BitGrid::from_rows(&rows.map(|r| r.to_vec())).unwrap()
    }

    #[test]
    fn no_errors_no_profile() {
        let g = grid([&[1, 0, 1], &[0, 1, 0], &[1, 0, 1]]);
        assert_eq!(profile_errors(&g, &g).unwrap(), ErrorProfile::default());
    }

    #[test]
    fn flip_at_plus_center() {
        let w = grid([&[1, 0, 1], &[0, 1, 0], &[1, 0, 1]]);
        let mut r = w.clone();
        r.set(1, 1, 0);
        let p = profile_errors(&w, &r).unwrap();
        assert_eq!(p.pis(), 1);
        assert_eq!(p.total(), 1);
        assert_eq!(p.shares(), (1.0, 0.0, 0.0));
    }

    #[test]
    fn edge_victims_use_available_neighbors() {
        let w = grid([&[0, 1, 0, 0], &[1, 0, 1, 1], &[0, 0, 0, 0]]);
        assert_eq!(victim_kind(&w, 0, 1), ErrorKind::Ipis);
        assert_eq!(victim_kind(&w, 1, 1), ErrorKind::Ipis);
        assert_eq!(victim_kind(&w, 0, 3), ErrorKind::Random);
        assert_eq!(victim_kind(&w, 2, 2), ErrorKind::Random);
    }

    #[test]
    fn shape_checked() {
        let a = BitGrid::new(3, 4);
        let b = BitGrid::new(3, 5);
        assert!(profile_errors(&a, &b).is_err());
    }
}
