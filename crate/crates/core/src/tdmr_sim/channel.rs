//! Geometry, the surrogate read-head kernel, media noise and hard reading.

use rand::Rng;
use rand_distr::StandardNormal;

use super::SimError;
use crate::grid::{BitGrid, Grid};

/// Read-head and cell geometry of a TD setting, all in nm.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ChannelParams {
    pub pw50_ct: f64,
    pub pw50_dt: f64,
    pub tw: f64,
    pub bp: f64,
}

impl ChannelParams {
    pub fn new(pw50_ct: f64, pw50_dt: f64, tw: f64, bp: f64) -> Result<ChannelParams, SimError> {
        for (name, v) in [("PW50_CT", pw50_ct), ("PW50_DT", pw50_dt), ("TW", tw), ("BP", bp)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(SimError::Geometry { name, value: v });
            }
        }
        Ok(ChannelParams {
            pw50_ct,
            pw50_dt,
            tw,
            bp,
        })
    }

    /// TD channel density, PW50 area over cell area.
    pub fn density(&self) -> f64 {
        (self.pw50_ct * self.pw50_dt) / (self.tw * self.bp)
    }

    /// TD energy metric, the cell area in nm^2.
    pub fn energy(&self) -> f64 {
        self.tw * self.bp
    }

    /// Scales both TW and BP by `sqrt(factor)`, so the cell area scales by `factor`.
    pub fn scaled(&self, factor: f64) -> ChannelParams {
        let k = factor.sqrt();
        ChannelParams {
            tw: self.tw * k,
            bp: self.bp * k,
            ..*self
        }
    }
}

/// Constants of the surrogate channel.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Surrogate {
    /// Manhattan-1 weight per unit density.
    pub k1: f64,
    /// Corner weight relative to the Manhattan-1 weight.
    pub k2: f64,
    /// Noise standard deviation at `E_TD = e0`.
    pub k3: f64,
    pub e0: f64,
    /// Cross-track weight factor for victims on the upper and lower tracks.
    pub k4: f64,
}

impl Default for Surrogate {
    fn default() -> Self {
        Surrogate {
            k1: 0.19,
            k2: 0.6,
            k3: 0.22,
            e0: 100.0,
            k4: 0.1,
        }
    }
}

impl Surrogate {
    pub fn kernel(&self, density: f64) -> Kernel {
        let w1 = self.k1 * density;
        Kernel {
            w1,
            w2: self.k2 * w1,
            edge: self.k4,
        }
    }

    pub fn sigma(&self, energy: f64) -> f64 {
        self.k3 / (energy / self.e0).sqrt()
    }
}

/// 3x3 read-head response: center 1, Manhattan-1 `w1`, corners `w2`.
/// Terms crossing tracks into an upper or lower victim are scaled by `edge`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Kernel {
    pub w1: f64,
    pub w2: f64,
    pub edge: f64,
}

impl Kernel {
    pub fn symmetric(w1: f64, w2: f64) -> Kernel {
        Kernel { w1, w2, edge: 1.0 }
    }

    #[inline]
    fn weight(&self, dr: isize, dc: isize) -> f64 {
        match dr.abs() + dc.abs() {
            0 => 1.0,
            1 => self.w1,
            _ => self.w2,
        }
    }
}

/// Noiseless readback. Cells outside the grid, including tracks outside the
/// group, contribute nothing.
pub fn convolve(levels: &Grid<f64>, kernel: &Kernel) -> Grid<f64> {
    let mut out = Grid::new(levels.rows(), levels.cols());
    for r in 0..levels.rows() {
        for c in 0..levels.cols() {
            let edge_row = r == 0 || r + 1 == levels.rows();
            let mut acc = 0.0;
            for dr in -1..=1isize {
                for dc in -1..=1isize {
                    if let Some(x) = levels.get_offset(r, c, dr, dc) {
                        let k = if edge_row && dr != 0 { kernel.edge } else { 1.0 };
                        acc += k * kernel.weight(dr, dc) * x;
                    }
                }
            }
            out.set(r, c, acc);
        }
    }
    out
}

/// Adds `N(0, sigma^2)` to every cell of a column range, column-major.
pub fn add_noise<R: Rng + ?Sized>(grid: &mut Grid<f64>, cols: std::ops::Range<usize>, sigma: f64, rng: &mut R) {
    for c in cols {
        for r in 0..grid.rows() {
            let n: f64 = rng.sample(StandardNormal);
            grid.set(r, c, grid.get(r, c) + sigma * n);
        }
    }
}

/// Readback of a 3-track group of signed levels.
pub fn apply_channel<R: Rng + ?Sized>(
    levels: &Grid<f64>,
    kernel: &Kernel,
    sigma: f64,
    rng: &mut R,
) -> Result<Grid<f64>, SimError> {
    if levels.rows() != 3 {
        return Err(SimError::Rows(levels.rows()));
    }
    let mut out = convolve(levels, kernel);
    add_noise(&mut out, 0..levels.cols(), sigma, rng);
    Ok(out)
}

/// Values `<= 0` read as 0, values `> 0` as 1.
pub fn read_hard(readback: &Grid<f64>) -> BitGrid {
    readback.map(|v| u8::from(v > 0.0))
}
