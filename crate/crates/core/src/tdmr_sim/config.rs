//! Simulation settings and their `key = value` text form.

use std::fmt::Write as _;

use super::channel::{ChannelParams, Surrogate};
use super::SimError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SweepKind {
    Density,
    Energy,
}

impl std::str::FromStr for SweepKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "density" => Ok(SweepKind::Density),
            "energy" => Ok(SweepKind::Energy),
            _ => Err(SimError::Value {
                key: "sweep".into(),
                value: s.into(),
            }),
        }
    }
}

impl std::fmt::Display for SweepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SweepKind::Density => "density",
            SweepKind::Energy => "energy",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub surrogate: Surrogate,
    pub frames: usize,
    pub seed: u64,
    /// Codeword length; `None` picks 23 for density sweeps and 14 for energy.
    pub m: Option<usize>,
    /// Density sweep read head.
    pub pw50_ct: f64,
    pub pw50_dt: f64,
    pub densities: Vec<f64>,
    /// Energy sweep: `PW50_DT = BP` is fixed, `PW50_CT = TW` varies.
    pub energy_bp: f64,
    pub energies: Vec<f64>,
    /// Scale TW and BP by the normalized rate so energy per input bit matches.
    pub rate_scaling: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            surrogate: Surrogate::default(),
            frames: 10_000,
            seed: 1,
            m: None,
            pw50_ct: 20.0,
            pw50_dt: 14.0,
            densities: (0..9).map(|k| (8 + k) as f64 / 10.0).collect(),
            energy_bp: 7.0,
            energies: default_energies(),
            rate_scaling: true,
        }
    }
}

/// Eleven log-spaced points from 3000 down to 78 nm^2.
fn default_energies() -> Vec<f64> {
    let (hi, lo) = (3000.0f64, 78.0f64);
    (0..11)
        .map(|k| {
            let e = hi * (lo / hi).powf(k as f64 / 10.0);
            (e * 10.0).round() / 10.0
        })
        .collect()
}

impl SimConfig {
    pub fn points(&self, kind: SweepKind) -> &[f64] {
        match kind {
            SweepKind::Density => &self.densities,
            SweepKind::Energy => &self.energies,
        }
    }

    pub fn m_for(&self, kind: SweepKind) -> usize {
        self.m.unwrap_or(match kind {
            SweepKind::Density => 23,
            SweepKind::Energy => 14,
        })
    }

    /// Uncoded geometry at a sweep value.
    pub fn geometry(&self, kind: SweepKind, value: f64) -> Result<ChannelParams, SimError> {
        match kind {
            SweepKind::Density => {
                if !(value.is_finite() && value > 0.0) {
                    return Err(SimError::Geometry { name: "D_TD", value });
                }
                let k = value.sqrt();
                ChannelParams::new(self.pw50_ct, self.pw50_dt, self.pw50_ct / k, self.pw50_dt / k)
            }
            SweepKind::Energy => {
                let tw = value / self.energy_bp;
                ChannelParams::new(tw, self.energy_bp, tw, self.energy_bp)
            }
        }
    }

    pub fn parse(text: &str) -> Result<SimConfig, SimError> {
        let mut cfg = SimConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(SimError::ConfigLine(n + 1))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), SimError> {
        let bad = || SimError::Value {
            key: key.into(),
            value: value.into(),
        };
        let real = || value.parse::<f64>().map_err(|_| bad());
        let list = || {
            value
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()
        };
        match key {
            "k1" => self.surrogate.k1 = real()?,
            "k2" => self.surrogate.k2 = real()?,
            "k3" => self.surrogate.k3 = real()?,
            "e0" => self.surrogate.e0 = real()?,
            "k4" => self.surrogate.k4 = real()?,
            "frames" => self.frames = value.parse().map_err(|_| bad())?,
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            "m" => self.m = Some(value.parse().map_err(|_| bad())?),
            "pw50_ct" => self.pw50_ct = real()?,
            "pw50_dt" => self.pw50_dt = real()?,
            "densities" => self.densities = list()?,
            "energy_bp" => self.energy_bp = real()?,
            "energies" => self.energies = list()?,
            "rate_scaling" => self.rate_scaling = value.parse().map_err(|_| bad())?,
            _ => return Err(SimError::UnknownKey(key.into())),
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let mut out = String::new();
        let s = &self.surrogate;
        let _ = writeln!(
            out,
            "k1 = {}\nk2 = {}\nk3 = {}\ne0 = {}\nk4 = {}",
            s.k1, s.k2, s.k3, s.e0, s.k4
        );
        let _ = writeln!(out, "frames = {}\nseed = {}", self.frames, self.seed);
        if let Some(m) = self.m {
            let _ = writeln!(out, "m = {m}");
        }
        let _ = writeln!(out, "pw50_ct = {}\npw50_dt = {}", self.pw50_ct, self.pw50_dt);
        let _ = writeln!(out, "densities = {}", join(&self.densities));
        let _ = writeln!(out, "energy_bp = {}", self.energy_bp);
        let _ = writeln!(out, "energies = {}", join(&self.energies));
        let _ = writeln!(out, "rate_scaling = {}", self.rate_scaling);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_geometry_ranges() {
        let c = SimConfig::default();
        let hi = c.geometry(SweepKind::Density, 1.6).unwrap();
        let lo = c.geometry(SweepKind::Density, 0.8).unwrap();
        assert!((hi.tw - 15.81).abs() < 0.01 && (hi.bp - 11.07).abs() < 0.01);
        assert!((lo.tw - 22.36).abs() < 0.01 && (lo.bp - 15.65).abs() < 0.01);
        assert!((hi.density() - 1.6).abs() < 1e-12);
    }

    #[test]
    fn energy_geometry_fixes_density() {
        let c = SimConfig::default();
        assert_eq!(c.energies.first(), Some(&3000.0));
        assert_eq!(c.energies.last(), Some(&78.0));
        for &e in &c.energies {
            let g = c.geometry(SweepKind::Energy, e).unwrap();
            assert!((g.density() - 1.0).abs() < 1e-12);
            assert!((g.energy() - e).abs() < 1e-9);
        }
    }

    #[test]
    fn text_round_trip() {
        let mut c = SimConfig {
            m: Some(14),
            densities: vec![1.0, 1.1],
            ..SimConfig::default()
        };
        c.surrogate.k1 = 0.2;
        assert_eq!(SimConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(SimConfig::parse("k1 0.2"), Err(SimError::ConfigLine(1))));
        assert!(matches!(SimConfig::parse("# c\nfoo = 1"), Err(SimError::UnknownKey(_))));
        assert!(matches!(SimConfig::parse("frames = x"), Err(SimError::Value { .. })));
    }
}
