//! OP to OT code switching driven by the middle-track BER of OP.

use serde::{Deserialize, Serialize};

use super::sweep::SweepRow;
use super::SimError;
use crate::enumeration::CodeKind;

/// Relative tolerance when matching sweep values of the two inputs.
const ALIGN_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub sweep_value: f64,
    pub op_ber_mid: f64,
    pub ot_ber_mid: f64,
    pub code: String,
    pub code_id: u8,
}

impl ScheduleEntry {
    pub fn kind(&self) -> CodeKind {
        CodeKind::from_id(self.code_id).unwrap_or(CodeKind::Op)
    }
}

pub fn write_schedule<W: std::io::Write>(schedule: &[ScheduleEntry], out: W) -> Result<(), SimError> {
    let mut w = csv::Writer::from_writer(out);
    for e in schedule {
        w.serialize(e)?;
    }
    w.flush()?;
    Ok(())
}

/// Walks the sweep in order. OP is kept until its middle-track BER reaches
/// `threshold` at a point inside `guard` (every point when `guard` is
/// `None`); from that point on OT is used.
pub fn reconfigure(
    op: &[SweepRow],
    ot: &[SweepRow],
    threshold: f64,
    guard: Option<(f64, f64)>,
) -> Result<Vec<ScheduleEntry>, SimError> {
    if op.len() != ot.len() {
        return Err(SimError::Misaligned(op.len().min(ot.len())));
    }
    let mut switched = false;
    op.iter()
        .zip(ot)
        .enumerate()
        .map(|(i, (a, b))| {
            let scale = a.sweep_value.abs().max(b.sweep_value.abs()).max(1.0);
            if (a.sweep_value - b.sweep_value).abs() > ALIGN_TOL * scale {
                return Err(SimError::Misaligned(i));
            }
            let guarded = guard.is_none_or(|(lo, hi)| {
                let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
                (lo..=hi).contains(&a.sweep_value)
            });
            if guarded && a.ber_mid >= threshold {
                switched = true;
            }
            let kind = if switched { CodeKind::Ot } else { CodeKind::Op };
            Ok(ScheduleEntry {
                sweep_value: a.sweep_value,
                op_ber_mid: a.ber_mid,
                ot_ber_mid: b.ber_mid,
                code: kind.name().to_string(),
                code_id: kind.id(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(values: &[f64], ber: &[f64], code_id: u8) -> Vec<SweepRow> {
        values
            .iter()
            .zip(ber)
            .map(|(&v, &b)| SweepRow {
                sweep_value: v,
                fer_all: 0.0,
                fer_mid: 0.0,
                ber_all: b,
                ber_mid: b,
                pis_share: 0.0,
                ipis_share: 0.0,
                random_share: 0.0,
                code_id,
            })
            .collect()
    }

    fn codes(s: &[ScheduleEntry]) -> Vec<CodeKind> {
        s.iter().map(ScheduleEntry::kind).collect()
    }

    #[test]
    fn switches_at_first_crossing_and_stays() {
        let v = [0.8, 0.9, 1.0, 1.1, 1.2];
        let op = rows(&v, &[1e-5, 1e-4, 5e-4, 2e-3, 5e-4], 3);
        let ot = rows(&v, &[1e-6; 5], 1);
        let s = reconfigure(&op, &ot, 1e-3, None).unwrap();
        use CodeKind::*;
        assert_eq!(codes(&s), vec![Op, Op, Op, Ot, Ot]);
    }

    #[test]
    fn trivial_thresholds() {
        let v = [1.0, 2.0, 3.0];
        let op = rows(&v, &[1e-4, 2e-4, 3e-4], 3);
        let ot = rows(&v, &[0.0; 3], 1);
        assert!(codes(&reconfigure(&op, &ot, 1e-3, None).unwrap())
            .iter()
            .all(|&k| k == CodeKind::Op));
        assert!(codes(&reconfigure(&op, &ot, 0.0, None).unwrap())
            .iter()
            .all(|&k| k == CodeKind::Ot));
    }

    #[test]
    fn guard_limits_the_check() {
        let v = [3000.0, 1000.0, 600.0, 400.0, 200.0];
        let op = rows(&v, &[6e-3, 1e-3, 2e-3, 7e-3, 1e-2], 3);
        let ot = rows(&v, &[0.0; 5], 1);
        let s = reconfigure(&op, &ot, 5e-3, Some((400.0, 600.0))).unwrap();
        use CodeKind::*;
        assert_eq!(codes(&s), vec![Op, Op, Op, Ot, Ot]);
    }

    #[test]
    fn schedule_csv_header() {
        let op = rows(&[1.0], &[0.5], 3);
        let ot = rows(&[1.0], &[0.0], 1);
        let mut buf = Vec::new();
        write_schedule(&reconfigure(&op, &ot, 0.1, None).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "sweep_value,op_ber_mid,ot_ber_mid,code,code_id\n1.0,0.5,0.0,ot,1\n"
        );
    }

    #[test]
    fn misaligned_inputs() {
        let op = rows(&[1.0, 1.1], &[0.0; 2], 3);
        let ot = rows(&[1.0, 1.2], &[0.0; 2], 1);
        assert!(matches!(
            reconfigure(&op, &ot, 1e-3, None),
            Err(SimError::Misaligned(1))
        ));
        assert!(matches!(
            reconfigure(&op, &ot[..1], 1e-3, None),
            Err(SimError::Misaligned(_))
        ));
    }
}
