//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on failure.

use std::time::{Duration, Instant};

use loco_core::enumeration::{n4, n8, rates};
use loco_core::framing::max_run;
use loco_core::patterns::grid_scan;
use loco_core::tdmr_sim::{reconfigure, run_sweep};
use loco_core::{
    build_fstd, capacity, codec, BuiltinSet, CodeKind, ConstrainedCodec, CountingDfa, FrameOutcome, OtCodec,
    PatternSet, SimCode, SimConfig, StCodec, StreamCodec, SweepKind, SweepRow,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cardinalities() -> Check {
    let ot: Vec<BigUint> = (0..=2).map(n8).collect();
    ensure(ot == [2u32, 8, 50].map(BigUint::from), || format!("n8 = {ot:?}"))?;
    let st: Vec<BigUint> = (0..=5).map(n4).collect();
    ensure(st == [2u32, 4, 10, 24, 58, 140].map(BigUint::from), || {
        format!("n4 = {st:?}")
    })?;
    Ok("n8(0..2) = 2 8 50, n4(0..5) = 2 4 10 24 58 140".into())
}

fn ot_rate_table() -> Check {
    let expected = [
        (10, "2.4167", "0.8056", 26),
        (14, "2.4375", "0.8125", 36),
        (21, "2.4783", "0.8261", 54),
        (30, "2.5000", "0.8333", 77),
        (50, "2.5192", "0.8397", 128),
        (81, "2.5301", "0.8434", 207),
    ];
    for (m, r, rn, s) in expected {
        let got = rates(CodeKind::Ot, m);
        let row = (got.rate.round_decimal(4), got.normalized.round_decimal(4), got.s);
        ensure(row == (r.to_string(), rn.to_string(), s), || format!("m={m}: {row:?}"))?;
    }
    Ok("6 rows".into())
}

fn st_rate_table() -> Check {
    let expected = [
        (5, "0.7083", 7),
        (9, "0.7222", 12),
        (12, "0.7333", 16),
        (23, "0.7436", 30),
        (34, "0.7477", 44),
        (49, "0.7500", 63),
    ];
    for (m, rn, s) in expected {
        let got = rates(CodeKind::St, m);
        let row = (got.normalized.round_decimal(4), got.s);
        ensure(row == (rn.to_string(), s), || format!("m={m}: {row:?}"))?;
    }
    Ok("6 rows".into())
}

fn capacities() -> Check {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-4;
    let ot = capacity(&PatternSet::builtin(BuiltinSet::Ot8), 3, 3).map_err(|e| e.to_string())?;
    let st = capacity(&PatternSet::builtin(BuiltinSet::St4), 2, 3).map_err(|e| e.to_string())?;
    let op = capacity(&PatternSet::builtin(BuiltinSet::Op8), 3, 3).map_err(|e| e.to_string())?;
    ensure(close(ot.c, 2.5494) && close(ot.cn, 0.8498), || format!("OT {ot:?}"))?;
    ensure(close(st.c, 1.2715) && close(st.cn, 0.7572), || format!("ST {st:?}"))?;
    ensure(close(op.cn, 0.9710), || format!("OP {op:?}"))?;
    let l1 = ot.lambda;
    let l2 = st.lambda;
    let r1 = (l1 * l1 - 5.0 * l1 - 5.0).abs();
    let r2 = (l2 * l2 - 2.0 * l2 - 1.0).abs();
    ensure(r1 < 1e-9 && r2 < 1e-9, || format!("residuals {r1:e} {r2:e}"))?;
    let states = |b| build_fstd(&PatternSet::builtin(b)).map(|f| f.num_states()).unwrap_or(0);
    ensure(states(BuiltinSet::Ot8) == 4 && states(BuiltinSet::St4) == 4, || {
        "FSTD sizes".into()
    })?;
    Ok(format!(
        "C_OT={:.4} Cn_OT={:.4} C_ST={:.4} Cn_ST={:.4} Cn_OP={:.4} res={r1:.1e}/{r2:.1e}",
        ot.c, ot.cn, st.c, st.cn, op.cn
    ))
}

fn st_last_word() -> Check {
    let c = StCodec::new(5).map_err(|e| e.to_string())?;
    let w = [3u8; 5];
    let idx = c.index(&w).map_err(|e| e.to_string())?;
    ensure(idx == BigUint::from(139u32), || format!("index {idx}"))?;
    let back = c.codeword(&BigUint::from(139u32)).map_err(|e| e.to_string())?;
    ensure(back == w, || format!("codeword {back:?}"))?;
    Ok("index 139 <-> 3 3 3 3 3".into())
}

/// All words of length `m` over `q` symbols avoiding `set`, lexicographic.
fn all_valid(set: &PatternSet, q: u8, m: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u8>| {
                (0..q).filter_map(move |a| {
                    let mut x = w.clone();
                    x.push(a);
                    set.is_valid(&x).then_some(x)
                })
            })
            .collect();
    }
    out
}

/// Random valid word built symbol by symbol through the DFA's counts.
fn random_word(rng: &mut ChaCha8Rng, dfa: &CountingDfa, q: u8, m: usize) -> Vec<u8> {
    let mut w = Vec::with_capacity(m);
    let mut state = 0usize;
    for k in 0..m {
        let rest = m - k - 1;
        let options: Vec<(u8, usize)> = (0..q)
            .filter_map(|a| dfa.step(state, a).map(|t| (a, t)))
            .filter(|&(_, t)| dfa.count(t, rest) > BigUint::ZERO)
            .collect();
        let (a, t) = options[rng.random_range(0..options.len())];
        w.push(a);
        state = t;
    }
    w
}

fn oracle_equivalence() -> Check {
    let mut checked = Vec::new();
    for (kind, q, max_m, tail_count) in [(CodeKind::Ot, 8u8, 5usize, 9950usize), (CodeKind::St, 4, 8, 1970)] {
        let set = PatternSet::builtin(kind.builtin_set());
        let dfa = CountingDfa::new(set.clone());
        for m in 1..=max_m {
            let c = codec(kind, m).map_err(|e| e.to_string())?;
            let words = all_valid(&set, q, m);
            if m == max_m {
                ensure(words.len() == tail_count, || {
                    format!("{kind} m={m}: {} words", words.len())
                })?;
            }
            for w in &words {
                let a = c.index(w).map_err(|e| format!("{w:?}: {e}"))?;
                let b = dfa.rank(w).map_err(|e| format!("{w:?}: {e}"))?;
                ensure(a == b, || format!("{kind} {w:?}: {a} vs {b}"))?;
                ensure(&c.codeword(&a).map_err(|e| e.to_string())? == w, || format!("{w:?}"))?;
            }
        }
        checked.push(format!("{kind} m<={max_m}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (kind, q, m) in [(CodeKind::Ot, 8u8, 23usize), (CodeKind::St, 4, 30)] {
        let c = codec(kind, m).map_err(|e| e.to_string())?;
        let dfa = CountingDfa::new(c.patterns().clone());
        for _ in 0..100_000 {
            let w = random_word(&mut rng, &dfa, q, m);
            let a = c.index(&w).map_err(|e| e.to_string())?;
            let b = dfa.rank(&w).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("{kind} {w:?}"))?;
            ensure(c.codeword(&a).map_err(|e| e.to_string())? == w, || {
                format!("{kind} {w:?}")
            })?;
        }
        checked.push(format!("1e5 random {kind} m={m}"));
    }
    Ok(checked.join(", "))
}

fn stream_integrity() -> Check {
    let mut notes = Vec::new();
    for (kind, m) in [(CodeKind::Ot, 23usize), (CodeKind::St, 14)] {
        let sc = StreamCodec::new(kind, m).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        let bits: Vec<u8> = (0..10_000 * sc.frame_bits()).map(|_| rng.random_range(0..2)).collect();
        let stream = sc.encode_bits(&bits).map_err(|e| e.to_string())?;
        let occ = sc.codec().patterns().find_forbidden(&stream.symbols).len();
        ensure(occ == 0, || format!("{kind}: {occ} forbidden patterns"))?;
        let run = max_run(&stream.symbols);
        ensure(run <= m + 4, || format!("{kind}: run {run}"))?;
        let grid = sc.to_grid(&stream).map_err(|e| e.to_string())?;
        let rtis = grid_scan(&grid).len();
        ensure(rtis == 0, || format!("{kind}: {rtis} RTIS"))?;
        let read = sc.from_grid(&grid).map_err(|e| e.to_string())?;
        let decoded = sc.decode_stream(&read).map_err(|e| e.to_string())?;
        ensure(decoded.iter().all(|d| d.outcome == FrameOutcome::Ok), || {
            format!("{kind}: decode errors")
        })?;
        let back: Vec<u8> = decoded
            .iter()
            .flat_map(|d| sc.frame_bits_of(d).unwrap_or_default())
            .collect();
        ensure(back == bits, || format!("{kind}: bits differ"))?;
        notes.push(format!("{kind} m={m} max run {run}"));
    }
    Ok(notes.join(", "))
}

fn message_lengths() -> Check {
    let cases = [
        (CodeKind::Ot, 23, 59),
        (CodeKind::Ot, 14, 36),
        (CodeKind::Op, 23, 67),
        (CodeKind::Op, 14, 40),
    ];
    for (kind, m, s) in cases {
        let got = codec(kind, m).map_err(|e| e.to_string())?.message_bits();
        ensure(got == s, || format!("{kind} m={m}: s={got}"))?;
    }
    let ot = OtCodec::new(23).map_err(|e| e.to_string())?;
    ensure(ot.message_bits() == 59, || "OtCodec".into())?;
    Ok("59 36 67 40".into())
}

fn simulation() -> Check {
    let cfg = SimConfig::default();
    let uncoded = run_sweep(SweepKind::Density, SimCode::Uncoded, &cfg).map_err(|e| e.to_string())?;
    let ot = run_sweep(SweepKind::Density, SimCode::Coded(CodeKind::Ot), &cfg).map_err(|e| e.to_string())?;
    let mut st_cfg = cfg.clone();
    st_cfg.m = Some(14);
    let st = run_sweep(SweepKind::Density, SimCode::Coded(CodeKind::St), &st_cfg).map_err(|e| e.to_string())?;
    for (u, c) in uncoded.points.iter().zip(&ot.points) {
        ensure(c.frames >= 10_000, || "frames".into())?;
        ensure(c.fer_all() <= u.fer_all(), || {
            format!(
                "(a) D={}: coded {} > uncoded {}",
                u.sweep_value,
                c.fer_all(),
                u.fer_all()
            )
        })?;
    }
    let (lo, hi) = (&uncoded.points[0], &uncoded.points[uncoded.points.len() - 1]);
    let (p0, i0, _) = lo.profile.shares();
    let (p1, i1, _) = hi.profile.shares();
    ensure(p0 > i0, || {
        format!("(b) D={}: PIS {p0:.3} IPIS {i0:.3}", lo.sweep_value)
    })?;
    ensure(i1 >= p1, || {
        format!("(b) D={}: PIS {p1:.3} IPIS {i1:.3}", hi.sweep_value)
    })?;
    let rtis: u64 = ot.points.iter().chain(&st.points).map(|p| p.rtis_written).sum();
    ensure(rtis == 0, || format!("(c) {rtis} RTIS written"))?;
    let worst = uncoded
        .points
        .iter()
        .zip(&ot.points)
        .map(|(u, c)| c.fer_all() / u.fer_all())
        .fold(0.0, f64::max);
    Ok(format!(
        "(a) max coded/uncoded FER {worst:.3}; (b) PIS {p0:.3}/{i0:.3} at {} -> {p1:.3}/{i1:.3} at {}; (c) 0 RTIS",
        lo.sweep_value, hi.sweep_value
    ))
}

fn reconfiguration() -> Check {
    let values: Vec<f64> = (0..9).map(|k| (8 + k) as f64 / 10.0).collect();
    let row = |v: f64, ber: f64, code_id| SweepRow {
        sweep_value: v,
        fer_all: 0.0,
        fer_mid: 0.0,
        ber_all: ber,
        ber_mid: ber,
        pis_share: 0.0,
        ipis_share: 0.0,
        random_share: 0.0,
        code_id,
    };
    for k in 0..values.len() {
        let op: Vec<SweepRow> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| row(v, 1e-3 * 10f64.powf((i as f64 - k as f64) / 4.0), 3))
            .collect();
        let ot: Vec<SweepRow> = values.iter().map(|&v| row(v, 1e-5, 1)).collect();
        let s = reconfigure(&op, &ot, 1e-3, None).map_err(|e| e.to_string())?;
        let first = s.iter().position(|e| e.kind() == CodeKind::Ot);
        ensure(first == Some(k), || format!("crossing at {k}, switched at {first:?}"))?;
        ensure(s[k..].iter().all(|e| e.kind() == CodeKind::Ot), || {
            "switched back".into()
        })?;
    }
    Ok("switch index exact for every crossing".into())
}

type Criterion = (&'static str, fn() -> Check, Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 cardinalities", cardinalities, Duration::from_secs(1)),
        ("2 ot rates", ot_rate_table, Duration::from_secs(1)),
        ("3 st rates", st_rate_table, Duration::from_secs(1)),
        ("4 capacities", capacities, Duration::from_secs(1)),
        ("5 st last word", st_last_word, Duration::from_secs(1)),
        ("6 oracle equivalence", oracle_equivalence, Duration::from_secs(60)),
        ("7 stream integrity", stream_integrity, Duration::from_secs(60)),
        ("8 message lengths", message_lengths, Duration::from_secs(1)),
        ("9 surrogate channel properties", simulation, Duration::from_secs(600)),
        ("10 reconfiguration", reconfiguration, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let t = Instant::now();
        let result = f();
        let el = t.elapsed();
        let (status, detail) = match result {
            Ok(d) if el <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time budget {budget:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {name} [{:.2}s] {detail}", el.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
