use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use loco_core::codec::codec;
use loco_core::tdmr_sim::run_sweep;
use loco_core::{CodeKind, CountingDfa, PatternSet, SimCode, SimConfig, StreamCodec, SweepKind};

fn message(rng: &mut ChaCha8Rng, bits: u64) -> BigUint {
    let bytes: Vec<u8> = (0..bits.div_ceil(8)).map(|_| rng.random()).collect();
    BigUint::from_bytes_be(&bytes) >> (bytes.len() as u64 * 8 - bits)
}

fn codecs(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (kind, m) in [(CodeKind::Ot, 23), (CodeKind::St, 30), (CodeKind::Op, 23)] {
        let cd = codec(kind, m).unwrap();
        let msgs: Vec<BigUint> = (0..256).map(|_| message(&mut rng, cd.message_bits())).collect();
        let words: Vec<Vec<u8>> = msgs.iter().map(|x| cd.encode(x).unwrap()).collect();
        let mut i = 0;
        c.bench_function(&format!("{kind}_encode_m{m}"), |b| {
            b.iter(|| {
                i = (i + 1) % msgs.len();
                black_box(cd.encode(black_box(&msgs[i])).unwrap())
            })
        });
        c.bench_function(&format!("{kind}_decode_m{m}"), |b| {
            b.iter(|| {
                i = (i + 1) % words.len();
                black_box(cd.decode(black_box(&words[i])).unwrap())
            })
        });
    }
}

fn dfa_rank(c: &mut Criterion) {
    let ot = codec(CodeKind::Ot, 23).unwrap();
    let dfa = CountingDfa::new(PatternSet::builtin(CodeKind::Ot.builtin_set()));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let words: Vec<Vec<u8>> = (0..256)
        .map(|_| ot.encode(&message(&mut rng, ot.message_bits())).unwrap())
        .collect();
    let mut i = 0;
    c.bench_function("dfa_rank_ot_m23", |b| {
        b.iter(|| {
            i = (i + 1) % words.len();
            black_box(dfa.rank(black_box(&words[i])).unwrap())
        })
    });
}

fn streams(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (kind, m) in [(CodeKind::Ot, 23), (CodeKind::St, 14)] {
        let sc = StreamCodec::new(kind, m).unwrap();
        let bits: Vec<u8> = (0..sc.frame_bits() * 64).map(|_| rng.random_range(0..2)).collect();
        c.bench_function(&format!("{kind}_stream_64_frames"), |b| {
            b.iter(|| black_box(sc.encode_bits(black_box(&bits)).unwrap()))
        });
        let stream = sc.encode_bits(&bits).unwrap();
        c.bench_function(&format!("{kind}_stream_decode_64_frames"), |b| {
            b.iter(|| black_box(sc.decode_stream(black_box(&stream)).unwrap()))
        });
    }
}

fn simulation(c: &mut Criterion) {
    let cfg = SimConfig {
        frames: 64,
        densities: vec![1.2],
        ..SimConfig::default()
    };
    let mut g = c.benchmark_group("sim_block");
    g.sample_size(20);
    for code in [
        SimCode::Uncoded,
        SimCode::Coded(CodeKind::Ot),
        SimCode::Coded(CodeKind::St),
    ] {
        g.bench_function(code.to_string(), |b| {
            b.iter_batched(
                || cfg.clone(),
                |cfg| black_box(run_sweep(SweepKind::Density, code, &cfg).unwrap()),
                BatchSize::SmallInput,
            )
        });
    }
    g.finish();
}

criterion_group!(benches, codecs, dfa_rank, streams, simulation);
criterion_main!(benches);
