use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use magbag_core::glued::{higgs_norm, residual_explicit, BallChart};
use magbag_core::monopole::ps_pair;
use magbag_core::operators::{apply_d, BumpPair, FdScheme};
use magbag_core::{make_shell_config, PairField, Point, ScaledMonopole};

fn monopole(c: &mut Criterion) {
    let mono = ScaledMonopole::unit();
    let x = Point::new(0.7, -1.2, 0.4);
    c.bench_function("ps_pair", |b| b.iter(|| ps_pair(black_box(&x), &mono)));
}

fn glued(c: &mut Criterion) {
    let cfg = make_shell_config(100, 16.0).unwrap();
    let p = cfg.points[7].position;
    let x = p + Point::new(0.3, -0.5, 0.8).normalize() * (0.17 * cfg.glue_length);
    let chart = BallChart { cfg: &cfg, index: 7 };
    c.bench_function("ball_chart_sample_n100", |b| b.iter(|| chart.sample(black_box(&x))));
    c.bench_function("higgs_norm_n100", |b| b.iter(|| higgs_norm(black_box(&x), &cfg)));
    c.bench_function("residual_explicit_n100", |b| b.iter(|| residual_explicit(black_box(&x), 7, &cfg).unwrap()));
}

fn operators(c: &mut Criterion) {
    let mono = ScaledMonopole::unit();
    let q = BumpPair::random(Point::zeros(), 2.0, 1);
    let x = Point::new(0.3, 0.2, -0.1);
    let fd = FdScheme::default();
    c.bench_function("apply_d_ps", |b| b.iter(|| apply_d(&q, &mono, black_box(&x), &fd)));
}

criterion_group!(benches, monopole, glued, operators);
criterion_main!(benches);
