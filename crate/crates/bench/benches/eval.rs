use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use lnash::classify::{iso_c2, GroupDescriptor};
use lnash::exactnum::{rat, rat_int};
use lnash::harness::{verify, SuiteParams, DEFAULT_SEED};
use lnash::lattice::commensurable;
use lnash::{EvalContext, ExactScalar};
use lnash_bench::{gauss, points};
use num_complex::Complex64;

fn weierstrass(c: &mut Criterion) {
    let ctx = EvalContext::new(&gauss()).unwrap();
    let pts = points(64);
    let xi = Complex64::new(0.3, 0.2);
    c.bench_function("wp x64", |b| b.iter(|| pts.iter().map(|&u| ctx.wp(black_box(u)).unwrap().value).sum::<Complex64>()));
    c.bench_function("zeta x64", |b| b.iter(|| pts.iter().map(|&u| ctx.zeta(black_box(u)).unwrap().value).sum::<Complex64>()));
    c.bench_function("sigma x64", |b| b.iter(|| pts.iter().map(|&u| ctx.sigma(black_box(u)).unwrap().value).sum::<Complex64>()));
    c.bench_function("sigma_tilde x64", |b| {
        b.iter(|| pts.iter().map(|&u| ctx.sigma_tilde(xi, black_box(u)).unwrap().value).sum::<Complex64>())
    });
    c.bench_function("context setup", |b| b.iter(|| EvalContext::new(black_box(&gauss())).unwrap()));
}

fn deciders(c: &mut Criterion) {
    let w1 = ExactScalar::gaussian(rat_int(0), rat_int(1));
    let w2 = ExactScalar::gaussian(rat(3, 5), rat(1, 5));
    c.bench_function("commensurable", |b| b.iter(|| commensurable(black_box(&w1), black_box(&w2)).unwrap()));
    let g1 = GroupDescriptor::C2Z { omega: w1.clone() };
    let g2 = GroupDescriptor::C2Z { omega: w2.clone() };
    c.bench_function("iso_c2 Z-family", |b| b.iter(|| iso_c2(black_box(&g1), black_box(&g2)).unwrap()));
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    for name in ["legendre", "homogeneity", "cosets3"] {
        g.bench_function(name, |b| b.iter(|| verify(name, &SuiteParams::default(), DEFAULT_SEED, None).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, weierstrass, deciders, suites);
criterion_main!(benches);
