use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use lscale_core::emergent::{check_irq_batch, check_lambda_batch};
use lscale_core::gen::TermGen;
use lscale_core::relative::{check_relative_batch, RelContext};
use lscale_core::rewrite::{equiv, normalize};
use lscale_core::{parse_term, print_term, Scale};

fn parsing(c: &mut Criterion) {
    let mut g = TermGen::new(0);
    let texts: Vec<String> = (0..200).map(|_| print_term(&g.term(6))).collect();
    c.bench_function("parse 200 terms", |b| {
        b.iter(|| {
            texts
                .iter()
                .map(|t| parse_term(black_box(t)).unwrap().size())
                .sum::<usize>()
        })
    });
}

fn normalization(c: &mut Criterion) {
    let omega = parse_term(r"((x \ (x {1} x)) {1} (x \ (x {1} x)))").unwrap();
    c.bench_function("normalize omega 1000 steps", |b| {
        b.iter(|| normalize(black_box(&omega), 1000))
    });
    let times = parse_term(
        r"(((m \ (n \ (f \ (m (n f))))) (f \ (x \ (f (f x))))) (f \ (x \ (f (f (f x))))))",
    )
    .unwrap();
    c.bench_function("normalize times 2 3", |b| {
        b.iter(|| normalize(black_box(&times), 1000))
    });
}

fn equivalence(c: &mut Criterion) {
    let a = parse_term(r"((y \ ((y_1 \ b) {m} a)) {e} a)").unwrap();
    let b = parse_term(r"((y \ b) {e*m} a)").unwrap();
    c.bench_function("equiv compose law", |bench| {
        bench.iter(|| equiv(black_box(&a), &b, 5000))
    });
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suites");
    group.sample_size(10);
    group.bench_function("irq 200", |b| b.iter(|| check_irq_batch(0, 200, 4, 5000)));
    group.bench_function("lambda corpus", |b| b.iter(|| check_lambda_batch(1000)));
    let ctx = RelContext::new(parse_term("a").unwrap(), Scale::named("e"));
    group.bench_function("relative 20", |b| {
        b.iter(|| check_relative_batch(&ctx, 0, 20, 3, 5000).unwrap())
    });
    group.finish();
}

criterion_group!(benches, parsing, normalization, equivalence, suites);
criterion_main!(benches);
