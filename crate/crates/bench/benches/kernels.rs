use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use formal_schubert::dual::{borel_surjectivity_check, bott_samelson, pairing_matrix, to_bs_basis};
use formal_schubert::hecke::{word_element, WordKind};
use formal_schubert::root_system::ParabolicSubset;
use formal_schubert_bench::{context, LAWS};

fn series_product(c: &mut Criterion) {
    let mut group = c.benchmark_group("series_product");
    for law in LAWS {
        let ctx = context("B2", law);
        let a = ctx.x_root(3).clone();
        let b = ctx.x_root(2).mul(ctx.x_root(1));
        group.bench_function(law, |bench| bench.iter(|| black_box(a.mul(&b))));
    }
    group.finish();
}

fn demazure_words(c: &mut Criterion) {
    let mut group = c.benchmark_group("demazure_word_longest");
    for law in LAWS {
        let ctx = context("B2", law);
        let w0 = ctx.group().word(ctx.group().longest()).to_vec();
        group.bench_function(law, |bench| bench.iter(|| black_box(word_element(WordKind::X, &w0, &ctx))));
    }
    group.finish();
}

fn bott_samelson_classes(c: &mut Criterion) {
    let mut group = c.benchmark_group("bott_samelson_longest");
    for label in ["A2", "B2", "A3"] {
        let ctx = context(label, "lorentz");
        let w0 = ctx.group().word(ctx.group().longest()).to_vec();
        group.bench_with_input(BenchmarkId::from_parameter(label), &w0, |bench, w| {
            bench.iter(|| black_box(bott_samelson(w, &ctx).expect("lands in S")))
        });
    }
    group.finish();
}

fn basis_expansion(c: &mut Criterion) {
    let ctx = context("B2", "multiplicative");
    let basis = ctx.bs_basis().expect("basis");
    let prod = basis[3].mul(&basis[5], &ctx).expect("same model");
    c.bench_function("structure_constants_B2", |bench| {
        bench.iter(|| black_box(to_bs_basis(&prod, &ctx).expect("expands")))
    });
}

fn pairing(c: &mut Criterion) {
    let mut group = c.benchmark_group("pairing_matrix");
    group.sample_size(10);
    for label in ["A2", "B2"] {
        let ctx = context(label, "additive");
        group.bench_function(label, |bench| {
            bench.iter(|| black_box(pairing_matrix(&ParabolicSubset::empty(), &ctx).expect("pairing")))
        });
    }
    group.finish();
}

fn borel(c: &mut Criterion) {
    let mut group = c.benchmark_group("borel_check");
    group.sample_size(10);
    let ctx = context("B2", "additive");
    group.bench_function("B2_degree_4", |bench| {
        bench.iter(|| black_box(borel_surjectivity_check(4, &ctx).expect("check runs")))
    });
    group.finish();
}

criterion_group!(benches, series_product, demazure_words, bott_samelson_classes, basis_expansion, pairing, borel);
criterion_main!(benches);
