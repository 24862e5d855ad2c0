//! Benchmarks for the verification kernels: fraction-free rank, the
//! 165-column kernel, the rewrite engine, and the grid of section-space
//! computations.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use severi_bench::{load_st_basis, load_table1};
use severi_core::freeness::{all_multiplication_matrices, commutation_certificate, RewriteSystem};
use severi_core::relations::{coefficient_matrix, relation_space};
use severi_core::sections::{intersection_cell, st_basis_certificate};

fn bench_fraction_free_rank(c: &mut Criterion) {
    let table1 = load_table1();
    let m = coefficient_matrix(&table1);
    c.bench_function("bareiss_rank_27x55", |b| {
        b.iter(|| black_box(m.rank_fraction_free()))
    });
}

fn bench_relation_kernel(c: &mut Criterion) {
    let basis = load_st_basis();
    let mut group = c.benchmark_group("relation_kernel");
    group.sample_size(10);
    group.bench_function("kernel_165_columns", |b| {
        b.iter(|| black_box(relation_space(&basis).len()))
    });
    group.finish();
}

fn bench_rewrite_engine(c: &mut Criterion) {
    let table1 = load_table1();
    let system = RewriteSystem::from_table1(&table1).unwrap();
    c.bench_function("multiplication_matrices", |b| {
        b.iter(|| black_box(all_multiplication_matrices(&system).unwrap().len()))
    });
    let mats = all_multiplication_matrices(&system).unwrap();
    c.bench_function("commutation_21_pairs", |b| {
        b.iter(|| black_box(commutation_certificate(&mats).pairs_checked))
    });
}

fn bench_section_spaces(c: &mut Criterion) {
    let basis = load_st_basis();
    c.bench_function("intersection_cell_2_2", |b| {
        b.iter(|| black_box(intersection_cell(2, 2).dim()))
    });
    let mut group = c.benchmark_group("st_basis");
    group.sample_size(10);
    group.bench_function("full_certificate", |b| {
        b.iter(|| black_box(st_basis_certificate(&basis).ok()))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_fraction_free_rank,
    bench_relation_kernel,
    bench_rewrite_engine,
    bench_section_spaces
);
criterion_main!(benches);
