use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use invarforms::algebra::expr::parse_form;
use invarforms::cohomology::{cohomology_dims, Theory};
use invarforms::feasibility::{build_ansatz, bundled, certificate_check, residual_conformal, witness_search, Mode, SearchOptions};
use invarforms::operators::{assemble_d, MetricData};
use invarforms::structures::{load_catalog, load_instance};
use invarforms::Frame;

fn exterior(c: &mut Criterion) {
    let s = load_catalog("h3_Jminus").unwrap();
    let a = build_ansatz(&s, Mode::Lcht).unwrap();
    c.bench_function("wedge/omega_cubed_symbolic", |b| b.iter(|| black_box(&a.omega).power(3)));
    c.bench_function("residual/h3_Jminus_lcht", |b| b.iter(|| residual_conformal(&s, &a.omega, &a.theta, 1).unwrap()));
    let h = load_catalog("h19minus_Jplus").unwrap();
    c.bench_function("assemble_d/h19_degree3", |b| b.iter(|| assemble_d(&h, 3).unwrap()));
}

fn operators(c: &mut Criterion) {
    let f = Frame::Complex(3);
    let omega = parse_form("i*phi1^cphi1 + 2*i*phi2^cphi2 + 3*i*phi3^cphi3 + phi1^cphi2 - phi2^cphi1", &invarforms::algebra::expr::Context::with_frame(f)).unwrap();
    c.bench_function("metric/setup", |b| b.iter(|| MetricData::new(black_box(&omega)).unwrap()));
    let m = MetricData::new(&omega).unwrap();
    c.bench_function("metric/lambda_matrix_3", |b| b.iter(|| m.lambda_matrix(3).unwrap()));
}

fn cohomology(c: &mut Criterion) {
    let s = load_catalog("h8").unwrap();
    c.bench_function("cohomology/h8_bott_chern", |b| b.iter(|| cohomology_dims(&s, &Theory::BottChern).unwrap()));
    let r = load_catalog("h3_real").unwrap();
    c.bench_function("cohomology/h3_de_rham", |b| b.iter(|| cohomology_dims(&r, &Theory::DeRham).unwrap()));
}

fn feasibility(c: &mut Criterion) {
    let cert = bundled("h19minus_Jminus").unwrap();
    let spec = load_catalog(cert.fixture).unwrap();
    let parsed = cert.certificate().unwrap();
    c.bench_function("certificate/h19minus_Jminus", |b| b.iter(|| certificate_check(&spec, None, &parsed).unwrap()));
    let k = load_instance("kodaira_primary").unwrap();
    let a = build_ansatz(&k, Mode::Lck).unwrap();
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("kodaira_primary_lck", |b| b.iter(|| witness_search(&k, &a, SearchOptions { seed: 42, budget: 50 }).unwrap()));
    group.finish();
}

criterion_group!(benches, exterior, operators, cohomology, feasibility);
criterion_main!(benches);
