use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use monoscheme_core::bvp1d::{solve_base, solve_form12, solve_monotonized, SchemeCoefficients};
use monoscheme_core::ns3d::{init_field, iterate, FlowConfig, Variant};
use monoscheme_core::stencil::{apply_m_3d, BoundaryPolicy3D, GhostRule};
use monoscheme_core::{BoundaryData1D, Field3D, Mesh1D, Mesh3D};

fn one_d(c: &mut Criterion) {
    let k = SchemeCoefficients::fig1();
    let bc = BoundaryData1D::new(0.5, 0.5);
    let mut g = c.benchmark_group("bvp1d");
    for n in [99, 999] {
        let mesh = Mesh1D::new(0.0, 1.0, n).unwrap();
        g.bench_with_input(BenchmarkId::new("base", n), &mesh, |b, m| b.iter(|| solve_base(&k, m, &bc).unwrap()));
        g.bench_with_input(BenchmarkId::new("monotonized", n), &mesh, |b, m| {
            b.iter(|| solve_monotonized(&k, m, &bc).unwrap())
        });
    }
    let mesh = Mesh1D::new(0.0, 1.0, 99).unwrap();
    g.bench_function("form12/99", |b| b.iter(|| solve_form12(&k, &mesh, &bc).unwrap()));
    g.finish();
}

fn m_3d(c: &mut Criterion) {
    let policy = BoundaryPolicy3D::uniform(GhostRule::ZeroGradient);
    let mut g = c.benchmark_group("apply_m_3d");
    for n in [20, 40] {
        let mesh = Mesh3D::new(1.0, n).unwrap();
        let u = Field3D::sample(mesh, |x| (x[0] * 7.0).sin() * x[1] + x[2]);
        g.bench_with_input(BenchmarkId::from_parameter(n), &u, |b, u| {
            b.iter(|| apply_m_3d(black_box(u), &policy).unwrap())
        });
    }
    g.finish();
}

fn ns3d_sweep(c: &mut Criterion) {
    let cfg = FlowConfig::fig2();
    let field = init_field(&cfg).unwrap();
    let mut g = c.benchmark_group("ns3d_sweep");
    g.sample_size(20);
    for variant in [Variant::Base, Variant::Monotonized] {
        g.bench_function(format!("{variant:?}"), |b| b.iter(|| iterate(black_box(&field), &cfg, variant).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, one_d, m_3d, ns3d_sweep);
criterion_main!(benches);
