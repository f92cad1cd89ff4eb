use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nsquad_bench::{fiber_builder, integrand, near_target};
use nsquad_core::experiments::Method;
use nsquad_core::rules::QuadRule;
use nsquad_core::special::{jacobi_sn_cn_dn, EllipticParameter};
use nsquad_core::stokes::{evaluate_slp, Strategy, SurfaceNormal, Vec3};
use nsquad_core::IntegrandId;

fn gauss_legendre_nodes(c: &mut Criterion) {
    let mut g = c.benchmark_group("gauss_legendre");
    for n in [16, 64, 256] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| QuadRule::gauss_legendre(black_box(n)).unwrap())
        });
    }
    g.finish();
}

fn jacobi(c: &mut Criterion) {
    let p = EllipticParameter::new(0.9).unwrap();
    c.bench_function("jacobi_sn_cn_dn", |b| b.iter(|| jacobi_sn_cn_dn(black_box(1.3), p)));
}

/// One mapped quadrature per method at a node count near convergence.
fn mapped_quadrature(c: &mut Criterion) {
    let cases = [
        (
            IntegrandId::F1,
            0.01,
            [Method::Trapezoid, Method::Jam, Method::Bcm, Method::Ism].as_slice(),
        ),
        (
            IntegrandId::G1,
            1.0 / 300.0,
            &[Method::ComplexGaussLegendre, Method::Sinh, Method::Tee, Method::Jvh],
        ),
        (
            IntegrandId::H1,
            1.0 / 300.0,
            &[Method::RealGaussLegendre, Method::Quadratic, Method::RealElliptic],
        ),
    ];
    let mut g = c.benchmark_group("mapped_quadrature");
    for (id, eps, methods) in cases {
        let (ti, _) = integrand(id, eps);
        let sing = *ti.primary_singularity();
        for &m in methods {
            g.bench_function(format!("{id}/{m}/n=64"), |b| {
                b.iter(|| m.integrate(|x| ti.eval(x), &sing, black_box(64)).unwrap())
            });
        }
    }
    g.finish();
}

fn stokes_rules(c: &mut Criterion) {
    let builder = fiber_builder(32);
    let near = near_target(&builder, 2.0, 0.1);
    let far = Vec3::new(2.5, 1.0, 1.0);
    let mut g = c.benchmark_group("stokes");
    g.sample_size(20);
    for strategy in [Strategy::Reference, Strategy::Split, Strategy::Conformal] {
        g.bench_function(format!("near/{strategy}"), |b| {
            b.iter(|| {
                let rule = builder.build(black_box(&near), strategy).unwrap();
                evaluate_slp(&near, &rule, &SurfaceNormal).unwrap()
            })
        });
    }
    g.bench_function("far/reference", |b| {
        b.iter(|| {
            let rule = builder.build(black_box(&far), Strategy::Reference).unwrap();
            evaluate_slp(&far, &rule, &SurfaceNormal).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, gauss_legendre_nodes, jacobi, mapped_quadrature, stokes_rules);
criterion_main!(benches);
