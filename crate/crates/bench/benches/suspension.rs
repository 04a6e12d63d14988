use bicubic_core::suspension::{optimize_controller, ride_comfort, Case, OptimizeOptions, PlantParams};
use bicubic_core::RationalFunction;
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn suspension(c: &mut Criterion) {
    let p = PlantParams::standard(25e3);
    let (a3, a2, a1, a0) = (5.994e-4, 0.07188, 1.529, 14.818);
    let (d3, d2) = (1.0, 5.005e-8);
    let z = RationalFunction::from_coeffs(&[a0, a1, a2, a3], &[a0 * d2 / a2, a1 * d3 / a3, d2, d3]).unwrap();
    c.bench_function("ride_comfort/example1", |b| b.iter(|| ride_comfort(black_box(&z), &p)));
    let opts = OptimizeOptions {
        restarts: 1,
        ..Default::default()
    };
    let mut group = c.benchmark_group("optimize");
    group.sample_size(10);
    group.bench_function("case_b_one_restart", |b| b.iter(|| optimize_controller(Case::B, &p, &opts)));
    group.finish();
}

criterion_group!(benches, suspension);
criterion_main!(benches);
