use criterion::{black_box, criterion_group, criterion_main, Criterion};
use eddeg_bench::{nodal_cubic, nodal_product, twisted_sphere, PENCIL_GERM};
use eddeg_core::ed::{symbolic_ed_count, WeightVector};
use eddeg_core::groebner::milnor_number;
use eddeg_core::homotopy::{numeric_ed_count, TrackerConfig};
use eddeg_core::poly::parse_polynomial;
use eddeg_core::polytope::toric_ged;
use eddeg_core::{GaussianRationals, MonomialOrder, Ring, DEFAULT_PRIME};

fn symbolic(c: &mut Criterion) {
    let mut g = c.benchmark_group("symbolic");
    g.sample_size(10);
    for (name, x) in [("nodal cubic", nodal_cubic()), ("conjugate product", nodal_product()), ("sphere section", twisted_sphere())] {
        g.bench_function(name, |b| {
            b.iter(|| symbolic_ed_count(black_box(&x), &WeightVector::Generic { seed: 1 }, DEFAULT_PRIME, 1).unwrap())
        });
    }
    g.finish();
}

fn numeric(c: &mut Criterion) {
    let mut g = c.benchmark_group("numeric");
    g.sample_size(10);
    let cfg = TrackerConfig::default();
    let x = nodal_cubic();
    g.bench_function("nodal cubic", |b| {
        b.iter(|| numeric_ed_count(black_box(&x), &WeightVector::Unit, 1, &cfg).unwrap())
    });
    g.finish();
}

fn local(c: &mut Criterion) {
    let ring = Ring::new(GaussianRationals, &["u", "v"], MonomialOrder::GRevLex).unwrap();
    let germ = parse_polynomial(PENCIL_GERM, &ring).unwrap();
    c.bench_function("milnor number", |b| b.iter(|| milnor_number(black_box(&germ)).unwrap()));
}

fn polytopes(c: &mut Criterion) {
    let mut g = c.benchmark_group("mixed volume");
    g.sample_size(10);
    for alpha in [vec![1u32, 2, 1], vec![1, 1, 1, 2]] {
        g.bench_function(format!("{alpha:?}"), |b| b.iter(|| toric_ged(black_box(&alpha)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, symbolic, numeric, local, polytopes);
criterion_main!(benches);
