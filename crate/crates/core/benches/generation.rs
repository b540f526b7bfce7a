//! Sequential vs rayon fiber processing on a small double-fibration run.

use criterion::{criterion_group, criterion_main, Criterion};
use ihp_core::arith::PrimeSet;
use ihp_core::cubic::PlaneCubic;
use ihp_core::points::generate::{double_fibration_generate_with, Exec};
use ihp_core::points::{
    search_integral_points, Budget, DoubleFibration, IntegralityContext, SearchCurve,
};
use ihp_core::projgeo::{HomogForm, ProjPoint};
use ihp_core::surface::{rational_lines, BlowupSurface, ConicFibration, CubicSurface};
use std::hint::black_box;

fn setup() -> (DoubleFibration, Vec<ProjPoint>) {
    let d = PlaneCubic::parse("z*y^2 - x^3 - z^3").unwrap();
    let s = CubicSurface::new(d.clone());
    let z = HomogForm::parse_expr("z", 3).unwrap();
    let l1 = rational_lines(&s)
        .unwrap()
        .into_iter()
        .find(|l| l.flexline.proportional(&z))
        .unwrap();
    let mu = ConicFibration::new(s, l1.clone()).unwrap();
    let lambda = BlowupSurface::new(d.clone(), ProjPoint::from_ints(&[2, 3, 1]).unwrap()).unwrap();
    let ctx = IntegralityContext::surface(&d, PrimeSet::empty());
    let seeds =
        search_integral_points(&SearchCurve::Line3(l1.param().unwrap()), &ctx, 1000).unwrap();
    (
        DoubleFibration::new(mu, lambda, PrimeSet::empty()).unwrap(),
        seeds,
    )
}

fn bench(c: &mut Criterion) {
    let (df, seeds) = setup();
    let budget = Budget {
        max_fibers: 12,
        rounds: 1,
        ..Budget::default()
    };
    let mut g = c.benchmark_group("double_fibration");
    g.sample_size(10);
    for (name, exec) in [
        ("sequential", Exec::Sequential),
        ("parallel", Exec::Parallel),
    ] {
        g.bench_function(name, |b| {
            b.iter(|| {
                double_fibration_generate_with(black_box(&df), &seeds, &budget, 5, exec).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
