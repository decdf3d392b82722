use criterion::{criterion_group, criterion_main, Criterion};
use freeharm::estimator::{conv_battery, doubling_schedule, power_norm_sequence, BatteryOptions};
use freeharm::posdef::pd_battery_phi_alpha;
use freeharm::{GroupContext, RadialFunction};
use std::hint::black_box;

fn estimates(c: &mut Criterion) {
    let ctx = GroupContext::new(2).unwrap();
    let chi1 = RadialFunction::chi(&ctx, 1);
    let schedule = doubling_schedule(256).unwrap();
    c.bench_function("power_norm_chi1_n256", |b| {
        b.iter(|| power_norm_sequence(black_box(&chi1), 2.0, &schedule).unwrap())
    });
    c.bench_function("gram_phi_alpha_radius3", |b| {
        b.iter(|| pd_battery_phi_alpha(&ctx, black_box(0.9), 3).unwrap())
    });
    let opts = BatteryOptions {
        seed: 7,
        cases: 100,
        rhs_scale: 1.0,
    };
    c.bench_function("conv_battery_100", |b| {
        b.iter(|| conv_battery(black_box(&opts)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = estimates
}
criterion_main!(benches);
