use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use kpb_core::bands::find_band_edges_with;
use kpb_core::oracle::{run_battery, BatteryConfig};
use kpb_core::sweep::{linspace, DEFAULT_AXIS_SAMPLES, DEFAULT_PARAM_SAMPLES};
use kpb_core::{
    make_connection, AxisMode, Execution, FamilyKind, FamilySpec, LatticeParams, SweepGrid,
};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn sweep_grid(c: &mut Criterion) {
    let lat = LatticeParams::default();
    let params = linspace(-15.0, 15.0, DEFAULT_PARAM_SAMPLES);
    let axis = linspace(-25.0, 120.0, DEFAULT_AXIS_SAMPLES);
    let mut group = c.benchmark_group("sweep_grid_601x1201");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                SweepGrid::compute_with(
                    FamilyKind::Delta,
                    params.clone(),
                    axis.clone(),
                    AxisMode::Energy,
                    &lat,
                    exec,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn band_scan(c: &mut Criterion) {
    let lat = LatticeParams::default();
    let v = make_connection(&FamilySpec::hyperbolic(1.0)).unwrap();
    let mut group = c.benchmark_group("band_scan_200k");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                find_band_edges_with(black_box(&v), &lat, -25.0, 2000.0, 200_000, exec).unwrap()
            })
        });
    }
    group.finish();
}

fn oracle_battery(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_battery_10k");
    group.sample_size(10);
    for (name, exec) in MODES {
        let config = BatteryConfig {
            samples: 10_000,
            exec,
            ..BatteryConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &config, |b, config| {
            b.iter(|| run_battery(config).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweep_grid, band_scan, oracle_battery);
criterion_main!(benches);
