use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gqd_core::ashkin_teller::{gqd_scan, uniform_delta_grid, ChainSpec, ScanOptions, SpinGroup};
use gqd_core::states::{random_density, random_product_angles, werner_ghz, WernerGhzParam};
use gqd_core::{
    gqd, gqd_at_basis, Execution, OptimizerConfig, ProductBasis, Strategy, SubsystemDims,
};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn minimize(c: &mut Criterion) {
    let rho = werner_ghz(WernerGhzParam::new(0.6).unwrap());
    let mut group = c.benchmark_group("gqd_minimize_3q");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = OptimizerConfig::default().with_execution(exec);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| gqd(black_box(&rho), Strategy::Minimize, &cfg).unwrap())
        });
    }
    group.finish();
}

fn chain_scan(c: &mut Criterion) {
    let template = ChainSpec::new(4, 1.0, 1.0).unwrap();
    let grid = uniform_delta_grid(0.8, 1.2, 0.05).unwrap();
    let mut group = c.benchmark_group("at_scan_m4_quartet");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = ScanOptions {
            execution: exec,
            ..ScanOptions::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                gqd_scan(
                    &template,
                    black_box(&grid),
                    SpinGroup::quartet(0),
                    Strategy::FixedX,
                    &opts,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn nonnegativity_batch(c: &mut Criterion) {
    let dims = SubsystemDims::qubits(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases: Vec<_> = (0..64)
        .map(|k| {
            let rho = random_density(&dims, 16, k).unwrap();
            let basis = ProductBasis::from_angles(&random_product_angles(4, &mut rng)).unwrap();
            (rho, basis)
        })
        .collect();
    let mut group = c.benchmark_group("gqd_at_basis_batch_4q");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exec.map(&cases, |(rho, basis)| gqd_at_basis(rho, basis).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, minimize, chain_scan, nonnegativity_batch);
criterion_main!(benches);
