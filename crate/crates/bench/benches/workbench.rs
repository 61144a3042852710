use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_rational::BigRational;

use superinfo_core::ensembles::{deviant_weight, Probabilities};
use superinfo_core::{derive_value, is_task_possible, Attribute, Model, PureState, SubstrateSpec, Task};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn bench_deviant_weight(c: &mut Criterion) {
    let mut group = c.benchmark_group("deviant_weight");
    let coin = Probabilities::exact(vec![q(1, 2), q(1, 2)]).unwrap();
    let die = Probabilities::exact(vec![q(1, 6), q(1, 3), q(1, 2)]).unwrap();
    for n in [50usize, 200] {
        group.bench_with_input(BenchmarkId::new("coin", n), &n, |b, &n| {
            b.iter(|| deviant_weight(black_box(&coin), n, &q(1, 50)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("three_outcomes", n), &n, |b, &n| {
            b.iter(|| deviant_weight(black_box(&die), n, &q(1, 50)).unwrap())
        });
    }
    group.finish();
}

/// Cloning `{|0>, |+>}` onto a blank qubit, with side effects allowed.
fn cloning_task() -> Task {
    let pair = SubstrateSpec::quantum("pair", 4).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zero = PureState::basis(2, 0);
    let plus = PureState::from_real(&[s, s]).unwrap();
    let pairs = [&zero, &plus]
        .iter()
        .map(|x| {
            let input = Attribute::pure(&pair, x.tensor(&zero)).unwrap();
            let output = Attribute::pure(&pair, x.tensor(x)).unwrap();
            (input, output)
        })
        .collect();
    Task::new(&pair, pairs, true).unwrap()
}

fn bench_task_oracles(c: &mut Criterion) {
    let quantum = Model::quantum();
    let clone = cloning_task();
    c.bench_function("quantum_cloning_task", |b| b.iter(|| is_task_possible(black_box(&clone), &quantum).unwrap()));

    let classical = Model::classical();
    let lights = SubstrateSpec::classical("light", vec!["red", "amber", "green", "flash"]).unwrap();
    let cycle = Task::new(
        &lights,
        (0..4)
            .map(|i| {
                (Attribute::points(&lights, vec![i]).unwrap(), Attribute::points(&lights, vec![(i + 1) % 4]).unwrap())
            })
            .collect(),
        true,
    )
    .unwrap();
    c.bench_function("classical_cycle_task", |b| b.iter(|| is_task_possible(black_box(&cycle), &classical).unwrap()));
}

fn bench_derivation(c: &mut Criterion) {
    let mut group = c.benchmark_group("derive_value");
    for (m, n) in [(1u64, 2u64), (3, 8), (5, 12)] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{m}/{n}")), &(m, n), |b, &(m, n)| {
            b.iter(|| derive_value(m, n, &q(10, 1), &q(-2, 1)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_deviant_weight, bench_task_oracles, bench_derivation);
criterion_main!(benches);
