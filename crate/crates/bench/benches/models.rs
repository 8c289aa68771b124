use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qpoker_core::algebra::{Quaternion, UnitQuaternion};
use qpoker_core::ewl::{
    eval_mixed_quantum, eval_pure_quantum, strategy_matrix, MixedQuantumStrategy,
};
use qpoker_core::poker::{reduce_poker, PokerSpec};
use qpoker_core::quantized::{quaternion_assignment, quaternion_payoff};
use qpoker_core::strategic::BuiltinGame;

fn reduction(c: &mut Criterion) {
    let mut g = c.benchmark_group("reduction");
    g.sample_size(10);
    g.bench_function("simplified", |b| {
        b.iter(|| reduce_poker(black_box(&PokerSpec::simplified())).unwrap())
    });
    g.bench_function("nash_shapley", |b| {
        b.iter(|| reduce_poker(black_box(&PokerSpec::nash_shapley())).unwrap())
    });
    g.finish();
}

fn quantum(c: &mut Criterion) {
    let game = BuiltinGame::PrisonersDilemma.game();
    let assignment = quaternion_assignment().unwrap();
    let p = UnitQuaternion::new(Quaternion::new(0.5, 0.5, 0.5, 0.5)).unwrap();
    let q = UnitQuaternion::new(Quaternion::new(0.6, 0.0, 0.8, 0.0)).unwrap();
    c.bench_function("quaternion_shortcut", |b| {
        b.iter(|| quaternion_payoff(&game, black_box(p), black_box(q), assignment).unwrap())
    });
    let unitaries = [
        strategy_matrix(2, p).unwrap(),
        strategy_matrix(2, q).unwrap(),
    ];
    c.bench_function("state_vector_oracle", |b| {
        b.iter(|| eval_pure_quantum(&game, true, black_box(&unitaries)).unwrap())
    });

    let ns = BuiltinGame::NashShapleyReduced.game();
    let haar = vec![MixedQuantumStrategy::HaarUniform; 3];
    c.bench_function("haar_three_player_10k", |b| {
        b.iter(|| eval_mixed_quantum(&ns, true, black_box(&haar), 10_000, 1).unwrap())
    });
}

criterion_group!(benches, reduction, quantum);
criterion_main!(benches);
