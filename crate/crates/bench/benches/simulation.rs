use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qnoise::qaoa::{run_exact_noisy, run_ideal};
use qnoise::{
    adjoint_gradient, build_circuit, cost_exact, make_channel, problem_hamiltonian,
    shift_rule_gradient, ChannelKind, DensityMatrix, Evaluator, GateOp, QaoaParams, StateVector,
    WeightedGraph,
};

fn params(n: usize) -> QaoaParams {
    let gamma = (0..n).map(|k| 0.3 + 0.1 * k as f64).collect();
    let beta = (0..n).map(|k| -0.4 + 0.05 * k as f64).collect();
    QaoaParams::new(gamma, beta).unwrap()
}

fn gates(c: &mut Criterion) {
    let mut group = c.benchmark_group("gate");
    let zz = GateOp::zz_phase(1, 5, 0.37).unwrap();
    let rx = GateOp::x_rotation(3, 0.21).unwrap();
    let psi = StateVector::plus_state(7).unwrap();
    let rho = DensityMatrix::from_pure(&psi).unwrap();
    group.bench_function("statevector_zz", |b| {
        let mut s = psi.clone();
        b.iter(|| s.apply_gate(black_box(&zz)).unwrap())
    });
    group.bench_function("statevector_rx", |b| {
        let mut s = psi.clone();
        b.iter(|| s.apply_gate(black_box(&rx)).unwrap())
    });
    group.bench_function("density_zz", |b| {
        let mut r = rho.clone();
        b.iter(|| r.apply_gate(black_box(&zz)).unwrap())
    });
    group.bench_function("density_rx", |b| {
        let mut r = rho.clone();
        b.iter(|| r.apply_gate(black_box(&rx)).unwrap())
    });
    for kind in ChannelKind::NAMED {
        let ch = make_channel(kind, 0.01).unwrap();
        group.bench_function(BenchmarkId::new("kraus", kind), |b| {
            let mut r = rho.clone();
            b.iter(|| r.apply_kraus_exact(black_box(&ch), 2).unwrap())
        });
    }
    group.finish();
}

fn circuits(c: &mut Criterion) {
    let g = WeightedGraph::table1();
    let h = problem_hamiltonian(&g);
    let ch = make_channel(ChannelKind::Depolarizing, 0.01).unwrap();
    let mut group = c.benchmark_group("circuit");
    group.sample_size(20);
    for n in [1, 4] {
        let circuit = build_circuit(&g, &params(n)).unwrap();
        group.bench_with_input(BenchmarkId::new("ideal", n), &circuit, |b, circ| {
            b.iter(|| run_ideal(circ).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("exact_noisy", n), &circuit, |b, circ| {
            b.iter(|| run_exact_noisy(circ, &ch).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("noisy_cost", n), &circuit, |b, circ| {
            b.iter(|| cost_exact(circ, &h, Some(&ch)).unwrap())
        });
    }
    group.finish();
}

fn gradients(c: &mut Criterion) {
    let g = WeightedGraph::table1();
    let ch = make_channel(ChannelKind::Depolarizing, 0.01).unwrap();
    let noisy = Evaluator::ExactNoisy(ch.clone());
    let mut group = c.benchmark_group("gradient");
    group.sample_size(10);
    for n in [1, 2] {
        let p = params(n);
        group.bench_with_input(BenchmarkId::new("shift_rule_noisy", n), &p, |b, p| {
            b.iter(|| shift_rule_gradient(&g, p, &noisy).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("adjoint_noisy", n), &p, |b, p| {
            b.iter(|| adjoint_gradient(&g, p, Some(&ch)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("adjoint_ideal", n), &p, |b, p| {
            b.iter(|| adjoint_gradient(&g, p, None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, gates, circuits, gradients);
criterion_main!(benches);
