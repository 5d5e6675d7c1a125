use num_complex::Complex64;
use proptest::prelude::*;
use qnoise::io::{parse_graph, serialize_graph};
use qnoise::noise::ChannelKind;
use qnoise::qaoa::run_exact_noisy;
use qnoise::{
    adjoint_gradient, build_circuit, cost_exact, make_channel, problem_hamiltonian,
    shift_rule_gradient, DensityMatrix, Evaluator, GateOp, NoiseChannel, QaoaParams, StateVector,
    WeightedGraph,
};

fn graph_strategy(max_nodes: usize) -> impl Strategy<Value = WeightedGraph> {
    (2..=max_nodes).prop_flat_map(|m| {
        let pairs: Vec<(usize, usize)> =
            (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        let k = pairs.len();
        (
            Just(m),
            Just(pairs),
            proptest::collection::vec(any::<bool>(), k),
            proptest::collection::vec(0.1f64..2.0, k),
            proptest::collection::vec(any::<bool>(), k),
        )
            .prop_map(|(m, pairs, keep, mag, neg)| {
                let mut edges: Vec<(usize, usize, f64)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(e, _)| keep[*e])
                    .map(|(e, &(i, j))| (i, j, if neg[e] { -mag[e] } else { mag[e] }))
                    .collect();
                if edges.is_empty() {
                    edges.push((0, 1, mag[0]));
                }
                WeightedGraph::new(m, edges).unwrap()
            })
    })
}

fn params_strategy(max_steps: usize) -> impl Strategy<Value = QaoaParams> {
    (1..=max_steps).prop_flat_map(|n| {
        (
            proptest::collection::vec(-1.5f64..1.5, n),
            proptest::collection::vec(-1.5f64..1.5, n),
        )
            .prop_map(|(g, b)| QaoaParams::new(g, b).unwrap())
    })
}

fn kind_strategy() -> impl Strategy<Value = ChannelKind> {
    prop_oneof![
        Just(ChannelKind::Dephasing),
        Just(ChannelKind::BitFlip),
        Just(ChannelKind::Depolarizing),
    ]
}

fn random_state(m: usize, re: &[f64], im: &[f64]) -> StateVector {
    let amps: Vec<Complex64> = re.iter().zip(im).take(1 << m).map(|(&a, &b)| Complex64::new(a, b)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn max_entry_diff(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_circuits_preserve_norm(g in graph_strategy(6), params in params_strategy(3)) {
        let circuit = build_circuit(&g, &params).unwrap();
        let psi = qnoise::qaoa::run_ideal(&circuit).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn channels_keep_trace_and_hermiticity(
        g in graph_strategy(4),
        params in params_strategy(2),
        kind in kind_strategy(),
        p in 0.0f64..=1.0,
    ) {
        let ch = make_channel(kind, p).unwrap();
        let rho = run_exact_noisy(&build_circuit(&g, &params).unwrap(), &ch).unwrap();
        prop_assert!((rho.trace() - 1.0).norm() < 1e-12);
        prop_assert!(rho.is_hermitian(1e-12));
        prop_assert!(rho.diagonal().iter().all(|&d| d > -1e-12));
    }

    #[test]
    fn problem_hamiltonian_is_traceless(g in graph_strategy(8)) {
        let diag = problem_hamiltonian(&g).diagonal();
        prop_assert!(diag.iter().sum::<f64>().abs() < 1e-9);
    }

    #[test]
    fn flipping_every_bit_keeps_energy(g in graph_strategy(8)) {
        let h = problem_hamiltonian(&g);
        let all = (1usize << g.num_nodes()) - 1;
        for z in 0..=all {
            prop_assert!((h.energy_of_index(z) - h.energy_of_index(z ^ all)).abs() < 1e-12);
        }
    }

    #[test]
    fn kraus_map_is_linear(
        kind in kind_strategy(),
        p in 0.0f64..=1.0,
        t in 0.0f64..=1.0,
        re in proptest::collection::vec(-1.0f64..1.0, 8),
        im in proptest::collection::vec(-1.0f64..1.0, 8),
        re2 in proptest::collection::vec(-1.0f64..1.0, 8),
        im2 in proptest::collection::vec(-1.0f64..1.0, 8),
        qubit in 0usize..3,
    ) {
        let ch = make_channel(kind, p).unwrap();
        let a = DensityMatrix::from_pure(&random_state(3, &re, &im)).unwrap();
        let b = DensityMatrix::from_pure(&random_state(3, &re2, &im2)).unwrap();
        let mix: Vec<Complex64> = a.entries().iter().zip(b.entries()).map(|(x, y)| x * t + y * (1.0 - t)).collect();
        let mut mixed = DensityMatrix::from_entries(3, mix).unwrap();
        let (mut a2, mut b2) = (a.clone(), b.clone());
        mixed.apply_kraus_exact(&ch, qubit).unwrap();
        a2.apply_kraus_exact(&ch, qubit).unwrap();
        b2.apply_kraus_exact(&ch, qubit).unwrap();
        let expect: Vec<Complex64> = a2.entries().iter().zip(b2.entries()).map(|(x, y)| x * t + y * (1.0 - t)).collect();
        let expect = DensityMatrix::from_entries(3, expect).unwrap();
        prop_assert!(max_entry_diff(&mixed, &expect) < 1e-12);
    }

    #[test]
    fn depolarizing_matches_closed_form(
        p in 0.0f64..=1.0,
        re in proptest::collection::vec(-1.0f64..1.0, 2),
        im in proptest::collection::vec(-1.0f64..1.0, 2),
    ) {
        let rho = DensityMatrix::from_pure(&random_state(1, &re, &im)).unwrap();
        let mut out = rho.clone();
        out.apply_kraus_exact(&make_channel(ChannelKind::Depolarizing, p).unwrap(), 0).unwrap();
        let half = Complex64::new(0.5, 0.0);
        let expect: Vec<Complex64> = (0..4)
            .map(|k| {
                let id = if k == 0 || k == 3 { half } else { Complex64::new(0.0, 0.0) };
                rho.entries()[k] * (1.0 - p) + id * p
            })
            .collect();
        let expect = DensityMatrix::from_entries(1, expect).unwrap();
        prop_assert!(max_entry_diff(&out, &expect) < 1e-12);
    }

    #[test]
    fn identity_channel_is_a_no_op(
        kind in kind_strategy(),
        re in proptest::collection::vec(-1.0f64..1.0, 4),
        im in proptest::collection::vec(-1.0f64..1.0, 4),
    ) {
        let rho = DensityMatrix::from_pure(&random_state(2, &re, &im)).unwrap();
        let mut out = rho.clone();
        let ch = make_channel(kind, 0.0).unwrap();
        out.apply_kraus_exact(&ch, 1).unwrap();
        prop_assert!(max_entry_diff(&out, &rho) < 1e-15);
    }

    #[test]
    fn gates_agree_between_representations(
        re in proptest::collection::vec(-1.0f64..1.0, 8),
        im in proptest::collection::vec(-1.0f64..1.0, 8),
        theta in -3.0f64..3.0,
    ) {
        let psi = random_state(3, &re, &im);
        let gates = [
            GateOp::zz_phase(0, 2, theta).unwrap(),
            GateOp::x_rotation(1, theta).unwrap(),
        ];
        let mut pure = psi.clone();
        let mut rho = DensityMatrix::from_pure(&psi).unwrap();
        for gate in &gates {
            pure.apply_gate(gate).unwrap();
            rho.apply_gate(gate).unwrap();
        }
        prop_assert!(max_entry_diff(&rho, &DensityMatrix::from_pure(&pure).unwrap()) < 1e-12);
    }

    #[test]
    fn graph_files_round_trip(g in graph_strategy(8)) {
        prop_assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjoint_matches_shift_rule(
        g in graph_strategy(4),
        params in params_strategy(3),
        kind in kind_strategy(),
        p in 0.0f64..0.2,
    ) {
        let ideal = shift_rule_gradient(&g, &params, &Evaluator::Ideal).unwrap();
        let (cost, adj) = adjoint_gradient(&g, &params, None).unwrap();
        prop_assert!(ideal.max_abs_diff(&adj) < 1e-10);
        let h = problem_hamiltonian(&g);
        let circuit = build_circuit(&g, &params).unwrap();
        prop_assert!((cost - cost_exact(&circuit, &h, None).unwrap()).abs() < 1e-12);

        let ch: NoiseChannel = make_channel(kind, p).unwrap();
        let noisy = shift_rule_gradient(&g, &params, &Evaluator::ExactNoisy(ch.clone())).unwrap();
        let (_, adj) = adjoint_gradient(&g, &params, Some(&ch)).unwrap();
        prop_assert!(noisy.max_abs_diff(&adj) < 1e-10);
    }
}
