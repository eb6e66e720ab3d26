use dqsa::gates::diffusion_gate;
use dqsa::search::SearchCircuit;
use dqsa::{report, walsh_layer, BasisPattern, DissipationRates, PhasePoint, RunConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(max_n: usize) -> impl Strategy<Value = RunConfig> {
    (2usize..=max_n)
        .prop_flat_map(|n| {
            (
                0..1usize << n,
                0.0..2.0f64,
                prop::collection::vec(0.0..3.5f64, n),
                Just(n),
            )
        })
        .prop_map(|(i, phi, g, n)| {
            let m = BasisPattern::from_index(n, i).unwrap();
            RunConfig::new(m, phi, DissipationRates::new(g).unwrap()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn survival_never_exceeds_one(c in config(7)) {
        let r = report(&c).unwrap();
        prop_assert!(r.survival <= 1.0 + 1e-12, "{}", r.survival);
        prop_assert!(r.marked_prob >= 0.0);
        prop_assert!((r.marked_prob + r.sum_unmarked() - r.survival).abs() < 1e-12);
    }

    #[test]
    fn norm_decreases_every_step(c in config(6)) {
        let mut norms = Vec::new();
        SearchCircuit::new(&c).unwrap().run_with(|s| norms.push(s.norm_sqr())).unwrap();
        prop_assert!(norms.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{:?}", norms);
    }

    #[test]
    fn diffusion_is_symmetric_contraction(n in 1usize..=5, phi in 0.0..2.0f64, g in prop::collection::vec(0.0..3.9f64, 5)) {
        let rates = DissipationRates::new(g[..n].to_vec()).unwrap();
        let d = diffusion_gate(n, &PhasePoint::new(phi, n).unwrap(), &rates).unwrap();
        prop_assert!(d.asymmetry() < 1e-13, "{}", d.asymmetry());
        prop_assert!(d.operator_norm() <= 1.0 + 1e-12, "{}", d.operator_norm());
        let w = walsh_layer(n, &rates).unwrap().to_dense().unwrap();
        prop_assert!(w.operator_norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn dissipationless_runs_are_unitary(n in 1usize..=5, phi in 0.0..2.0f64) {
        let rates = DissipationRates::zeros(n).unwrap();
        let d = diffusion_gate(n, &PhasePoint::new(phi, n).unwrap(), &rates).unwrap();
        prop_assert!(d.unitarity_defect() < 1e-12);
    }
}

#[test]
fn marked_probability_is_pattern_independent_without_loss() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=8 {
        let phi: f64 = rng.gen_range(0.1..1.5);
        let reference =
            report(&RunConfig::dissipationless(BasisPattern::ground(n).unwrap(), phi).unwrap())
                .unwrap()
                .marked_prob;
        for i in 1..1usize << n {
            let m = BasisPattern::from_index(n, i).unwrap();
            let p = report(&RunConfig::dissipationless(m, phi).unwrap())
                .unwrap()
                .marked_prob;
            assert!(
                (p - reference).abs() < 1e-12,
                "n={n} i={i}: {p} vs {reference}"
            );
        }
    }
}

#[test]
fn uniform_rates_reversal_symmetry() {
    // Relabelling qubits leaves the outcome unchanged when every qubit has the same rate.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = rng.gen_range(2..=6);
        let g = rng.gen_range(0.0..2.0);
        let phi = rng.gen_range(0.2..1.2);
        let i = rng.gen_range(0..1usize << n);
        let m = BasisPattern::from_index(n, i).unwrap();
        let reversed: String = m.to_string().chars().rev().collect();
        let run = |p: &BasisPattern| {
            report(
                &RunConfig::new(p.clone(), phi, DissipationRates::uniform(n, g).unwrap()).unwrap(),
            )
            .unwrap()
            .marked_prob
        };
        let a = run(&m);
        let b = run(&BasisPattern::parse(&reversed).unwrap());
        assert!((a - b).abs() < 1e-12, "{m} vs {reversed}: {a} {b}");
    }
}

#[test]
fn survival_falls_with_uniform_rate() {
    let m = BasisPattern::parse("egeg").unwrap();
    let survivals: Vec<f64> = (0..40)
        .map(|k| {
            let g = k as f64 * 0.05;
            report(
                &RunConfig::new(m.clone(), 0.8, DissipationRates::uniform(4, g).unwrap()).unwrap(),
            )
            .unwrap()
            .survival
        })
        .collect();
    assert!((survivals[0] - 1.0).abs() < 1e-12);
    assert!(survivals.windows(2).all(|w| w[1] < w[0]), "{survivals:?}");
}
