use proptest::prelude::*;
use zeno_entropy::entropy::shannon_entropy_weights;
use zeno_entropy::prelude::*;

fn hermitian(d: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), d * d).prop_map(move |v| {
        let rows: Vec<Vec<C64>> = v
            .chunks(d)
            .map(|r| r.iter().map(|&(re, im)| C64::new(re, im)).collect())
            .collect();
        let m = ComplexMatrix::from_rows(&rows).unwrap();
        (&m + &m.adjoint()).scale(C64::new(0.5, 0.0))
    })
}

fn any_hermitian() -> impl Strategy<Value = ComplexMatrix> {
    (2usize..=6).prop_flat_map(hermitian)
}

fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 1..12)
        .prop_filter("positive total", |w| w.iter().sum::<f64>() > 1e-6)
}

fn to_distribution(w: &[f64]) -> OutcomeDistribution {
    let total: f64 = w.iter().sum();
    OutcomeDistribution::new(
        w.iter().map(|x| x / total).collect(),
        DistributionMode::Normalized,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn propagator_is_unitary(m in any_hermitian(), t in -5.0f64..5.0) {
        let h = Hamiltonian::new(m).unwrap();
        let u = propagator(h.spectral(), t).unwrap();
        let defect = (&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(h.dim()));
        prop_assert!(defect < 1e-10, "defect {defect}");
    }

    #[test]
    fn propagator_group_property(m in any_hermitian(), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let h = Hamiltonian::new(m).unwrap();
        let product = &propagator(h.spectral(), t1).unwrap() * &propagator(h.spectral(), t2).unwrap();
        let direct = propagator(h.spectral(), t1 + t2).unwrap();
        prop_assert!(product.max_abs_diff(&direct) < 1e-10);
    }

    #[test]
    fn exponential_matches_propagator(m in any_hermitian(), t in -3.0f64..3.0) {
        let h = Hamiltonian::new(m.clone()).unwrap();
        let general = matrix_exp_general(&m.scale(C64::new(0.0, -t)), 1e-12).unwrap();
        let spectral = propagator(h.spectral(), t).unwrap();
        prop_assert!(general.max_abs_diff(&spectral) < 1e-9);
    }

    #[test]
    fn entropy_is_bounded(w in weights()) {
        let p = to_distribution(&w);
        let s = shannon_entropy(&p, LogBase::Nats).unwrap().value();
        prop_assert!(s >= 0.0);
        prop_assert!(s <= (p.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn entropy_is_permutation_invariant(w in weights(), seed in any::<u64>()) {
        let mut shuffled = w.clone();
        let n = shuffled.len();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        let a = shannon_entropy(&to_distribution(&w), LogBase::Nats).unwrap().value();
        let b = shannon_entropy(&to_distribution(&shuffled), LogBase::Nats).unwrap().value();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn entropy_is_concave(
        pair in (1usize..10).prop_flat_map(|n| (
            prop::collection::vec(0.01f64..1.0, n),
            prop::collection::vec(0.01f64..1.0, n),
        )),
        lambda in 0.0f64..1.0,
    ) {
        let (p, q) = (to_distribution(&pair.0), to_distribution(&pair.1));
        let mix: Vec<f64> = p.weights().iter().zip(q.weights()).map(|(x, y)| lambda * x + (1.0 - lambda) * y).collect();
        let s = |w: &[f64]| shannon_entropy_weights(w).unwrap();
        prop_assert!(s(&mix) >= lambda * s(p.weights()) + (1.0 - lambda) * s(q.weights()) - 1e-10);
    }

    #[test]
    fn normalize_sums_to_one(w in weights()) {
        let raw = OutcomeDistribution::new(w, DistributionMode::PaperLiteral).unwrap();
        let n = normalize(&raw).unwrap();
        prop_assert!((n.total() - 1.0).abs() < 1e-12);
        prop_assert_eq!(n.mode(), DistributionMode::Normalized);
    }

    #[test]
    fn born_distribution_stays_normalized(h in hermitian(4), a in hermitian(4), n0 in 0usize..4, t in -4.0f64..4.0) {
        let h = Hamiltonian::new(h).unwrap();
        let a = Observable::new(a).unwrap();
        let p = free_evolution_distribution(&h, &a, n0, t).unwrap();
        prop_assert!((p.total() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn transition_matrix_is_doubly_stochastic(pair in (2usize..=8).prop_flat_map(|d| (hermitian(d), hermitian(d)))) {
        let a = Observable::new(pair.0).unwrap();
        let h = Hamiltonian::new(pair.1).unwrap();
        prop_assert!(transition_matrix(&a, &h).unwrap().stochastic_defect() < 1e-9);
    }
}

#[test]
fn monte_carlo_error_shrinks_with_trials() {
    let h = Hamiltonian::new(pauli::x().scale(C64::new(0.5, 0.0))).unwrap();
    let a = Observable::new(pauli::z()).unwrap();
    let schedule = ZenoSchedule::new(1.0, 10).unwrap();
    let exact = zeno_chain_distribution(&h, &a, 1, &schedule).unwrap();
    let mean_tv = |trials| {
        let seeds = 0..8u64;
        let n = seeds.end as f64;
        seeds
            .map(|seed| {
                monte_carlo_zeno(&h, &a, 1, &schedule, trials, seed)
                    .unwrap()
                    .total_variation(&exact)
                    .unwrap()
            })
            .sum::<f64>()
            / n
    };
    let (small, large) = (mean_tv(10_000), mean_tv(1_000_000));
    assert!(
        small > large,
        "mean TV {small} at 1e4 trials, {large} at 1e6"
    );
}
