mod common;

use common::*;
use gateforge::{
    commutation_audit, evolve_time_ordered, evolve_unordered, normalize_protocol, pauli_compose,
    protocol_integral, synthesize_canonical_extended, Dim, PauliDecomposition, PauliLabel,
    Protocol, ProtocolShape, QMatrix, TimeBase, TimedHamiltonian,
};
use proptest::prelude::*;
use rand::Rng;

fn shape_strategy() -> impl Strategy<Value = ProtocolShape<f64>> {
    prop_oneof![
        Just(ProtocolShape::Rectangular),
        Just(ProtocolShape::RaisedCosine),
        (0.5..2.0f64, -0.25..0.25f64, 0.0..1.5f64, -3.0..3.0f64)
            .prop_map(|(a, b, omega, phase)| ProtocolShape::ConstPlusCosine { a, b, omega, phase }),
    ]
}

/// Hermitian with operator norm at most `bound` (Frobenius bound on random entries).
fn bounded_hermitian(r: &mut impl Rng, bound: f64) -> QMatrix<f64> {
    let h = random_hermitian(Dim::Four, 1.0, r);
    let fro = h
        .rows()
        .iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    h.scale_real(bound / fro)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn single_term_converges(shape in shape_strategy(), seed in any::<u64>(), norm in 0.1..10.0f64, dt in 0.5..2.0f64) {
        let mut r = rng(seed);
        let h = bounded_hermitian(&mut r, norm / dt);
        let p = normalize_protocol(&Protocol::new(shape, 0.3, dt, 1.0).unwrap()).unwrap();
        let th = TimedHamiltonian::single(h, p);
        let tb = TimeBase::new(dt, 1.0).unwrap();
        let ordered = evolve_time_ordered(&th, &tb, 10_000).unwrap();
        let unordered = evolve_unordered(&th, &tb).unwrap();
        prop_assert!(ordered.max_diff(&unordered) <= 1e-8, "{}", ordered.max_diff(&unordered));
    }

    #[test]
    fn normalization_is_idempotent(shape in shape_strategy(), scale in 0.1..5.0f64, dt in 0.1..3.0f64) {
        let p = Protocol::new(shape, -1.0, dt, scale).unwrap();
        let once = normalize_protocol(&p).unwrap();
        let twice = normalize_protocol(&once).unwrap();
        prop_assert!((once.scale - twice.scale).abs() <= 1e-12 * once.scale.abs());
        prop_assert!((protocol_integral(&once).unwrap() - dt).abs() <= 1e-12 * dt);
    }

    #[test]
    fn ordered_evolution_is_unitary(s1 in shape_strategy(), s2 in shape_strategy(), seed in any::<u64>(), steps in 1usize..200) {
        let mut r = rng(seed);
        let th = TimedHamiltonian::new(vec![
            (random_hermitian(Dim::Four, 3.0, &mut r), Protocol::new(s1, 0.0, 1.0, 1.0).unwrap()),
            (random_hermitian(Dim::Four, 3.0, &mut r), Protocol::new(s2, 0.0, 1.0, 1.0).unwrap()),
        ]).unwrap();
        let u = evolve_time_ordered(&th, &TimeBase::default(), steps).unwrap();
        prop_assert!(u.unitarity_deviation() <= 1e-10);
    }

    #[test]
    fn commuting_diagonal_pairs_agree(d1 in prop::collection::vec(-2.0..2.0f64, 4), d2 in prop::collection::vec(-2.0..2.0f64, 4), s1 in shape_strategy(), s2 in shape_strategy()) {
        let th = TimedHamiltonian::new(vec![
            (QMatrix::real_diag(&d1).unwrap(), normalize_protocol(&Protocol::new(s1, 0.0, 1.0, 1.0).unwrap()).unwrap()),
            (QMatrix::real_diag(&d2).unwrap(), normalize_protocol(&Protocol::new(s2, 0.0, 1.0, 1.0).unwrap()).unwrap()),
        ]).unwrap();
        prop_assert!(commutation_audit(&th).unwrap().ordering_free);
        let tb = TimeBase::default();
        let a = evolve_time_ordered(&th, &tb, 10_000).unwrap();
        let b = evolve_unordered(&th, &tb).unwrap();
        prop_assert!(a.max_diff(&b) <= 1e-8);
    }
}

#[test]
fn canonical_split_commutes_and_agrees() {
    let t = TimeBase::default();
    let h = synthesize_canonical_extended(0.7, 0, 0.4, &t).unwrap();
    let zz_label: PauliLabel = "ZZ".parse().unwrap();
    let zz = PauliDecomposition::from_terms([(zz_label, h.decomposition.coefficient(zz_label))])
        .unwrap();
    let rest = h.decomposition.with_coefficient(zz_label, 0.0).unwrap();
    let th = TimedHamiltonian::new(vec![
        (pauli_compose(&zz), Protocol::rectangular(0.0, 1.0).unwrap()),
        (
            pauli_compose(&rest),
            normalize_protocol(&Protocol::raised_cosine(0.0, 1.0).unwrap()).unwrap(),
        ),
    ])
    .unwrap();
    assert!(commutation_audit(&th).unwrap().ordering_free);
    let a = evolve_time_ordered(&th, &t, 10_000).unwrap();
    let b = evolve_unordered(&th, &t).unwrap();
    assert!(a.max_diff(&b) <= 1e-8);
    assert!(a.max_diff(&t.evolve(&h.hamiltonian).unwrap()) <= 1e-8);
}

#[test]
fn second_order_convergence() {
    let mut r = rng(31);
    let th = TimedHamiltonian::new(vec![
        (
            random_hermitian(Dim::Four, 1.0, &mut r),
            Protocol::rectangular(0.0, 1.0).unwrap(),
        ),
        (
            random_hermitian(Dim::Four, 1.0, &mut r),
            Protocol::new(
                ProtocolShape::ConstPlusCosine {
                    a: 0.0,
                    b: 1.0,
                    omega: 4.0,
                    phase: 0.3,
                },
                0.0,
                1.0,
                1.0,
            )
            .unwrap(),
        ),
    ])
    .unwrap();
    let tb = TimeBase::default();
    let reference = evolve_time_ordered(&th, &tb, 40_000).unwrap();
    let e1 = evolve_time_ordered(&th, &tb, 100)
        .unwrap()
        .max_diff(&reference);
    let e2 = evolve_time_ordered(&th, &tb, 200)
        .unwrap()
        .max_diff(&reference);
    let ratio = e1 / e2;
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
}
