mod common;

use common::*;
use gateforge::scalar::angle_diff;
use gateforge::{
    build_extended_general, build_extended_restricted, build_simple_not, eig_hermitian,
    phase_distance, synthesize_canonical_extended, synthesize_extended, synthesize_general,
    synthesize_simple, verify_gate, BranchChoice, Dim, ExtendedGeneralParams,
    ExtendedRestrictedParams, GateError, HamiltonianResult, PauliLabel, QMatrix, SimpleNotParams,
    SynthesisOptions, TimeBase,
};
use rand::Rng;
use std::f64::consts::PI;

const KEEP: SynthesisOptions = SynthesisOptions {
    drop_identity: false,
    require_no_linear: false,
    minimize_splitting: false,
};
const DROP: SynthesisOptions = SynthesisOptions {
    drop_identity: true,
    require_no_linear: false,
    minimize_splitting: false,
};

fn random_timebase(r: &mut impl Rng) -> TimeBase<f64> {
    TimeBase::new(r.gen_range(0.2..3.0), r.gen_range(0.2..3.0)).unwrap()
}

fn branch(r: &mut impl Rng) -> BranchChoice {
    let mut n = || r.gen_range(-3..=3);
    BranchChoice::new(n(), n(), n(), n())
}

fn coeff(h: &HamiltonianResult<f64>, label: &str) -> f64 {
    h.decomposition
        .coefficient(label.parse::<PauliLabel>().unwrap())
}

/// Exact reproduction without dropping; up to the expected phase with dropping.
fn check_roundtrip(
    target: &QMatrix<f64>,
    keep: &HamiltonianResult<f64>,
    drop: &HamiltonianResult<f64>,
    t: &TimeBase<f64>,
) {
    let exact = t.evolve(&keep.hamiltonian).unwrap();
    assert!(
        exact.max_diff(target) <= 1e-9,
        "exact distance {}",
        exact.max_diff(target)
    );

    let v = verify_gate(drop, target, t, true).unwrap();
    assert!(v.pass && v.phase_distance <= 1e-9);
    assert!(angle_diff(v.realized_phase, drop.expected_global_phase).abs() <= 1e-9);
    assert!(v.restored_distance <= 1e-9);
}

fn check_spectrum(h: &HamiltonianResult<f64>) {
    let (values, _) = eig_hermitian(&h.full_hamiltonian()).unwrap();
    let expected = sorted(h.spectrum.levels.clone());
    for (a, b) in values.iter().zip(&expected) {
        assert!((a - b).abs() <= 1e-10, "{values:?} vs {expected:?}");
    }
}

#[test]
fn simple_family_roundtrip() {
    let mut r = rng(21);
    for _ in 0..500 {
        let p = SimpleNotParams::new(angle(&mut r), angle(&mut r));
        let b = branch(&mut r);
        let t = random_timebase(&mut r);
        let keep = synthesize_simple(&p, &b, &t, &KEEP).unwrap();
        let drop = synthesize_simple(&p, &b, &t, &DROP).unwrap();
        check_roundtrip(&build_simple_not(&p), &keep, &drop, &t);
        check_spectrum(&keep);

        // closed-form coefficients of the single-spin Hamiltonian
        let u = t.energy_unit();
        let n = (b.n1 - b.n2) as f64;
        let g = p.gamma();
        let id = -0.5 * u * (p.alpha() + p.beta()) + PI * u * ((b.n1 + b.n2) as f64 + 0.5);
        assert!((coeff(&keep, "I") - id).abs() <= 1e-10);
        assert!((coeff(&keep, "X") - PI * u * (n - 0.5) * g.cos()).abs() <= 1e-10);
        assert!((coeff(&keep, "Y") - PI * u * (n - 0.5) * g.sin()).abs() <= 1e-10);
        assert_eq!(coeff(&keep, "Z"), 0.0);
    }
}

#[test]
fn restricted_family_roundtrip() {
    let mut r = rng(22);
    for _ in 0..500 {
        let p = ExtendedRestrictedParams::new(
            angle(&mut r),
            angle(&mut r),
            angle(&mut r),
            angle(&mut r),
        );
        let b = branch(&mut r);
        let t = random_timebase(&mut r);
        let keep = synthesize_extended(&p, &b, &t, &KEEP).unwrap();
        let drop = synthesize_extended(&p, &b, &t, &DROP).unwrap();
        check_roundtrip(&build_extended_restricted(&p), &keep, &drop, &t);
        check_spectrum(&keep);

        assert!((coeff(&keep, "XX") + coeff(&keep, "YY")).abs() <= 1e-12);
        assert!((coeff(&keep, "XY") - coeff(&keep, "YX")).abs() <= 1e-12);
        assert!((coeff(&keep, "ZI") + coeff(&keep, "IZ")).abs() <= 1e-12);

        let e = &keep.spectrum.levels;
        let g = p.gamma();
        assert!((coeff(&keep, "II") - (e[0] + e[1] + e[2] + e[3]) / 4.0).abs() <= 1e-10);
        assert!((coeff(&keep, "ZZ") - (e[0] + e[1] - e[2] - e[3]) / 4.0).abs() <= 1e-10);
        assert!((coeff(&keep, "ZI") - (e[2] - e[3]) / 4.0).abs() <= 1e-10);
        assert!((coeff(&keep, "XX") - (e[0] - e[1]) / 4.0 * g.cos()).abs() <= 1e-10);
        assert!((coeff(&keep, "XY") - (e[0] - e[1]) / 4.0 * g.sin()).abs() <= 1e-10);
    }
}

#[test]
fn linear_term_constraint_path() {
    let mut r = rng(23);
    let opts = SynthesisOptions {
        drop_identity: true,
        require_no_linear: true,
        minimize_splitting: false,
    };
    for k in 0..500 {
        let rho = angle(&mut r);
        let mut b = branch(&mut r);
        let aligned = k % 2 == 0;
        let delta = if aligned { rho } else { angle(&mut r) };
        if aligned {
            b.n4 = b.n3;
        }
        let p = ExtendedRestrictedParams::new(angle(&mut r), angle(&mut r), rho, delta);
        let t = random_timebase(&mut r);
        let e3 = p.rho() - 2.0 * PI * b.n3 as f64;
        let e4 = p.delta() - 2.0 * PI * b.n4 as f64;
        let result = synthesize_extended(&p, &b, &t, &opts);
        if (e3 - e4).abs() > 1e-10 {
            assert!(matches!(result, Err(GateError::LinearTerm { .. })));
        } else {
            let h = result.unwrap();
            assert_eq!(coeff(&h, "ZI"), 0.0);
            assert_eq!(coeff(&h, "IZ"), 0.0);
            assert_eq!(coeff(&h, "II"), 0.0);
            let v = verify_gate(&h, &build_extended_restricted(&p), &t, true).unwrap();
            assert!(v.pass, "distance {}", v.phase_distance);
        }
    }
}

#[test]
fn linear_term_threshold_is_sharp() {
    let t = TimeBase::default();
    let opts = SynthesisOptions {
        require_no_linear: true,
        ..Default::default()
    };
    let b = BranchChoice::default();
    let near = ExtendedRestrictedParams::new(0.1, 0.2, 0.5, 0.5 + 5e-11);
    assert!(synthesize_extended(&near, &b, &t, &opts).is_ok());
    let off = ExtendedRestrictedParams::new(0.1, 0.2, 0.5, 0.5 + 5e-10);
    assert!(matches!(
        synthesize_extended(&off, &b, &t, &opts),
        Err(GateError::LinearTerm { .. })
    ));
}

#[test]
fn canonical_spectrum_matches_closed_form() {
    let mut r = rng(24);
    for _ in 0..300 {
        let ising = r.gen_range(-3.0..3.0);
        let n = r.gen_range(-3..=3);
        let gamma = angle(&mut r);
        let t = random_timebase(&mut r);
        let h = synthesize_canonical_extended(ising, n, gamma, &t).unwrap();
        let u = t.energy_unit();
        let half = PI * (n as f64 - 0.5) * u;
        let expected = [-ising + half, -ising - half, ising, ising];
        for (a, b) in h.spectrum.levels.iter().zip(expected) {
            assert!((a - b).abs() <= 1e-12);
        }
        check_spectrum(&h);
    }
}

#[test]
fn general_family_numeric_roundtrip() {
    let mut r = rng(25);
    for _ in 0..200 {
        let u = random_not_block_unitary(&mut r);
        let p = gateforge::fit_extended_general(&u).unwrap();
        let target = build_extended_general(&p);
        let b = branch(&mut r);
        let t = random_timebase(&mut r);
        let keep =
            synthesize_general(&ExtendedGeneralParams::new(p.angles()), &b, &t, &KEEP).unwrap();
        let exact = t.evolve(&keep.hamiltonian).unwrap();
        assert!(exact.max_diff(&target) <= 1e-9);
        check_spectrum(&keep);
    }
}

#[test]
fn single_precision_smoke() {
    let p = SimpleNotParams::<f32>::new(0.4, -1.1);
    let t = TimeBase::<f32>::new(1.5, 0.7).unwrap();
    let h = synthesize_simple(
        &p,
        &BranchChoice::new(1, 0, 0, 0),
        &t,
        &SynthesisOptions::default(),
    )
    .unwrap();
    let u = t.evolve(&h.hamiltonian).unwrap();
    assert!(u.max_diff(&build_simple_not(&p)) < 1e-4);

    let q = ExtendedRestrictedParams::<f32>::new(0.3, 0.2, -0.5, 1.0);
    let h = synthesize_extended(
        &q,
        &BranchChoice::default(),
        &t,
        &SynthesisOptions::default(),
    )
    .unwrap();
    let u = t.evolve(&h.hamiltonian).unwrap();
    assert!(phase_distance(&u, &build_extended_restricted(&q)).unwrap() < 1e-4);
    assert_eq!(u.dim(), Dim::Four);
}
