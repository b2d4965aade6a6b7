mod common;

use common::*;
use gateforge::{
    build_extended_general, build_extended_restricted, build_simple_not, eig_normal,
    fit_extended_general, is_not_shape, EigenHint, ExtendedGeneralAngles, ExtendedGeneralParams,
    ExtendedRestrictedParams, GateError, SimpleNotParams,
};
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, PI};

fn random_angles(r: &mut impl Rng, span: f64) -> ExtendedGeneralAngles<f64> {
    let mut x = || r.gen_range(-span..span);
    ExtendedGeneralAngles {
        chi: x(),
        beta: x(),
        alpha: x(),
        rho: x(),
        eta: x(),
        delta: x(),
        omega: x(),
        upsilon: x(),
    }
}

#[test]
fn general_family_is_unitary_fuzz() {
    let mut r = rng(1);
    for k in 0..2000 {
        let span = if k % 2 == 0 { PI } else { 50.0 };
        let u = build_extended_general(&ExtendedGeneralParams::new(random_angles(&mut r, span)));
        assert!(u.unitarity_deviation() <= 1e-12, "draw {k}");
        assert!(is_not_shape(&u, 0.0).unwrap());
    }
}

#[test]
fn coverage_of_random_block_unitaries() {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let u = random_not_block_unitary(&mut r);
        let p = fit_extended_general(&u).unwrap_or_else(|e| panic!("draw {k}: {e}"));
        worst = worst.max(build_extended_general(&p).max_diff(&u));
    }
    assert!(worst <= 1e-9, "worst residual {worst}");
}

#[test]
fn fit_inverts_build_on_parameters() {
    let mut r = rng(3);
    for k in 0..1000 {
        let mut a = random_angles(&mut r, PI);
        a.omega = r.gen_range(0.01..FRAC_PI_2 - 0.01);
        a.upsilon = r.gen_range(0.01..FRAC_PI_2 - 0.01);
        let p = ExtendedGeneralParams::new(a);
        let fit = fit_extended_general(&build_extended_general(&p)).unwrap();
        assert!(
            fit.max_angle_diff(&p) <= 1e-9,
            "draw {k}: {:?} vs {:?}",
            fit,
            p
        );
    }
}

#[test]
fn fit_zero_modulus_convention() {
    // Ω = 0 hides χ; Ω = π/2 hides β (β + δ is what survives)
    let a = ExtendedGeneralAngles {
        chi: 1.2,
        beta: 0.4,
        alpha: -0.3,
        rho: 2.0,
        eta: -1.0,
        delta: 0.9,
        omega: 0.0,
        upsilon: FRAC_PI_2,
    };
    let fit =
        fit_extended_general(&build_extended_general(&ExtendedGeneralParams::new(a))).unwrap();
    let f = fit.angles();
    assert_eq!(f.chi, 0.0);
    assert!((f.beta - 0.4).abs() < 1e-12 && (f.delta - 0.9).abs() < 1e-12);
    assert_eq!(f.alpha, 0.0);
    assert!((f.rho - 1.7).abs() < 1e-12);
    assert!((f.eta + 1.0).abs() < 1e-12);
}

#[test]
fn fit_rejects_non_not_matrices() {
    let mut r = rng(4);
    let mut u = random_not_block_unitary(&mut r);
    u = &u * &random_unitary(gateforge::Dim::Four, &mut r);
    assert!(matches!(
        fit_extended_general(&u),
        Err(GateError::Shape { .. })
    ));
}

#[test]
fn restricted_is_general_with_zero_mixing() {
    let mut r = rng(6);
    for _ in 0..200 {
        let p = ExtendedRestrictedParams::new(
            angle(&mut r),
            angle(&mut r),
            angle(&mut r),
            angle(&mut r),
        );
        let a = build_extended_restricted(&p);
        let b = build_extended_general(&p.to_general());
        assert!(a.max_diff(&b) <= 1e-15);
    }
}

#[test]
fn simple_eigenvalues_are_plus_minus_half_sum_phase() {
    let mut r = rng(7);
    for _ in 0..500 {
        let (alpha, beta) = (angle(&mut r), angle(&mut r));
        let p = SimpleNotParams::new(alpha, beta);
        let u = build_simple_not(&p);
        let e = eig_normal(&u, EigenHint::Numeric).unwrap();
        let u1 = cis((p.alpha() + p.beta()) / 2.0);
        for v in [u1, -u1] {
            let nearest = e
                .values
                .iter()
                .map(|x| (x - v).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1e-12);
        }
    }
}
