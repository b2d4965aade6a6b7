//! Target unitaries for the NOT gate families.
//!
//! * the single-qubit NOT `[[0, e^{iβ}], [e^{iα}, 0]]`;
//! * the general two-spin (Input, Output) NOT with eight angles;
//! * its four-phase slice with one phase factor per column.

use num_complex::Complex;

use crate::error::{GateError, Result};
use crate::qmatrix::{Dim, QMatrix, CHECK_TOL};
use crate::scalar::{canonical_angle, Scalar};

/// Moduli at or below this are treated as vanishing when fitting phases.
const VANISHING_MODULUS: f64 = 1e-12;
/// Largest allowed `|build(fit(U)) - U|`.
pub const FIT_TOL: f64 = 1e-9;

fn finite_angle<T: Scalar>(name: &str, x: T) -> T {
    assert!(x.is_finite(), "angle {name} must be finite, got {x}");
    canonical_angle(x)
}

#[inline]
fn cis<T: Scalar>(r: T, theta: T) -> Complex<T> {
    Complex::from_polar(r, theta)
}

/// Phases of the single-qubit NOT, `|1⟩ → e^{iα}|0⟩`, `|0⟩ → e^{iβ}|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleNotParams<T> {
    alpha: T,
    beta: T,
}

impl<T: Scalar> SimpleNotParams<T> {
    /// Angles are stored reduced to (-π, π].
    ///
    /// # Panics
    /// If either angle is not finite.
    pub fn new(alpha: T, beta: T) -> Self {
        SimpleNotParams {
            alpha: finite_angle("alpha", alpha),
            beta: finite_angle("beta", beta),
        }
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// `(α - β)/2`, the in-plane angle of the driving term.
    pub fn gamma(&self) -> T {
        (self.alpha - self.beta) * T::lit(0.5)
    }
}

/// Raw angles of the general two-spin NOT, before canonicalization.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExtendedGeneralAngles<T> {
    pub chi: T,
    pub beta: T,
    pub alpha: T,
    pub rho: T,
    pub eta: T,
    pub delta: T,
    pub omega: T,
    pub upsilon: T,
}

/// Canonical parameters of the general two-spin NOT.
///
/// `omega` and `upsilon` lie in `[0, π/2]`; all phases lie in (-π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedGeneralParams<T> {
    angles: ExtendedGeneralAngles<T>,
}

impl<T: Scalar> ExtendedGeneralParams<T> {
    /// Canonicalizes the angles. Mixing angles outside `[0, π/2]` are folded
    /// back with phase shifts that leave the matrix unchanged.
    ///
    /// # Panics
    /// If any angle is not finite.
    pub fn new(raw: ExtendedGeneralAngles<T>) -> Self {
        let mut a = raw;
        for (name, v) in [
            ("chi", a.chi),
            ("beta", a.beta),
            ("alpha", a.alpha),
            ("rho", a.rho),
            ("eta", a.eta),
            ("delta", a.delta),
            ("omega", a.omega),
            ("upsilon", a.upsilon),
        ] {
            assert!(v.is_finite(), "angle {name} must be finite, got {v}");
        }
        let pi = T::PI();

        a.omega = canonical_angle(a.omega);
        if a.omega.sin() < T::zero() {
            a.omega = -a.omega;
            a.chi += pi;
        }
        if a.omega.cos() < T::zero() {
            a.omega = pi - a.omega;
            a.beta += pi;
            a.delta += pi;
        }

        a.upsilon = canonical_angle(a.upsilon);
        if a.upsilon.sin() < T::zero() {
            a.upsilon = -a.upsilon;
            a.eta += pi;
        }
        if a.upsilon.cos() < T::zero() {
            a.upsilon = pi - a.upsilon;
            a.alpha += pi;
            a.rho += pi;
        }

        ExtendedGeneralParams {
            angles: ExtendedGeneralAngles {
                chi: canonical_angle(a.chi),
                beta: canonical_angle(a.beta),
                alpha: canonical_angle(a.alpha),
                rho: canonical_angle(a.rho),
                eta: canonical_angle(a.eta),
                delta: canonical_angle(a.delta),
                omega: a.omega,
                upsilon: a.upsilon,
            },
        }
    }

    pub fn angles(&self) -> ExtendedGeneralAngles<T> {
        self.angles
    }

    /// Largest angular difference (mod 2π) against `other`.
    pub fn max_angle_diff(&self, other: &Self) -> T {
        let a = self.angles;
        let b = other.angles;
        [
            (a.chi, b.chi),
            (a.beta, b.beta),
            (a.alpha, b.alpha),
            (a.rho, b.rho),
            (a.eta, b.eta),
            (a.delta, b.delta),
            (a.omega, b.omega),
            (a.upsilon, b.upsilon),
        ]
        .iter()
        .fold(T::zero(), |acc, &(x, y)| {
            acc.max(canonical_angle(x - y).abs())
        })
    }
}

/// Four-phase two-spin NOT: one phase factor per column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedRestrictedParams<T> {
    alpha: T,
    beta: T,
    rho: T,
    delta: T,
}

impl<T: Scalar> ExtendedRestrictedParams<T> {
    /// # Panics
    /// If any angle is not finite.
    pub fn new(alpha: T, beta: T, rho: T, delta: T) -> Self {
        ExtendedRestrictedParams {
            alpha: finite_angle("alpha", alpha),
            beta: finite_angle("beta", beta),
            rho: finite_angle("rho", rho),
            delta: finite_angle("delta", delta),
        }
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }
    pub fn beta(&self) -> T {
        self.beta
    }
    pub fn rho(&self) -> T {
        self.rho
    }
    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn gamma(&self) -> T {
        (self.alpha - self.beta) * T::lit(0.5)
    }

    /// The same matrix as a point of the general family (mixing angles zero).
    pub fn to_general(&self) -> ExtendedGeneralParams<T> {
        ExtendedGeneralParams::new(ExtendedGeneralAngles {
            alpha: self.alpha,
            beta: self.beta,
            rho: self.rho,
            delta: self.delta,
            ..Default::default()
        })
    }
}

pub fn build_simple_not<T: Scalar>(p: &SimpleNotParams<T>) -> QMatrix<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let b = cis(T::one(), p.beta);
    let a = cis(T::one(), p.alpha);
    QMatrix::from_fn(Dim::Two, |i, j| match (i, j) {
        (0, 1) => b,
        (1, 0) => a,
        _ => zero,
    })
}

pub fn build_extended_general<T: Scalar>(p: &ExtendedGeneralParams<T>) -> QMatrix<T> {
    let a = p.angles;
    let (so, co) = (a.omega.sin(), a.omega.cos());
    let (su, cu) = (a.upsilon.sin(), a.upsilon.cos());
    let zero = Complex::new(T::zero(), T::zero());
    let rows = [
        [zero, zero, cis(so, a.chi), cis(co, a.beta)],
        [
            -cis(su, a.alpha + a.rho - a.eta),
            cis(cu, a.rho),
            zero,
            zero,
        ],
        [
            zero,
            zero,
            cis(co, a.delta),
            -cis(so, a.beta + a.delta - a.chi),
        ],
        [cis(cu, a.alpha), cis(su, a.eta), zero, zero],
    ];
    QMatrix::from_fn(Dim::Four, |i, j| rows[i][j])
}

pub fn build_extended_restricted<T: Scalar>(p: &ExtendedRestrictedParams<T>) -> QMatrix<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let rows = [
        [zero, zero, zero, cis(T::one(), p.beta)],
        [zero, cis(T::one(), p.rho), zero, zero],
        [zero, zero, cis(T::one(), p.delta), zero],
        [cis(T::one(), p.alpha), zero, zero, zero],
    ];
    QMatrix::from_fn(Dim::Four, |i, j| rows[i][j])
}

/// Zero positions (0-based) of a two-spin NOT: Input-up columns must not
/// reach Output-up rows and vice versa.
const NOT_ZEROS: [(usize, usize); 8] = [
    (0, 0),
    (0, 1),
    (1, 2),
    (1, 3),
    (2, 0),
    (2, 1),
    (3, 2),
    (3, 3),
];

/// Largest modulus among the entries that must vanish for a two-spin NOT.
pub fn not_shape_leak<T: Scalar>(u: &QMatrix<T>) -> Result<T> {
    if u.dim() != Dim::Four {
        return Err(GateError::dim("4x4", format!("{}x{}", u.size(), u.size())));
    }
    Ok(NOT_ZEROS
        .iter()
        .fold(T::zero(), |acc, &(i, j)| acc.max(u.get(i, j).norm())))
}

/// Whether `u` maps Input-up states to Output-down states and vice versa.
pub fn is_not_shape<T: Scalar>(u: &QMatrix<T>, tol: T) -> Result<bool> {
    Ok(not_shape_leak(u)? <= tol)
}

/// Recovers the general-family parameters of a two-spin NOT unitary.
///
/// Phases are read from the larger-modulus entries of each 2×2 block; a phase
/// multiplying a vanishing modulus is set to zero.
pub fn fit_extended_general<T: Scalar>(u: &QMatrix<T>) -> Result<ExtendedGeneralParams<T>> {
    let tol = T::tol(CHECK_TOL);
    let leak = not_shape_leak(u).map_err(|e| GateError::Shape {
        reason: e.to_string(),
    })?;
    if leak > tol {
        return Err(GateError::Shape {
            reason: format!(
                "entry leak {:.3e} outside the NOT pattern",
                leak.to_f64_lossy()
            ),
        });
    }
    let dev = u.unitarity_deviation();
    if dev > tol {
        return Err(GateError::Shape {
            reason: format!("not unitary (deviation {:.3e})", dev.to_f64_lossy()),
        });
    }

    let vanishing = T::lit(VANISHING_MODULUS);
    let g = |i: usize, j: usize| u.get(i, j);

    // upper block: rows 1,3 / columns 3,4 (1-based)
    let omega = g(0, 2).norm().atan2(g(0, 3).norm());
    let (so, co) = (omega.sin(), omega.cos());
    let (chi, beta, delta);
    if co >= so {
        beta = g(0, 3).arg();
        delta = g(2, 2).arg();
        chi = if so > vanishing {
            g(0, 2).arg()
        } else {
            T::zero()
        };
    } else {
        chi = g(0, 2).arg();
        let sum = (-g(2, 3)).arg() + chi;
        if co > vanishing {
            beta = g(0, 3).arg();
            delta = sum - beta;
        } else {
            beta = T::zero();
            delta = sum;
        }
    }

    // lower block: rows 2,4 / columns 1,2
    let upsilon = g(3, 1).norm().atan2(g(3, 0).norm());
    let (su, cu) = (upsilon.sin(), upsilon.cos());
    let (eta, alpha, rho);
    if cu >= su {
        alpha = g(3, 0).arg();
        rho = g(1, 1).arg();
        eta = if su > vanishing {
            g(3, 1).arg()
        } else {
            T::zero()
        };
    } else {
        eta = g(3, 1).arg();
        let sum = (-g(1, 0)).arg() + eta;
        if cu > vanishing {
            alpha = g(3, 0).arg();
            rho = sum - alpha;
        } else {
            alpha = T::zero();
            rho = sum;
        }
    }

    let params = ExtendedGeneralParams::new(ExtendedGeneralAngles {
        chi,
        beta,
        alpha,
        rho,
        eta,
        delta,
        omega,
        upsilon,
    });
    let residual = build_extended_general(&params).max_diff(u);
    if residual > T::tol(FIT_TOL) {
        return Err(GateError::Fit {
            residual: residual.to_f64_lossy(),
            tolerance: FIT_TOL,
        });
    }
    Ok(params)
}
