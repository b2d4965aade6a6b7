use num_complex::Complex;

use super::{Dim, QMatrix, CHECK_TOL};
use crate::error::{GateError, Result};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 60;
/// Relative gap below which Hermitian-part eigenvalues are treated as one cluster.
const CLUSTER_TOL: f64 = 1e-5;
/// Relative magnitude below which column entries tie for "largest".
const PHASE_TIE_TOL: f64 = 1e-8;

/// Square complex matrix of arbitrary size, used inside the eigensolver where
/// restrictions to degenerate subspaces can have any size up to 4.
#[derive(Clone)]
struct Dense<T> {
    n: usize,
    a: Vec<Complex<T>>,
}

impl<T: Scalar> Dense<T> {
    fn identity(n: usize) -> Self {
        let mut a = vec![Complex::new(T::zero(), T::zero()); n * n];
        for i in 0..n {
            a[i * n + i] = Complex::new(T::one(), T::zero());
        }
        Dense { n, a }
    }

    fn from_qmatrix(m: &QMatrix<T>) -> Self {
        let n = m.size();
        Dense {
            n,
            a: (0..n * n).map(|k| m.get(k / n, k % n)).collect(),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.a[i * self.n + j]
    }

    #[inline]
    fn put(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.a[i * self.n + j] = v;
    }

    fn frobenius(&self) -> T {
        self.a
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }
}

/// Cyclic complex Jacobi on a Hermitian matrix. Returns ascending eigenvalues
/// and the unitary whose columns are the matching eigenvectors.
fn jacobi<T: Scalar>(mut a: Dense<T>) -> Result<(Vec<T>, Dense<T>)> {
    let n = a.n;
    let mut v = Dense::identity(n);
    let scale = a.frobenius();
    let threshold = T::epsilon() * scale / T::lit(n.max(1) as f64);
    let zero = Complex::new(T::zero(), T::zero());

    let mut converged = scale == T::zero();
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.at(p, q);
                let mag = apq.norm();
                if mag <= threshold {
                    continue;
                }
                rotated = true;
                let e = apq / mag;
                let app = a.at(p, p).re;
                let aqq = a.at(q, q).re;
                let zeta = (aqq - app) / (T::lit(2.0) * mag);
                let sign = if zeta >= T::zero() {
                    T::one()
                } else {
                    -T::one()
                };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                // J = diag-phase · real rotation, acting on columns p, q
                let j_pp = Complex::new(c, T::zero());
                let j_pq = Complex::new(s, T::zero());
                let j_qp = e.conj() * (-s);
                let j_qq = e.conj() * c;

                for k in 0..n {
                    let akp = a.at(k, p);
                    let akq = a.at(k, q);
                    a.put(k, p, akp * j_pp + akq * j_qp);
                    a.put(k, q, akp * j_pq + akq * j_qq);
                }
                for k in 0..n {
                    let apk = a.at(p, k);
                    let aqk = a.at(q, k);
                    a.put(p, k, j_pp.conj() * apk + j_qp.conj() * aqk);
                    a.put(q, k, j_pq.conj() * apk + j_qq.conj() * aqk);
                }
                a.put(p, q, zero);
                a.put(q, p, zero);
                let dp = a.at(p, p).re;
                let dq = a.at(q, q).re;
                a.put(p, p, Complex::new(dp, T::zero()));
                a.put(q, q, Complex::new(dq, T::zero()));

                for k in 0..n {
                    let vkp = v.at(k, p);
                    let vkq = v.at(k, q);
                    v.put(k, p, vkp * j_pp + vkq * j_qp);
                    v.put(k, q, vkp * j_pq + vkq * j_qq);
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |acc, (i, j)| acc + a.at(i, j).norm_sqr())
            .sqrt();
        return Err(GateError::Convergence {
            sweeps,
            residual: off.to_f64_lossy(),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.at(i, i)
            .re
            .partial_cmp(&a.at(j, j).re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a.at(i, i).re).collect();
    let mut sorted = Dense::identity(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            sorted.put(k, new_col, v.at(k, old_col));
        }
    }
    Ok((values, sorted))
}

/// Hermitian eigendecomposition: ascending eigenvalues and unitary eigenvector matrix.
pub fn eig_hermitian<T: Scalar>(h: &QMatrix<T>) -> Result<(Vec<T>, QMatrix<T>)> {
    h.check_finite()?;
    h.require_hermitian(T::tol(CHECK_TOL))?;
    let (values, v) = jacobi(Dense::from_qmatrix(&h.hermitian_part()))?;
    Ok((values, QMatrix::from_fn(h.dim(), |i, j| v.at(i, j))))
}

/// `exp(-i H duration / ħ)` through the Hermitian eigendecomposition of `H`.
pub fn matrix_exp_evolution<T: Scalar>(h: &QMatrix<T>, duration: T, hbar: T) -> Result<QMatrix<T>> {
    if !(duration > T::zero() && duration.is_finite()) {
        return Err(GateError::Parameter {
            reason: format!("duration must be positive, got {duration}"),
        });
    }
    if !(hbar > T::zero() && hbar.is_finite()) {
        return Err(GateError::Parameter {
            reason: format!("hbar must be positive, got {hbar}"),
        });
    }
    let (values, v) = eig_hermitian(h)?;
    let factor = duration / hbar;
    let phases: Vec<Complex<T>> = values
        .iter()
        .map(|&e| Complex::from_polar(T::one(), -e * factor))
        .collect();
    let d = QMatrix::diag(&phases)?;
    Ok(&(&v * &d) * &v.adjoint())
}

/// Which route `eig_normal` takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenHint {
    /// Closed form for the single-qubit NOT family.
    AnalyticSimple,
    /// Closed form for the four-phase two-spin NOT family.
    AnalyticRestricted,
    /// Jacobi on the Hermitian part, degeneracies resolved by the anti-Hermitian part.
    Numeric,
}

/// Eigenvalues with the unitary whose columns are the matching eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T> {
    pub values: Vec<Complex<T>>,
    pub vectors: QMatrix<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    /// `max |M T - T diag(u)|`.
    pub fn residual(&self, m: &QMatrix<T>) -> T {
        let d = QMatrix::diag(&self.values).expect("values match dimension");
        (m * &self.vectors).max_diff(&(&self.vectors * &d))
    }

    /// `max |M - T diag(u) T†|`.
    pub fn reconstruction_error(&self, m: &QMatrix<T>) -> T {
        let d = QMatrix::diag(&self.values).expect("values match dimension");
        m.max_diff(&(&(&self.vectors * &d) * &self.vectors.adjoint()))
    }
}

/// Diagonalizes a normal (unitary or Hermitian) matrix.
pub fn eig_normal<T: Scalar>(m: &QMatrix<T>, hint: EigenHint) -> Result<EigenDecomposition<T>> {
    m.check_finite()?;
    match hint {
        EigenHint::AnalyticSimple => analytic_simple(m),
        EigenHint::AnalyticRestricted => analytic_restricted(m),
        EigenHint::Numeric => numeric_normal(m),
    }
}

fn numeric_normal<T: Scalar>(m: &QMatrix<T>) -> Result<EigenDecomposition<T>> {
    let scale = T::one().max(m.max_abs());
    let normality = (m * &m.adjoint()).max_diff(&(&m.adjoint() * m));
    if normality > T::tol(CHECK_TOL) * scale * scale {
        return Err(GateError::Shape {
            reason: format!(
                "matrix is not normal (|MM† - M†M| = {:.3e})",
                normality.to_f64_lossy()
            ),
        });
    }
    let n = m.size();
    let (lambda, v) = jacobi(Dense::from_qmatrix(&m.hermitian_part()))?;
    let k = Dense::from_qmatrix(&m.antihermitian_part());

    let cluster_tol = T::lit(CLUSTER_TOL) * scale;
    let mut t = v.clone();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && lambda[end] - lambda[end - 1] <= cluster_tol {
            end += 1;
        }
        let size = end - start;
        if size > 1 {
            // restriction of K to the cluster subspace: V_s† K V_s
            let mut sub = Dense::identity(size);
            for i in 0..size {
                for j in 0..size {
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for r in 0..n {
                        for c in 0..n {
                            acc += v.at(r, start + i).conj() * k.at(r, c) * v.at(c, start + j);
                        }
                    }
                    sub.put(i, j, acc);
                }
            }
            // symmetrize rounding
            for i in 0..size {
                for j in i..size {
                    let avg = (sub.at(i, j) + sub.at(j, i).conj()) * T::lit(0.5);
                    sub.put(i, j, avg);
                    sub.put(j, i, avg.conj());
                }
            }
            let (_, w) = jacobi(sub)?;
            for r in 0..n {
                for j in 0..size {
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for i in 0..size {
                        acc += v.at(r, start + i) * w.at(i, j);
                    }
                    t.put(r, start + j, acc);
                }
            }
        }
        start = end;
    }

    let vectors = fix_column_phases(&QMatrix::from_fn(m.dim(), |i, j| t.at(i, j)));
    let mt = m * &vectors;
    let values = (0..n)
        .map(|j| {
            (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
                acc + vectors.get(i, j).conj() * mt.get(i, j)
            })
        })
        .collect();
    Ok(EigenDecomposition { values, vectors })
}

fn require_pattern<T: Scalar>(
    m: &QMatrix<T>,
    unit_entries: &[(usize, usize)],
    family: &str,
) -> Result<()> {
    let tol = T::tol(CHECK_TOL);
    let n = m.size();
    for i in 0..n {
        for j in 0..n {
            let mag = m.get(i, j).norm();
            let ok = if unit_entries.contains(&(i, j)) {
                (mag - T::one()).abs() <= tol
            } else {
                mag <= tol
            };
            if !ok {
                return Err(GateError::Shape {
                    reason: format!(
                        "entry ({},{}) has modulus {:.3e}, not a {family} matrix",
                        i + 1,
                        j + 1,
                        mag.to_f64_lossy()
                    ),
                });
            }
        }
    }
    Ok(())
}

fn analytic_simple<T: Scalar>(m: &QMatrix<T>) -> Result<EigenDecomposition<T>> {
    if m.dim() != Dim::Two {
        return Err(GateError::dim(
            "2x2 NOT matrix",
            format!("{}x{}", m.size(), m.size()),
        ));
    }
    require_pattern(m, &[(0, 1), (1, 0)], "single-qubit NOT")?;
    let alpha = m.get(1, 0).arg();
    let beta = m.get(0, 1).arg();
    let half = T::lit(0.5);
    let r = T::one() / T::lit(2.0).sqrt();
    let eb = Complex::from_polar(r, beta * half);
    let ea = Complex::from_polar(r, alpha * half);
    let vectors = QMatrix::from_fn(Dim::Two, |i, j| match (i, j) {
        (0, _) => eb,
        (1, 0) => ea,
        _ => -ea,
    });
    let u1 = Complex::from_polar(T::one(), (alpha + beta) * half);
    Ok(EigenDecomposition {
        values: vec![u1, -u1],
        vectors,
    })
}

fn analytic_restricted<T: Scalar>(m: &QMatrix<T>) -> Result<EigenDecomposition<T>> {
    if m.dim() != Dim::Four {
        return Err(GateError::dim(
            "4x4 NOT matrix",
            format!("{}x{}", m.size(), m.size()),
        ));
    }
    require_pattern(m, &[(0, 3), (1, 1), (2, 2), (3, 0)], "four-phase NOT")?;
    let alpha = m.get(3, 0).arg();
    let beta = m.get(0, 3).arg();
    let rho = m.get(1, 1).arg();
    let delta = m.get(2, 2).arg();
    let half = T::lit(0.5);
    let r = T::one() / T::lit(2.0).sqrt();
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let eb = Complex::from_polar(r, beta * half);
    let ea = Complex::from_polar(r, alpha * half);
    let rows = [
        [eb, eb, zero, zero],
        [zero, zero, one, zero],
        [zero, zero, zero, one],
        [ea, -ea, zero, zero],
    ];
    let vectors = QMatrix::from_fn(Dim::Four, |i, j| rows[i][j]);
    let u1 = Complex::from_polar(T::one(), (alpha + beta) * half);
    Ok(EigenDecomposition {
        values: vec![
            u1,
            -u1,
            Complex::from_polar(T::one(), rho),
            Complex::from_polar(T::one(), delta),
        ],
        vectors,
    })
}

/// Rescales each column so that its largest-magnitude entry (the first one,
/// among entries tied within a relative 1e-8) is real and positive.
pub fn fix_column_phases<T: Scalar>(t: &QMatrix<T>) -> QMatrix<T> {
    let n = t.size();
    let mut out = t.clone();
    for j in 0..n {
        let col = t.column(j);
        let max = col.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
        if max == T::zero() {
            continue;
        }
        let cutoff = max * (T::one() - T::lit(PHASE_TIE_TOL));
        let pivot = col
            .iter()
            .find(|z| z.norm() >= cutoff)
            .copied()
            .unwrap_or(col[0]);
        let phase = pivot.conj() / pivot.norm();
        for (i, z) in col.iter().enumerate() {
            out.set(i, j, z * phase);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatrix::PauliLetter;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = matrix_exp_evolution(&QMatrix::<f64>::zeros(Dim::Four), 1.0, 1.0).unwrap();
        assert!(u.max_diff(&QMatrix::identity(Dim::Four)) < 1e-15);
    }

    #[test]
    fn exp_minus_half_pi_sigma_x() {
        // exp(iθσx) = cosθ + i sinθ σx at θ = π/2
        let h = PauliLetter::X.matrix::<f64>().scale_real(-PI / 2.0);
        let u = matrix_exp_evolution(&h, 1.0, 1.0).unwrap();
        let expected = PauliLetter::X.matrix::<f64>().scale(c(0.0, 1.0));
        assert!(u.max_diff(&expected) < 1e-14);
    }

    #[test]
    fn exp_rejects_non_hermitian_and_bad_time() {
        let m = QMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            matrix_exp_evolution(&m, 1.0, 1.0),
            Err(GateError::Hermiticity { .. })
        ));
        let h = PauliLetter::Z.matrix::<f64>();
        assert!(matrix_exp_evolution(&h, 0.0, 1.0).is_err());
        assert!(matrix_exp_evolution(&h, 1.0, -1.0).is_err());
    }

    #[test]
    fn identity_eigensystem() {
        let e = eig_normal(&QMatrix::<f64>::identity(Dim::Four), EigenHint::Numeric).unwrap();
        for u in &e.values {
            assert!((u - c(1.0, 0.0)).norm() < 1e-15);
        }
        assert!(e.vectors.max_diff(&QMatrix::identity(Dim::Four)) < 1e-15);
    }

    #[test]
    fn numeric_handles_conjugate_pairs() {
        // eigenvalues e^{±iθ} share a Hermitian-part eigenvalue cos θ
        let th = 0.8_f64;
        let m = QMatrix::from_rows(&[
            vec![c(th.cos(), 0.0), c(-th.sin(), 0.0)],
            vec![c(th.sin(), 0.0), c(th.cos(), 0.0)],
        ])
        .unwrap();
        let e = eig_normal(&m, EigenHint::Numeric).unwrap();
        assert!(e.reconstruction_error(&m) < 1e-14);
        assert!(e.vectors.is_unitary(1e-14));
    }

    #[test]
    fn numeric_rejects_non_normal() {
        let m = QMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            eig_normal(&m, EigenHint::Numeric),
            Err(GateError::Shape { .. })
        ));
    }

    #[test]
    fn analytic_hint_requires_family_shape() {
        let id = QMatrix::<f64>::identity(Dim::Two);
        assert!(matches!(
            eig_normal(&id, EigenHint::AnalyticSimple),
            Err(GateError::Shape { .. })
        ));
        assert!(eig_normal(&id, EigenHint::AnalyticRestricted).is_err());
    }

    #[test]
    fn column_phase_convention() {
        let t = QMatrix::from_rows(&[
            vec![c(0.0, 0.6), c(0.0, 1.0)],
            vec![c(0.0, -0.8), c(0.0, 0.0)],
        ])
        .unwrap();
        let f = fix_column_phases(&t);
        assert!((f.get(1, 0) - c(0.8, 0.0)).norm() < 1e-15);
        assert!((f.get(0, 0) - c(-0.6, 0.0)).norm() < 1e-15);
        assert!((f.get(0, 1) - c(1.0, 0.0)).norm() < 1e-15);
    }
}
