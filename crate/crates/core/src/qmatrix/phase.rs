use num_complex::Complex;

use super::{QMatrix, CHECK_TOL};
use crate::error::{GateError, Result};
use crate::scalar::Scalar;

const GRID_POINTS: usize = 4096;
const GOLDEN_ITERS: usize = 100;

fn aligned_distance<T: Scalar>(a: &QMatrix<T>, b: &QMatrix<T>, phi: T) -> T {
    a.scale(Complex::from_polar(T::one(), phi)).max_diff(b)
}

/// Distance between two unitaries up to a global phase:
/// `min_φ max_ij |e^{iφ} a_ij - b_ij|`.
///
/// The phase is taken from `tr(A†B)` when that trace is nonzero; otherwise
/// the max-entry distance is scanned over a 4096-point grid and refined by
/// golden-section search.
pub fn phase_distance<T: Scalar>(a: &QMatrix<T>, b: &QMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(GateError::dim(
            format!("{}x{}", a.size(), a.size()),
            format!("{}x{}", b.size(), b.size()),
        ));
    }
    let tol = T::tol(CHECK_TOL);
    a.require_unitary(tol)?;
    b.require_unitary(tol)?;

    let overlap = (&a.adjoint() * b).trace();
    let n = T::lit(a.size() as f64);
    if overlap.norm() > T::tol(1e-12) * n {
        return Ok(aligned_distance(a, b, overlap.arg()));
    }

    let two_pi = T::PI() + T::PI();
    let step = two_pi / T::lit(GRID_POINTS as f64);
    let (best_k, _) = (0..GRID_POINTS)
        .map(|k| (k, aligned_distance(a, b, step * T::lit(k as f64))))
        .fold(
            (0, T::infinity()),
            |acc, (k, d)| if d < acc.1 { (k, d) } else { acc },
        );

    let center = step * T::lit(best_k as f64);
    let (mut lo, mut hi) = (center - step, center + step);
    let inv_phi = T::lit((5.0_f64.sqrt() - 1.0) / 2.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = aligned_distance(a, b, x1);
    let mut f2 = aligned_distance(a, b, x2);
    for _ in 0..GOLDEN_ITERS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = aligned_distance(a, b, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = aligned_distance(a, b, x2);
        }
    }
    let refined = f1.min(f2);
    Ok(refined.min(aligned_distance(a, b, center)))
}
