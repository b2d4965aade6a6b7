#![allow(dead_code, clippy::needless_range_loop)]

use gateforge::{Dim, QMatrix};
use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

pub fn cis(theta: f64) -> Complex<f64> {
    Complex::from_polar(1.0, theta)
}

pub fn angle(r: &mut impl Rng) -> f64 {
    r.gen_range(-PI..PI)
}

/// Closed-form random element of U(2):
/// `e^{iφ} [[cos θ e^{iψ}, sin θ e^{iχ}], [-sin θ e^{-iχ}, cos θ e^{-iψ}]]`.
pub fn random_u2(r: &mut impl Rng) -> [[Complex<f64>; 2]; 2] {
    let (phi, psi, chi) = (angle(r), angle(r), angle(r));
    let theta = r.gen_range(0.0..PI / 2.0);
    let g = cis(phi);
    [
        [g * cis(psi) * theta.cos(), g * cis(chi) * theta.sin()],
        [-g * cis(-chi) * theta.sin(), g * cis(-psi) * theta.cos()],
    ]
}

pub fn u2_matrix(b: [[Complex<f64>; 2]; 2]) -> QMatrix<f64> {
    QMatrix::from_rows(&[vec![b[0][0], b[0][1]], vec![b[1][0], b[1][1]]]).unwrap()
}

/// Two-spin NOT pattern with independent random U(2) blocks: rows 1,3 act on
/// columns 3,4 and rows 2,4 act on columns 1,2 (1-based).
pub fn random_not_block_unitary(r: &mut impl Rng) -> QMatrix<f64> {
    let upper = random_u2(r);
    let lower = random_u2(r);
    let z = c(0.0, 0.0);
    QMatrix::from_rows(&[
        vec![z, z, upper[0][0], upper[0][1]],
        vec![lower[0][0], lower[0][1], z, z],
        vec![z, z, upper[1][0], upper[1][1]],
        vec![lower[1][0], lower[1][1], z, z],
    ])
    .unwrap()
}

/// Random unitary as a product of random complex Givens rotations.
pub fn random_unitary(dim: Dim, r: &mut impl Rng) -> QMatrix<f64> {
    let n = dim.size();
    let mut u = QMatrix::diag(&(0..n).map(|_| cis(angle(r))).collect::<Vec<_>>()).unwrap();
    for _ in 0..3 * n {
        let i = r.gen_range(0..n);
        let j = (i + r.gen_range(1..n)) % n;
        let b = random_u2(r);
        let g = QMatrix::from_fn(dim, |a, k| {
            if a == i && k == i {
                b[0][0]
            } else if a == i && k == j {
                b[0][1]
            } else if a == j && k == i {
                b[1][0]
            } else if a == j && k == j {
                b[1][1]
            } else if a == k {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        u = &g * &u;
    }
    u
}

pub fn random_hermitian(dim: Dim, scale: f64, r: &mut impl Rng) -> QMatrix<f64> {
    let n = dim.size();
    let mut entries = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        entries[i][i] = c(r.gen_range(-scale..scale), 0.0);
        for j in i + 1..n {
            let z = c(r.gen_range(-scale..scale), r.gen_range(-scale..scale));
            entries[i][j] = z;
            entries[j][i] = z.conj();
        }
    }
    QMatrix::from_rows(&entries).unwrap()
}

/// Hermitian matrix from a flat list of `dim²` reals (diagonal, then real and
/// imaginary upper-triangle parts).
pub fn hermitian_from_flat(dim: Dim, xs: &[f64]) -> QMatrix<f64> {
    let n = dim.size();
    let mut it = xs.iter().copied();
    let mut entries = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        entries[i][i] = c(it.next().unwrap(), 0.0);
    }
    for i in 0..n {
        for j in i + 1..n {
            let z = c(it.next().unwrap(), it.next().unwrap());
            entries[i][j] = z;
            entries[j][i] = z.conj();
        }
    }
    QMatrix::from_rows(&entries).unwrap()
}

pub fn complex_from_flat(dim: Dim, xs: &[f64]) -> QMatrix<f64> {
    QMatrix::from_fn(dim, |i, j| {
        let k = 2 * (i * dim.size() + j);
        c(xs[k], xs[k + 1])
    })
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}
