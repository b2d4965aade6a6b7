//! Dense complex matrix algebra at dimensions 2 and 4.
//!
//! Matrices are stored row-major. Two-spin operators use the basis order
//! `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` where the first arrow is the Input spin and the
//! second the Output spin, so `A ⊗ B` places the Input operator on the left.

mod eigen;
mod pauli;
mod phase;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{GateError, Result};
use crate::scalar::Scalar;

pub use eigen::{
    eig_hermitian, eig_normal, fix_column_phases, matrix_exp_evolution, EigenDecomposition,
    EigenHint,
};
pub use pauli::{
    pauli_coefficients, pauli_compose, pauli_decompose, PauliDecomposition, PauliLabel, PauliLetter,
};
pub use phase::phase_distance;

/// Tolerance for unitarity and Hermiticity checks.
pub const CHECK_TOL: f64 = 1e-10;
/// Tolerance for algebraic round trips.
pub const ROUNDTRIP_TOL: f64 = 1e-12;

/// Supported Hilbert-space dimensions: one spin or two spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    Two,
    Four,
}

impl Dim {
    pub fn size(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Four => 4,
        }
    }

    pub fn from_size(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Dim::Two),
            4 => Ok(Dim::Four),
            other => Err(GateError::dim("2 or 4", other)),
        }
    }
}

/// Dense complex square matrix of dimension 2 or 4.
#[derive(Clone, PartialEq)]
pub struct QMatrix<T> {
    dim: Dim,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> QMatrix<T> {
    pub fn zeros(dim: Dim) -> Self {
        let n = dim.size();
        QMatrix {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn identity(dim: Dim) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    pub fn from_fn(dim: Dim, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let n = dim.size();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        QMatrix { dim, data }
    }

    /// Builds a matrix from rows, checking squareness, dimension and finiteness.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = Dim::from_size(rows.len())?;
        let n = dim.size();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GateError::dim(
                    format!("row {i} of length {n}"),
                    format!("length {}", row.len()),
                ));
            }
            data.extend_from_slice(row);
        }
        let m = QMatrix { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        let rows: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(x, T::zero())).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Diagonal matrix; `entries.len()` must be 2 or 4.
    pub fn diag(entries: &[Complex<T>]) -> Result<Self> {
        let dim = Dim::from_size(entries.len())?;
        Ok(Self::from_fn(dim, |i, j| {
            if i == j {
                entries[i]
            } else {
                Complex::new(T::zero(), T::zero())
            }
        }))
    }

    pub fn real_diag(entries: &[T]) -> Result<Self> {
        let c: Vec<Complex<T>> = entries
            .iter()
            .map(|&x| Complex::new(x, T::zero()))
            .collect();
        Self::diag(&c)
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        if self
            .data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            Ok(())
        } else {
            Err(GateError::NonFinite {
                what: "matrix entries".into(),
            })
        }
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.dim.size()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.size() + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        let n = self.size();
        self.data[i * n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Complex<T>>> {
        self.data.chunks(self.size()).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.size()).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.size()).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self.get(i, i)
        })
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        QMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    /// Max-entry norm `max |m_ij|`.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Max-entry norm of `self - other`. Panics on dimension mismatch.
    pub fn max_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }

    /// Max-entry deviation from Hermiticity.
    pub fn hermiticity_deviation(&self) -> T {
        self.max_diff(&self.adjoint())
    }

    /// Max-entry deviation of `M†M` from the identity.
    pub fn unitarity_deviation(&self) -> T {
        (&self.adjoint() * self).max_diff(&Self::identity(self.dim))
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub(crate) fn require_hermitian(&self, tol: T) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation <= tol {
            Ok(())
        } else {
            Err(GateError::Hermiticity {
                deviation: deviation.to_f64_lossy(),
            })
        }
    }

    pub(crate) fn require_unitary(&self, tol: T) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation <= tol {
            Ok(())
        } else {
            Err(GateError::Unitarity {
                deviation: deviation.to_f64_lossy(),
            })
        }
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(T::lit(0.5))
    }

    /// `(M - M†)/(2i)`, Hermitian for any `M`.
    pub fn antihermitian_part(&self) -> Self {
        (self - &self.adjoint()).scale(Complex::new(T::zero(), -T::lit(0.5)))
    }

    pub fn apply(&self, v: &StateVector<T>) -> Result<StateVector<T>> {
        if v.len() != self.size() {
            return Err(GateError::dim(self.size().to_string(), v.len()));
        }
        let n = self.size();
        let amps = (0..n)
            .map(|i| {
                (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
                    acc + self.get(i, j) * v.amplitudes()[j]
                })
            })
            .collect();
        Ok(StateVector { amps })
    }

    pub fn is_zero(&self, tol: T) -> bool {
        self.max_abs() <= tol
    }

    /// Converts the scalar type.
    pub fn cast<U: Scalar>(&self) -> QMatrix<U> {
        QMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for QMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim.size();
        writeln!(f, "QMatrix({n}x{n}) [")?;
        for row in self.data.chunks(n) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6?}{:+.6?}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Mul for &QMatrix<T> {
    type Output = QMatrix<T>;

    fn mul(self, rhs: &QMatrix<T>) -> QMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.size();
        QMatrix::from_fn(self.dim, |i, j| {
            (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                acc + self.get(i, k) * rhs.get(k, j)
            })
        })
    }
}

impl<T: Scalar> Add for &QMatrix<T> {
    type Output = QMatrix<T>;

    fn add(self, rhs: &QMatrix<T>) -> QMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        QMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for &QMatrix<T> {
    type Output = QMatrix<T>;

    fn sub(self, rhs: &QMatrix<T>) -> QMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        QMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<T: Scalar> Neg for &QMatrix<T> {
    type Output = QMatrix<T>;

    fn neg(self) -> QMatrix<T> {
        QMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| -z).collect(),
        }
    }
}

/// State vector; for dimension 4 the amplitudes follow the two-spin basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    pub fn new(amps: Vec<Complex<T>>) -> Result<Self> {
        Dim::from_size(amps.len())?;
        Ok(StateVector { amps })
    }

    /// Basis state `k` (zero-based) of the given dimension.
    pub fn basis(dim: Dim, k: usize) -> Self {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim.size()];
        amps[k] = Complex::new(T::one(), T::zero());
        StateVector { amps }
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.norm() - T::one()).abs() <= tol
    }
}

/// Direct product `A ⊗ B` with `A` acting on the Input spin.
pub fn tensor_product<T: Scalar>(a: &QMatrix<T>, b: &QMatrix<T>) -> Result<QMatrix<T>> {
    if a.dim != Dim::Two || b.dim != Dim::Two {
        return Err(GateError::dim(
            "two 2x2 operands",
            format!("{}x{} and {}x{}", a.size(), a.size(), b.size(), b.size()),
        ));
    }
    Ok(QMatrix::from_fn(Dim::Four, |r, c| {
        a.get(r / 2, c / 2) * b.get(r % 2, c % 2)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketKind {
    Commutator,
    Anticommutator,
}

/// `AB - BA` or `AB + BA`.
pub fn bracket<T: Scalar>(a: &QMatrix<T>, b: &QMatrix<T>, kind: BracketKind) -> Result<QMatrix<T>> {
    if a.dim != b.dim {
        return Err(GateError::dim(
            format!("{}x{}", a.size(), a.size()),
            format!("{}x{}", b.size(), b.size()),
        ));
    }
    let ab = a * b;
    let ba = b * a;
    Ok(match kind {
        BracketKind::Commutator => &ab - &ba,
        BracketKind::Anticommutator => &ab + &ba,
    })
}
