use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use super::{tensor_product, Dim, QMatrix, CHECK_TOL};
use crate::error::{GateError, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [
        PauliLetter::I,
        PauliLetter::X,
        PauliLetter::Y,
        PauliLetter::Z,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn matrix<T: Scalar>(self) -> QMatrix<T> {
        let z = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        let rows = match self {
            PauliLetter::I => [[one, z], [z, one]],
            PauliLetter::X => [[z, one], [one, z]],
            PauliLetter::Y => [[z, -i], [i, z]],
            PauliLetter::Z => [[one, z], [z, -one]],
        };
        QMatrix::from_fn(Dim::Two, |r, c| rows[r][c])
    }

    fn symbol(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    fn from_symbol(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }
}

/// A Pauli basis element: one letter for a single spin, or an
/// (Input, Output) pair for two spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLabel {
    Single(PauliLetter),
    Pair(PauliLetter, PauliLetter),
}

impl PauliLabel {
    pub fn dim(self) -> Dim {
        match self {
            PauliLabel::Single(_) => Dim::Two,
            PauliLabel::Pair(..) => Dim::Four,
        }
    }

    /// All labels of the given dimension, in `I, X, Y, Z` lexicographic order.
    pub fn all(dim: Dim) -> Vec<PauliLabel> {
        match dim {
            Dim::Two => PauliLetter::ALL
                .iter()
                .map(|&p| PauliLabel::Single(p))
                .collect(),
            Dim::Four => PauliLetter::ALL
                .iter()
                .flat_map(|&a| {
                    PauliLetter::ALL
                        .iter()
                        .map(move |&b| PauliLabel::Pair(a, b))
                })
                .collect(),
        }
    }

    fn index(self) -> usize {
        match self {
            PauliLabel::Single(p) => p.index(),
            PauliLabel::Pair(a, b) => 4 * a.index() + b.index(),
        }
    }

    pub fn identity(dim: Dim) -> Self {
        match dim {
            Dim::Two => PauliLabel::Single(PauliLetter::I),
            Dim::Four => PauliLabel::Pair(PauliLetter::I, PauliLetter::I),
        }
    }

    pub fn matrix<T: Scalar>(self) -> QMatrix<T> {
        match self {
            PauliLabel::Single(p) => p.matrix(),
            PauliLabel::Pair(a, b) => {
                tensor_product(&a.matrix(), &b.matrix()).expect("2x2 factors")
            }
        }
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PauliLabel::Single(p) => write!(f, "{}", p.symbol()),
            PauliLabel::Pair(a, b) => write!(f, "{}{}", a.symbol(), b.symbol()),
        }
    }
}

impl FromStr for PauliLabel {
    type Err = GateError;

    fn from_str(s: &str) -> Result<Self> {
        let letters: Option<Vec<PauliLetter>> = s.chars().map(PauliLetter::from_symbol).collect();
        match letters.as_deref() {
            Some([p]) => Ok(PauliLabel::Single(*p)),
            Some([a, b]) => Ok(PauliLabel::Pair(*a, *b)),
            _ => Err(GateError::dim("Pauli label of 1 or 2 letters from IXYZ", s)),
        }
    }
}

/// Real coefficients of a Hermitian matrix over the Pauli basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition<T> {
    dim: Dim,
    coeffs: Vec<T>,
}

impl<T: Scalar> PauliDecomposition<T> {
    pub fn zero(dim: Dim) -> Self {
        let n = dim.size();
        PauliDecomposition {
            dim,
            coeffs: vec![T::zero(); n * n],
        }
    }

    /// Builds a decomposition from explicit terms. Repeated labels accumulate.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliLabel, T)>,
    {
        let mut dim = None;
        let mut out: Option<Self> = None;
        for (label, c) in terms {
            match dim {
                None => {
                    dim = Some(label.dim());
                    out = Some(Self::zero(label.dim()));
                }
                Some(d) if d != label.dim() => {
                    return Err(GateError::dim(
                        format!("labels of length {}", if d == Dim::Two { 1 } else { 2 }),
                        label,
                    ));
                }
                _ => {}
            }
            if !c.is_finite() {
                return Err(GateError::NonFinite {
                    what: format!("coefficient of {label}"),
                });
            }
            let d = out.as_mut().expect("initialized with dim");
            d.coeffs[label.index()] += c;
        }
        out.ok_or_else(|| GateError::dim("at least one term", "none"))
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn coefficient(&self, label: PauliLabel) -> T {
        if label.dim() != self.dim {
            return T::zero();
        }
        self.coeffs[label.index()]
    }

    /// Coefficient by textual label (`"ZZ"`, `"X"`); zero for unknown labels.
    pub fn get(&self, label: &str) -> T {
        label
            .parse::<PauliLabel>()
            .map(|l| self.coefficient(l))
            .unwrap_or_else(|_| T::zero())
    }

    pub fn with_coefficient(mut self, label: PauliLabel, value: T) -> Result<Self> {
        if label.dim() != self.dim {
            return Err(GateError::dim(format!("{:?} label", self.dim), label));
        }
        self.coeffs[label.index()] = value;
        Ok(self)
    }

    /// Nonzero terms in label order.
    pub fn terms(&self) -> impl Iterator<Item = (PauliLabel, T)> + '_ {
        PauliLabel::all(self.dim)
            .into_iter()
            .map(move |l| (l, self.coeffs[l.index()]))
            .filter(|(_, c)| *c != T::zero())
    }

    /// Sets coefficients with magnitude at or below `tol` to exactly zero.
    pub fn pruned(mut self, tol: T) -> Self {
        for c in &mut self.coeffs {
            if c.abs() <= tol {
                *c = T::zero();
            }
        }
        self
    }

    pub fn max_abs_coefficient(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc.max(c.abs()))
    }

    /// Largest coefficient difference over all labels.
    pub fn max_diff(&self, other: &Self) -> T {
        if self.dim != other.dim {
            return T::infinity();
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs()))
    }
}

/// Complex Pauli coefficients `c_a = tr(P_a† M) / dim` of any matrix.
pub fn pauli_coefficients<T: Scalar>(m: &QMatrix<T>) -> Vec<(PauliLabel, Complex<T>)> {
    let n = T::lit(m.size() as f64);
    PauliLabel::all(m.dim())
        .into_iter()
        .map(|l| {
            let p = l.matrix::<T>();
            let tr = (&p.adjoint() * m).trace();
            (l, tr / n)
        })
        .collect()
}

/// Decomposes a Hermitian matrix over the Pauli basis.
///
/// Imaginary parts (at most rounding noise for Hermitian input) are dropped.
pub fn pauli_decompose<T: Scalar>(h: &QMatrix<T>) -> Result<PauliDecomposition<T>> {
    h.check_finite()?;
    h.require_hermitian(T::tol(CHECK_TOL))?;
    let mut d = PauliDecomposition::zero(h.dim());
    for (l, c) in pauli_coefficients(h) {
        d.coeffs[l.index()] = c.re;
    }
    Ok(d)
}

/// `Σ c_a P_a`.
pub fn pauli_compose<T: Scalar>(d: &PauliDecomposition<T>) -> QMatrix<T> {
    PauliLabel::all(d.dim)
        .into_iter()
        .filter(|l| d.coeffs[l.index()] != T::zero())
        .fold(QMatrix::zeros(d.dim), |acc, l| {
            &acc + &l.matrix::<T>().scale_real(d.coeffs[l.index()])
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn label(s: &str) -> PauliLabel {
        s.parse().unwrap()
    }

    #[test]
    fn basis_is_trace_orthogonal() {
        for dim in [Dim::Two, Dim::Four] {
            let labels = PauliLabel::all(dim);
            for &a in &labels {
                for &b in &labels {
                    let tr = (&a.matrix::<f64>().adjoint() * &b.matrix()).trace();
                    let expected = if a == b { dim.size() as f64 } else { 0.0 };
                    assert!((tr.re - expected).abs() < 1e-15 && tr.im.abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn decompose_sigma_x() {
        let d = pauli_decompose(&PauliLetter::X.matrix::<f64>()).unwrap();
        let terms: Vec<_> = d.terms().collect();
        assert_eq!(terms, vec![(label("X"), 1.0)]);
    }

    #[test]
    fn decompose_identity_4() {
        let d = pauli_decompose(&QMatrix::<f64>::identity(Dim::Four)).unwrap();
        let terms: Vec<_> = d.terms().collect();
        assert_eq!(terms, vec![(label("II"), 1.0)]);
    }

    #[test]
    fn decompose_canonical_coupling() {
        // -ZZ - (π/4)(XX - YY)
        let zz = label("ZZ").matrix::<f64>();
        let xx = label("XX").matrix::<f64>();
        let yy = label("YY").matrix::<f64>();
        let h = &(-&zz) - &(&xx - &yy).scale_real(PI / 4.0);
        let d = pauli_decompose(&h).unwrap().pruned(1e-15);
        let terms: Vec<_> = d.terms().collect();
        assert_eq!(
            terms,
            vec![
                (label("XX"), -PI / 4.0),
                (label("YY"), PI / 4.0),
                (label("ZZ"), -1.0)
            ]
        );
    }

    #[test]
    fn compose_examples() {
        let d = PauliDecomposition::from_terms([(label("X"), 1.0)]).unwrap();
        assert_eq!(pauli_compose(&d), PauliLetter::X.matrix());
        let d = PauliDecomposition::from_terms([(label("II"), 2.5)]).unwrap();
        assert_eq!(
            pauli_compose(&d),
            QMatrix::<f64>::identity(Dim::Four).scale_real(2.5)
        );
    }

    #[test]
    fn compose_then_decompose_canonical() {
        let d = PauliDecomposition::from_terms([
            (label("ZZ"), -1.0),
            (label("XX"), -PI / 4.0),
            (label("YY"), PI / 4.0),
        ])
        .unwrap();
        let back = pauli_decompose(&pauli_compose(&d)).unwrap();
        assert!(back.max_diff(&d) <= 1e-12);
    }

    #[test]
    fn mixed_label_lengths_rejected() {
        let r = PauliDecomposition::from_terms([(label("X"), 1.0), (label("XX"), 1.0)]);
        assert!(matches!(r, Err(GateError::Dimension { .. })));
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = QMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            pauli_decompose(&m),
            Err(GateError::Hermiticity { .. })
        ));
        // the complex route still works
        let c = pauli_coefficients(&m);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn label_parsing() {
        assert_eq!(label("X"), PauliLabel::Single(PauliLetter::X));
        assert_eq!(
            label("XY"),
            PauliLabel::Pair(PauliLetter::X, PauliLetter::Y)
        );
        assert!("XYZ".parse::<PauliLabel>().is_err());
        assert!("Q".parse::<PauliLabel>().is_err());
        assert_eq!(label("YX").to_string(), "YX");
    }
}
