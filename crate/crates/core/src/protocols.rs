//! Time-dependent interactions `H(t) = Σ_k f_k(t) H_k` over a gate window.
//!
//! A protocol `f` must integrate to the window length `Δt` so that a constant
//! Hamiltonian and its smoothly switched version generate the same gate when
//! the terms commute. When they do not, the evolution needs the time-ordered
//! product, which [`evolve_time_ordered`] approximates.

use crate::error::{GateError, Result};
use crate::qmatrix::{bracket, matrix_exp_evolution, BracketKind, QMatrix, CHECK_TOL};
use crate::scalar::Scalar;
use crate::synthesis::TimeBase;

/// Relative threshold below which a protocol integral counts as zero.
const ZERO_INTEGRAL_REL: f64 = 1e-12;
/// Relative tolerance for sample grids matching the window ends.
const GRID_END_REL: f64 = 1e-9;
/// Commutator norms at or below this (relative) count as vanishing.
pub const COMMUTE_TOL: f64 = 1e-12;

/// Shape of a protocol function on its window `[start, start + duration]`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolShape<T> {
    /// `f = 1`.
    Rectangular,
    /// `f = 1 - cos(2π (t - start)/Δt)`.
    RaisedCosine,
    /// `f = a + b cos(ω (t - start) + phase)`.
    ConstPlusCosine { a: T, b: T, omega: T, phase: T },
    /// Piecewise-linear samples `(time, value)`, strictly increasing in time.
    Sampled(Vec<(T, T)>),
}

/// A protocol function: `scale · shape(t)` inside the window, zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol<T> {
    pub shape: ProtocolShape<T>,
    pub start: T,
    pub duration: T,
    pub scale: T,
}

impl<T: Scalar> Protocol<T> {
    pub fn new(shape: ProtocolShape<T>, start: T, duration: T, scale: T) -> Result<Self> {
        if !(duration.is_finite() && duration > T::zero()) {
            return Err(GateError::Parameter {
                reason: format!("protocol duration must be positive, got {duration}"),
            });
        }
        if !(start.is_finite() && scale.is_finite()) {
            return Err(GateError::NonFinite {
                what: "protocol start or scale".into(),
            });
        }
        let p = Protocol {
            shape,
            start,
            duration,
            scale,
        };
        p.validate_shape()?;
        Ok(p)
    }

    pub fn rectangular(start: T, duration: T) -> Result<Self> {
        Self::new(ProtocolShape::Rectangular, start, duration, T::one())
    }

    pub fn raised_cosine(start: T, duration: T) -> Result<Self> {
        Self::new(ProtocolShape::RaisedCosine, start, duration, T::one())
    }

    pub fn end(&self) -> T {
        self.start + self.duration
    }

    fn validate_shape(&self) -> Result<()> {
        match &self.shape {
            ProtocolShape::ConstPlusCosine { a, b, omega, phase } => {
                if ![*a, *b, *omega, *phase].iter().all(|x| x.is_finite()) {
                    return Err(GateError::NonFinite {
                        what: "const_plus_cosine coefficients".into(),
                    });
                }
            }
            ProtocolShape::Sampled(samples) => {
                if samples.len() < 3 {
                    return Err(GateError::Grid {
                        reason: format!("need at least 3 samples, got {}", samples.len()),
                    });
                }
                if samples
                    .iter()
                    .any(|(t, v)| !t.is_finite() || !v.is_finite())
                {
                    return Err(GateError::Grid {
                        reason: "non-finite sample".into(),
                    });
                }
                if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(GateError::Grid {
                        reason: "sample times must be strictly increasing".into(),
                    });
                }
                let slack = T::lit(GRID_END_REL) * self.duration;
                let first = samples[0].0;
                let last = samples[samples.len() - 1].0;
                if (first - self.start).abs() > slack || (last - self.end()).abs() > slack {
                    return Err(GateError::Grid {
                        reason: format!(
                            "samples span [{first}, {last}] but the window is [{}, {}]",
                            self.start,
                            self.end()
                        ),
                    });
                }
            }
            ProtocolShape::Rectangular | ProtocolShape::RaisedCosine => {}
        }
        Ok(())
    }

    fn shape_value(&self, t: T) -> T {
        let x = t - self.start;
        match &self.shape {
            ProtocolShape::Rectangular => T::one(),
            ProtocolShape::RaisedCosine => {
                T::one() - (T::lit(2.0) * T::PI() * x / self.duration).cos()
            }
            ProtocolShape::ConstPlusCosine { a, b, omega, phase } => {
                *a + *b * (*omega * x + *phase).cos()
            }
            ProtocolShape::Sampled(samples) => interpolate(samples, t),
        }
    }

    /// `f(t)`; zero outside the window.
    pub fn value(&self, t: T) -> T {
        if t < self.start || t > self.end() {
            return T::zero();
        }
        self.scale * self.shape_value(t)
    }

    fn with_scale(&self, scale: T) -> Self {
        Protocol {
            scale,
            ..self.clone()
        }
    }
}

fn interpolate<T: Scalar>(samples: &[(T, T)], t: T) -> T {
    let idx = samples.partition_point(|(ts, _)| *ts <= t);
    if idx == 0 {
        return samples[0].1;
    }
    if idx >= samples.len() {
        return samples[samples.len() - 1].1;
    }
    let (t0, v0) = samples[idx - 1];
    let (t1, v1) = samples[idx];
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Composite Simpson's rule on an arbitrary increasing grid (pairs of
/// intervals, with a three-point correction for a trailing odd interval).
fn simpson<T: Scalar>(samples: &[(T, T)]) -> T {
    let n = samples.len() - 1;
    let six = T::lit(6.0);
    let two = T::lit(2.0);
    let mut total = T::zero();
    let mut i = 0;
    while i + 2 <= n {
        let (x0, f0) = samples[i];
        let (x1, f1) = samples[i + 1];
        let (x2, f2) = samples[i + 2];
        let h0 = x1 - x0;
        let h1 = x2 - x1;
        let hs = h0 + h1;
        total +=
            hs / six * ((two - h1 / h0) * f0 + hs * hs / (h0 * h1) * f1 + (two - h0 / h1) * f2);
        i += 2;
    }
    if n % 2 == 1 {
        let (x0, f0) = samples[n - 2];
        let (x1, f1) = samples[n - 1];
        let (x2, f2) = samples[n];
        let h0 = x1 - x0;
        let h1 = x2 - x1;
        let three = T::lit(3.0);
        let alpha = (two * h1 * h1 + three * h1 * h0) / (six * (h0 + h1));
        let beta = (h1 * h1 + three * h1 * h0) / (six * h0);
        let eta = h1 * h1 * h1 / (six * h0 * (h0 + h1));
        total += alpha * f2 + beta * f1 - eta * f0;
    }
    total
}

/// `∫ f` over the protocol window: closed form for analytic shapes, composite
/// Simpson for sampled ones.
pub fn protocol_integral<T: Scalar>(p: &Protocol<T>) -> Result<T> {
    p.validate_shape()?;
    let dt = p.duration;
    let shape_integral = match &p.shape {
        ProtocolShape::Rectangular | ProtocolShape::RaisedCosine => dt,
        ProtocolShape::ConstPlusCosine { a, b, omega, phase } => {
            let osc = if *omega == T::zero() {
                phase.cos() * dt
            } else {
                ((*omega * dt + *phase).sin() - phase.sin()) / *omega
            };
            *a * dt + *b * osc
        }
        ProtocolShape::Sampled(samples) => simpson(samples),
    };
    Ok(p.scale * shape_integral)
}

/// Rescales `p` so that its integral equals the window length.
pub fn normalize_protocol<T: Scalar>(p: &Protocol<T>) -> Result<Protocol<T>> {
    let integral = protocol_integral(p)?;
    if integral.abs() < T::lit(ZERO_INTEGRAL_REL) * p.duration {
        return Err(GateError::PurelyOscillatory {
            integral: integral.to_f64_lossy(),
            duration: p.duration.to_f64_lossy(),
        });
    }
    Ok(p.with_scale(p.scale * p.duration / integral))
}

/// A sum of Hermitian terms, each switched by its own protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedHamiltonian<T> {
    terms: Vec<(QMatrix<T>, Protocol<T>)>,
}

impl<T: Scalar> TimedHamiltonian<T> {
    /// All terms must share one dimension and one window.
    pub fn new(terms: Vec<(QMatrix<T>, Protocol<T>)>) -> Result<Self> {
        let Some((h0, p0)) = terms.first() else {
            return Err(GateError::Parameter {
                reason: "a timed Hamiltonian needs at least one term".into(),
            });
        };
        let slack = T::lit(GRID_END_REL) * p0.duration;
        for (k, (h, p)) in terms.iter().enumerate() {
            if h.dim() != h0.dim() {
                return Err(GateError::dim(
                    format!("{}x{} (term 0)", h0.size(), h0.size()),
                    format!("{}x{} (term {k})", h.size(), h.size()),
                ));
            }
            if (p.start - p0.start).abs() > slack || (p.duration - p0.duration).abs() > slack {
                return Err(GateError::Window {
                    reason: format!(
                        "term {k} window [{}, {}] differs from term 0 window [{}, {}]",
                        p.start,
                        p.end(),
                        p0.start,
                        p0.end()
                    ),
                });
            }
        }
        Ok(TimedHamiltonian { terms })
    }

    /// One term switched by one protocol.
    pub fn single(h: QMatrix<T>, p: Protocol<T>) -> Self {
        TimedHamiltonian {
            terms: vec![(h, p)],
        }
    }

    pub fn terms(&self) -> &[(QMatrix<T>, Protocol<T>)] {
        &self.terms
    }

    pub fn start(&self) -> T {
        self.terms[0].1.start
    }

    pub fn duration(&self) -> T {
        self.terms[0].1.duration
    }

    /// `H(t) = Σ f_k(t) H_k`.
    pub fn at(&self, t: T) -> QMatrix<T> {
        let dim = self.terms[0].0.dim();
        self.terms.iter().fold(QMatrix::zeros(dim), |acc, (h, p)| {
            &acc + &h.scale_real(p.value(t))
        })
    }

    fn require_hermitian(&self) -> Result<()> {
        let tol = T::tol(CHECK_TOL);
        for (h, _) in &self.terms {
            h.require_hermitian(tol)?;
        }
        Ok(())
    }

    fn check_timebase(&self, tb: &TimeBase<T>) -> Result<()> {
        let slack = T::lit(GRID_END_REL) * self.duration();
        if (tb.delta_t() - self.duration()).abs() > slack {
            return Err(GateError::Window {
                reason: format!(
                    "protocol window length {} differs from delta_t {}",
                    self.duration(),
                    tb.delta_t()
                ),
            });
        }
        Ok(())
    }
}

/// Time-ordered product of midpoint-sampled short-time exponentials,
/// latest time leftmost.
pub fn evolve_time_ordered<T: Scalar>(
    th: &TimedHamiltonian<T>,
    tb: &TimeBase<T>,
    steps: usize,
) -> Result<QMatrix<T>> {
    if steps == 0 {
        return Err(GateError::Parameter {
            reason: "steps must be at least 1".into(),
        });
    }
    th.require_hermitian()?;
    th.check_timebase(tb)?;
    let dt = th.duration() / T::lit(steps as f64);
    let dim = th.terms[0].0.dim();
    let mut u = QMatrix::identity(dim);
    for j in 0..steps {
        let mid = th.start() + (T::lit(j as f64) + T::lit(0.5)) * dt;
        let h = th.at(mid).hermitian_part();
        let step = matrix_exp_evolution(&h, dt, tb.hbar())?;
        u = &step * &u;
    }
    Ok(u)
}

/// `exp(-i Σ_k (∫ f_k) H_k / ħ)`, ignoring time ordering.
pub fn evolve_unordered<T: Scalar>(
    th: &TimedHamiltonian<T>,
    tb: &TimeBase<T>,
) -> Result<QMatrix<T>> {
    th.require_hermitian()?;
    let dim = th.terms[0].0.dim();
    let mut integrated = QMatrix::zeros(dim);
    for (h, p) in &th.terms {
        integrated = &integrated + &h.scale_real(protocol_integral(p)?);
    }
    // exp(-i A/ħ) with A = ∫H: evolve A for unit time
    matrix_exp_evolution(&integrated.hermitian_part(), T::one(), tb.hbar())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairAudit<T> {
    pub i: usize,
    pub j: usize,
    pub commutator_norm: T,
    pub anticommutator_norm: T,
    pub commuting: bool,
    pub anticommuting: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport<T> {
    pub pairs: Vec<PairAudit<T>>,
    /// All term pairs commute, so `H(t)` commutes with itself at all times
    /// for any scalar protocols.
    pub ordering_free: bool,
}

/// Pairwise commutator and anticommutator norms (max-entry) of the terms.
pub fn commutation_audit<T: Scalar>(th: &TimedHamiltonian<T>) -> Result<AuditReport<T>> {
    let mats: Vec<&QMatrix<T>> = th.terms.iter().map(|(h, _)| h).collect();
    audit_matrices(&mats)
}

/// Same audit for bare matrices.
pub fn audit_matrices<T: Scalar>(mats: &[&QMatrix<T>]) -> Result<AuditReport<T>> {
    let mut pairs = Vec::new();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let scale = T::one().max(mats[i].max_abs() * mats[j].max_abs());
            let tol = T::tol(COMMUTE_TOL) * scale;
            let c = bracket(mats[i], mats[j], BracketKind::Commutator)?.max_abs();
            let a = bracket(mats[i], mats[j], BracketKind::Anticommutator)?.max_abs();
            pairs.push(PairAudit {
                i,
                j,
                commutator_norm: c,
                anticommutator_norm: a,
                commuting: c <= tol,
                anticommuting: a <= tol,
            });
        }
    }
    let ordering_free = pairs.iter().all(|p| p.commuting);
    Ok(AuditReport {
        pairs,
        ordering_free,
    })
}
