//! Interaction Hamiltonians that realize a target NOT gate.
//!
//! A target unitary `U` is diagonalized as `U = T diag(u) T†`. Each eigenvalue
//! `u_k = exp(-i E_k Δt/ħ)` fixes an energy level up to a multiple of
//! `2πħ/Δt`, selected by an integer branch `N_k`. The Hamiltonian is then
//! `H = T diag(E) T†`, reported in the Pauli basis.

use num_complex::Complex;

use crate::error::{GateError, Result};
use crate::gates::{
    build_extended_general, build_extended_restricted, build_simple_not, not_shape_leak,
    ExtendedGeneralParams, ExtendedRestrictedParams, SimpleNotParams,
};
use crate::qmatrix::{
    eig_normal, matrix_exp_evolution, pauli_compose, pauli_decompose, phase_distance, Dim,
    EigenDecomposition, EigenHint, PauliDecomposition, PauliLabel, PauliLetter, QMatrix,
    StateVector,
};
use crate::scalar::{canonical_angle, Scalar};

/// Default pass threshold for gate verification.
pub const VERIFY_TOL: f64 = 1e-9;
/// Tolerance (in units of ħ/Δt) for deciding `E3 == E4`.
pub const LINEAR_TERM_TOL: f64 = 1e-10;
/// Pauli coefficients below this fraction of the largest one are rounding noise.
const NOISE_REL: f64 = 1e-14;

/// Branch integers selecting each energy level among its `2πħ/Δt` images.
/// `n3`, `n4` are ignored for the single-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BranchChoice {
    pub n1: i64,
    pub n2: i64,
    pub n3: i64,
    pub n4: i64,
}

impl BranchChoice {
    pub fn new(n1: i64, n2: i64, n3: i64, n4: i64) -> Self {
        BranchChoice { n1, n2, n3, n4 }
    }

    /// `N = N1 - N2`, the integer controlling the level splitting.
    pub fn n(&self) -> i64 {
        self.n1 - self.n2
    }
}

/// Gate duration and the reduced Planck constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeBase<T> {
    delta_t: T,
    hbar: T,
}

impl<T: Scalar> TimeBase<T> {
    pub fn new(delta_t: T, hbar: T) -> Result<Self> {
        for (name, v) in [("delta_t", delta_t), ("hbar", hbar)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(GateError::Parameter {
                    reason: format!("{name} must be finite and positive, got {v}"),
                });
            }
        }
        Ok(TimeBase { delta_t, hbar })
    }

    pub fn delta_t(&self) -> T {
        self.delta_t
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    /// `ħ/Δt`, the natural energy unit.
    pub fn energy_unit(&self) -> T {
        self.hbar / self.delta_t
    }

    pub fn evolve(&self, h: &QMatrix<T>) -> Result<QMatrix<T>> {
        matrix_exp_evolution(h, self.delta_t, self.hbar)
    }
}

impl<T: Scalar> Default for TimeBase<T> {
    fn default() -> Self {
        TimeBase {
            delta_t: T::one(),
            hbar: T::one(),
        }
    }
}

/// Energy levels `E1..E_dim` (units ħ/Δt) and the splitting `|E1 - E2|`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum<T> {
    pub levels: Vec<T>,
    pub splitting: T,
}

impl<T: Scalar> EnergySpectrum<T> {
    fn from_levels(levels: Vec<T>) -> Self {
        let splitting = (levels[0] - levels[1]).abs();
        EnergySpectrum { levels, splitting }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SynthesisOptions {
    /// Remove the term proportional to the identity (it only shifts the global phase).
    pub drop_identity: bool,
    /// Two-spin gates only: demand `E3 == E4` so no single-spin `σ_z` terms appear.
    pub require_no_linear: bool,
    /// Override `N1`, `N2` so that `|N - 1/2| = 1/2`.
    pub minimize_splitting: bool,
}

/// A synthesized interaction Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianResult<T> {
    /// Hermitian interaction, with the identity term removed if requested.
    pub hamiltonian: QMatrix<T>,
    pub decomposition: PauliDecomposition<T>,
    /// Levels of the full Hamiltonian (identity term included).
    pub spectrum: EnergySpectrum<T>,
    /// Identity coefficient removed from `hamiltonian` (zero if nothing was dropped).
    pub dropped_identity_coefficient: T,
    /// Phase `φ` with `target = e^{iφ} exp(-i H Δt/ħ)`.
    pub expected_global_phase: T,
    /// Branch actually used (after any splitting minimization).
    pub branch: BranchChoice,
}

impl<T: Scalar> HamiltonianResult<T> {
    /// The Hamiltonian with the dropped identity term restored.
    pub fn full_hamiltonian(&self) -> QMatrix<T> {
        let id =
            QMatrix::identity(self.hamiltonian.dim()).scale_real(self.dropped_identity_coefficient);
        &self.hamiltonian + &id
    }
}

/// Levels of the single-qubit NOT.
pub fn energies_simple<T: Scalar>(
    p: &SimpleNotParams<T>,
    b: &BranchChoice,
    t: &TimeBase<T>,
) -> EnergySpectrum<T> {
    let (e1, e2) = pair_levels(p.alpha(), p.beta(), b, t);
    EnergySpectrum::from_levels(vec![e1, e2])
}

fn pair_levels<T: Scalar>(alpha: T, beta: T, b: &BranchChoice, t: &TimeBase<T>) -> (T, T) {
    let unit = t.energy_unit();
    let two_pi = T::PI() + T::PI();
    let mean = -(alpha + beta) * T::lit(0.5);
    let e1 = unit * (mean + two_pi * T::lit(b.n1 as f64));
    let e2 = unit * (mean + two_pi * (T::lit(b.n2 as f64) + T::lit(0.5)));
    (e1, e2)
}

/// Levels of the four-phase two-spin NOT.
pub fn energies_extended<T: Scalar>(
    p: &ExtendedRestrictedParams<T>,
    b: &BranchChoice,
    t: &TimeBase<T>,
) -> EnergySpectrum<T> {
    let (e1, e2) = pair_levels(p.alpha(), p.beta(), b, t);
    let unit = t.energy_unit();
    let two_pi = T::PI() + T::PI();
    let e3 = unit * (-p.rho() + two_pi * T::lit(b.n3 as f64));
    let e4 = unit * (-p.delta() + two_pi * T::lit(b.n4 as f64));
    EnergySpectrum::from_levels(vec![e1, e2, e3, e4])
}

/// Branch with minimal level splitting: `N ∈ {0, 1}`. A base that already
/// satisfies this is returned unchanged; otherwise `N1` is set to `N2`.
pub fn choose_branch_min_splitting(base: &BranchChoice) -> BranchChoice {
    match base.n() {
        0 | 1 => *base,
        _ => BranchChoice {
            n1: base.n2,
            ..*base
        },
    }
}

fn reconstruct<T: Scalar>(eig: &EigenDecomposition<T>, levels: &[T]) -> Result<QMatrix<T>> {
    let d = QMatrix::real_diag(levels)?;
    let h = &(&eig.vectors * &d) * &eig.vectors.adjoint();
    Ok(h.hermitian_part())
}

fn finish<T: Scalar>(
    mut decomposition: PauliDecomposition<T>,
    spectrum: EnergySpectrum<T>,
    branch: BranchChoice,
    t: &TimeBase<T>,
    drop_identity: bool,
) -> Result<HamiltonianResult<T>> {
    let noise = T::lit(NOISE_REL) * T::one().max(decomposition.max_abs_coefficient());
    decomposition = decomposition.pruned(noise);
    let id = PauliLabel::identity(decomposition.dim());
    let mut dropped = T::zero();
    if drop_identity {
        dropped = decomposition.coefficient(id);
        decomposition = decomposition.with_coefficient(id, T::zero())?;
    }
    let expected_global_phase = if drop_identity {
        canonical_angle(-dropped * t.delta_t() / t.hbar())
    } else {
        T::zero()
    };
    Ok(HamiltonianResult {
        hamiltonian: pauli_compose(&decomposition),
        decomposition,
        spectrum,
        dropped_identity_coefficient: dropped,
        expected_global_phase,
        branch,
    })
}

/// Hamiltonian for the single-qubit NOT.
pub fn synthesize_simple<T: Scalar>(
    p: &SimpleNotParams<T>,
    b: &BranchChoice,
    t: &TimeBase<T>,
    opts: &SynthesisOptions,
) -> Result<HamiltonianResult<T>> {
    let branch = if opts.minimize_splitting {
        choose_branch_min_splitting(b)
    } else {
        *b
    };
    let eig = eig_normal(&build_simple_not(p), EigenHint::AnalyticSimple)?;
    let spectrum = energies_simple(p, &branch, t);
    let h = reconstruct(&eig, &spectrum.levels)?;
    finish(
        pauli_decompose(&h)?,
        spectrum,
        branch,
        t,
        opts.drop_identity,
    )
}

fn linear_term_error<T: Scalar>(p: &ExtendedRestrictedParams<T>, b: &BranchChoice) -> GateError {
    let two_pi = T::PI() + T::PI();
    let turns = ((p.delta() - p.rho()) / two_pi).to_f64_lossy();
    let hint = if (turns - turns.round()).abs() * std::f64::consts::TAU <= LINEAR_TERM_TOL {
        format!(
            "choose N4 = N3 + {} = {}",
            turns.round(),
            b.n3 + turns.round() as i64
        )
    } else {
        "no branch aligns E3 and E4 unless delta - rho is a multiple of 2π".to_string()
    };
    GateError::LinearTerm {
        rho: p.rho().to_f64_lossy(),
        delta: p.delta().to_f64_lossy(),
        n3: b.n3,
        n4: b.n4,
        hint,
    }
}

/// Whether `E3 == E4` holds (within 1e-10 ħ/Δt) for this phase/branch pair.
pub fn linear_terms_vanish<T: Scalar>(p: &ExtendedRestrictedParams<T>, b: &BranchChoice) -> bool {
    let two_pi = T::PI() + T::PI();
    let e3 = -p.rho() + two_pi * T::lit(b.n3 as f64);
    let e4 = -p.delta() + two_pi * T::lit(b.n4 as f64);
    (e3 - e4).abs() <= T::tol(LINEAR_TERM_TOL)
}

/// Hamiltonian for the four-phase two-spin NOT.
pub fn synthesize_extended<T: Scalar>(
    p: &ExtendedRestrictedParams<T>,
    b: &BranchChoice,
    t: &TimeBase<T>,
    opts: &SynthesisOptions,
) -> Result<HamiltonianResult<T>> {
    let branch = if opts.minimize_splitting {
        choose_branch_min_splitting(b)
    } else {
        *b
    };
    if opts.require_no_linear && !linear_terms_vanish(p, &branch) {
        return Err(linear_term_error(p, &branch));
    }
    let eig = eig_normal(&build_extended_restricted(p), EigenHint::AnalyticRestricted)?;
    let spectrum = energies_extended(p, &branch, t);
    let h = reconstruct(&eig, &spectrum.levels)?;
    let mut d = pauli_decompose(&h)?;
    if opts.require_no_linear {
        for label in [
            PauliLabel::Pair(PauliLetter::Z, PauliLetter::I),
            PauliLabel::Pair(PauliLetter::I, PauliLetter::Z),
        ] {
            d = d.with_coefficient(label, T::zero())?;
        }
    }
    finish(d, spectrum, branch, t, opts.drop_identity)
}

/// Hamiltonian for any member of the general two-spin family, through the
/// numeric eigensolver. Level `k` uses branch integer `N_k` against the k-th
/// numeric eigenvalue; splitting minimization and the linear-term constraint
/// are not defined for this family.
pub fn synthesize_general<T: Scalar>(
    p: &ExtendedGeneralParams<T>,
    b: &BranchChoice,
    t: &TimeBase<T>,
    opts: &SynthesisOptions,
) -> Result<HamiltonianResult<T>> {
    if opts.require_no_linear || opts.minimize_splitting {
        return Err(GateError::Parameter {
            reason: "require_no_linear and minimize_splitting apply to the four-phase family only"
                .into(),
        });
    }
    let eig = eig_normal(&build_extended_general(p), EigenHint::Numeric)?;
    let unit = t.energy_unit();
    let two_pi = T::PI() + T::PI();
    let branches = [b.n1, b.n2, b.n3, b.n4];
    let levels: Vec<T> = eig
        .values
        .iter()
        .zip(branches)
        .map(|(u, n)| unit * (-u.arg() + two_pi * T::lit(n as f64)))
        .collect();
    let spectrum = EnergySpectrum::from_levels(levels);
    let h = reconstruct(&eig, &spectrum.levels)?;
    finish(pauli_decompose(&h)?, spectrum, *b, t, opts.drop_identity)
}

/// The canonical two-spin coupling
/// `-𝓔 σzσz + (πħ/2Δt)(N - 1/2)[cos γ (σxσx - σyσy) + sin γ (σxσy + σyσx)]`.
pub fn synthesize_canonical_extended<T: Scalar>(
    ising: T,
    n: i64,
    gamma: T,
    t: &TimeBase<T>,
) -> Result<HamiltonianResult<T>> {
    if !(ising.is_finite() && gamma.is_finite()) {
        return Err(GateError::NonFinite {
            what: "canonical coupling parameters".into(),
        });
    }
    let unit = t.energy_unit();
    let shift = T::lit(n as f64) - T::lit(0.5);
    let k = T::PI() * unit * T::lit(0.5) * shift;
    let (s, c) = gamma.sin_cos();
    use PauliLetter::{X, Y, Z};
    let decomposition = PauliDecomposition::from_terms([
        (PauliLabel::Pair(Z, Z), -ising),
        (PauliLabel::Pair(X, X), k * c),
        (PauliLabel::Pair(Y, Y), -k * c),
        (PauliLabel::Pair(X, Y), k * s),
        (PauliLabel::Pair(Y, X), k * s),
    ])?;
    let half_split = T::PI() * unit * shift;
    let spectrum =
        EnergySpectrum::from_levels(vec![-ising + half_split, -ising - half_split, ising, ising]);
    finish(
        decomposition,
        spectrum,
        BranchChoice::new(n, 0, 0, 0),
        t,
        false,
    )
}

/// Four-phase gate parameters and branch whose synthesized Hamiltonian, with
/// the identity dropped and `E3 == E4`, equals the canonical coupling.
///
/// Uses `α = γ`, `β = -γ`, `N1 = N`, `N2 = 0` and `ρ = δ = -(πN + π/2 + 2𝓔Δt/ħ)`
/// (reduced to (-π, π], with `N3 = N4` absorbing the reduction).
pub fn canonical_as_restricted<T: Scalar>(
    ising: T,
    n: i64,
    gamma: T,
    t: &TimeBase<T>,
) -> (ExtendedRestrictedParams<T>, BranchChoice) {
    let two_pi = T::PI() + T::PI();
    let raw = -(T::PI() * T::lit(n as f64 + 0.5) + T::lit(2.0) * ising / t.energy_unit());
    let reduced = canonical_angle(raw);
    let turns = ((reduced - raw) / two_pi).round().to_i64().unwrap_or(0);
    let params = ExtendedRestrictedParams::new(gamma, -gamma, reduced, reduced);
    (params, BranchChoice::new(n, 0, turns, turns))
}

/// NOT behaviour of a two-spin evolution: Input-up basis states must end
/// with zero weight on Output-up components, and vice versa.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorCheck<T> {
    /// Largest `|a1|`, `|a3|` reached from `|↑↑⟩`, `|↑↓⟩`.
    pub input_up_leak: T,
    /// Largest `|a2|`, `|a4|` reached from `|↓↑⟩`, `|↓↓⟩`.
    pub input_down_leak: T,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport<T> {
    pub evolution: QMatrix<T>,
    /// `max |exp(-iHΔt/ħ) - target|`.
    pub exact_distance: T,
    /// Same distance minimized over a global phase.
    pub phase_distance: T,
    /// Distance after applying the expected global phase.
    pub restored_distance: T,
    /// `arg tr(evolution† target)`.
    pub realized_phase: T,
    pub up_to_phase: bool,
    pub tolerance: T,
    pub pass: bool,
    pub behavior: Option<BehaviorCheck<T>>,
}

/// Evolves `r.hamiltonian` over the gate window and compares against `target`.
pub fn verify_gate<T: Scalar>(
    r: &HamiltonianResult<T>,
    target: &QMatrix<T>,
    t: &TimeBase<T>,
    up_to_phase: bool,
) -> Result<VerificationReport<T>> {
    verify_gate_with_tolerance(r, target, t, up_to_phase, T::tol(VERIFY_TOL))
}

pub fn verify_gate_with_tolerance<T: Scalar>(
    r: &HamiltonianResult<T>,
    target: &QMatrix<T>,
    t: &TimeBase<T>,
    up_to_phase: bool,
    tolerance: T,
) -> Result<VerificationReport<T>> {
    if r.hamiltonian.dim() != target.dim() {
        return Err(GateError::dim(
            format!("{}x{}", r.hamiltonian.size(), r.hamiltonian.size()),
            format!("{}x{}", target.size(), target.size()),
        ));
    }
    let evolution = t.evolve(&r.hamiltonian)?;
    let exact_distance = evolution.max_diff(target);
    let phase_dist = phase_distance(&evolution, target)?;
    let restored = evolution.scale(Complex::from_polar(T::one(), r.expected_global_phase));
    let restored_distance = restored.max_diff(target);
    let realized_phase = (&evolution.adjoint() * target).trace().arg();
    let distance = if up_to_phase {
        phase_dist
    } else {
        exact_distance
    };
    let behavior = match evolution.dim() {
        Dim::Four => Some(behavior_check(&evolution, tolerance)?),
        Dim::Two => None,
    };
    let pass = distance <= tolerance && behavior.as_ref().is_none_or(|b| b.pass);
    Ok(VerificationReport {
        evolution,
        exact_distance,
        phase_distance: phase_dist,
        restored_distance,
        realized_phase,
        up_to_phase,
        tolerance,
        pass,
        behavior,
    })
}

fn behavior_check<T: Scalar>(u: &QMatrix<T>, tol: T) -> Result<BehaviorCheck<T>> {
    let leak = |inputs: [usize; 2], forbidden: [usize; 2]| -> Result<T> {
        let mut worst = T::zero();
        for k in inputs {
            let out = u.apply(&StateVector::basis(Dim::Four, k))?;
            for f in forbidden {
                worst = worst.max(out.amplitudes()[f].norm());
            }
        }
        Ok(worst)
    };
    let input_up_leak = leak([0, 1], [0, 2])?;
    let input_down_leak = leak([2, 3], [1, 3])?;
    debug_assert!((input_up_leak.max(input_down_leak) - not_shape_leak(u)?).abs() <= T::epsilon());
    Ok(BehaviorCheck {
        input_up_leak,
        input_down_leak,
        pass: input_up_leak <= tol && input_down_leak <= tol,
    })
}
