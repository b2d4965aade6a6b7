//! Two-spin gate synthesis: build NOT-type gates, derive the Hamiltonians that
//! generate them, and evolve those Hamiltonians under switched interactions.
//!
//! Everything is generic over the real scalar (`f32` or `f64`); the aliases
//! at the bottom of this file fix it to `f64` (or `f32` with the `32` suffix).

pub mod error;
pub mod gates;
pub mod protocols;
pub mod qmatrix;
pub mod scalar;
pub mod synthesis;

pub use error::{GateError, Result};
pub use gates::{
    build_extended_general, build_extended_restricted, build_simple_not, fit_extended_general,
    is_not_shape, not_shape_leak, ExtendedGeneralAngles, ExtendedGeneralParams,
    ExtendedRestrictedParams, SimpleNotParams, FIT_TOL,
};
pub use protocols::{
    audit_matrices, commutation_audit, evolve_time_ordered, evolve_unordered, normalize_protocol,
    protocol_integral, AuditReport, PairAudit, Protocol, ProtocolShape, TimedHamiltonian,
};
pub use qmatrix::{
    bracket, eig_hermitian, eig_normal, matrix_exp_evolution, pauli_compose, pauli_decompose,
    phase_distance, tensor_product, BracketKind, Dim, EigenDecomposition, EigenHint,
    PauliDecomposition, PauliLabel, PauliLetter, QMatrix, StateVector, CHECK_TOL, ROUNDTRIP_TOL,
};
pub use scalar::Scalar;
pub use synthesis::{
    canonical_as_restricted, choose_branch_min_splitting, energies_extended, energies_simple,
    linear_terms_vanish, synthesize_canonical_extended, synthesize_extended, synthesize_general,
    synthesize_simple, verify_gate, verify_gate_with_tolerance, BehaviorCheck, BranchChoice,
    EnergySpectrum, HamiltonianResult, SynthesisOptions, TimeBase, VerificationReport,
    LINEAR_TERM_TOL, VERIFY_TOL,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type QMatrix64 = QMatrix<f64>;
pub type QMatrix32 = QMatrix<f32>;
pub type StateVector64 = StateVector<f64>;
pub type PauliDecomposition64 = PauliDecomposition<f64>;
pub type SimpleNotParams64 = SimpleNotParams<f64>;
pub type ExtendedGeneralParams64 = ExtendedGeneralParams<f64>;
pub type ExtendedRestrictedParams64 = ExtendedRestrictedParams<f64>;
pub type TimeBase64 = TimeBase<f64>;
pub type HamiltonianResult64 = HamiltonianResult<f64>;
pub type HamiltonianResult32 = HamiltonianResult<f32>;
pub type VerificationReport64 = VerificationReport<f64>;
pub type Protocol64 = Protocol<f64>;
pub type TimedHamiltonian64 = TimedHamiltonian<f64>;
