//! Simulation and verification toolkit for two-time pseudo-density
//! operators (PDOs).
//!
//! A PDO extends the density-matrix formalism to observables measured at
//! two different times on the same qubit. The resulting operator is
//! Hermitian with unit trace but can carry negative eigenvalues, and those
//! negative directions are exactly what lets a single qubit's history act
//! like an entangled resource. This crate provides:
//!
//! * dense complex operators on one to three qubits with an exact-arithmetic
//!   friendly Jacobi eigensolver ([`operator`]);
//! * qubit states and Bloch-vector conversions ([`state`]);
//! * PDO construction from sequential measurement statistics, the temporal
//!   Bell basis, and Bloch-contraction channels ([`pdo`]);
//! * reconstruction of channel dynamics from a PDO by projecting onto the
//!   temporal Bell basis, plus the complete-positivity boundary ([`teleport`]);
//! * chained Bell-inequality values for spatial, temporal, and hybrid
//!   correlation chains, analytic and optimized ([`chsh`]);
//! * Monte Carlo measurement simulation with reproducible per-term RNG
//!   streams ([`montecarlo`]);
//! * a packaged self-check suite ([`verify`]).

pub mod chsh;
pub mod error;
pub mod montecarlo;
pub mod operator;
pub mod pdo;
pub mod state;
pub mod teleport;
pub mod verify;

pub use chsh::{
    chain_value, classical_max_bruteforce, default_settings, observable, optimize_settings,
    spatial_corr, temporal_corr, theory_curve, ChainConfig, ChainMode, CurvePoint,
    MeasurementSetting,
};
pub use error::{PdoError, Result};
pub use montecarlo::{
    estimate_chain, sample_joint, sample_spatial, sample_temporal, sample_temporal_erasure,
    ChainEstimate, CorrelationEstimate, RngSpec, ShotBatch,
};
pub use operator::{
    eig_hermitian, partial_trace, pauli_string_matrix, ComplexOperator, PauliLabel, PauliString,
};
pub use pdo::{
    channel_pdo, hs_inner, negativity, pdo_from_coefficients, temporal_bell, two_time_pdo,
    ChannelParams, PseudoDensityOperator, QubitChannel, Site,
};
pub use state::{BlochVector, DensityMatrix};
pub use teleport::{
    choi_min_eigenvalue, choi_psd, correction_unitary, cp_constraint, teleport, teleport_chain,
    teleport_channel, TeleportOutcome,
};
pub use verify::{run_verification, CheckOutcome, VerificationReport};

/// Max tolerated |M - M^dag| entry for operators that must be Hermitian.
pub(crate) const HERMITICITY_TOL: f64 = 1e-10;
/// Max tolerated |tr M - 1| for unit-trace operators.
pub(crate) const TRACE_TOL: f64 = 1e-10;
/// Slack on eigenvalue comparisons (positivity checks, CP boundary).
pub(crate) const EIGENVALUE_TOL: f64 = 1e-9;
/// Max tolerated |sum K^dag K - I| entry for Kraus decompositions.
pub(crate) const TRACE_PRESERVATION_TOL: f64 = 1e-9;

/// Numerical thresholds used by [`verify::run_verification`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hilbert-Schmidt orthonormality of the temporal Bell basis.
    pub orthonormality: f64,
    /// Eigenvalue comparisons (basis spectra, CP boundary agreement).
    pub eigenvalue: f64,
    /// Bloch-vector deviation after an identity teleportation round trip.
    pub bloch_identity: f64,
    /// Deviation of every teleportation branch weight from 1/4.
    pub weight: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orthonormality: 1e-12,
            eigenvalue: 1e-9,
            bloch_identity: 1e-10,
            weight: 1e-12,
        }
    }
}

impl Tolerances {
    /// Same threshold for every check; mainly for stress-testing the
    /// verification harness itself.
    pub fn uniform(t: f64) -> Self {
        Self { orthonormality: t, eigenvalue: t, bloch_identity: t, weight: t }
    }
}
