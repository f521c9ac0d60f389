use thiserror::Error;

/// Errors shared across the operator, state, PDO, teleportation, chain, and
/// sampling layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PdoError {
    #[error("unsupported operator dimension {0}: expected 2, 4, or 8")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix entries must be finite")]
    NonFiniteEntries,

    #[error("a Pauli string covers 1 to 3 sites, got {0}")]
    PauliStringLength(usize),

    #[error("site index {index} out of range for {sites} sites")]
    SiteIndex { index: usize, sites: usize },

    #[error("partial trace must keep at least one site")]
    EmptyPartialTrace,

    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("trace must be 1, got {trace}")]
    NonUnitTrace { trace: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("Bloch vector norm {norm} exceeds 1")]
    BlochNormTooLarge { norm: f64 },

    #[error("Pauli coefficient {value} outside [-1, 1]")]
    CoefficientOutOfRange { value: f64 },

    #[error("coefficient map must carry the (I, I) entry with value 1, found {found:?}")]
    IdentityCoefficient { found: Option<f64> },

    #[error("basis index {0} out of range 1..=4")]
    BellIndex(usize),

    #[error("channel parameter eta_{axis} = {value} outside [-1, 1]")]
    ChannelParameter { axis: char, value: f64 },

    #[error("Kraus operators are not trace preserving: |sum K^dag K - I| = {deviation:.3e}")]
    NotTracePreserving { deviation: f64 },

    #[error("channel is not completely positive: Choi min eigenvalue {min_eigenvalue:.3e}")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("chain step {step} uses a non-CP resource; pass allow_non_cp to override")]
    NonCpStep { step: usize },

    #[error("projection weight {weight:.3e} is numerically degenerate")]
    DegenerateProjection { weight: f64 },

    #[error("visibility {value} outside [0, 1]")]
    VisibilityOutOfRange { value: f64 },

    #[error("measurement angle must be finite, got {value}")]
    NonFiniteAngle { value: f64 },

    #[error("chain of order n = {n} outside supported range 2..=20")]
    ChainLength { n: usize },

    #[error("expected {expected} settings for the chain, got {got}")]
    SettingsCount { expected: usize, got: usize },

    #[error("n range {n_min}..={n_max} invalid: need 2 <= n_min <= n_max <= 20")]
    CurveRange { n_min: usize, n_max: usize },

    #[error("exhaustive search supports n <= 6, got {n}")]
    BruteForceLimit { n: usize },

    #[error("settings optimizer failed to converge within {sweeps} sweeps")]
    OptimizationFailure { sweeps: usize },

    #[error("shot count {shots} below minimum {minimum}")]
    ShotCount { shots: u64, minimum: u64 },

    #[error("correlation {value} outside [-1, 1]")]
    CorrelationOutOfRange { value: f64 },
}

pub type Result<T> = std::result::Result<T, PdoError>;
