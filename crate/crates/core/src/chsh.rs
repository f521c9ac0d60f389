//! Chained Bell inequalities over three kinds of correlation chains.
//!
//! A chain of length `n` uses `2n` measurement settings and the statistic
//!
//! ```text
//! S = E(th_0, th_1) + E(th_1, th_2) + ... + E(th_{2n-2}, th_{2n-1}) - E(th_{2n-1}, th_0)
//! ```
//!
//! Deterministic local assignments cap S at `2n - 2`. The three chain modes
//! differ only in where each correlator comes from:
//!
//! * `Spatial`: every term is measured on a noisy singlet with visibility V,
//!   giving E = V cos(th_a - th_b) after relabeling the second party.
//! * `Temporal`: every term is a sequential measurement on one maximally
//!   mixed qubit, giving E = cos(th_a - th_b) with no visibility penalty.
//! * `Hybrid`: the first n terms are temporal, the remaining n spatial.
//!
//! Correlators are evaluated as operator traces rather than closed-form
//! cosines, so the analytic chain values and the Monte Carlo sampler in
//! [`crate::montecarlo`] share one source of truth.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use num_complex::Complex64;

use crate::error::{PdoError, Result};
use crate::operator::{ComplexOperator, PauliLabel};
use crate::pdo::{two_time_pdo, PseudoDensityOperator, QubitChannel};
use crate::state::DensityMatrix;

/// Chains shorter than this have no room for a minus term.
const MIN_CHAIN: usize = 2;
/// Cap keeps curve computations and brute-force search bounded.
const MAX_CHAIN: usize = 20;
/// Exhaustive deterministic-assignment search is 4^n; stop at 6.
const MAX_BRUTE_FORCE: usize = 6;

/// One measurement direction in the X-Z plane, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    angle: f64,
}

impl MeasurementSetting {
    pub fn new(angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(PdoError::NonFiniteAngle { value: angle });
        }
        Ok(Self { angle })
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }
}

/// Which resource supplies each correlator in the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainMode {
    Spatial,
    Temporal,
    Hybrid,
}

impl ChainMode {
    pub const ALL: [ChainMode; 3] = [ChainMode::Spatial, ChainMode::Temporal, ChainMode::Hybrid];

    pub fn as_str(&self) -> &'static str {
        match self {
            ChainMode::Spatial => "spatial",
            ChainMode::Temporal => "temporal",
            ChainMode::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for ChainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChainMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "spatial" => Ok(ChainMode::Spatial),
            "temporal" => Ok(ChainMode::Temporal),
            "hybrid" => Ok(ChainMode::Hybrid),
            other => Err(format!("unknown chain mode `{other}` (expected spatial, temporal, or hybrid)")),
        }
    }
}

/// A fully specified chain: mode, length, visibility, and the 2n settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    mode: ChainMode,
    n: usize,
    visibility: f64,
    settings: Vec<MeasurementSetting>,
}

impl ChainConfig {
    pub fn new(
        mode: ChainMode,
        n: usize,
        visibility: f64,
        settings: Vec<MeasurementSetting>,
    ) -> Result<Self> {
        if !(MIN_CHAIN..=MAX_CHAIN).contains(&n) {
            return Err(PdoError::ChainLength { n });
        }
        if !visibility.is_finite() || !(0.0..=1.0).contains(&visibility) {
            return Err(PdoError::VisibilityOutOfRange { value: visibility });
        }
        if settings.len() != 2 * n {
            return Err(PdoError::SettingsCount { expected: 2 * n, got: settings.len() });
        }
        Ok(Self { mode, n, visibility, settings })
    }

    /// Chain of length `n` with the equally spaced settings th_k = k pi / 2n.
    pub fn with_default_settings(mode: ChainMode, n: usize, visibility: f64) -> Result<Self> {
        Self::new(mode, n, visibility, default_settings(n)?)
    }

    pub fn mode(&self) -> ChainMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }

    pub fn settings(&self) -> &[MeasurementSetting] {
        &self.settings
    }

    /// Largest value reachable by deterministic local assignments, 2n - 2.
    pub fn classical_bound(&self) -> f64 {
        (2 * self.n - 2) as f64
    }

    /// Whether term `t` (0-based, out of 2n) is temporal in this mode.
    pub(crate) fn term_is_temporal(&self, t: usize) -> bool {
        match self.mode {
            ChainMode::Spatial => false,
            ChainMode::Temporal => true,
            ChainMode::Hybrid => t < self.n,
        }
    }

    /// Angle pair and sign of term `t`: terms walk the settings cyclically
    /// and the wrap-around term enters with a minus sign.
    pub(crate) fn term(&self, t: usize) -> (f64, f64, f64) {
        let m = 2 * self.n;
        debug_assert!(t < m);
        let a = self.settings[t].angle();
        let b = self.settings[(t + 1) % m].angle();
        let sign = if t + 1 == m { -1.0 } else { 1.0 };
        (a, b, sign)
    }
}

/// The equally spaced settings th_k = k pi / (2n), k = 0..2n-1. These are
/// optimal for perfect-visibility chains.
pub fn default_settings(n: usize) -> Result<Vec<MeasurementSetting>> {
    if !(MIN_CHAIN..=MAX_CHAIN).contains(&n) {
        return Err(PdoError::ChainLength { n });
    }
    (0..2 * n)
        .map(|k| MeasurementSetting::new(k as f64 * std::f64::consts::PI / (2 * n) as f64))
        .collect()
}

/// Spin observable at angle `th` in the X-Z plane: cos(th) Z + sin(th) X.
pub fn observable(theta: f64) -> ComplexOperator {
    let z = PauliLabel::Z.matrix();
    let x = PauliLabel::X.matrix();
    &(&z * theta.cos()) + &(&x * theta.sin())
}

static SINGLET: LazyLock<ComplexOperator> = LazyLock::new(|| {
    // |psi-><psi-| with |psi-> = (|01> - |10>)/sqrt(2).
    ComplexOperator::from_fn(4, |i, j| {
        let v = [0.0, std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2, 0.0];
        Complex64::new(v[i] * v[j], 0.0)
    })
    .expect("dim 4 supported")
});

static TEMPORAL_RESOURCE: LazyLock<PseudoDensityOperator> =
    LazyLock::new(|| two_time_pdo(&QubitChannel::identity(), &DensityMatrix::maximally_mixed()));

/// Two-party correlator on a visibility-V singlet, with the second party's
/// outcome relabeled (observable -O(th_b)): E = V cos(th_a - th_b).
pub fn spatial_corr(theta_a: f64, theta_b: f64, visibility: f64) -> Result<f64> {
    if !visibility.is_finite() || !(0.0..=1.0).contains(&visibility) {
        return Err(PdoError::VisibilityOutOfRange { value: visibility });
    }
    if !theta_a.is_finite() {
        return Err(PdoError::NonFiniteAngle { value: theta_a });
    }
    if !theta_b.is_finite() {
        return Err(PdoError::NonFiniteAngle { value: theta_b });
    }
    let eye4 = ComplexOperator::identity(4)?;
    let rho = &(&*SINGLET * visibility) + &(&eye4 * ((1.0 - visibility) * 0.25));
    let ab = observable(theta_a).kron(&(&observable(theta_b) * -1.0))?;
    Ok(rho.trace_product(&ab).re)
}

/// Sequential correlator of two sharp measurements on one maximally mixed
/// qubit: E = tr[(O(th_a) (x) O(th_b)) R] = cos(th_a - th_b), visibility-free.
pub fn temporal_corr(theta_a: f64, theta_b: f64) -> Result<f64> {
    if !theta_a.is_finite() {
        return Err(PdoError::NonFiniteAngle { value: theta_a });
    }
    if !theta_b.is_finite() {
        return Err(PdoError::NonFiniteAngle { value: theta_b });
    }
    let ab = observable(theta_a).kron(&observable(theta_b))?;
    Ok(TEMPORAL_RESOURCE.matrix().trace_product(&ab).re)
}

/// Chain statistic S for the given configuration.
pub fn chain_value(config: &ChainConfig) -> Result<f64> {
    let mut s = 0.0;
    for t in 0..2 * config.n() {
        let (a, b, sign) = config.term(t);
        let e = if config.term_is_temporal(t) {
            temporal_corr(a, b)?
        } else {
            spatial_corr(a, b, config.visibility())?
        };
        s += sign * e;
    }
    Ok(s)
}

/// Exact classical maximum of the chain statistic: search all 2^(2n)
/// deterministic outcome assignments. Only the chain's cyclic term
/// structure matters, so the result is mode-independent and equals 2n - 2.
pub fn classical_max_bruteforce(n: usize) -> Result<f64> {
    if !(MIN_CHAIN..=MAX_CHAIN).contains(&n) {
        return Err(PdoError::ChainLength { n });
    }
    if n > MAX_BRUTE_FORCE {
        return Err(PdoError::BruteForceLimit { n });
    }
    let m = 2 * n;
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << m) {
        let a = |i: usize| if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
        let mut s = 0.0;
        for t in 0..m {
            let sign = if t + 1 == m { -1.0 } else { 1.0 };
            s += sign * a(t) * a((t + 1) % m);
        }
        best = best.max(s);
    }
    Ok(best)
}

/// One row of a violation curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub n: usize,
    /// Chain statistic S.
    pub s: f64,
    /// Violation S - (2n - 2); positive means the classical bound is broken.
    pub delta_s: f64,
    /// Statistical error of S (zero for analytic points).
    pub stderr: f64,
}

/// Analytic violation curve over n = n_min ..= n_max with the default
/// equally spaced settings.
pub fn theory_curve(
    mode: ChainMode,
    n_min: usize,
    n_max: usize,
    visibility: f64,
) -> Result<Vec<CurvePoint>> {
    if n_min < MIN_CHAIN || n_max > MAX_CHAIN || n_min > n_max {
        return Err(PdoError::CurveRange { n_min, n_max });
    }
    let mut points = Vec::with_capacity(n_max - n_min + 1);
    for n in n_min..=n_max {
        let config = ChainConfig::with_default_settings(mode, n, visibility)?;
        let s = chain_value(&config)?;
        points.push(CurvePoint { n, s, delta_s: s - config.classical_bound(), stderr: 0.0 });
    }
    Ok(points)
}

/// Hill-climb the 2n settings by coordinate descent with a halving step,
/// starting from the equally spaced defaults. The first angle stays pinned
/// (every correlator depends only on angle differences). Returns the tuned
/// settings and the achieved S.
pub fn optimize_settings(
    mode: ChainMode,
    n: usize,
    visibility: f64,
) -> Result<(Vec<MeasurementSetting>, f64)> {
    const INITIAL_STEP: f64 = std::f64::consts::PI / 8.0;
    const FINAL_STEP: f64 = 1e-8;
    const MAX_SWEEPS: usize = 10_000;

    let mut config = ChainConfig::with_default_settings(mode, n, visibility)?;
    let mut best = chain_value(&config)?;
    let mut step = INITIAL_STEP;
    let mut sweeps = 0;
    while step > FINAL_STEP {
        sweeps += 1;
        if sweeps > MAX_SWEEPS {
            return Err(PdoError::OptimizationFailure { sweeps: MAX_SWEEPS });
        }
        let mut improved = false;
        for i in 1..2 * n {
            let current = config.settings[i].angle();
            for trial in [current + step, current - step] {
                let mut candidate = config.clone();
                candidate.settings[i] = MeasurementSetting::new(trial)?;
                let s = chain_value(&candidate)?;
                if s > best {
                    best = s;
                    config = candidate;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((config.settings, best))
}
