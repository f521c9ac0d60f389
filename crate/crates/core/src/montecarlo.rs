//! Shot-by-shot measurement simulation for the correlators in
//! [`crate::chsh`], with deterministic seeding.
//!
//! Every sampler consumes its own ChaCha stream, so chain estimates assign
//! stream `t` to term `t`: estimates are bit-reproducible for a fixed seed
//! and terms stay statistically independent regardless of shot counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chsh::{spatial_corr, temporal_corr, ChainConfig, ChainMode};
use crate::error::{PdoError, Result};

/// Estimates with fewer shots than this are too noisy to report a stderr.
const MIN_SHOTS: u64 = 100;

/// Seed plus stream index; one stream per independently sampled quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Tally of joint +-1 outcomes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ShotBatch {
    pub n_pp: u64,
    pub n_pm: u64,
    pub n_mp: u64,
    pub n_mm: u64,
}

impl ShotBatch {
    pub fn shots(&self) -> u64 {
        self.n_pp + self.n_pm + self.n_mp + self.n_mm
    }

    /// Empirical E[a b]; requires at least one recorded shot.
    pub fn correlation(&self) -> f64 {
        let shots = self.shots();
        assert!(shots > 0, "correlation of an empty batch");
        let signed = (self.n_pp + self.n_mm) as f64 - (self.n_pm + self.n_mp) as f64;
        signed / shots as f64
    }

    fn record(&mut self, a: f64, b: f64) {
        match (a > 0.0, b > 0.0) {
            (true, true) => self.n_pp += 1,
            (true, false) => self.n_pm += 1,
            (false, true) => self.n_mp += 1,
            (false, false) => self.n_mm += 1,
        }
    }

    fn estimate(&self) -> CorrelationEstimate {
        let mean = self.correlation();
        let shots = self.shots();
        // Outcomes are +-1, so Var[ab] = 1 - E[ab]^2.
        let stderr = ((1.0 - mean * mean).max(0.0) / shots as f64).sqrt();
        CorrelationEstimate { mean, stderr, shots }
    }
}

/// Sample mean of a +-1 product with its plug-in standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub shots: u64,
}

fn check_shots(shots: u64) -> Result<()> {
    if shots < MIN_SHOTS {
        return Err(PdoError::ShotCount { shots, minimum: MIN_SHOTS });
    }
    Ok(())
}

/// Draw joint +-1 pairs with unbiased marginals and E[ab] = `correlation`,
/// one uniform variate per shot over the four-outcome distribution
/// p(a, b) = (1 + a b c) / 4.
pub fn sample_joint(correlation: f64, shots: u64, spec: RngSpec) -> Result<ShotBatch> {
    if !correlation.is_finite() || correlation.abs() > 1.0 {
        return Err(PdoError::CorrelationOutOfRange { value: correlation });
    }
    check_shots(shots)?;
    let aligned = (1.0 + correlation) / 4.0;
    let opposed = (1.0 - correlation) / 4.0;
    // Cumulative over (++, +-, -+, --).
    let cut1 = aligned;
    let cut2 = aligned + opposed;
    let cut3 = aligned + 2.0 * opposed;
    let mut rng = spec.rng();
    let mut batch = ShotBatch::default();
    for _ in 0..shots {
        let u = rng.random::<f64>();
        if u < cut1 {
            batch.record(1.0, 1.0);
        } else if u < cut2 {
            batch.record(1.0, -1.0);
        } else if u < cut3 {
            batch.record(-1.0, 1.0);
        } else {
            batch.record(-1.0, -1.0);
        }
    }
    Ok(batch)
}

/// Simulate two-party shots on the visibility-V singlet at the given
/// settings and return the estimated correlator.
pub fn sample_spatial(
    theta_a: f64,
    theta_b: f64,
    visibility: f64,
    shots: u64,
    spec: RngSpec,
) -> Result<CorrelationEstimate> {
    let c = spatial_corr(theta_a, theta_b, visibility)?;
    Ok(sample_joint(c, shots, spec)?.estimate())
}

/// Simulate sequential shots on one maximally mixed qubit: the first
/// outcome is a fair coin, the second is drawn from the post-measurement
/// state, p(b | a) = (1 + a b cos(th_a - th_b)) / 2. Two variates per shot.
pub fn sample_temporal(
    theta_a: f64,
    theta_b: f64,
    shots: u64,
    spec: RngSpec,
) -> Result<CorrelationEstimate> {
    let c = temporal_corr(theta_a, theta_b)?;
    check_shots(shots)?;
    let mut rng = spec.rng();
    let mut batch = ShotBatch::default();
    for _ in 0..shots {
        let a = if rng.random::<f64>() < 0.5 { 1.0 } else { -1.0 };
        let p_b_plus = (1.0 + a * c) / 2.0;
        let b = if rng.random::<f64>() < p_b_plus { 1.0 } else { -1.0 };
        batch.record(a, b);
    }
    Ok(batch.estimate())
}

/// Same statistics as [`sample_temporal`], produced the long way round: a
/// heralded preparation (a fair coin pointing the qubit up or down Z) whose
/// record is discarded, a first measurement whose outcome now depends on
/// the herald, then the sequential second measurement. Three variates per
/// shot. Marginalizing the herald must reproduce the two-variate sampler.
pub fn sample_temporal_erasure(
    theta_a: f64,
    theta_b: f64,
    shots: u64,
    spec: RngSpec,
) -> Result<CorrelationEstimate> {
    let c = temporal_corr(theta_a, theta_b)?;
    check_shots(shots)?;
    let mut rng = spec.rng();
    let mut batch = ShotBatch::default();
    for _ in 0..shots {
        let z = if rng.random::<f64>() < 0.5 { 1.0 } else { -1.0 };
        let p_a_plus = (1.0 + z * theta_a.cos()) / 2.0;
        let a = if rng.random::<f64>() < p_a_plus { 1.0 } else { -1.0 };
        let p_b_plus = (1.0 + a * c) / 2.0;
        let b = if rng.random::<f64>() < p_b_plus { 1.0 } else { -1.0 };
        batch.record(a, b);
    }
    Ok(batch.estimate())
}

/// Monte Carlo estimate of a chain statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainEstimate {
    pub mode: ChainMode,
    pub n: usize,
    /// Estimated chain statistic S.
    pub s: f64,
    /// S minus the classical bound 2n - 2.
    pub delta_s: f64,
    /// Root-sum-square of the per-term standard errors.
    pub stderr: f64,
    pub shots_per_term: u64,
}

/// Estimate the chain statistic at the default equally spaced settings by
/// sampling every term with `shots_per_term` shots. Term `t` uses RNG
/// stream `t`, so results are reproducible and terms are independent.
pub fn estimate_chain(
    mode: ChainMode,
    n: usize,
    visibility: f64,
    shots_per_term: u64,
    seed: u64,
) -> Result<ChainEstimate> {
    let config = ChainConfig::with_default_settings(mode, n, visibility)?;
    check_shots(shots_per_term)?;
    let mut s = 0.0;
    let mut var = 0.0;
    for t in 0..2 * n {
        let (a, b, sign) = config.term(t);
        let spec = RngSpec::new(seed, t as u64);
        let est = if config.term_is_temporal(t) {
            sample_temporal(a, b, shots_per_term, spec)?
        } else {
            sample_spatial(a, b, visibility, shots_per_term, spec)?
        };
        s += sign * est.mean;
        var += est.stderr * est.stderr;
    }
    Ok(ChainEstimate {
        mode,
        n,
        s,
        delta_s: s - config.classical_bound(),
        stderr: var.sqrt(),
        shots_per_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn shot_batch_arithmetic() {
        let batch = ShotBatch { n_pp: 30, n_pm: 10, n_mp: 10, n_mm: 50 };
        assert_eq!(batch.shots(), 100);
        assert!((batch.correlation() - 0.6).abs() < 1e-15);
        let est = batch.estimate();
        assert!((est.stderr - 0.08).abs() < 1e-15);
        assert_eq!(est.shots, 100);
    }

    #[test]
    #[should_panic(expected = "empty batch")]
    fn empty_batch_has_no_correlation() {
        let _ = ShotBatch::default().correlation();
    }

    #[test]
    fn same_spec_reproduces_bit_identical_results() {
        let spec = RngSpec::new(42, 3);
        let a = sample_joint(0.3, 10_000, spec).unwrap();
        let b = sample_joint(0.3, 10_000, spec).unwrap();
        assert_eq!(a, b);
        let other_stream = sample_joint(0.3, 10_000, RngSpec::new(42, 4)).unwrap();
        assert_ne!(a, other_stream);
        let other_seed = sample_joint(0.3, 10_000, RngSpec::new(43, 3)).unwrap();
        assert_ne!(a, other_seed);
    }

    #[test]
    fn joint_sampler_tracks_its_target_correlation() {
        for (i, c) in [-0.95, -0.5, 0.0, 0.5, 0.9].into_iter().enumerate() {
            let batch = sample_joint(c, 100_000, RngSpec::new(7, i as u64)).unwrap();
            let est = batch.estimate();
            assert_eq!(est.shots, 100_000);
            assert!(
                (est.mean - c).abs() < 4.0 * est.stderr.max(1e-4),
                "c = {c}: mean {} stderr {}",
                est.mean,
                est.stderr
            );
        }
    }

    #[test]
    fn joint_sampler_keeps_marginals_unbiased() {
        let batch = sample_joint(0.8, 200_000, RngSpec::new(11, 0)).unwrap();
        let a_mean = ((batch.n_pp + batch.n_pm) as f64 - (batch.n_mp + batch.n_mm) as f64)
            / batch.shots() as f64;
        let b_mean = ((batch.n_pp + batch.n_mp) as f64 - (batch.n_pm + batch.n_mm) as f64)
            / batch.shots() as f64;
        assert!(a_mean.abs() < 0.01, "a marginal {a_mean}");
        assert!(b_mean.abs() < 0.01, "b marginal {b_mean}");
    }

    #[test]
    fn spatial_sampler_converges_to_the_trace_correlator() {
        let est = sample_spatial(0.0, PI / 3.0, 1.0, 50_000, RngSpec::new(5, 0)).unwrap();
        assert!((est.mean - 0.5).abs() < 4.0 * est.stderr, "mean {}", est.mean);
        let damped = sample_spatial(0.0, PI / 3.0, 0.5, 50_000, RngSpec::new(5, 1)).unwrap();
        assert!((damped.mean - 0.25).abs() < 4.0 * damped.stderr, "mean {}", damped.mean);
    }

    #[test]
    fn temporal_sampler_converges_to_the_trace_correlator() {
        let est = sample_temporal(0.2, 0.2 + PI / 4.0, 50_000, RngSpec::new(9, 0)).unwrap();
        let want = (PI / 4.0).cos();
        assert!((est.mean - want).abs() < 4.0 * est.stderr, "mean {}", est.mean);
    }

    #[test]
    fn erasure_sampler_matches_the_direct_temporal_statistics() {
        let (ta, tb) = (0.7, 0.7 - PI / 5.0);
        let direct = sample_temporal(ta, tb, 100_000, RngSpec::new(13, 0)).unwrap();
        let erased = sample_temporal_erasure(ta, tb, 100_000, RngSpec::new(13, 1)).unwrap();
        let gap = (direct.mean - erased.mean).abs();
        let sigma = (direct.stderr.powi(2) + erased.stderr.powi(2)).sqrt();
        assert!(gap < 3.0 * sigma, "gap {gap}, sigma {sigma}");
        let want = (ta - tb).cos();
        assert!((erased.mean - want).abs() < 4.0 * erased.stderr);
    }

    #[test]
    fn chain_estimates_are_reproducible_and_sane() {
        let a = estimate_chain(ChainMode::Temporal, 2, 1.0, 20_000, 7).unwrap();
        let b = estimate_chain(ChainMode::Temporal, 2, 1.0, 20_000, 7).unwrap();
        assert_eq!(a, b);
        let want = 2.0 * 2.0 * (PI / 4.0).cos();
        assert!((a.s - want).abs() < 4.0 * a.stderr, "s = {}, want {want}", a.s);
        assert!((a.delta_s - (a.s - 2.0)).abs() < 1e-15);
        assert!(a.stderr > 0.0 && a.stderr < 0.02);

        let c = estimate_chain(ChainMode::Temporal, 2, 1.0, 20_000, 8).unwrap();
        assert_ne!(a.s, c.s);
    }

    #[test]
    fn hybrid_chains_sample_both_resource_kinds() {
        let est = estimate_chain(ChainMode::Hybrid, 3, 0.9, 10_000, 21).unwrap();
        let want = 3.0 * 1.9 * (PI / 6.0).cos();
        assert!((est.s - want).abs() < 5.0 * est.stderr, "s = {}, want {want}", est.s);
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            sample_joint(1.5, 1_000, RngSpec::new(0, 0)),
            Err(PdoError::CorrelationOutOfRange { value }) if value == 1.5
        ));
        assert!(matches!(
            sample_joint(f64::NAN, 1_000, RngSpec::new(0, 0)),
            Err(PdoError::CorrelationOutOfRange { .. })
        ));
        assert!(matches!(
            sample_joint(0.0, 99, RngSpec::new(0, 0)),
            Err(PdoError::ShotCount { shots: 99, minimum: 100 })
        ));
        assert!(matches!(
            sample_temporal(0.0, 0.0, 10, RngSpec::new(0, 0)),
            Err(PdoError::ShotCount { .. })
        ));
        assert!(matches!(
            sample_temporal_erasure(0.0, 0.0, 10, RngSpec::new(0, 0)),
            Err(PdoError::ShotCount { .. })
        ));
        assert!(matches!(
            estimate_chain(ChainMode::Spatial, 4, 1.0, 50, 0),
            Err(PdoError::ShotCount { .. })
        ));
        assert!(matches!(
            estimate_chain(ChainMode::Spatial, 1, 1.0, 1_000, 0),
            Err(PdoError::ChainLength { n: 1 })
        ));
        assert!(matches!(
            estimate_chain(ChainMode::Spatial, 4, 1.2, 1_000, 0),
            Err(PdoError::VisibilityOutOfRange { .. })
        ));
    }
}
