//! Packaged self-checks covering the load-bearing identities: temporal Bell
//! basis orthonormality and spectra, teleportation round trips, and the
//! agreement of the two complete-positivity routes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pdo::{channel_pdo, hs_inner, temporal_bell, ChannelParams};
use crate::state::{BlochVector, DensityMatrix};
use crate::teleport::{choi_min_eigenvalue, correction_unitary, cp_constraint, teleport};
use crate::Tolerances;

/// Result of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    /// Sub-cases that met their threshold.
    pub passed: usize,
    pub total: usize,
    /// Worst deviation seen, for diagnosing near-misses.
    pub detail: String,
    pub ok: bool,
}

/// Outcomes of every check, in execution order.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

fn random_ball(rng: &mut ChaCha8Rng) -> BlochVector {
    loop {
        let x = 2.0 * rng.random::<f64>() - 1.0;
        let y = 2.0 * rng.random::<f64>() - 1.0;
        let z = 2.0 * rng.random::<f64>() - 1.0;
        if x * x + y * y + z * z <= 1.0 {
            return BlochVector::new(x, y, z).expect("point inside the ball");
        }
    }
}

fn orthonormality_check(tol: &Tolerances) -> CheckOutcome {
    let mut passed = 0;
    let mut worst = 0.0f64;
    for a in 1..=4 {
        for b in 1..=4 {
            let inner = hs_inner(
                &temporal_bell(a).expect("index in range"),
                &temporal_bell(b).expect("index in range"),
            );
            let want = if a == b { 1.0 } else { 0.0 };
            let dev = (inner - want).abs();
            worst = worst.max(dev);
            if dev <= tol.orthonormality {
                passed += 1;
            }
        }
    }
    CheckOutcome {
        name: "bell-basis-orthonormality".into(),
        passed,
        total: 16,
        detail: format!("max |<R_a, R_b> - delta_ab| = {worst:.3e}"),
        ok: passed == 16,
    }
}

fn spectrum_check(tol: &Tolerances) -> CheckOutcome {
    let want = [-0.5, 0.5, 0.5, 0.5];
    let mut passed = 0;
    let mut worst = 0.0f64;
    for k in 1..=4 {
        let r = temporal_bell(k).expect("index in range");
        let eigs = crate::operator::eig_hermitian(r.matrix()).expect("Bell elements are Hermitian");
        let dev = eigs
            .iter()
            .zip(want)
            .map(|(got, want)| (got - want).abs())
            .fold(0.0f64, f64::max);
        worst = worst.max(dev);
        if dev <= tol.eigenvalue {
            passed += 1;
        }
    }
    CheckOutcome {
        name: "bell-basis-spectra".into(),
        passed,
        total: 4,
        detail: format!("max eigenvalue deviation = {worst:.3e}"),
        ok: passed == 4,
    }
}

fn teleport_round_trip_check(tol: &Tolerances) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e1e);
    let resource = channel_pdo(ChannelParams::identity());
    let trials = 100;
    let mut passed = 0;
    let mut worst_bloch = 0.0f64;
    let mut worst_weight = 0.0f64;
    for _ in 0..trials {
        let r = random_ball(&mut rng);
        let rho = DensityMatrix::from_bloch(r);
        let mut ok = true;
        for k in 1..=4 {
            let outcome = match teleport(&rho, k, &resource) {
                Ok(o) => o,
                Err(_) => {
                    ok = false;
                    continue;
                }
            };
            let u = correction_unitary(k).expect("index in range");
            let fixed = &(&u * outcome.state.matrix()) * &u.dagger();
            let fixed =
                DensityMatrix::new(fixed).expect("Pauli conjugation preserves positivity");
            let bloch_dev = fixed.bloch().max_abs_diff(&r);
            let weight_dev = (outcome.weight - 0.25).abs();
            worst_bloch = worst_bloch.max(bloch_dev);
            worst_weight = worst_weight.max(weight_dev);
            if bloch_dev > tol.bloch_identity || weight_dev > tol.weight {
                ok = false;
            }
        }
        if ok {
            passed += 1;
        }
    }
    CheckOutcome {
        name: "teleport-round-trip".into(),
        passed,
        total: trials,
        detail: format!(
            "max Bloch deviation = {worst_bloch:.3e}, max |weight - 1/4| = {worst_weight:.3e}"
        ),
        ok: passed == trials,
    }
}

fn cp_boundary_check(tol: &Tolerances) -> CheckOutcome {
    let grid = 21;
    let mut passed = 0;
    let mut total = 0;
    let mut disagreements = 0;
    for i in 0..grid {
        for j in 0..grid {
            for k in 0..grid {
                let step = |t: usize| -1.0 + 2.0 * t as f64 / (grid - 1) as f64;
                let eta = ChannelParams::new(step(i), step(j), step(k))
                    .expect("grid points lie in [-1, 1]");
                total += 1;
                let closed_form = cp_constraint(eta);
                let spectral = choi_min_eigenvalue(eta) >= -tol.eigenvalue;
                if closed_form == spectral {
                    passed += 1;
                } else {
                    disagreements += 1;
                }
            }
        }
    }
    CheckOutcome {
        name: "cp-boundary-agreement".into(),
        passed,
        total,
        detail: format!("{disagreements} grid points disagree between inequality and spectrum"),
        ok: passed == total,
    }
}

/// Run every check at the given thresholds.
pub fn run_verification(tol: &Tolerances) -> VerificationReport {
    VerificationReport {
        checks: vec![
            orthonormality_check(tol),
            spectrum_check(tol),
            teleport_round_trip_check(tol),
            cp_boundary_check(tol),
        ],
    }
}
