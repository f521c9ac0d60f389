//! Reconstruction of qubit dynamics by projecting onto the temporal Bell
//! basis: a state fed into one leg of a two-site correlation resource
//! reappears on the other leg, transformed by the channel the resource
//! encodes (up to a Pauli correction indexed by the projection branch).
//!
//! Also hosts the complete-positivity boundary for diagonal Bloch
//! contractions, checked two independent ways: a closed-form inequality
//! ([`cp_constraint`]) and the spectrum of the Choi matrix ([`choi_psd`]).

use crate::error::{PdoError, Result};
use crate::operator::{partial_trace, ComplexOperator, PauliLabel};
use crate::pdo::{channel_pdo, temporal_bell, ChannelParams, PseudoDensityOperator};
use crate::state::DensityMatrix;
use crate::EIGENVALUE_TOL;

/// Branch weights this close to zero make the conditional state undefined.
const DEGENERATE_WEIGHT_TOL: f64 = 1e-12;

/// Conditional output of one projection branch.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportOutcome {
    /// Normalized state on the output leg.
    pub state: DensityMatrix,
    /// Probability weight of the branch (1/4 for channel resources).
    pub weight: f64,
}

/// Pauli correction associated with projection branch `k`: I, X, Y, Z for
/// k = 1..=4. Conjugating the output by this unitary undoes the sign flips
/// branch `k` imprints on the Bloch vector.
pub fn correction_unitary(k: usize) -> Result<ComplexOperator> {
    let label = match k {
        1 => PauliLabel::I,
        2 => PauliLabel::X,
        3 => PauliLabel::Y,
        4 => PauliLabel::Z,
        other => return Err(PdoError::BellIndex(other)),
    };
    Ok(label.matrix())
}

/// Project sites (input, resource-left) of `rho (x) resource` onto the k-th
/// temporal Bell element and return the conditional state left on the
/// resource's right leg together with the branch weight.
pub fn teleport(
    rho: &DensityMatrix,
    k: usize,
    resource: &PseudoDensityOperator,
) -> Result<TeleportOutcome> {
    let projector = temporal_bell(k)?;
    let joint = rho.matrix().kron(resource.matrix())?;
    let eye = ComplexOperator::identity(2)?;
    let extended = projector.matrix().kron(&eye)?;
    // R^(k) acts as identity on the kept site, so the partially traced
    // product is Hermitian whenever the joint operator is.
    let reduced = partial_trace(&(&extended * &joint), &[0, 1])?;
    let weight = reduced.trace().re;
    if weight.abs() < DEGENERATE_WEIGHT_TOL {
        return Err(PdoError::DegenerateProjection { weight });
    }
    let state = DensityMatrix::new(&reduced * (1.0 / weight))?;
    Ok(TeleportOutcome { state, weight })
}

/// Send `rho` through the resource operator of a diagonal Bloch contraction
/// using the identity-correction branch (k = 1). The output Bloch vector is
/// the componentwise product eta * r.
pub fn teleport_channel(rho: &DensityMatrix, eta: ChannelParams) -> Result<TeleportOutcome> {
    teleport(rho, 1, &channel_pdo(eta))
}

/// Closed-form complete-positivity test for a diagonal Bloch contraction:
/// 1 + eta_z >= |eta_x + eta_y| and 1 - eta_z >= |eta_x - eta_y|.
///
/// Each margin equals twice a Choi eigenvalue, so boundary points get the
/// same slack as the spectral route in [`choi_psd`]; the two tests then
/// agree everywhere, not just away from the boundary.
pub fn cp_constraint(eta: ChannelParams) -> bool {
    let [ex, ey, ez] = eta.etas();
    (1.0 + ez) - (ex + ey).abs() >= -2.0 * EIGENVALUE_TOL
        && (1.0 - ez) - (ex - ey).abs() >= -2.0 * EIGENVALUE_TOL
}

/// Smallest eigenvalue of the contraction's Choi matrix.
pub fn choi_min_eigenvalue(eta: ChannelParams) -> f64 {
    crate::operator::hermitian_eigen(&eta.choi_matrix()).0[0]
}

/// Spectral complete-positivity test: Choi matrix PSD up to the eigenvalue
/// tolerance. Kept separate from [`cp_constraint`] so the two routes can
/// cross-check each other.
pub fn choi_psd(eta: ChannelParams) -> bool {
    choi_min_eigenvalue(eta) >= -EIGENVALUE_TOL
}

/// Run `rho0` through a sequence of contraction resources, teleporting at
/// each hop. Returns the trajectory including the initial state, so the
/// result has `steps.len() + 1` entries. Steps that are not completely
/// positive are refused unless `allow_non_cp` is set.
pub fn teleport_chain(
    rho0: &DensityMatrix,
    steps: &[ChannelParams],
    allow_non_cp: bool,
) -> Result<Vec<DensityMatrix>> {
    let mut trajectory = vec![rho0.clone()];
    for (i, &eta) in steps.iter().enumerate() {
        if !allow_non_cp && !cp_constraint(eta) {
            return Err(PdoError::NonCpStep { step: i });
        }
        let current = trajectory.last().expect("trajectory starts non-empty");
        let outcome = teleport_channel(current, eta)?;
        trajectory.push(outcome.state);
    }
    Ok(trajectory)
}
