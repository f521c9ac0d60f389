//! Two-time pseudo-density operators, the temporal Bell basis, qubit
//! channels, and the correlation operators channels induce.
//!
//! A pseudo-density operator (PDO) is Hermitian with unit trace but may have
//! negative eigenvalues; negative spectrum is the signature of temporal
//! rather than spatial correlations.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{PdoError, Result};
use crate::operator::{
    hermitian_eigen, partial_trace, pauli_string_matrix, ComplexOperator, PauliLabel, PauliString,
};
use crate::state::DensityMatrix;
use crate::{EIGENVALUE_TOL, HERMITICITY_TOL, TRACE_TOL};

/// Role a tensor factor plays in the teleportation wiring. Labels are
/// descriptive; no operation dispatches on them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    /// Earlier measurement time.
    TimeA,
    /// Ancilla carrying the channel correlations.
    Ancilla,
    /// Later measurement time.
    TimeB,
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Site::TimeA => "t_a",
            Site::Ancilla => "A",
            Site::TimeB => "t_b",
        };
        write!(f, "{s}")
    }
}

/// Hermitian unit-trace operator on two qubit sites. Positivity is *not*
/// required; see [`negativity`].
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoDensityOperator {
    op: ComplexOperator,
    sites: [Site; 2],
}

impl PseudoDensityOperator {
    pub fn new(op: ComplexOperator, sites: [Site; 2]) -> Result<Self> {
        if op.dim() != 4 {
            return Err(PdoError::DimensionMismatch(4, op.dim()));
        }
        if !op.is_finite() {
            return Err(PdoError::NonFiniteEntries);
        }
        let deviation = op.hermiticity_deviation();
        if deviation > HERMITICITY_TOL {
            return Err(PdoError::NotHermitian { deviation });
        }
        let trace = op.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(PdoError::NonUnitTrace { trace: trace.re });
        }
        Ok(Self { op, sites })
    }

    pub fn matrix(&self) -> &ComplexOperator {
        &self.op
    }

    pub fn sites(&self) -> [Site; 2] {
        self.sites
    }

    /// Coefficient of sigma_a (x) sigma_b in the expansion
    /// R = (1/4) sum c_ab sigma_a (x) sigma_b, i.e. tr[R (sigma_a (x) sigma_b)].
    pub fn pauli_coefficient(&self, a: PauliLabel, b: PauliLabel) -> f64 {
        self.op.trace_product(&pauli_string_matrix(&PauliString::pair(a, b))).re
    }

    /// Reduced state on the kept site (0 or 1); always unit trace, may be
    /// non-positive for non-physical coefficient tables.
    pub fn marginal(&self, keep: usize) -> Result<ComplexOperator> {
        let discard = match keep {
            0 => 1,
            1 => 0,
            other => return Err(PdoError::SiteIndex { index: other, sites: 2 }),
        };
        partial_trace(&self.op, &[discard])
    }
}

/// Build a PDO from real two-site Pauli coefficients. The map must carry
/// (I, I) -> 1; absent entries default to zero; every coefficient must lie
/// in [-1, 1].
pub fn pdo_from_coefficients(
    coefficients: &HashMap<PauliString, f64>,
) -> Result<PseudoDensityOperator> {
    for (s, &v) in coefficients {
        if s.len() != 2 {
            return Err(PdoError::PauliStringLength(s.len()));
        }
        if !v.is_finite() || v.abs() > 1.0 {
            return Err(PdoError::CoefficientOutOfRange { value: v });
        }
    }
    let identity = PauliString::pair(PauliLabel::I, PauliLabel::I);
    match coefficients.get(&identity) {
        Some(&v) if (v - 1.0).abs() <= TRACE_TOL => {}
        other => return Err(PdoError::IdentityCoefficient { found: other.copied() }),
    }

    let mut op = ComplexOperator::zeros(4)?;
    for a in PauliLabel::ALL {
        for b in PauliLabel::ALL {
            let c = coefficients.get(&PauliString::pair(a, b)).copied().unwrap_or(0.0);
            if c != 0.0 {
                op = &op + &(&pauli_string_matrix(&PauliString::pair(a, b)) * (0.25 * c));
            }
        }
    }
    PseudoDensityOperator::new(op, [Site::TimeA, Site::TimeB])
}

/// Signs of (XX, YY, ZZ) in the four temporal Bell basis elements.
pub(crate) fn bell_sign_pattern(k: usize) -> Result<[f64; 3]> {
    match k {
        1 => Ok([1.0, 1.0, 1.0]),
        2 => Ok([1.0, -1.0, -1.0]),
        3 => Ok([-1.0, 1.0, -1.0]),
        4 => Ok([-1.0, -1.0, 1.0]),
        other => Err(PdoError::BellIndex(other)),
    }
}

/// Temporal Bell basis element R^(k), k in 1..=4:
/// (1/4)(I + s_x XX + s_y YY + s_z ZZ) with the sign patterns
/// (+++), (+--), (-+-), (--+). Hilbert-Schmidt orthonormal.
pub fn temporal_bell(k: usize) -> Result<PseudoDensityOperator> {
    let signs = bell_sign_pattern(k)?;
    let op = correlation_operator(signs);
    PseudoDensityOperator::new(op, [Site::TimeA, Site::Ancilla])
}

fn correlation_operator(c: [f64; 3]) -> ComplexOperator {
    let mut op = ComplexOperator::identity(4).expect("dim 4 supported");
    let axes = [PauliLabel::X, PauliLabel::Y, PauliLabel::Z];
    for (l, w) in axes.into_iter().zip(c) {
        if w != 0.0 {
            op = &op + &(&pauli_string_matrix(&PauliString::pair(l, l)) * w);
        }
    }
    &op * 0.25
}

/// Hilbert-Schmidt inner product Re tr(r1 r2). Real because both operators
/// are Hermitian.
pub fn hs_inner(r1: &PseudoDensityOperator, r2: &PseudoDensityOperator) -> f64 {
    r1.matrix().trace_product(r2.matrix()).re
}

/// Diagonal Bloch-contraction coefficients (eta_x, eta_y, eta_z), each in
/// [-1, 1]. Describes the map r -> (eta_x r_x, eta_y r_y, eta_z r_z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    ex: f64,
    ey: f64,
    ez: f64,
}

impl ChannelParams {
    pub fn new(ex: f64, ey: f64, ez: f64) -> Result<Self> {
        for (axis, value) in [('x', ex), ('y', ey), ('z', ez)] {
            if !value.is_finite() || value.abs() > 1.0 {
                return Err(PdoError::ChannelParameter { axis, value });
            }
        }
        Ok(Self { ex, ey, ez })
    }

    pub fn identity() -> Self {
        Self { ex: 1.0, ey: 1.0, ez: 1.0 }
    }

    pub fn etas(&self) -> [f64; 3] {
        [self.ex, self.ey, self.ez]
    }

    /// Choi matrix of the contraction map, input site leading, trace 2:
    /// (1/2)(II + eta_x XX - eta_y YY + eta_z ZZ). The map is completely
    /// positive exactly when this matrix is positive semidefinite.
    pub fn choi_matrix(&self) -> ComplexOperator {
        &correlation_operator([self.ex, -self.ey, self.ez]) * 2.0
    }
}

impl fmt::Display for ChannelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.ex, self.ey, self.ez)
    }
}

/// Two-site correlation resource induced by a Bloch contraction:
/// (1/4)(I + eta_x XX + eta_y YY + eta_z ZZ) on sites (A, t_b).
pub fn channel_pdo(eta: ChannelParams) -> PseudoDensityOperator {
    PseudoDensityOperator::new(correlation_operator(eta.etas()), [Site::Ancilla, Site::TimeB])
        .expect("correlation operators are Hermitian with unit trace")
}

/// Completely positive trace-preserving qubit map in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitChannel {
    kraus: Vec<ComplexOperator>,
}

impl QubitChannel {
    /// Validates sum K^dag K = I within the trace-preservation tolerance.
    pub fn new(kraus: Vec<ComplexOperator>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(PdoError::NotTracePreserving { deviation: 1.0 });
        }
        let mut sum = ComplexOperator::zeros(2)?;
        for k in &kraus {
            if k.dim() != 2 {
                return Err(PdoError::DimensionMismatch(2, k.dim()));
            }
            if !k.is_finite() {
                return Err(PdoError::NonFiniteEntries);
            }
            sum = &sum + &(&k.dagger() * k);
        }
        let deviation = sum.max_abs_diff(&ComplexOperator::identity(2)?);
        if deviation > crate::TRACE_PRESERVATION_TOL {
            return Err(PdoError::NotTracePreserving { deviation });
        }
        Ok(Self { kraus })
    }

    pub fn identity() -> Self {
        Self { kraus: vec![ComplexOperator::identity(2).expect("dim 2 supported")] }
    }

    /// Kraus form of a diagonal Bloch contraction, obtained from the
    /// eigendecomposition of its Choi matrix. Fails when the contraction is
    /// not completely positive.
    pub fn from_bloch_contraction(eta: ChannelParams) -> Result<Self> {
        let choi = eta.choi_matrix();
        let (vals, vecs) = hermitian_eigen(&choi);
        if vals[0] < -EIGENVALUE_TOL {
            return Err(PdoError::NotCompletelyPositive { min_eigenvalue: vals[0] });
        }
        let mut kraus = Vec::new();
        for (k, &lambda) in vals.iter().enumerate() {
            if lambda <= 1e-12 {
                continue;
            }
            let w = lambda.sqrt();
            // Choi eigenvector v encodes K via v[2*in + out] = K[out][in] / w.
            let op = ComplexOperator::from_fn(2, |out, inp| vecs[(2 * inp + out, k)] * w)?;
            kraus.push(op);
        }
        Self::new(kraus)
    }

    pub fn kraus(&self) -> &[ComplexOperator] {
        &self.kraus
    }

    /// sum K m K^dag.
    pub fn apply(&self, m: &ComplexOperator) -> ComplexOperator {
        let mut out = ComplexOperator::zeros(2).expect("dim 2 supported");
        for k in &self.kraus {
            out = &out + &(&(k * m) * &k.dagger());
        }
        out
    }
}

/// Two-time PDO of (state `rho0`) -> (channel) -> (measurement), built from
/// sequential projective statistics:
///
/// * (I, I) coefficient 1;
/// * single-site coefficients are the Pauli expectations at each time,
///   tr(sigma_i rho0) and tr(sigma_j channel(rho0));
/// * two-site coefficients are E[ab] = sum_a a tr[sigma_j channel(P_a rho0 P_a)]
///   with P_a the projectors of sigma_i.
pub fn two_time_pdo(channel: &QubitChannel, rho0: &DensityMatrix) -> PseudoDensityOperator {
    let axes = [PauliLabel::X, PauliLabel::Y, PauliLabel::Z];
    let eye = ComplexOperator::identity(2).expect("dim 2 supported");
    let evolved = channel.apply(rho0.matrix());

    let mut op = &ComplexOperator::identity(4).expect("dim 4 supported") * 0.25;
    for si in axes {
        let c = rho0.matrix().trace_product(&si.matrix()).re;
        op = &op + &(&pauli_string_matrix(&PauliString::pair(si, PauliLabel::I)) * (0.25 * c));
    }
    for sj in axes {
        let c = evolved.trace_product(&sj.matrix()).re;
        op = &op + &(&pauli_string_matrix(&PauliString::pair(PauliLabel::I, sj)) * (0.25 * c));
    }
    for si in axes {
        for sj in axes {
            let mut e = 0.0;
            for a in [1.0f64, -1.0] {
                let proj = &(&eye + &(&si.matrix() * a)) * 0.5;
                let collapsed = &(&proj * rho0.matrix()) * &proj;
                e += a * channel.apply(&collapsed).trace_product(&sj.matrix()).re;
            }
            op = &op + &(&pauli_string_matrix(&PauliString::pair(si, sj)) * (0.25 * e));
        }
    }
    PseudoDensityOperator::new(op, [Site::TimeA, Site::TimeB])
        .expect("real Pauli coefficients with unit identity weight")
}

/// Sum of |negative eigenvalues|; zero exactly when the PDO is an ordinary
/// density operator.
pub fn negativity(r: &PseudoDensityOperator) -> f64 {
    hermitian_eigen(r.matrix()).0.iter().filter(|&&l| l < 0.0).map(|l| -l).sum()
}
