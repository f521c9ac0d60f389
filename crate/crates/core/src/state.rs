//! Single-qubit states: Bloch vectors and validated density matrices.

use num_complex::Complex64;

use crate::error::{PdoError, Result};
use crate::operator::{eig_hermitian, ComplexOperator, PauliLabel};
use crate::{EIGENVALUE_TOL, HERMITICITY_TOL, TRACE_TOL};

/// Point in (or on) the Bloch ball. A small slack on the norm absorbs
/// round-off from reconstruction pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(PdoError::NonFiniteEntries);
        }
        let v = Self { x, y, z };
        if v.norm_sqr() > 1.0 + EIGENVALUE_TOL {
            return Err(PdoError::BlochNormTooLarge { norm: v.norm() });
        }
        Ok(v)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// max component-wise |self - other|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

/// A 2x2 density matrix: Hermitian, unit trace, positive semidefinite
/// (within the crate tolerances).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: ComplexOperator,
}

impl DensityMatrix {
    pub fn new(op: ComplexOperator) -> Result<Self> {
        if op.dim() != 2 {
            return Err(PdoError::DimensionMismatch(2, op.dim()));
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
        let eigs = eig_hermitian(&op)?;
        if eigs[0] < -EIGENVALUE_TOL {
            return Err(PdoError::NotPositive { min_eigenvalue: eigs[0] });
        }
        Ok(Self { op })
    }

    /// rho = (I + r . sigma) / 2.
    pub fn from_bloch(r: BlochVector) -> Self {
        let mut op = &ComplexOperator::identity(2).expect("dim 2 supported") * 0.5;
        op = &op + &(&PauliLabel::X.matrix() * (0.5 * r.x));
        op = &op + &(&PauliLabel::Y.matrix() * (0.5 * r.y));
        op = &op + &(&PauliLabel::Z.matrix() * (0.5 * r.z));
        Self::new(op).expect("a Bloch vector inside the ball yields a valid state")
    }

    pub fn maximally_mixed() -> Self {
        Self::from_bloch(BlochVector { x: 0.0, y: 0.0, z: 0.0 })
    }

    /// r_i = Re tr(rho sigma_i).
    pub fn bloch(&self) -> BlochVector {
        BlochVector {
            x: self.op.trace_product(&PauliLabel::X.matrix()).re,
            y: self.op.trace_product(&PauliLabel::Y.matrix()).re,
            z: self.op.trace_product(&PauliLabel::Z.matrix()).re,
        }
    }

    pub fn matrix(&self) -> &ComplexOperator {
        &self.op
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn origin_maps_to_the_maximally_mixed_state() {
        let rho = DensityMatrix::from_bloch(BlochVector::new(0.0, 0.0, 0.0).unwrap());
        let half_eye = &ComplexOperator::identity(2).unwrap() * 0.5;
        assert_eq!(rho.matrix().max_abs_diff(&half_eye), 0.0);
    }

    #[test]
    fn poles_and_equator_match_frozen_matrices() {
        let up = DensityMatrix::from_bloch(BlochVector::new(0.0, 0.0, 1.0).unwrap());
        let expect_up = ComplexOperator::from_vec(
            2,
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        assert!(up.matrix().max_abs_diff(&expect_up) < 1e-15);

        let plus = DensityMatrix::from_bloch(BlochVector::new(1.0, 0.0, 0.0).unwrap());
        let expect_plus = ComplexOperator::from_vec(
            2,
            vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)],
        )
        .unwrap();
        assert!(plus.matrix().max_abs_diff(&expect_plus) < 1e-15);

        let y_minus = DensityMatrix::from_bloch(BlochVector::new(0.0, -1.0, 0.0).unwrap());
        let expect_y = ComplexOperator::from_vec(
            2,
            vec![c(0.5, 0.0), c(0.0, 0.5), c(0.0, -0.5), c(0.5, 0.0)],
        )
        .unwrap();
        assert!(y_minus.matrix().max_abs_diff(&expect_y) < 1e-15);
    }

    #[test]
    fn bloch_round_trip_over_the_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut checked = 0;
        while checked < 200 {
            let r = BlochVector {
                x: 2.0 * rng.random::<f64>() - 1.0,
                y: 2.0 * rng.random::<f64>() - 1.0,
                z: 2.0 * rng.random::<f64>() - 1.0,
            };
            if r.norm_sqr() > 1.0 {
                continue;
            }
            checked += 1;
            let rho = DensityMatrix::from_bloch(r);
            let back = rho.bloch();
            assert!(back.max_abs_diff(&r) < 1e-12, "{r:?} -> {back:?}");
        }
    }

    #[test]
    fn bloch_vector_outside_the_ball_is_rejected() {
        assert!(matches!(
            BlochVector::new(0.8, 0.8, 0.0),
            Err(PdoError::BlochNormTooLarge { .. })
        ));
        assert!(matches!(
            BlochVector::new(f64::INFINITY, 0.0, 0.0),
            Err(PdoError::NonFiniteEntries)
        ));
        // Boundary and slightly-inside vectors pass.
        assert!(BlochVector::new(0.0, 0.0, 1.0).is_ok());
        assert!(BlochVector::new(1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt()).is_ok());
    }

    #[test]
    fn density_matrix_invariants_are_enforced() {
        let skew =
            ComplexOperator::from_vec(2, vec![c(0.5, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(0.5, 0.0)])
                .unwrap();
        assert!(matches!(DensityMatrix::new(skew), Err(PdoError::NotHermitian { .. })));

        let off_trace =
            ComplexOperator::from_vec(2, vec![c(0.7, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.7, 0.0)])
                .unwrap();
        assert!(matches!(DensityMatrix::new(off_trace), Err(PdoError::NonUnitTrace { .. })));

        let negative =
            ComplexOperator::from_vec(2, vec![c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)])
                .unwrap();
        assert!(matches!(DensityMatrix::new(negative), Err(PdoError::NotPositive { .. })));

        let wrong_dim = ComplexOperator::identity(4).unwrap();
        assert!(matches!(DensityMatrix::new(wrong_dim), Err(PdoError::DimensionMismatch(2, 4))));
    }
}
