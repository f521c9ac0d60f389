//! Dense complex matrices for one to three qubits, Pauli strings, partial
//! traces, and a Hermitian eigensolver.
//!
//! Row-major storage; site 0 occupies the most significant index bits, so
//! `a.kron(&b)` places `a` on site 0. Arithmetic on mismatched dimensions is
//! a programming error and panics; fallible validation happens in the public
//! constructors.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{PdoError, Result};
use crate::HERMITICITY_TOL;

/// Single-site Pauli operator label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliLabel {
    I,
    X,
    Y,
    Z,
}

impl PauliLabel {
    pub const ALL: [PauliLabel; 4] = [PauliLabel::I, PauliLabel::X, PauliLabel::Y, PauliLabel::Z];

    /// The 2x2 matrix for this label.
    pub fn matrix(self) -> ComplexOperator {
        let e = |re: f64, im: f64| Complex64::new(re, im);
        let rows = match self {
            PauliLabel::I => [[e(1.0, 0.0), e(0.0, 0.0)], [e(0.0, 0.0), e(1.0, 0.0)]],
            PauliLabel::X => [[e(0.0, 0.0), e(1.0, 0.0)], [e(1.0, 0.0), e(0.0, 0.0)]],
            PauliLabel::Y => [[e(0.0, 0.0), e(0.0, -1.0)], [e(0.0, 1.0), e(0.0, 0.0)]],
            PauliLabel::Z => [[e(1.0, 0.0), e(0.0, 0.0)], [e(0.0, 0.0), e(-1.0, 0.0)]],
        };
        ComplexOperator::from_fn(2, |i, j| rows[i][j]).expect("2x2 is a supported dimension")
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            PauliLabel::I => 'I',
            PauliLabel::X => 'X',
            PauliLabel::Y => 'Y',
            PauliLabel::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// An ordered product of single-site Pauli labels over 1 to 3 sites.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    labels: Vec<PauliLabel>,
}

impl PauliString {
    pub fn new(labels: &[PauliLabel]) -> Result<Self> {
        if labels.is_empty() || labels.len() > 3 {
            return Err(PdoError::PauliStringLength(labels.len()));
        }
        Ok(Self { labels: labels.to_vec() })
    }

    /// Two-site string, the workhorse for two-time operators.
    pub fn pair(a: PauliLabel, b: PauliLabel) -> Self {
        Self { labels: vec![a, b] }
    }

    pub fn single(a: PauliLabel) -> Self {
        Self { labels: vec![a] }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length is 1..=3 by construction
    }

    pub fn labels(&self) -> &[PauliLabel] {
        &self.labels
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.labels {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Dense square complex matrix of dimension 2, 4, or 8.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator {
    dim: usize,
    data: Vec<Complex64>,
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 | 8 => Ok(()),
        _ => Err(PdoError::UnsupportedDimension(dim)),
    }
}

impl ComplexOperator {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(PdoError::DimensionMismatch(dim * dim, data.len()));
        }
        let m = Self { dim, data };
        if !m.is_finite() {
            return Err(PdoError::NonFiniteEntries);
        }
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        check_dim(dim)?;
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self::from_vec(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubit sites the matrix acts on (dim = 2^sites).
    pub fn sites(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let d = self.dim;
        Self { dim: d, data: (0..d * d).map(|k| self.data[(k % d) * d + k / d].conj()).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// tr(self * other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "trace_product dimension mismatch");
        let d = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.data[i * d + j] * other.data[j * d + i];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max |a_ij - conj(a_ji)| over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.data[i * d + j] - self.data[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// max entry-wise |self - other|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    /// Kronecker product; self lands on the leading (most significant) site.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let (da, db) = (self.dim, other.dim);
        check_dim(da * db)?;
        let d = da * db;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for ia in 0..da {
            for ja in 0..da {
                let a = self.data[ia * da + ja];
                for ib in 0..db {
                    for jb in 0..db {
                        data[(ia * db + ib) * d + (ja * db + jb)] = a * other.data[ib * db + jb];
                    }
                }
            }
        }
        Ok(Self { dim: d, data })
    }
}

impl Index<(usize, usize)> for ComplexOperator {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.dim && j < self.dim, "index ({i}, {j}) out of range for dim {}", self.dim);
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexOperator {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.dim && j < self.dim, "index ({i}, {j}) out of range for dim {}", self.dim);
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexOperator {
    type Output = ComplexOperator;
    fn add(self, rhs: &ComplexOperator) -> ComplexOperator {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexOperator {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexOperator {
    type Output = ComplexOperator;
    fn sub(self, rhs: &ComplexOperator) -> ComplexOperator {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexOperator {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexOperator {
    type Output = ComplexOperator;
    fn neg(self) -> ComplexOperator {
        ComplexOperator { dim: self.dim, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl Mul for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: &ComplexOperator) -> ComplexOperator {
        assert_eq!(self.dim, rhs.dim, "mul dimension mismatch");
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        ComplexOperator { dim: d, data }
    }
}

impl Mul<f64> for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, s: f64) -> ComplexOperator {
        ComplexOperator { dim: self.dim, data: self.data.iter().map(|a| a * s).collect() }
    }
}

impl Mul<Complex64> for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, s: Complex64) -> ComplexOperator {
        ComplexOperator { dim: self.dim, data: self.data.iter().map(|a| a * s).collect() }
    }
}

/// Tensor product of the string's single-site matrices, site 0 leftmost.
pub fn pauli_string_matrix(s: &PauliString) -> ComplexOperator {
    let mut m = s.labels()[0].matrix();
    for l in &s.labels()[1..] {
        m = m.kron(&l.matrix()).expect("string length <= 3 keeps dim <= 8");
    }
    m
}

/// Trace out the sites listed in `discard` (set semantics, duplicates
/// ignored); the remaining sites keep their relative order.
pub fn partial_trace(m: &ComplexOperator, discard: &[usize]) -> Result<ComplexOperator> {
    let sites = m.sites();
    let mut disc: Vec<usize> = discard.to_vec();
    disc.sort_unstable();
    disc.dedup();
    for &s in &disc {
        if s >= sites {
            return Err(PdoError::SiteIndex { index: s, sites });
        }
    }
    let kept: Vec<usize> = (0..sites).filter(|s| !disc.contains(s)).collect();
    if kept.is_empty() {
        return Err(PdoError::EmptyPartialTrace);
    }

    let kd = 1usize << kept.len();
    let td = 1usize << disc.len();
    let dim = m.dim;

    // Scatter the kept / traced bit groups back into a full index. Bit 0 of
    // the full index addresses the last site.
    let site_shift = |site: usize| sites - 1 - site;
    let compose = |k: usize, t: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &s) in kept.iter().enumerate() {
            let bit = (k >> (kept.len() - 1 - pos)) & 1;
            idx |= bit << site_shift(s);
        }
        for (pos, &s) in disc.iter().enumerate() {
            let bit = (t >> (disc.len() - 1 - pos)) & 1;
            idx |= bit << site_shift(s);
        }
        idx
    };

    let mut out = ComplexOperator::zeros(kd)?;
    for r in 0..kd {
        for c in 0..kd {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..td {
                acc += m.data[compose(r, t) * dim + compose(c, t)];
            }
            out.data[r * kd + c] = acc;
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending. Rejects inputs whose
/// hermiticity deviation exceeds the default tolerance.
pub fn eig_hermitian(m: &ComplexOperator) -> Result<Vec<f64>> {
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITICITY_TOL {
        return Err(PdoError::NotHermitian { deviation });
    }
    if !m.is_finite() {
        return Err(PdoError::NonFiniteEntries);
    }
    Ok(hermitian_eigen(m).0)
}

/// Cyclic Jacobi eigendecomposition. Symmetrizes the input, returns
/// eigenvalues ascending and the matching eigenvectors as columns.
pub(crate) fn hermitian_eigen(m: &ComplexOperator) -> (Vec<f64>, ComplexOperator) {
    let n = m.dim;
    // Work on (m + m^dag)/2 so callers may pass matrices with round-off skew.
    let mut a = (&(m + &m.dagger()) * 0.5).data;
    let mut v = ComplexOperator::identity(n).expect("dim validated").data;

    let fro: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let stop = fro * 1e-15 + f64::MIN_POSITIVE;

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |q| *q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag <= stop / (n as f64) {
                    continue;
                }
                let phi = apq.arg();
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // Real Jacobi angle for [[app, |apq|], [|apq|, aqq]].
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let eip = Complex64::from_polar(1.0, phi);
                let eim = eip.conj();

                // Columns: B = A * U with U[p][p]=c, U[p][q]=s,
                // U[q][p]=-s e^{-i phi}, U[q][q]=c e^{-i phi}.
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * (eim * s);
                    a[k * n + q] = akp * s + akq * (eim * c);
                }
                // Rows: A' = U^dag * B.
                for k in 0..n {
                    let bpk = a[p * n + k];
                    let bqk = a[q * n + k];
                    a[p * n + k] = bpk * c - bqk * (eip * s);
                    a[q * n + k] = bpk * s + bqk * (eip * c);
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - vkq * (eim * s);
                    v[k * n + q] = vkp * s + vkq * (eim * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = ComplexOperator::zeros(n).expect("dim validated");
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            vectors.data[k * n + new_col] = v[k * n + old_col];
        }
    }
    (values, vectors)
}
