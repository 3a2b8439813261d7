//! Unit ball -> Grassmannian lifts.
//!
//! For lines (`M = 1`) a ball point `w` of `C^{T-1}` becomes the unit vector
//! `[sqrt(1 - |w|^2); w]`. For general `M` the operator-norm ball of
//! `(T-M) x M` matrices is lifted to a Stiefel representative
//! `[sqrt(I - W^H W); W]`, and `Theta(A) = A (I + A^H A)^{-1/2}` maps all of
//! `C^{(T-M) x M}` onto that ball.

use crate::ballmap::BallPoint;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_power, operator_norm, CMatrix, CVector};
use num_complex::Complex64;
use rand::Rng;

/// Operator norms at or above `1 - OPBALL_MARGIN` are rejected where
/// `I - W^H W` must be inverted.
pub const OPBALL_MARGIN: f64 = 1e-12;

/// Unit-norm representative of a line in `C^T`, with a real positive first
/// coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannPoint(CVector);

impl GrassmannPoint {
    /// Accepts any nonzero vector: it is normalized and phase-rotated so that
    /// its first coordinate is real and positive.
    ///
    /// A vector whose first coordinate is zero keeps its phase; it lies on the
    /// measure-zero set the canonical form does not cover.
    pub fn canonicalize(x: CVector) -> Result<Self> {
        let n = x.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        let x0 = x[0];
        let phase = if x0.norm() > 0.0 {
            x0.conj() / Complex64::new(x0.norm(), 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut v = x * (phase / Complex64::new(n, 0.0));
        v[0] = Complex64::new(v[0].norm(), 0.0);
        Ok(Self(v))
    }

    /// Wraps a vector that is already canonical (unit norm, real positive
    /// first coordinate).
    pub fn new(x: CVector) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::ZeroVector);
        }
        let x0 = x[0];
        if !(x0.re > 0.0) || x0.im.abs() > 1e-12 {
            return Err(Error::NonCanonical {
                re: x0.re,
                im: x0.im,
            });
        }
        let n = x.norm();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "representative has norm {n}, expected 1"
            )));
        }
        Ok(Self(x))
    }

    pub fn as_vector(&self) -> &CVector {
        &self.0
    }

    pub fn into_vector(self) -> CVector {
        self.0
    }

    /// Ambient dimension `T`.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn chordal_distance(&self, other: &Self) -> f64 {
        crate::linalg::chordal_distance(&self.0, &other.0)
    }
}

/// A `(T-M) x M` matrix with operator norm below 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixBallPoint(CMatrix);

impl MatrixBallPoint {
    pub fn new(w: CMatrix) -> Result<Self> {
        let norm = operator_norm(&w);
        if !(norm < 1.0) {
            return Err(Error::OutsideOperatorBall { norm });
        }
        Ok(Self(w))
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }
}

/// A `T x M` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceRepresentative(CMatrix);

impl SubspaceRepresentative {
    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    /// `|X^H X - I|_F`.
    pub fn stiefel_defect(&self) -> f64 {
        let m = self.0.ncols();
        (self.0.adjoint() * &self.0 - CMatrix::identity(m, m)).norm()
    }
}

/// `x = [sqrt(1 - |w|^2); w]`.
pub fn theta3(w: &BallPoint) -> GrassmannPoint {
    let v = w.as_vector();
    let n2 = v.norm_squared();
    let mut x = CVector::zeros(v.len() + 1);
    x[0] = Complex64::new((1.0 - n2).sqrt(), 0.0);
    x.rows_mut(1, v.len()).copy_from(v);
    GrassmannPoint(x)
}

/// Drops the first coordinate of a canonical representative.
pub fn theta3_inv(x: &GrassmannPoint) -> Result<BallPoint> {
    let v = x.as_vector();
    let x0 = v[0];
    if !(x0.re > 0.0) || x0.im.abs() > 1e-12 {
        return Err(Error::NonCanonical {
            re: x0.re,
            im: x0.im,
        });
    }
    BallPoint::new(v.rows(1, v.len() - 1).into_owned())
}

/// `Theta(A) = A (I_M + A^H A)^{-1/2}`.
pub fn big_theta(a: &CMatrix) -> MatrixBallPoint {
    let m = a.ncols();
    let gram = CMatrix::identity(m, m) + a.adjoint() * a;
    MatrixBallPoint(a * hermitian_power(&gram, -0.5))
}

/// `Theta^{-1}(W) = W (I_M - W^H W)^{-1/2}`.
pub fn big_theta_inv(w: &MatrixBallPoint) -> Result<CMatrix> {
    let inner = complement_gram(w)?;
    Ok(w.as_matrix() * hermitian_power(&inner, -0.5))
}

fn complement_gram(w: &MatrixBallPoint) -> Result<CMatrix> {
    let norm = operator_norm(w.as_matrix());
    if norm >= 1.0 - OPBALL_MARGIN {
        return Err(Error::OutsideOperatorBall { norm });
    }
    let m = w.as_matrix().ncols();
    Ok(CMatrix::identity(m, m) - w.as_matrix().adjoint() * w.as_matrix())
}

/// Jacobian determinant of [`big_theta`] at `A`, as a map between real spaces
/// of dimension `2M(T-M)`: `det(I_M + A^H A)^{-T}`.
pub fn jacobian_closed_form(a: &CMatrix, t: usize) -> f64 {
    let m = a.ncols();
    let gram = CMatrix::identity(m, m) + a.adjoint() * a;
    gram.determinant().re.powi(-(t as i32))
}

/// `X = [sqrt(I_M - W^H W); W]`, a Stiefel representative of a point of
/// `G(M, C^T)`.
pub fn lift_subspace(w: &MatrixBallPoint) -> Result<SubspaceRepresentative> {
    let inner = complement_gram(w)?;
    let top = hermitian_power(&inner, 0.5);
    let (rows, m) = w.as_matrix().shape();
    let mut x = CMatrix::zeros(rows + m, m);
    x.rows_mut(0, m).copy_from(&top);
    x.rows_mut(m, rows).copy_from(w.as_matrix());
    Ok(SubspaceRepresentative(x))
}

/// Uniform sample of the operator-norm ball of `(T-M) x M` complex matrices.
///
/// Each entry is proposed uniformly on the square `[-1, 1]^2` and the whole
/// matrix is rejected unless its operator norm is below 1.
pub fn sample_uniform_opball<R: Rng + ?Sized>(t: usize, m: usize, rng: &mut R) -> MatrixBallPoint {
    sample_uniform_opball_counted(t, m, rng).0
}

/// Like [`sample_uniform_opball`], also returning the number of proposals used.
pub fn sample_uniform_opball_counted<R: Rng + ?Sized>(
    t: usize,
    m: usize,
    rng: &mut R,
) -> (MatrixBallPoint, u64) {
    assert!(m >= 1 && m < t, "need 1 <= M < T");
    let rows = t - m;
    let mut tries = 0;
    loop {
        tries += 1;
        let w = CMatrix::from_fn(rows, m, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        if operator_norm(&w) < 1.0 {
            return (MatrixBallPoint(w), tries);
        }
    }
}
