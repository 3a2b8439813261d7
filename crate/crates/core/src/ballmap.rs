//! Complex Gaussian space <-> open unit ball by radial rescaling.
//!
//! A `CN(0, I_d)` vector `z` is rescaled along its own direction so that its
//! norm becomes `g(|z|) = P(d, |z|^2)^{1/(2d)}`, where `P` is the regularized
//! lower incomplete gamma function. Since `|z|^2 ~ Gamma(d, 1)`, `P(d, |z|^2)`
//! is uniform and the image is uniform in the ball of `C^d`.

use crate::error::{Error, Result};
use crate::gaussmap::GaussianVector;
use crate::linalg::CVector;
use crate::special::{gamma_p_int, gamma_q_tail, ln_factorial};
use num_complex::Complex64;

/// Below this radius the profile is replaced by its limit at 0.
pub const SMALL_RADIUS: f64 = 1e-6;

const BISECTION_WIDTH: f64 = 1e-13;
const BISECTION_MAX_ITER: usize = 200;

/// A point of the open unit ball of `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint(CVector);

impl BallPoint {
    pub fn new(w: CVector) -> Result<Self> {
        let norm = w.norm();
        if !(norm < 1.0) {
            return Err(Error::OutsideBall { norm });
        }
        Ok(Self(w))
    }

    pub fn from_slice(w: &[Complex64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(w))
    }

    pub fn as_vector(&self) -> &CVector {
        &self.0
    }

    pub fn into_vector(self) -> CVector {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

/// Largest `g` kept strictly below 1 so that images stay inside the open ball.
pub const G_MAX: f64 = 1.0 - 4.0 * f64::EPSILON;

/// `g_d(s) = s f_d(s)`, the norm of the image of a vector of norm `s`.
///
/// Strictly increasing from 0 toward 1. Once `1 - g` drops below the
/// resolution of doubles (`s^2` around 35 for `d = 1`) the value saturates at
/// [`G_MAX`], keeping it inside `[0, 1)`.
pub fn radial_map(s: f64, d: u32) -> f64 {
    if s < SMALL_RADIUS {
        return s * radial_profile(s, d);
    }
    gamma_p_int(d, s * s)
        .powf(1.0 / (2.0 * d as f64))
        .min(G_MAX)
}

/// The radial profile
/// `f_d(t) = (1/t) (1 - e^{-t^2} sum_{k<d} t^{2k}/k!)^{1/(2d)}`.
pub fn radial_profile(t: f64, d: u32) -> f64 {
    assert!(d >= 1, "dimension must be at least 1");
    assert!(t >= 0.0, "radius must be nonnegative");
    if t < SMALL_RADIUS {
        // 1 - e^{-t^2} sum = t^{2d}/d! (1 + O(t^2))
        return (-ln_factorial(d) / (2.0 * d as f64)).exp();
    }
    radial_map(t, d) / t
}

fn rescale(z: &CVector, g: f64, r: f64) -> BallPoint {
    let g = g.min(G_MAX);
    BallPoint(z * Complex64::new(g / r, 0.0))
}

/// `w = z f_d(|z|)`.
pub fn theta2(z: &GaussianVector) -> BallPoint {
    let d = z.dim() as u32;
    let v = z.as_vector();
    let r = v.norm();
    if r == 0.0 {
        return BallPoint(v.clone());
    }
    if r < SMALL_RADIUS {
        return BallPoint(v * Complex64::new(radial_profile(r, d), 0.0));
    }
    rescale(v, radial_map(r, d), r)
}

/// CDF of a chi-squared variable with an even number of degrees of freedom,
/// `1 - e^{-y/2} sum_{k < dof/2} (y/2)^k / k!`.
///
/// Below the mean the equivalent positive series is summed instead of the
/// difference, so tiny probabilities keep their relative accuracy.
pub fn chi2_cdf(y: f64, dof: u32) -> Result<f64> {
    if dof == 0 || !dof.is_multiple_of(2) {
        return Err(Error::OddDegreesOfFreedom(dof));
    }
    let k = dof / 2;
    let x = 0.5 * y.max(0.0);
    if x >= k as f64 {
        Ok(1.0 - gamma_q_tail(k, x))
    } else {
        Ok(gamma_p_int(k, x))
    }
}

/// The chi-squared construction: `w = (z/|z|) F_{chi2(2d)}(2|z|^2)^{1/(2d)}`.
pub fn theta2_via_chi2(z: &GaussianVector) -> Result<BallPoint> {
    let v = z.as_vector();
    let r = v.norm();
    if r == 0.0 {
        return Err(Error::ZeroVector);
    }
    let d = z.dim() as u32;
    let cdf = chi2_cdf(2.0 * r * r, 2 * d)?;
    Ok(rescale(v, cdf.powf(1.0 / (2.0 * d as f64)), r))
}

/// Solves `g_d(s) = target` for `s >= 0` by bisection.
pub fn invert_radial_map(target: f64, d: u32) -> Result<f64> {
    if !(target < 1.0) {
        return Err(Error::OutsideBall { norm: target });
    }
    if target <= 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while radial_map(hi, d) < target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    let mut iter = 0;
    while hi - lo > BISECTION_WIDTH && iter < BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if radial_map(mid, d) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
    }
    Ok(0.5 * (lo + hi))
}

/// Inverse of [`theta2`]: `z = s w/|w|` with `g_d(s) = |w|`.
pub fn theta2_inv(w: &BallPoint) -> GaussianVector {
    let v = w.as_vector();
    let n = v.norm();
    if n == 0.0 {
        return GaussianVector::new(v.clone()).unwrap();
    }
    // |w| < 1 holds by construction
    let s = invert_radial_map(n, w.dim() as u32).unwrap();
    GaussianVector::new(v * Complex64::new(s / n, 0.0)).unwrap()
}
