//! Hypercube <-> complex Gaussian space by componentwise inverse transform
//! sampling.
//!
//! Each real coordinate in `(0, 1)` is pushed through the inverse CDF of a real
//! Gaussian with variance 1/2, so that a uniform point of `(0,1)^{2d}` becomes a
//! `CN(0, I_d)` vector.

use crate::error::{Error, Result};
use crate::linalg::CVector;
use num_complex::Complex64;
use std::f64::consts::PI;

/// A point of the open unit hypercube `(0,1)^{2d}`, split into the coordinates
/// feeding real parts (`a`) and imaginary parts (`b`).
#[derive(Debug, Clone, PartialEq)]
pub struct HypercubePoint {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl HypercubePoint {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        if a.is_empty() {
            return Err(Error::InvalidConfig(
                "hypercube dimension must be positive".into(),
            ));
        }
        if let Some(&bad) = a.iter().chain(&b).find(|&&u| !(u > 0.0 && u < 1.0)) {
            return Err(Error::OutsideUnitInterval(bad));
        }
        Ok(Self { a, b })
    }

    /// Builds a point from interleaved coordinates `(a_1, b_1, a_2, b_2, ...)`.
    pub fn from_interleaved(coords: &[f64]) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::LengthMismatch {
                expected: coords.len() + 1,
                got: coords.len(),
            });
        }
        let a = coords.iter().step_by(2).copied().collect();
        let b = coords.iter().skip(1).step_by(2).copied().collect();
        Self::new(a, b)
    }

    pub fn interleaved(&self) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .flat_map(|(&a, &b)| [a, b])
            .collect()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Complex dimension `d = T - 1`.
    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Largest coordinate difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.a
            .iter()
            .zip(&other.a)
            .chain(self.b.iter().zip(&other.b))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// A finite vector of `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianVector(CVector);

impl GaussianVector {
    pub fn new(z: CVector) -> Result<Self> {
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidConfig("non-finite Gaussian vector".into()));
        }
        Ok(Self(z))
    }

    pub fn from_slice(z: &[Complex64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(z))
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

/// CDF of a real Gaussian with variance 1/2: `F(t) = erfc(-t) / 2`.
pub fn gauss_cdf(t: f64) -> f64 {
    0.5 * libm::erfc(-t)
}

/// Density of the variance-1/2 Gaussian, `F'(t)`.
fn gauss_pdf(t: f64) -> f64 {
    (-t * t).exp() / PI.sqrt()
}

/// Inverse of [`gauss_cdf`] on `(0, 1)`.
pub fn gauss_icdf(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::OutsideUnitInterval(u));
    }
    if u > 0.5 {
        // 1 - u is exact for u in [0.5, 1)
        return Ok(-lower_icdf(1.0 - u));
    }
    Ok(lower_icdf(u))
}

/// Quantile for `u <= 0.5`: rational starting point, then Newton on `F`.
fn lower_icdf(u: f64) -> f64 {
    if u == 0.5 {
        return 0.0;
    }
    let mut t = std_normal_quantile_approx(u) * std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..2 {
        let pdf = gauss_pdf(t);
        if pdf == 0.0 {
            break;
        }
        t -= (gauss_cdf(t) - u) / pdf;
    }
    t
}

/// Acklam's rational approximation of the standard normal quantile
/// (relative error about 1.2e-9), used only as a Newton seed.
fn std_normal_quantile_approx(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// `z_k = F^{-1}(a_k) + j F^{-1}(b_k)`.
pub fn theta1(p: &HypercubePoint) -> GaussianVector {
    let z =
        p.a.iter()
            .zip(&p.b)
            .map(|(&a, &b)| {
                // coordinates are validated on construction
                Complex64::new(gauss_icdf(a).unwrap(), gauss_icdf(b).unwrap())
            })
            .collect::<Vec<_>>();
    GaussianVector(CVector::from_vec(z))
}

/// `a_k = F(Re z_k)`, `b_k = F(Im z_k)`.
///
/// Outputs are kept inside the open interval: far tails that round to 0 or 1
/// saturate at the nearest representable interior value.
pub fn theta1_inv(z: &GaussianVector) -> HypercubePoint {
    let open = |u: f64| u.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
    let a = z.0.iter().map(|c| open(gauss_cdf(c.re))).collect();
    let b = z.0.iter().map(|c| open(gauss_cdf(c.im))).collect();
    HypercubePoint { a, b }
}
