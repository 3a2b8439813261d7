#![allow(dead_code)]

use grasslattice::gaussmap::HypercubePoint;
use grasslattice::linalg::{real_det, CMatrix, CVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Central-difference Jacobian of `f: R^n -> R^m`, returned row-major `m x n`.
pub fn jacobian<F: Fn(&[f64]) -> Vec<f64>>(f: F, x: &[f64], h: f64) -> (usize, Vec<f64>) {
    let n = x.len();
    let m = f(x).len();
    let mut jac = vec![0.0; m * n];
    let mut xp = x.to_vec();
    for j in 0..n {
        xp[j] = x[j] + h;
        let fp = f(&xp);
        xp[j] = x[j] - h;
        let fm = f(&xp);
        xp[j] = x[j];
        for i in 0..m {
            jac[i * n + j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    (m, jac)
}

/// `|det|` of a square finite-difference Jacobian.
pub fn jacobian_det<F: Fn(&[f64]) -> Vec<f64>>(f: F, x: &[f64], h: f64) -> f64 {
    let (m, jac) = jacobian(f, x, h);
    assert_eq!(m, x.len(), "Jacobian must be square");
    real_det(m, &jac).abs()
}

pub fn complex_to_reals(v: &CVector) -> Vec<f64> {
    v.iter().flat_map(|c| [c.re, c.im]).collect()
}

pub fn reals_to_complex(v: &[f64]) -> CVector {
    CVector::from_iterator(
        v.len() / 2,
        v.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])),
    )
}

pub fn complex_gaussian<R: Rng>(rng: &mut R, n: usize) -> CVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CVector::from_fn(n, |_, _| {
        let re: f64 = rng.sample(rand_distr::StandardNormal);
        let im: f64 = rng.sample(rand_distr::StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

pub fn complex_gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let v = complex_gaussian(rng, rows * cols);
    CMatrix::from_iterator(rows, cols, v.iter().copied())
}

/// Uniform point of the open hypercube `(0,1)^{2d}`.
pub fn uniform_hypercube<R: Rng>(rng: &mut R, d: usize) -> HypercubePoint {
    let mut draw = || loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    };
    let a = (0..d).map(|_| draw()).collect();
    let b = (0..d).map(|_| draw()).collect();
    HypercubePoint::new(a, b).unwrap()
}

/// Uniform point of the open unit ball of `C^d`.
pub fn uniform_ball<R: Rng>(rng: &mut R, d: usize) -> CVector {
    let g = complex_gaussian(rng, d);
    let r = rng.random::<f64>().powf(1.0 / (2.0 * d as f64));
    &g * Complex64::new(r / g.norm(), 0.0)
}

/// Writes straight to the process stdout so the line shows up even when the
/// test harness captures `println!`.
pub fn report(line: &str) {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let _ = writeln!(lock, "{line}");
    let _ = lock.flush();
}
