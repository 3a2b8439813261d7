//! Small dense complex linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Eigenvalues below this are treated as this value when raising a Hermitian
/// positive semidefinite matrix to a negative power.
pub const EIGEN_FLOOR: f64 = 1e-14;

/// `H^p` for a Hermitian positive semidefinite `H`, through its eigendecomposition.
pub fn hermitian_power(h: &CMatrix, p: f64) -> CMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let scaled: DVector<Complex64> = eig
        .eigenvalues
        .map(|l| Complex64::new(l.max(EIGEN_FLOOR).powf(p), 0.0));
    let v = &eig.eigenvectors;
    v * CMatrix::from_diagonal(&scaled) * v.adjoint()
}

/// Largest singular value.
pub fn operator_norm(w: &CMatrix) -> f64 {
    if w.is_empty() {
        return 0.0;
    }
    let gram = w.adjoint() * w;
    let eig = SymmetricEigen::new(gram);
    eig.eigenvalues.max().max(0.0).sqrt()
}

/// Unit eigenvector of a Hermitian matrix for its largest eigenvalue.
pub fn dominant_eigenvector(h: &CMatrix) -> CVector {
    let eig = SymmetricEigen::new(h.clone());
    let idx = eig.eigenvalues.imax();
    let v = eig.eigenvectors.column(idx).into_owned();
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// `|x^H y|` for vectors of equal length.
pub fn abs_inner(x: &CVector, y: &CVector) -> f64 {
    x.dotc(y).norm()
}

/// Chordal distance between the lines spanned by two unit vectors.
pub fn chordal_distance(x: &CVector, y: &CVector) -> f64 {
    let c = abs_inner(x, y);
    (1.0 - c * c).max(0.0).sqrt()
}

/// Flattens a complex matrix into reals, column-major, `(re, im)` per entry.
pub fn to_real(m: &CMatrix) -> Vec<f64> {
    m.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Inverse of [`to_real`].
pub fn from_real(rows: usize, cols: usize, v: &[f64]) -> CMatrix {
    assert_eq!(v.len(), 2 * rows * cols);
    CMatrix::from_iterator(
        rows,
        cols,
        v.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])),
    )
}

/// Determinant of a real square matrix stored row-major.
pub fn real_det(n: usize, data: &[f64]) -> f64 {
    DMatrix::from_row_slice(n, n, data).determinant()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_square_root_of_hermitian() {
        let h =
            CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.5, 0.5), c(0.5, -0.5), c(3.0, 0.0)]);
        let r = hermitian_power(&h, -0.5);
        let back = &r * &h * &r;
        assert!((back - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let w = CMatrix::from_row_slice(
            3,
            2,
            &[
                c(0.3, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, -0.7),
                c(0.0, 0.0),
                c(0.0, 0.0),
            ],
        );
        assert!((operator_norm(&w) - 0.7).abs() < 1e-14);
    }

    #[test]
    fn dominant_eigenvector_of_rank_one() {
        let x = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let h = &x * x.adjoint();
        let v = dominant_eigenvector(&h);
        assert!(chordal_distance(&v, &x) < 1e-12);
    }

    #[test]
    fn real_flattening_round_trips() {
        let m = CMatrix::from_row_slice(2, 1, &[c(1.0, 2.0), c(3.0, 4.0)]);
        assert_eq!(to_real(&m), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(from_real(2, 1, &to_real(&m)), m);
    }
}
