//! Thin wrappers over nalgebra's Hermitian eigensolver and SVD with the
//! ordering and phase conventions the rest of the module relies on.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Eigenpairs of a Hermitian matrix, eigenvalues descending. Each
/// eigenvector is rotated so its first entry of (numerically) largest modulus
/// is real and positive, which pins the phase deterministically.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    // Symmetrise so tiny anti-Hermitian noise cannot leak into the solver.
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(i);
        let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let pivot = v
            .iter()
            .find(|z| z.norm() >= peak * (1.0 - 1e-9))
            .copied()
            .unwrap_or(ONE);
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            ONE
        };
        for r in 0..n {
            vectors[(r, col)] = v[r] * phase;
        }
    }
    (values, vectors)
}

/// Singular values, descending. Empty for degenerate shapes.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Whether the columns of `m` are linearly independent: the smallest
/// singular value exceeds `tol` times the largest.
pub fn has_full_column_rank(m: &CMatrix, tol: f64) -> bool {
    if m.ncols() == 0 {
        return true;
    }
    if m.ncols() > m.nrows() {
        return false;
    }
    let s = singular_values(m);
    let (max, min) = (s[0], s[s.len() - 1]);
    max > 0.0 && min > tol * max
}

/// Extends the orthonormal columns of `basis` (in `C^n`) by standard basis
/// vectors orthogonalised against everything kept so far, returning only the
/// new columns: an orthonormal basis of the orthogonal complement.
pub fn orthonormal_complement(basis: &CMatrix) -> CMatrix {
    let n = basis.nrows();
    let target = n - basis.ncols();
    let mut kept: Vec<nalgebra::DVector<Complex64>> =
        basis.column_iter().map(|c| c.into_owned()).collect();
    let mut extra = Vec::with_capacity(target);
    for k in 0..n {
        if extra.len() == target {
            break;
        }
        let mut v = nalgebra::DVector::<Complex64>::zeros(n);
        v[k] = ONE;
        // Two passes of classical Gram-Schmidt.
        for _ in 0..2 {
            for q in &kept {
                let overlap = q.dotc(&v);
                v -= q * overlap;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            v /= Complex64::new(norm, 0.0);
            kept.push(v.clone());
            extra.push(v);
        }
    }
    let mut out = CMatrix::zeros(n, extra.len());
    for (c, v) in extra.iter().enumerate() {
        out.set_column(c, v);
    }
    out
}

/// Kronecker product, left factor major.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigen_sorted_descending_and_reconstructs() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!((vals[0] - 3.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            2,
            vals.iter().map(|&v| c(v, 0.0)),
        ));
        let back = &vecs * d * vecs.adjoint();
        assert!(max_abs_diff(&back, &m) < 1e-12);
        // Phase convention: the pivot entry is real positive.
        for col in vecs.column_iter() {
            let pivot = col.iter().find(|z| z.norm() > 0.5).unwrap();
            assert!(pivot.im.abs() < 1e-12 && pivot.re > 0.0);
        }
    }

    #[test]
    fn complement_is_orthonormal() {
        let mut basis = CMatrix::zeros(3, 1);
        basis[(0, 0)] = c(0.6, 0.0);
        basis[(1, 0)] = c(0.0, 0.8);
        let q = orthonormal_complement(&basis);
        assert_eq!(q.ncols(), 2);
        let gram = q.adjoint() * &q;
        assert!(max_abs_diff(&gram, &CMatrix::identity(2, 2)) < 1e-12);
        assert!(max_abs(&(basis.adjoint() * &q)) < 1e-12);
    }

    #[test]
    fn rank_test() {
        let m = CMatrix::from_row_slice(2, 2, &[ONE, ONE, ONE, ONE]);
        assert!(!has_full_column_rank(&m, 1e-9));
        assert!(has_full_column_rank(&CMatrix::identity(3, 2), 1e-9));
        assert!(!has_full_column_rank(&CMatrix::zeros(2, 1), 1e-9));
        assert!(has_full_column_rank(&CMatrix::zeros(2, 0), 1e-9));
    }
}
