//! Float kernels delegated to nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::linalg::IndexReport;
use crate::matrix::Matrix;

pub(crate) fn eigen_inertia(b: &Matrix<f64>, tol: f64) -> IndexReport {
    let eig = SymmetricEigen::new(b.to_nalgebra());
    let (mut neg, mut zero, mut pos) = (0, 0, 0);
    for &v in eig.eigenvalues.iter() {
        if v < -tol {
            neg += 1;
        } else if v > tol {
            pos += 1;
        } else {
            zero += 1;
        }
    }
    IndexReport::new(neg, zero, pos)
}

/// Pads with zero rows so the SVD returns a full right basis.
fn padded(a: &Matrix<f64>) -> DMatrix<f64> {
    let rows = a.rows().max(a.cols());
    DMatrix::from_fn(
        rows,
        a.cols(),
        |i, j| if i < a.rows() { a[(i, j)] } else { 0.0 },
    )
}

pub fn singular_values(a: &Matrix<f64>) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = padded(a).singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s.truncate(a.rows().min(a.cols()));
    s
}

pub(crate) fn svd_rank(a: &Matrix<f64>, tol: f64) -> usize {
    singular_values(a).into_iter().filter(|&s| s > tol).count()
}

pub(crate) fn svd_kernel(a: &Matrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let n = a.cols();
    if n == 0 {
        return Vec::new();
    }
    if a.rows() == 0 {
        return (0..n).map(|k| crate::matrix::unit_vector(n, k)).collect();
    }
    let svd = padded(a).svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol)
        .map(|(k, _)| (0..n).map(|j| v_t[(k, j)]).collect())
        .collect()
}

pub(crate) fn svd_column_space(a: &Matrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    let m = a.to_nalgebra();
    // left singular vectors of a tall-or-square copy
    let (work, transpose) = if m.nrows() >= m.ncols() {
        (m, false)
    } else {
        (m.transpose(), true)
    };
    let svd = work.svd(!transpose, transpose);
    let vectors: Vec<Vec<f64>> = if transpose {
        let v_t = svd.v_t.expect("requested V");
        svd.singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > tol)
            .map(|(k, _)| v_t.row(k).iter().copied().collect())
            .collect()
    } else {
        let u = svd.u.expect("requested U");
        svd.singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > tol)
            .map(|(k, _)| u.column(k).iter().copied().collect())
            .collect()
    };
    vectors
}

/// Eigenpairs of a complex Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// `vectors[k]` pairs with `values[k]`.
    pub vectors: Vec<Vec<Complex64>>,
}

pub fn hermitian_eigen(h: &DMatrix<Complex64>) -> HermitianEigen {
    let n = h.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: Vec::new(),
        };
    }
    // force exact Hermitian symmetry before the solver sees it
    let sym = DMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    HermitianEigen {
        values: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        vectors: order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
            .collect(),
    }
}

pub(crate) fn complex_rank(a: &DMatrix<Complex64>, tol: f64) -> (usize, Vec<f64>) {
    if a.nrows() == 0 {
        return (0, Vec::new());
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    (s.iter().filter(|&&v| v > tol).count(), s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_kernel_of_wide_matrix() {
        let a = Matrix::from_f64_rows(&[&[1.0, 1.0, 0.0]]);
        let k = svd_kernel(&a, 1e-12);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((v[0] + v[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn hermitian_eigen_of_krein_form() {
        // G = i·J for n = 1
        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        let g = DMatrix::from_row_slice(2, 2, &[z, -i, i, z]);
        let e = hermitian_eigen(&g);
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }
}
