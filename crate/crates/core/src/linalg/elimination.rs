use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// Reduced row echelon form with partial pivoting on magnitude.
/// Returns the reduced matrix and the pivot columns.
pub fn rref<T: Field>(a: &Matrix<T>, tol: f64) -> (Matrix<T>, Vec<usize>) {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !m[(i, c)].is_negligible(tol))
            .max_by(|&i, &j| m[(i, c)].magnitude().total_cmp(&m[(j, c)].magnitude()));
        let Some(p) = best else {
            for i in r..rows {
                m[(i, c)] = T::zero();
            }
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = m[(p, j)].clone();
                m[(p, j)] = m[(r, j)].clone();
                m[(r, j)] = tmp;
            }
        }
        let piv = m[(r, c)].clone();
        for j in c..cols {
            m[(r, j)] = m[(r, j)].clone() / piv.clone();
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..cols {
                let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                m[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank_rref<T: Field>(a: &Matrix<T>, tol: f64) -> usize {
    rref(a, tol).1.len()
}

/// Null-space basis read off the RREF: one vector per free column.
pub fn kernel_rref<T: Field>(a: &Matrix<T>, tol: f64) -> Vec<Vec<T>> {
    let (m, pivots) = rref(a, tol);
    let cols = a.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Original columns at the pivot positions.
pub fn column_space_rref<T: Field>(a: &Matrix<T>, tol: f64) -> Vec<Vec<T>> {
    let (_, pivots) = rref(a, tol);
    pivots.into_iter().map(|c| a.column(c)).collect()
}

/// Solves `A X = B` for square nonsingular `A`.
pub fn solve<T: Field>(a: &Matrix<T>, b: &Matrix<T>, tol: f64) -> Result<Matrix<T>> {
    let n = a.ensure_square()?;
    if b.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.rows(),
        });
    }
    let aug = Matrix::from_fn(n, n + b.cols(), |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[(i, j - n)].clone()
        }
    });
    let (m, pivots) = rref(&aug, tol);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular(format!(
            "rank {} < {}",
            pivots.iter().filter(|&&p| p < n).count(),
            n
        )));
    }
    Ok(Matrix::from_fn(n, b.cols(), |i, j| m[(i, n + j)].clone()))
}

pub fn inverse<T: Field>(a: &Matrix<T>, tol: f64) -> Result<Matrix<T>> {
    let n = a.ensure_square()?;
    solve(a, &Matrix::identity(n), tol)
}

/// Determinant by Gaussian elimination with magnitude pivoting.
pub fn determinant<T: Field>(a: &Matrix<T>) -> Result<T> {
    let n = a.ensure_square()?;
    let mut m = a.clone();
    let mut det = T::one();
    for c in 0..n {
        let p = (c..n)
            .filter(|&i| !m[(i, c)].is_zero())
            .max_by(|&i, &j| m[(i, c)].magnitude().total_cmp(&m[(j, c)].magnitude()));
        let Some(p) = p else {
            return Ok(T::zero());
        };
        if p != c {
            for j in 0..n {
                let t = m[(p, j)].clone();
                m[(p, j)] = m[(c, j)].clone();
                m[(c, j)] = t;
            }
            det = -det;
        }
        let piv = m[(c, c)].clone();
        det = det * piv.clone();
        for i in (c + 1)..n {
            let f = m[(i, c)].clone() / piv.clone();
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                m[(i, j)] = v;
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, Rational};

    #[test]
    fn kernel_of_rank_deficient() {
        let a = Matrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = kernel_rref(&a, 0.0);
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|x| *x == int(0)));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Matrix::from_i64_rows(&[&[2, 1], &[7, 4]]);
        let inv = inverse(&a, 0.0).unwrap();
        assert_eq!(&a * &inv, Matrix::<Rational>::identity(2));
        let sing = Matrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert!(matches!(inverse(&sing, 0.0), Err(Error::Singular(_))));
    }

    #[test]
    fn determinants() {
        let a = Matrix::from_i64_rows(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 1]]);
        assert_eq!(determinant(&a).unwrap(), int(-3));
        assert_eq!(
            determinant(&Matrix::from_i64_rows(&[&[1, 2], &[2, 4]])).unwrap(),
            int(0)
        );
    }

    #[test]
    fn float_solve() {
        let a = Matrix::from_f64_rows(&[&[4.0, 1.0], &[1.0, 3.0]]);
        let b = Matrix::from_f64_rows(&[&[1.0], &[2.0]]);
        let x = solve(&a, &b, 1e-12).unwrap();
        let r = &(&a * &x) - &b;
        assert!(r.max_abs() < 1e-14);
    }
}
