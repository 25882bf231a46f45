//! Skew Gram–Schmidt: a basis `P` with `PᵀΩP = J`, hence `Ω = QJQᵀ` for `Q = P⁻ᵀ`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Tolerance;
use crate::matrix::{dot, unit_vector, Matrix};

fn omega<T: Field>(m: &Matrix<T>, x: &[T], y: &[T]) -> T {
    dot(x, &m.mul_vec(y))
}

/// Columns `e₁…eₙ, f₁…fₙ` with `eₖᵀΩfₖ = −1` and all other pairings zero,
/// i.e. `PᵀΩP = J`.
pub fn symplectic_basis<T: Field>(omega_m: &Matrix<T>, tol: &Tolerance) -> Result<Matrix<T>> {
    let dim = omega_m.ensure_square()?;
    if dim % 2 != 0 {
        return Err(Error::OddDimension(dim));
    }
    let abs = tol.absolute_for(omega_m);
    if !omega_m.is_skew(abs) {
        return Err(Error::NotSkew {
            deviation: omega_m.skew_defect(),
        });
    }
    let n = dim / 2;
    let mut pool: Vec<Vec<T>> = (0..dim).map(|k| unit_vector(dim, k)).collect();
    let mut es = Vec::with_capacity(n);
    let mut fs = Vec::with_capacity(n);
    while !pool.is_empty() {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..pool.len() {
            for j in (i + 1)..pool.len() {
                let w = omega(omega_m, &pool[i], &pool[j]);
                if w.is_negligible(abs) {
                    continue;
                }
                let mag = w.magnitude();
                if best.is_none_or(|(_, _, m)| mag > m) {
                    best = Some((i, j, mag));
                }
            }
        }
        let Some((i, j, _)) = best else {
            return Err(Error::Singular(format!(
                "skew form degenerate: {} of {} directions left unpaired",
                pool.len(),
                dim
            )));
        };
        let y = pool.remove(j);
        let x = pool.remove(i);
        let w = omega(omega_m, &y, &x);
        let e = x;
        let f: Vec<T> = y.iter().map(|v| v.clone() / w.clone()).collect();
        // v ↦ v + ω(v,f)e − ω(v,e)f kills both pairings
        for v in pool.iter_mut() {
            let a = omega(omega_m, v, &f);
            let b = omega(omega_m, v, &e);
            for k in 0..dim {
                v[k] = v[k].clone() + a.clone() * e[k].clone() - b.clone() * f[k].clone();
            }
        }
        es.push(e);
        fs.push(f);
    }
    es.extend(fs);
    Ok(Matrix::from_columns(dim, &es))
}

/// Invertible `Q` with `QJQᵀ = Ω`.
pub fn symplectic_reduction<T: Field>(omega_m: &Matrix<T>, tol: &Tolerance) -> Result<Matrix<T>> {
    let p = symplectic_basis(omega_m, tol)?;
    let n = omega_m.rows() / 2;
    // Q = P⁻ᵀ = −ΩPJ
    let q = -&(&(omega_m * &p) * &Matrix::symplectic_j(n));
    let resid = &(&(&q * &Matrix::symplectic_j(n)) * &q.transpose()) - omega_m;
    let abs = tol.absolute_for(omega_m);
    if !resid.is_zero_matrix(abs * (1.0 + omega_m.norm_inf())) {
        return Err(Error::Singular(format!(
            "reduction residual {:e} exceeds tolerance",
            resid.max_abs()
        )));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, Rational};

    fn check<T: Field>(om: &Matrix<T>, q: &Matrix<T>, tol: f64) {
        let n = om.rows() / 2;
        let back = &(q * &Matrix::symplectic_j(n)) * &q.transpose();
        assert!((&back - om).is_zero_matrix(tol), "{back:?}");
    }

    #[test]
    fn j_reduces_to_identity() {
        let t = Tolerance::default();
        let j = Matrix::<Rational>::symplectic_j(3);
        assert_eq!(symplectic_reduction(&j, &t).unwrap(), Matrix::identity(6));
    }

    #[test]
    fn twice_j() {
        let t = Tolerance::default();
        let om = Matrix::<Rational>::symplectic_j(2).scale(&int(2));
        let q = symplectic_reduction(&om, &t).unwrap();
        check(&om, &q, 0.0);
        let omf = Matrix::<f64>::symplectic_j(2).scale(&2.0);
        let qf = symplectic_reduction(&omf, &t).unwrap();
        check(&omf, &qf, 1e-12);
    }

    #[test]
    fn generic_skew() {
        let om = Matrix::from_i64_rows(&[
            &[0, 3, -1, 2],
            &[-3, 0, 5, 1],
            &[1, -5, 0, 4],
            &[-2, -1, -4, 0],
        ]);
        let q = symplectic_reduction(&om, &Tolerance::default()).unwrap();
        check(&om, &q, 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        let t = Tolerance::default();
        let odd = Matrix::<Rational>::zeros(3, 3);
        assert!(matches!(
            symplectic_reduction(&odd, &t),
            Err(Error::OddDimension(3))
        ));
        let sing = Matrix::<Rational>::zeros(2, 2);
        assert!(matches!(
            symplectic_reduction(&sing, &t),
            Err(Error::Singular(_))
        ));
        let sym = Matrix::<Rational>::identity(2);
        assert!(matches!(
            symplectic_reduction(&sym, &t),
            Err(Error::NotSkew { .. })
        ));
    }
}
