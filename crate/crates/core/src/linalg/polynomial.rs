use num_traits::{One, Zero};

use crate::field::Rational;
use crate::linalg::elimination::rref;
use crate::matrix::Matrix;
use crate::poly::Poly;

/// `det(xI − A)` by the Faddeev–LeVerrier recurrence, exact over ℚ.
pub fn characteristic_polynomial(a: &Matrix<Rational>) -> Poly {
    let n = a.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = Matrix::<Rational>::zeros(n, n);
    let ident = Matrix::<Rational>::identity(n);
    for k in 1..=n {
        m = &(a * &m) + &ident.scale(&coeffs[n - k + 1]);
        let am = a * &m;
        coeffs[n - k] = -am.trace() / Rational::from_integer((k as i64).into());
    }
    Poly::new(coeffs)
}

/// Monic minimal polynomial: the first linear dependency among
/// `I, A, A², …` flattened to vectors.
pub fn minimal_polynomial(a: &Matrix<Rational>) -> Poly {
    let n = a.rows();
    if n == 0 {
        return Poly::one();
    }
    let mut powers: Vec<Vec<Rational>> =
        vec![Matrix::<Rational>::identity(n).entries().cloned().collect()];
    let mut current = Matrix::<Rational>::identity(n);
    for d in 1..=n {
        current = &current * a;
        let flat: Vec<Rational> = current.entries().cloned().collect();
        powers.push(flat);
        // columns are I, A, …, A^d; dependency exists iff the kernel is nontrivial
        let stacked = Matrix::from_columns(n * n, &powers);
        let (r, pivots) = rref(&stacked, 0.0);
        if pivots.len() == d {
            // the last column is the free one; kernel vector has 1 at index d
            let mut c = vec![Rational::zero(); d + 1];
            c[d] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                c[pc] = -r[(row, d)].clone();
            }
            return Poly::new(c);
        }
    }
    unreachable!("Cayley–Hamilton bounds the minimal polynomial degree by n")
}

/// `p(A)` by Horner's rule.
pub fn poly_eval_matrix(p: &Poly, a: &Matrix<Rational>) -> Matrix<Rational> {
    let n = a.rows();
    let ident = Matrix::<Rational>::identity(n);
    p.coeffs()
        .iter()
        .rev()
        .fold(Matrix::zeros(n, n), |acc, c| &(&acc * a) + &ident.scale(c))
}
