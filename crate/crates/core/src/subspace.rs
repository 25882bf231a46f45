//! Linear subspaces of `Tⁿ` given by an independent spanning set.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Backend;
use crate::matrix::{unit_vector, Matrix};

#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T> {
    ambient: usize,
    basis: Vec<Vec<T>>,
}

impl<T: Backend> Subspace<T> {
    /// Checks that every vector has the ambient length and that the set is independent.
    pub fn new(ambient: usize, basis: Vec<Vec<T>>, tol: f64) -> Result<Self> {
        if let Some(bad) = basis.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: bad.len(),
            });
        }
        if !basis.is_empty() {
            let rank = T::rank(&Matrix::from_columns(ambient, &basis), tol);
            if rank < basis.len() {
                return Err(Error::DependentBasis {
                    rank,
                    count: basis.len(),
                });
            }
        }
        Ok(Subspace { ambient, basis })
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient: usize, vectors: &[Vec<T>], tol: f64) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_columns(ambient, vectors);
        let basis = T::column_space(&m, tol);
        Subspace { ambient, basis }
    }

    pub(crate) fn from_basis_unchecked(ambient: usize, basis: Vec<Vec<T>>) -> Self {
        Subspace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|k| unit_vector(ambient, k)).collect(),
        }
    }

    /// Span of standard basis vectors `e_k` (zero-based indices).
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        Subspace {
            ambient,
            basis: indices.iter().map(|&k| unit_vector(ambient, k)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    /// `ambient × dim` matrix with the basis as columns.
    pub fn basis_matrix(&self) -> Matrix<T> {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &[T], tol: f64) -> bool {
        if v.iter().all(|x| x.is_negligible(tol)) {
            return true;
        }
        if self.basis.is_empty() {
            return false;
        }
        let mut cols = self.basis.clone();
        cols.push(v.to_vec());
        T::rank(&Matrix::from_columns(self.ambient, &cols), tol) == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace<T>, tol: f64) -> bool {
        other.basis.iter().all(|v| self.contains(v, tol))
    }

    pub fn same_span(&self, other: &Subspace<T>, tol: f64) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other, tol)
    }

    /// Span of `A·basis`.
    pub fn image(&self, a: &Matrix<T>, tol: f64) -> Subspace<T> {
        let images: Vec<Vec<T>> = self.basis.iter().map(|v| a.mul_vec(v)).collect();
        Subspace::span(a.rows(), &images, tol)
    }

    /// `A·W ⊆ W`.
    pub fn is_invariant_under(&self, a: &Matrix<T>, tol: f64) -> bool {
        self.basis.iter().all(|v| self.contains(&a.mul_vec(v), tol))
    }

    /// Euclidean orthogonal complement.
    pub fn orthogonal_complement(&self, tol: f64) -> Subspace<T> {
        if self.basis.is_empty() {
            return Self::full(self.ambient);
        }
        T::kernel(&self.basis_matrix().transpose(), tol)
    }

    pub fn intersection(&self, other: &Subspace<T>, tol: f64) -> Subspace<T> {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ambient);
        }
        let mut cols = self.basis.clone();
        cols.extend(
            other
                .basis
                .iter()
                .map(|v| v.iter().map(|x| -x.clone()).collect()),
        );
        let stacked = Matrix::from_columns(self.ambient, &cols);
        let null = T::kernel(&stacked, tol);
        let vectors: Vec<Vec<T>> = null
            .basis
            .iter()
            .map(|c| {
                let mut v = vec![T::zero(); self.ambient];
                for (k, b) in self.basis.iter().enumerate() {
                    crate::matrix::axpy(&c[k], b, &mut v);
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vectors, tol)
    }

    pub fn to_f64(&self) -> Subspace<f64> {
        Subspace {
            ambient: self.ambient,
            basis: self
                .basis
                .iter()
                .map(|v| v.iter().map(Field::as_f64).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, Rational};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn dependent_basis_rejected() {
        let r = Subspace::new(3, vec![v(&[1, 0, 0]), v(&[2, 0, 0])], 0.0);
        assert!(matches!(
            r,
            Err(Error::DependentBasis { rank: 1, count: 2 })
        ));
    }

    #[test]
    fn complement_and_intersection() {
        let w = Subspace::coordinate(4, &[0, 2]);
        let c = w.orthogonal_complement(0.0);
        assert!(c.same_span(&Subspace::coordinate(4, &[1, 3]), 0.0));
        let u = Subspace::new(4, vec![v(&[1, 1, 0, 0]), v(&[0, 0, 1, 0])], 0.0).unwrap();
        let i = u.intersection(&w, 0.0);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&[0, 0, 1, 0]), 0.0));
    }

    #[test]
    fn invariance_under_j() {
        let j = Matrix::<Rational>::symplectic_j(2);
        assert!(Subspace::coordinate(4, &[0, 2]).is_invariant_under(&j, 0.0));
        assert!(!Subspace::coordinate(4, &[0, 1]).is_invariant_under(&j, 0.0));
    }
}
