//! Dense linear algebra over the two backends.
//!
//! Every operation used by the stability, spectral-flow, and n-body modules
//! goes through [`Backend`], implemented for [`Rational`] (exact, tolerances
//! ignored) and `f64` (tolerance-driven, eigen/SVD work done by nalgebra).

mod elimination;
mod float;
mod ldl;
mod polynomial;
mod spectrum;
mod symplectic;

use serde::Serialize;

pub use elimination::{
    column_space_rref, determinant, inverse, kernel_rref, rank_rref, rref, solve,
};
pub use float::{hermitian_eigen, singular_values, HermitianEigen};
pub use ldl::{ldlt, Ldl, Pivot};
pub use polynomial::{characteristic_polynomial, minimal_polynomial, poly_eval_matrix};
pub use spectrum::{AxisTest, Semisimplicity, Spectrum, SpectrumEntry, DEFAULT_BAND_FACTOR};
pub use symplectic::{symplectic_basis, symplectic_reduction};

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::matrix::Matrix;
use crate::subspace::Subspace;

/// Relative tolerance for float decisions: `tol = relative · (1 + ‖A‖_∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    pub relative: f64,
    /// Values within `(tol, band_factor·tol)` are reported as indeterminate.
    pub band_factor: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            relative: 1e-8,
            band_factor: DEFAULT_BAND_FACTOR,
        }
    }
}

impl Tolerance {
    pub fn with_relative(relative: f64) -> Self {
        Tolerance {
            relative,
            ..Self::default()
        }
    }

    /// Absolute tolerance for decisions about `a`; zero on the exact backend.
    pub fn absolute_for<T: Field>(&self, a: &Matrix<T>) -> f64 {
        if T::is_exact() {
            0.0
        } else {
            self.relative * (1.0 + a.norm_inf())
        }
    }
}

/// Morse index, nullity, and coindex of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IndexReport {
    pub morse_index: usize,
    pub nullity: usize,
    pub coindex: usize,
    pub subspace_dim: usize,
}

impl IndexReport {
    pub fn new(morse_index: usize, nullity: usize, coindex: usize) -> Self {
        IndexReport {
            morse_index,
            nullity,
            coindex,
            subspace_dim: morse_index + nullity + coindex,
        }
    }

    /// `coindex − morse_index`.
    pub fn signature(&self) -> i64 {
        self.coindex as i64 - self.morse_index as i64
    }
}

/// Operations whose algorithm differs between exact and float arithmetic.
pub trait Backend: Field {
    fn inertia_of(b: &Matrix<Self>, tol: f64) -> IndexReport;

    fn rank(a: &Matrix<Self>, tol: f64) -> usize;

    fn kernel(a: &Matrix<Self>, tol: f64) -> Subspace<Self>;

    /// Independent columns spanning the column space.
    fn column_space(a: &Matrix<Self>, tol: f64) -> Vec<Vec<Self>>;

    fn spectrum_of(a: &Matrix<Self>, tol: f64) -> Spectrum;

    fn semisimplicity_of(a: &Matrix<Self>, tol: &Tolerance) -> Semisimplicity;

    /// Are all eigenvalues on the imaginary axis?
    fn imaginary_axis_test(a: &Matrix<Self>, tol: &Tolerance) -> AxisTest;
}

impl Backend for Rational {
    fn inertia_of(b: &Matrix<Self>, _tol: f64) -> IndexReport {
        ldlt(b, 0.0).inertia()
    }

    fn rank(a: &Matrix<Self>, _tol: f64) -> usize {
        rank_rref(a, 0.0)
    }

    fn kernel(a: &Matrix<Self>, _tol: f64) -> Subspace<Self> {
        Subspace::from_basis_unchecked(a.cols(), kernel_rref(a, 0.0))
    }

    fn column_space(a: &Matrix<Self>, _tol: f64) -> Vec<Vec<Self>> {
        column_space_rref(a, 0.0)
    }

    fn spectrum_of(a: &Matrix<Self>, _tol: f64) -> Spectrum {
        spectrum::exact_spectrum(a)
    }

    fn semisimplicity_of(a: &Matrix<Self>, _tol: &Tolerance) -> Semisimplicity {
        spectrum::exact_semisimplicity(a)
    }

    fn imaginary_axis_test(a: &Matrix<Self>, _tol: &Tolerance) -> AxisTest {
        spectrum::exact_axis_test(a)
    }
}

impl Backend for f64 {
    fn inertia_of(b: &Matrix<Self>, tol: f64) -> IndexReport {
        float::eigen_inertia(b, tol)
    }

    fn rank(a: &Matrix<Self>, tol: f64) -> usize {
        float::svd_rank(a, tol)
    }

    fn kernel(a: &Matrix<Self>, tol: f64) -> Subspace<Self> {
        Subspace::from_basis_unchecked(a.cols(), float::svd_kernel(a, tol))
    }

    fn column_space(a: &Matrix<Self>, tol: f64) -> Vec<Vec<Self>> {
        float::svd_column_space(a, tol)
    }

    fn spectrum_of(a: &Matrix<Self>, tol: f64) -> Spectrum {
        spectrum::float_spectrum(a, tol)
    }

    fn semisimplicity_of(a: &Matrix<Self>, tol: &Tolerance) -> Semisimplicity {
        spectrum::float_semisimplicity(a, tol)
    }

    fn imaginary_axis_test(a: &Matrix<Self>, tol: &Tolerance) -> AxisTest {
        spectrum::float_axis_test(a, tol)
    }
}

/// Morse index, nullity, and coindex of a symmetric matrix.
///
/// Exact backend: pivoted LDLᵀ with 2×2 pivots, so the counts are exact.
/// Float backend: eigenvalues below `−tol`, within `±tol`, above `+tol`.
pub fn inertia<T: Backend>(b: &Matrix<T>, tol: &Tolerance) -> Result<IndexReport> {
    let abs = tol.absolute_for(b);
    let b = b.require_symmetric(abs)?;
    if b.rows() == 0 {
        return Ok(IndexReport::new(0, 0, 0));
    }
    Ok(T::inertia_of(&b, abs))
}

/// Null space of a square matrix.
pub fn kernel<T: Backend>(b: &Matrix<T>, tol: &Tolerance) -> Result<Subspace<T>> {
    b.ensure_square()?;
    Ok(T::kernel(b, tol.absolute_for(b)))
}

pub fn rank<T: Backend>(a: &Matrix<T>, tol: &Tolerance) -> usize {
    T::rank(a, tol.absolute_for(a))
}

/// Eigenvalues with algebraic multiplicities.
pub fn complex_spectrum<T: Backend>(a: &Matrix<T>, tol: &Tolerance) -> Result<Spectrum> {
    a.ensure_square()?;
    Ok(T::spectrum_of(a, tol.absolute_for(a)))
}

pub fn is_semisimple<T: Backend>(a: &Matrix<T>, tol: &Tolerance) -> Result<Semisimplicity> {
    a.ensure_square()?;
    Ok(T::semisimplicity_of(a, tol))
}

pub fn spectrum_on_imaginary_axis<T: Backend>(a: &Matrix<T>, tol: &Tolerance) -> Result<AxisTest> {
    a.ensure_square()?;
    Ok(T::imaginary_axis_test(a, tol))
}

/// Gram matrix `wᵢᵀ B wⱼ` of the form `B` on the basis of `W`.
pub fn restrict_form<T: Backend>(b: &Matrix<T>, w: &Subspace<T>) -> Result<Matrix<T>> {
    let n = b.ensure_square()?;
    if w.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.ambient_dim(),
        });
    }
    Ok(b.congruence(&w.basis_matrix()))
}

/// Matrix of the endomorphism `A|_W` in the basis of an `A`-invariant `W`:
/// solves `A·W = W·C` for `C`.
pub fn restrict_operator<T: Backend>(
    a: &Matrix<T>,
    w: &Subspace<T>,
    tol: f64,
) -> Result<Matrix<T>> {
    let basis = w.basis_matrix();
    let image = a * &basis;
    // W has full column rank, so the normal equations determine C
    let gram = &basis.transpose() * &basis;
    let rhs = &basis.transpose() * &image;
    let c = solve(&gram, &rhs, tol)?;
    let resid = &(&basis * &c) - &image;
    if !resid.is_zero_matrix(tol) {
        return Err(Error::Hypothesis(
            "subspace is not invariant under the operator".into(),
        ));
    }
    Ok(c)
}
