//! Spectral flow along paths of self-adjoint matrices, crossing operators,
//! relative Morse indices, and the Krein path `D_s = B + sG` with `G = iJ`.
//!
//! Paths with rational data (linear paths and Krein paths) locate crossings
//! as real roots of `det A(θ)`, a polynomial in `θ`. For the Krein path,
//! `det(B + sG) = p(is)` where `p` is the characteristic polynomial of `JB`.
//! Other paths are scanned on a grid of sorted eigenvalues; sorted
//! eigenvalues are `L`-Lipschitz with `L ≥ ‖A′‖`, so `[a, b]` is free of
//! crossings once `|λₖ(a)| + |λₖ(b)| > L(b − a)` for every `k`.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{rational_from_f64, Field, Rational};
use crate::linalg::{
    characteristic_polynomial, determinant, hermitian_eigen, inertia, kernel_rref, rank_rref,
    restrict_form, Backend, IndexReport, Tolerance,
};
use crate::matrix::Matrix;
use crate::poly::{compare_root, interpolate, isolate_real_roots, root_to_f64, Poly, RealRoot};
use crate::stability::{classify, Verdict};
use crate::subspace::Subspace;

pub type CMatrix = DMatrix<Complex64>;

pub fn to_complex<T: Field>(a: &Matrix<T>) -> CMatrix {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        Complex64::new(a[(i, j)].as_f64(), 0.0)
    })
}

/// `G = iJ`, Hermitian with `G² = I`.
pub fn krein_form(n: usize) -> CMatrix {
    let j = Matrix::<f64>::symplectic_j(n);
    DMatrix::from_fn(2 * n, 2 * n, |r, c| Complex64::new(0.0, j[(r, c)]))
}

fn exact_copy<T: Field>(a: &Matrix<T>) -> Option<Matrix<Rational>> {
    if !T::is_exact() {
        return None;
    }
    Some(Matrix::from_fn(a.rows(), a.cols(), |i, j| {
        a[(i, j)].exact_value().expect("exact backend")
    }))
}

/// Rational description of a path whose determinant is polynomial in θ.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactPath {
    /// `A(θ) = A₀ + θ(A₁ − A₀)`.
    Linear {
        a0: Matrix<Rational>,
        a1: Matrix<Rational>,
    },
    /// `A(s) = B + sG` on `[0, s_max]`.
    Krein {
        b: Matrix<Rational>,
        s_max: Rational,
    },
}

pub trait SelfAdjointPath: Sync {
    fn dimension(&self) -> usize;

    fn domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn evaluate(&self, theta: f64) -> CMatrix;

    fn derivative(&self, theta: f64) -> CMatrix;

    /// Upper bound for `‖A′(θ)‖₂` over the domain.
    fn derivative_bound(&self) -> f64;

    fn exact(&self) -> Option<ExactPath> {
        None
    }
}

#[derive(Clone, Debug)]
pub struct LinearPath {
    a0: Matrix<f64>,
    a1: Matrix<f64>,
    exact: Option<(Matrix<Rational>, Matrix<Rational>)>,
}

impl LinearPath {
    pub fn new<T: Backend>(a0: &Matrix<T>, a1: &Matrix<T>, tol: &Tolerance) -> Result<Self> {
        let n = a0.ensure_square()?;
        if a1.rows() != n || a1.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a1.rows(),
            });
        }
        let a0 = a0.require_symmetric(tol.absolute_for(a0))?;
        let a1 = a1.require_symmetric(tol.absolute_for(a1))?;
        let exact = exact_copy(&a0).zip(exact_copy(&a1));
        Ok(LinearPath {
            a0: a0.to_f64(),
            a1: a1.to_f64(),
            exact,
        })
    }

    pub fn start(&self) -> &Matrix<f64> {
        &self.a0
    }

    pub fn end(&self) -> &Matrix<f64> {
        &self.a1
    }
}

impl SelfAdjointPath for LinearPath {
    fn dimension(&self) -> usize {
        self.a0.rows()
    }

    fn evaluate(&self, theta: f64) -> CMatrix {
        let n = self.dimension();
        DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(
                self.a0[(i, j)] + theta * (self.a1[(i, j)] - self.a0[(i, j)]),
                0.0,
            )
        })
    }

    fn derivative(&self, _theta: f64) -> CMatrix {
        to_complex(&(&self.a1 - &self.a0))
    }

    fn derivative_bound(&self) -> f64 {
        (&self.a1 - &self.a0).frobenius_norm()
    }

    fn exact(&self) -> Option<ExactPath> {
        self.exact
            .clone()
            .map(|(a0, a1)| ExactPath::Linear { a0, a1 })
    }
}

#[derive(Clone, Debug)]
pub struct KreinPath {
    b: Matrix<f64>,
    exact: Option<Matrix<Rational>>,
    s_max: f64,
    g: CMatrix,
}

impl KreinPath {
    pub fn new<T: Backend>(b: &Matrix<T>, s_max: f64, tol: &Tolerance) -> Result<Self> {
        let dim = b.ensure_square()?;
        if dim % 2 != 0 {
            return Err(Error::OddDimension(dim));
        }
        if !(s_max > 0.0 && s_max.is_finite()) {
            return Err(Error::Invalid(format!(
                "s_max must be positive and finite, got {s_max}"
            )));
        }
        let b = b.require_symmetric(tol.absolute_for(b))?;
        Ok(KreinPath {
            exact: exact_copy(&b),
            b: b.to_f64(),
            s_max,
            g: krein_form(dim / 2),
        })
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }
}

impl SelfAdjointPath for KreinPath {
    fn dimension(&self) -> usize {
        self.b.rows()
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, self.s_max)
    }

    fn evaluate(&self, s: f64) -> CMatrix {
        to_complex(&self.b) + &self.g * Complex64::new(s, 0.0)
    }

    fn derivative(&self, _s: f64) -> CMatrix {
        self.g.clone()
    }

    fn derivative_bound(&self) -> f64 {
        1.0
    }

    fn exact(&self) -> Option<ExactPath> {
        let s_max = rational_from_f64(self.s_max)?;
        self.exact.clone().map(|b| ExactPath::Krein { b, s_max })
    }
}

/// A path given by closures; always handled by the float search.
pub struct FnPath<F, D> {
    pub dimension: usize,
    pub domain: (f64, f64),
    pub evaluate: F,
    pub derivative: D,
    pub derivative_bound: f64,
}

impl<F, D> SelfAdjointPath for FnPath<F, D>
where
    F: Fn(f64) -> CMatrix + Sync,
    D: Fn(f64) -> CMatrix + Sync,
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn evaluate(&self, theta: f64) -> CMatrix {
        (self.evaluate)(theta)
    }

    fn derivative(&self, theta: f64) -> CMatrix {
        (self.derivative)(theta)
    }

    fn derivative_bound(&self) -> f64 {
        self.derivative_bound
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingPosition {
    Start,
    Interior,
    End,
}

#[derive(Clone, Debug)]
pub struct Crossing {
    pub location: f64,
    pub exact_location: Option<Rational>,
    pub position: CrossingPosition,
    /// Multiplicity of the root of `det A(θ)` (exact paths only).
    pub multiplicity: Option<usize>,
    /// Orthonormal kernel basis of `A(θ)`.
    pub kernel: Vec<Vec<Complex64>>,
    pub exact_kernel: Option<Subspace<Rational>>,
    /// `A′(θ)` compressed to the kernel.
    pub crossing_operator: CMatrix,
    pub operator_eigenvalues: Vec<f64>,
    pub positive: usize,
    pub negative: usize,
    /// `dim E₊ − dim E₋`.
    pub signature: i64,
    pub regular: bool,
}

impl Crossing {
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowOptions {
    pub tol: Tolerance,
    /// Initial grid cells for the float search.
    pub grid: usize,
    pub bisection_budget: u32,
    pub max_evaluations: usize,
    pub force_float: bool,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            tol: Tolerance::default(),
            grid: 64,
            bisection_budget: 60,
            max_evaluations: 200_000,
            force_float: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowMethod {
    ExactRoots,
    FloatBisection,
}

#[derive(Clone, Debug)]
pub struct FlowReport {
    pub crossings: Vec<Crossing>,
    pub spectral_flow: i64,
    /// `−dim E₋(Cr[A(start)])`, zero when the start is nondegenerate.
    pub start_correction: i64,
    /// `+dim E₊(Cr[A(end)])`.
    pub end_correction: i64,
    pub method: FlowMethod,
}

fn norm2(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn abs_tol_at(tol: &Tolerance, m: &CMatrix) -> f64 {
    let inf = (0..m.nrows())
        .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    tol.relative * (1.0 + inf)
}

fn orthonormalize(vectors: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for u in &out {
                let c: Complex64 = u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= c * ui;
                }
            }
        }
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-12 {
            out.push(w.into_iter().map(|z| z / n).collect());
        }
    }
    out
}

fn compress(op: &CMatrix, basis: &[Vec<Complex64>]) -> CMatrix {
    let k = basis.len();
    let n = op.nrows();
    let v = DMatrix::from_fn(n, k, |i, j| basis[j][i]);
    v.adjoint() * op * v
}

/// Kernel basis of a Hermitian matrix: eigenvectors with `|λ| ≤ ktol`.
fn float_kernel(m: &CMatrix, ktol: f64) -> Vec<Vec<Complex64>> {
    let e = hermitian_eigen(m);
    e.values
        .iter()
        .zip(e.vectors)
        .filter(|(v, _)| v.abs() <= ktol)
        .map(|(_, vec)| vec)
        .collect()
}

fn position_of(theta: f64, domain: (f64, f64)) -> CrossingPosition {
    if theta <= domain.0 {
        CrossingPosition::Start
    } else if theta >= domain.1 {
        CrossingPosition::End
    } else {
        CrossingPosition::Interior
    }
}

/// Signature data of a Hermitian crossing operator in float arithmetic.
fn float_crossing(
    path: &dyn SelfAdjointPath,
    theta: f64,
    kernel: Vec<Vec<Complex64>>,
    tol: &Tolerance,
) -> Crossing {
    let d = path.derivative(theta);
    let op = compress(&d, &kernel);
    let eig = hermitian_eigen(&op);
    let reg_tol = tol.relative * (1.0 + path.derivative_bound());
    let positive = eig.values.iter().filter(|&&v| v > reg_tol).count();
    let negative = eig.values.iter().filter(|&&v| v < -reg_tol).count();
    Crossing {
        location: theta,
        exact_location: None,
        position: position_of(theta, path.domain()),
        multiplicity: None,
        regular: positive + negative == kernel.len(),
        kernel,
        exact_kernel: None,
        crossing_operator: op,
        operator_eigenvalues: eig.values,
        positive,
        negative,
        signature: positive as i64 - negative as i64,
    }
}

/// Crossings from the exact inertia of a rational crossing form on a rational kernel.
fn exact_crossing(
    path: &dyn SelfAdjointPath,
    theta: Rational,
    kernel: Subspace<Rational>,
    form: Matrix<Rational>,
    multiplicity: usize,
) -> Crossing {
    let r: IndexReport = crate::linalg::ldlt(&form, 0.0).inertia();
    let location = crate::field::rational_to_f64(&theta);
    let complex_basis: Vec<Vec<Complex64>> = kernel
        .basis()
        .iter()
        .map(|v| v.iter().map(|x| Complex64::new(x.as_f64(), 0.0)).collect())
        .collect();
    let basis = orthonormalize(&complex_basis);
    let op = compress(&path.derivative(location), &basis);
    let operator_eigenvalues = hermitian_eigen(&op).values;
    Crossing {
        location,
        exact_location: Some(theta),
        position: position_of(location, path.domain()),
        multiplicity: Some(multiplicity),
        kernel: basis,
        exact_kernel: Some(kernel),
        crossing_operator: op,
        operator_eigenvalues,
        positive: r.coindex,
        negative: r.morse_index,
        signature: r.signature(),
        regular: r.nullity == 0,
    }
}

/// Real roots of `f` in `[lo, hi]` with their multiplicities, ascending.
fn roots_in(f: &Poly, lo: &Rational, hi: &Rational) -> Vec<(Poly, RealRoot, usize)> {
    let mut out = Vec::new();
    for (g, mult) in f.square_free_decomposition() {
        for root in isolate_real_roots(&g) {
            if compare_root(&g, &root, lo) == Ordering::Less
                || compare_root(&g, &root, hi) == Ordering::Greater
            {
                continue;
            }
            out.push((g.clone(), root, mult));
        }
    }
    out.sort_by(|a, b| root_to_f64(&a.0, &a.1).total_cmp(&root_to_f64(&b.0, &b.1)));
    out
}

/// `det(A₀ + θD)` as a polynomial in θ, by interpolation at θ = 0, …, n.
pub fn linear_path_determinant(a0: &Matrix<Rational>, a1: &Matrix<Rational>) -> Poly {
    let d = a1 - a0;
    let n = a0.rows();
    let points: Vec<(Rational, Rational)> = (0..=n as i64)
        .map(|k| {
            let t = Rational::from_int(k);
            let m = a0 + &d.scale(&t);
            (t, determinant(&m).expect("square"))
        })
        .collect();
    interpolate(&points)
}

/// `det(B + sG) = p(is)` with `p` the characteristic polynomial of `JB`; real and even.
pub fn krein_determinant(b: &Matrix<Rational>) -> Poly {
    let j = Matrix::<Rational>::symplectic_j(b.rows() / 2);
    let p = characteristic_polynomial(&(&j * b));
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| match k % 4 {
            0 => c.clone(),
            2 => -c.clone(),
            // odd coefficients of a Hamiltonian characteristic polynomial vanish
            _ => {
                debug_assert!(c.is_zero());
                Rational::zero()
            }
        })
        .collect();
    Poly::new(coeffs)
}

fn exact_crossings(
    path: &dyn SelfAdjointPath,
    exact: &ExactPath,
    tol: &Tolerance,
) -> Result<Vec<Crossing>> {
    let (f, lo, hi) = match exact {
        ExactPath::Linear { a0, a1 } => (
            linear_path_determinant(a0, a1),
            Rational::zero(),
            Rational::one(),
        ),
        ExactPath::Krein { b, s_max } => (krein_determinant(b), Rational::zero(), s_max.clone()),
    };
    if f.is_zero() {
        return Err(Error::Precondition(
            "det A(θ) vanishes identically; crossings are not isolated".into(),
        ));
    }
    let mut out = Vec::new();
    for (g, root, mult) in roots_in(&f, &lo, &hi) {
        let crossing = match (exact, &root.exact) {
            (ExactPath::Linear { a0, a1 }, Some(t)) => {
                let d = a1 - a0;
                let m = a0 + &d.scale(t);
                let k = Subspace::span(m.rows(), &kernel_rref(&m, 0.0), 0.0);
                let form = restrict_form(&d, &k)?;
                exact_crossing(path, t.clone(), k, form, mult)
            }
            (ExactPath::Krein { b, .. }, Some(t)) if t.is_zero() => {
                // kernel of B; G restricted is i·VᵀJV with V real, signature zero
                let k = Subspace::span(b.rows(), &kernel_rref(b, 0.0), 0.0);
                let j = Matrix::<Rational>::symplectic_j(b.rows() / 2);
                let s = j.congruence(&k.basis_matrix());
                let rank = rank_rref(&s, 0.0);
                let mut c = exact_crossing(path, t.clone(), k.clone(), Matrix::zeros(0, 0), mult);
                c.positive = rank / 2;
                c.negative = rank / 2;
                c.signature = 0;
                c.regular = rank == k.dim();
                c
            }
            _ => {
                let theta = root_to_f64(&g, &root);
                let m = path.evaluate(theta);
                let kernel = orthonormalize(&float_kernel(&m, abs_tol_at(tol, &m)));
                let mut c = float_crossing(path, theta, kernel, tol);
                c.exact_location = root.exact.clone();
                c.multiplicity = Some(mult);
                c
            }
        };
        out.push(crossing);
    }
    Ok(out)
}

struct Search<'a> {
    path: &'a dyn SelfAdjointPath,
    lipschitz: f64,
    min_width: f64,
    budget: u32,
    evaluations: AtomicUsize,
    max_evaluations: usize,
}

impl Search<'_> {
    fn eigenvalues(&self, theta: f64) -> Result<Vec<f64>> {
        let count = self.evaluations.fetch_add(1, AtomicOrdering::Relaxed);
        if count >= self.max_evaluations {
            return Err(Error::UnresolvedCrossing {
                location: theta,
                detail: format!("evaluation budget of {} exhausted", self.max_evaluations),
            });
        }
        Ok(hermitian_eigen(&self.path.evaluate(theta)).values)
    }

    fn suspicious(&self, a: f64, b: f64, la: &[f64], lb: &[f64]) -> bool {
        // eigenvalue rounding error, relative to the spectral radius
        let scale = la.iter().chain(lb).fold(1.0f64, |m, v| m.max(v.abs()));
        let reach = self.lipschitz * (b - a) + 256.0 * f64::EPSILON * scale;
        la.iter().zip(lb).any(|(x, y)| x.abs() + y.abs() <= reach)
    }

    /// Intervals of width at most `min_width` (or at the bisection budget)
    /// that cannot be certified crossing-free.
    fn bisect(
        &self,
        a: f64,
        b: f64,
        la: Vec<f64>,
        lb: Vec<f64>,
        depth: u32,
    ) -> Result<Vec<(f64, f64)>> {
        if !self.suspicious(a, b, &la, &lb) {
            return Ok(Vec::new());
        }
        if b - a <= self.min_width || depth >= self.budget {
            return Ok(vec![(a, b)]);
        }
        let m = 0.5 * (a + b);
        let lm = self.eigenvalues(m)?;
        let mut left = self.bisect(a, m, la, lm.clone(), depth + 1)?;
        left.extend(self.bisect(m, b, lm, lb, depth + 1)?);
        Ok(left)
    }
}

fn float_crossings(path: &dyn SelfAdjointPath, opts: &FlowOptions) -> Result<Vec<Crossing>> {
    let (a, b) = path.domain();
    let cells = opts.grid.max(1);
    let search = Search {
        path,
        lipschitz: path.derivative_bound() * (1.0 + 1e-9) + f64::EPSILON,
        min_width: (b - a) * 1e-13,
        budget: opts.bisection_budget,
        evaluations: AtomicUsize::new(0),
        max_evaluations: opts.max_evaluations,
    };
    let nodes: Vec<f64> = (0..=cells)
        .map(|k| {
            if k == cells {
                b
            } else {
                a + (b - a) * k as f64 / cells as f64
            }
        })
        .collect();
    let values: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|&t| search.eigenvalues(t))
        .collect::<Result<_>>()?;
    let pieces: Vec<Vec<(f64, f64)>> = (0..cells)
        .into_par_iter()
        .map(|k| {
            search.bisect(
                nodes[k],
                nodes[k + 1],
                values[k].clone(),
                values[k + 1].clone(),
                0,
            )
        })
        .collect::<Result<_>>()?;
    let mut clusters: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in pieces.into_iter().flatten() {
        match clusters.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => clusters.push((lo, hi)),
        }
    }

    let mut out = Vec::new();
    let endpoint = |theta: f64| -> Option<Crossing> {
        let m = path.evaluate(theta);
        let kernel = float_kernel(&m, abs_tol_at(&opts.tol, &m));
        (!kernel.is_empty()).then(|| float_crossing(path, theta, kernel, &opts.tol))
    };
    let start = endpoint(a);
    let end = endpoint(b);
    for (lo, hi) in clusters {
        if (lo <= a && start.is_some()) || (hi >= b && end.is_some()) {
            continue;
        }
        let theta = 0.5 * (lo + hi);
        let m = path.evaluate(theta);
        let ktol = abs_tol_at(&opts.tol, &m) + search.lipschitz * (hi - lo);
        let kernel = float_kernel(&m, ktol);
        if kernel.is_empty() {
            continue;
        }
        let mut c = float_crossing(path, theta, kernel, &opts.tol);
        c.position = CrossingPosition::Interior;
        out.push(c);
    }
    if let Some(c) = start {
        out.insert(0, c);
    }
    out.extend(end);
    Ok(out)
}

/// All crossings of the path, including degenerate endpoints.
pub fn crossings(
    path: &dyn SelfAdjointPath,
    opts: &FlowOptions,
) -> Result<(Vec<Crossing>, FlowMethod)> {
    match path.exact().filter(|_| !opts.force_float) {
        Some(exact) => Ok((
            exact_crossings(path, &exact, &opts.tol)?,
            FlowMethod::ExactRoots,
        )),
        None => Ok((float_crossings(path, opts)?, FlowMethod::FloatBisection)),
    }
}

/// `Σ sign Cr[A(θ)]` over interior crossings `− dim E₋(Cr[A(start)]) + dim E₊(Cr[A(end)])`.
pub fn spectral_flow(path: &dyn SelfAdjointPath, opts: &FlowOptions) -> Result<FlowReport> {
    let (crossings, method) = crossings(path, opts)?;
    let mut interior = 0;
    let mut start_correction = 0;
    let mut end_correction = 0;
    for c in &crossings {
        match c.position {
            CrossingPosition::Start => start_correction = -(c.negative as i64),
            CrossingPosition::End => end_correction = c.positive as i64,
            CrossingPosition::Interior => {
                if !c.regular {
                    return Err(Error::IrregularCrossing {
                        location: c.location,
                    });
                }
                interior += c.signature;
            }
        }
    }
    Ok(FlowReport {
        spectral_flow: interior + start_correction + end_correction,
        crossings,
        start_correction,
        end_correction,
        method,
    })
}

/// `𝓜(A₀, A₁) = −Sf` along a path from `A₀` to `A₁`.
pub fn relative_morse_index<T: Backend>(
    a0: &Matrix<T>,
    a1: &Matrix<T>,
    path: &dyn SelfAdjointPath,
    opts: &FlowOptions,
) -> Result<i64> {
    let (lo, hi) = path.domain();
    for (m, theta, name) in [(a0, lo, "start"), (a1, hi, "end")] {
        let diff = path.evaluate(theta) - to_complex(m);
        let scale = opts.tol.relative * (1.0 + norm2(&to_complex(m)));
        if norm2(&diff) > scale {
            return Err(Error::Precondition(format!(
                "path {name} does not match the given matrix"
            )));
        }
    }
    Ok(-spectral_flow(path, opts)?.spectral_flow)
}

/// Crossings of `D_s = B + sG` on `[0, s_max]`.
pub fn crossing_set<T: Backend>(
    b: &Matrix<T>,
    s_max: f64,
    opts: &FlowOptions,
) -> Result<Vec<Crossing>> {
    let path = KreinPath::new(b, s_max, &opts.tol)?;
    Ok(crossings(&path, opts)?.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaReport {
    pub n: usize,
    /// Total multiplicity of `σ(GB) ∩ [ε, ∞)`.
    pub kappa: usize,
    pub epsilon: Option<f64>,
    pub nullity_b: usize,
    pub nullity_gb: usize,
    pub holds: bool,
}

/// `n = κ + ν(GB)/2 = κ + ν(B)/2` for linearly stable `JB`.
pub fn kappa_identity_check<T: Backend>(b: &Matrix<T>, tol: &Tolerance) -> Result<KappaReport> {
    let c = classify(b, None, tol)?;
    if c.verdict != Verdict::LinearlyStable {
        return Err(Error::Precondition(format!(
            "JB must be linearly stable, classification is {}",
            c.verdict.as_str()
        )));
    }
    let n = b.rows() / 2;
    let nullity_b = inertia(b, tol)?.nullity;
    let jb = &Matrix::<T>::symplectic_j(n) * b;
    let nullity_gb = 2 * n - T::rank(&jb, tol.absolute_for(&jb));
    let (kappa, epsilon) = match exact_copy(b) {
        Some(bq) => {
            // σ(GB) ∋ y > 0 iff −iy ∈ σ(JB) iff y is a root of p(is)
            let f = krein_determinant(&bq);
            let mut kappa = 0;
            let mut smallest: Option<f64> = None;
            for (g, mult) in f.square_free_decomposition() {
                for root in isolate_real_roots(&g) {
                    if compare_root(&g, &root, &Rational::zero()) == Ordering::Greater {
                        kappa += mult;
                        let v = root_to_f64(&g, &root);
                        smallest = Some(smallest.map_or(v, |s: f64| s.min(v)));
                    }
                }
            }
            (kappa, smallest.map(|s| 0.5 * s))
        }
        None => {
            let abs = tol.absolute_for(&jb);
            let band = abs * tol.band_factor;
            let ys: Vec<(f64, usize)> = c
                .spectrum
                .entries
                .iter()
                .filter(|e| e.value.im.abs() > abs)
                .map(|e| (-e.value.im, e.multiplicity))
                .collect();
            let smallest = ys
                .iter()
                .map(|(y, _)| y.abs())
                .fold(f64::INFINITY, f64::min);
            if smallest.is_finite() && smallest <= band {
                return Err(Error::Indeterminate(format!(
                    "smallest crossing {smallest:e} is not separable from zero at tolerance {abs:e}"
                )));
            }
            let eps = 0.5 * smallest;
            let kappa = ys.iter().filter(|(y, _)| *y >= eps).map(|(_, m)| m).sum();
            (kappa, smallest.is_finite().then_some(eps))
        }
    };
    Ok(KappaReport {
        n,
        kappa,
        epsilon,
        nullity_b,
        nullity_gb,
        holds: nullity_gb == nullity_b && nullity_b % 2 == 0 && n == kappa + nullity_b / 2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KreinSignature {
    pub dimension: usize,
    pub positive: usize,
    pub negative: usize,
    pub signature: i64,
    /// `dim − |sign|` is even.
    pub mod2_consistent: bool,
}

/// Signature of `G = iJ` on the span of complex vectors in `ℂ²ⁿ`.
pub fn krein_signature(basis: &[Vec<Complex64>], tol: &Tolerance) -> Result<KreinSignature> {
    let k = basis.len();
    let dim = basis.first().map_or(0, Vec::len);
    if dim % 2 != 0 {
        return Err(Error::OddDimension(dim));
    }
    if basis.iter().any(|v| v.len() != dim) {
        return Err(Error::Invalid(
            "basis vectors have different lengths".into(),
        ));
    }
    let on = orthonormalize(basis);
    if on.len() < k {
        return Err(Error::DependentBasis {
            rank: on.len(),
            count: k,
        });
    }
    let gram = compress(&krein_form(dim / 2), &on);
    let eig = hermitian_eigen(&gram);
    let t = tol.relative * 10.0;
    if eig.values.iter().any(|v| v.abs() <= t) {
        return Err(Error::Hypothesis(
            "G restricted to the subspace is degenerate".into(),
        ));
    }
    let positive = eig.values.iter().filter(|&&v| v > 0.0).count();
    let negative = k - positive;
    let signature = positive as i64 - negative as i64;
    Ok(KreinSignature {
        dimension: k,
        positive,
        negative,
        signature,
        mod2_consistent: (k as i64 - signature.abs()) % 2 == 0,
    })
}

pub fn real_to_complex_basis<T: Backend>(w: &Subspace<T>) -> Vec<Vec<Complex64>> {
    w.basis()
        .iter()
        .map(|v| v.iter().map(|x| Complex64::new(x.as_f64(), 0.0)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};

    fn opts() -> FlowOptions {
        FlowOptions::default()
    }

    fn float_opts() -> FlowOptions {
        FlowOptions {
            force_float: true,
            ..FlowOptions::default()
        }
    }

    #[test]
    fn krein_form_properties() {
        let g = krein_form(2);
        let sq = &g * &g;
        assert!((sq - CMatrix::identity(4, 4))
            .iter()
            .all(|z| z.norm() < 1e-15));
        let all: Vec<Vec<Complex64>> = (0..4)
            .map(|k| {
                (0..4)
                    .map(|i| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
        let s = krein_signature(&all, &Tolerance::default()).unwrap();
        assert_eq!((s.signature, s.positive, s.negative), (0, 2, 2));
    }

    #[test]
    fn identity_krein_path_crosses_once() {
        let b = Matrix::<Rational>::identity(2);
        for o in [opts(), float_opts()] {
            let cs = crossing_set(&b, 3.0, &o).unwrap();
            assert_eq!(cs.len(), 1, "{o:?}");
            assert!((cs[0].location - 1.0).abs() < 1e-10);
            assert_eq!(cs[0].kernel_dim(), 1);
            assert!(cs[0].regular);
        }
        let cs = crossing_set(&b, 3.0, &opts()).unwrap();
        assert_eq!(cs[0].exact_location, Some(int(1)));
    }

    #[test]
    fn zero_krein_path() {
        let b = Matrix::<Rational>::zeros(2, 2);
        let cs = crossing_set(&b, 2.0, &opts()).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].location, 0.0);
        assert_eq!(cs[0].kernel_dim(), 2);
        assert_eq!(cs[0].signature, 0);
        let cs = crossing_set(&Matrix::<f64>::zeros(2, 2), 2.0, &opts()).unwrap();
        assert_eq!((cs.len(), cs[0].kernel_dim(), cs[0].signature), (1, 2, 0));
    }

    #[test]
    fn counterexample_krein_crossings() {
        let b = Matrix::diag_i64(&[-2, -1, 1, -1, 0, 0]);
        let cs = crossing_set(&b, 3.0, &opts()).unwrap();
        let locs: Vec<f64> = cs.iter().map(|c| c.location).collect();
        assert_eq!(locs.len(), 2);
        assert_eq!(locs[0], 0.0);
        assert!((locs[1] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(cs[0].multiplicity, Some(4));
    }

    #[test]
    fn scalar_path_flow() {
        let path = LinearPath::new(
            &Matrix::diag_i64(&[-1]),
            &Matrix::diag_i64(&[1]),
            &Tolerance::default(),
        )
        .unwrap();
        for o in [opts(), float_opts()] {
            let r = spectral_flow(&path, &o).unwrap();
            assert_eq!(r.spectral_flow, 1);
            assert_eq!(r.crossings.len(), 1);
            assert!((r.crossings[0].location - 0.5).abs() < 1e-10);
        }
        let r = spectral_flow(&path, &opts()).unwrap();
        assert_eq!(r.crossings[0].exact_location, Some(rat(1, 2)));
    }

    #[test]
    fn constant_and_diagonal_paths() {
        let t = Tolerance::default();
        let a = Matrix::diag_i64(&[2, -3]);
        let path = LinearPath::new(&a, &a, &t).unwrap();
        assert_eq!(spectral_flow(&path, &opts()).unwrap().spectral_flow, 0);
        assert_eq!(
            spectral_flow(&path, &float_opts()).unwrap().spectral_flow,
            0
        );
        let path =
            LinearPath::new(&Matrix::diag_i64(&[-1, -1]), &Matrix::diag_i64(&[1, 1]), &t).unwrap();
        assert_eq!(spectral_flow(&path, &opts()).unwrap().spectral_flow, 2);
        assert_eq!(
            spectral_flow(&path, &float_opts()).unwrap().spectral_flow,
            2
        );
    }

    #[test]
    fn degenerate_endpoints_use_corrections() {
        let t = Tolerance::default();
        // from 0 to diag{-1, 1}: only the end correction counts, +1
        let path = LinearPath::new(
            &Matrix::<Rational>::zeros(2, 2),
            &Matrix::diag_i64(&[-1, 1]),
            &t,
        )
        .unwrap();
        for o in [opts(), float_opts()] {
            let r = spectral_flow(&path, &o).unwrap();
            assert_eq!(
                (r.start_correction, r.end_correction, r.spectral_flow),
                (-1, 0, -1)
            );
        }
        let m = relative_morse_index(
            &Matrix::zeros(2, 2),
            &Matrix::diag_i64(&[-1, 1]),
            &path,
            &opts(),
        )
        .unwrap();
        assert_eq!(m, 1);
    }

    #[test]
    fn irregular_crossing_refused() {
        let a0 =
            Matrix::from_rows(vec![vec![int(0), rat(-1, 2)], vec![rat(-1, 2), int(1)]]).unwrap();
        let a1 = Matrix::from_rows(vec![vec![int(0), rat(1, 2)], vec![rat(1, 2), int(1)]]).unwrap();
        let path = LinearPath::new(&a0, &a1, &Tolerance::default()).unwrap();
        assert!(matches!(
            spectral_flow(&path, &opts()),
            Err(Error::IrregularCrossing { .. })
        ));
        let (cs, _) = crossings(&path, &opts()).unwrap();
        assert_eq!(cs.len(), 1);
        assert!(!cs[0].regular);
    }

    #[test]
    fn kappa_examples() {
        let t = Tolerance::default();
        let r = kappa_identity_check(&Matrix::<Rational>::identity(4), &t).unwrap();
        assert_eq!((r.kappa, r.nullity_b, r.holds), (2, 0, true));
        let r = kappa_identity_check(&Matrix::diag_i64(&[1, 2, 3, 5]), &t).unwrap();
        assert!(r.holds);
        let r = kappa_identity_check(&Matrix::diag_i64(&[0, 1, 0, 1]), &t).unwrap();
        assert_eq!((r.kappa, r.nullity_b, r.holds), (1, 2, true));
        let rf = kappa_identity_check(&Matrix::<f64>::diagonal(&[0.0, 1.0, 0.0, 1.0]), &t).unwrap();
        assert_eq!((rf.kappa, rf.nullity_b, rf.holds), (1, 2, true));
        assert!(matches!(
            kappa_identity_check(&Matrix::diag_i64(&[1, -1]), &t),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn krein_signature_examples() {
        let t = Tolerance::default();
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        // G = [[0, -i], [i, 0]]; (1, i)/√2 has G-norm 1
        let s = krein_signature(&[vec![one, i]], &t).unwrap();
        assert_eq!(s.signature, 1);
        let s = krein_signature(&[vec![one, -i]], &t).unwrap();
        assert_eq!(s.signature, -1);
        assert!(krein_signature(&[vec![one, Complex64::zero()]], &t).is_err());

        let cs = crossing_set(&Matrix::<Rational>::identity(2), 2.0, &opts()).unwrap();
        let s = krein_signature(&cs[0].kernel, &t).unwrap();
        assert_eq!(s.signature.abs(), 1);
        assert!(s.mod2_consistent);
    }
}
