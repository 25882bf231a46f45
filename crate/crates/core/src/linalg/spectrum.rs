//! Eigenvalues with multiplicities, semisimplicity, and the imaginary-axis test.
//!
//! Exact backend: the characteristic polynomial is split by Yun's square-free
//! decomposition, so multiplicities are exact; real roots are isolated with
//! Sturm sequences. A square-free factor `x^e·r(x²)` whose `r` has only real
//! roots has its non-real roots exactly on the imaginary axis, and those are
//! reported with real part exactly zero. Remaining non-real roots are
//! computed numerically from the companion matrix.
//!
//! Float backend: Schur eigenvalues clustered at the absolute tolerance.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::field::{exact_sqrt, Field, Rational};
use crate::linalg::float::complex_rank;
use crate::linalg::polynomial::{characteristic_polynomial, minimal_polynomial};
use crate::linalg::Tolerance;
use crate::matrix::Matrix;
use crate::poly::{
    isolate_real_roots, numeric_roots, refine_root, root_to_f64, Poly, RealRoot, SturmSequence,
};

/// Decisions within `(tol, band_factor·tol]` are indeterminate on the float backend.
pub const DEFAULT_BAND_FACTOR: f64 = 1e3;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub value: Complex64,
    pub multiplicity: usize,
    /// Exact Gaussian-rational value, when the eigenvalue has one.
    pub exact: Option<(Rational, Rational)>,
    /// Square-free factor of the characteristic polynomial the eigenvalue is a root of.
    pub factor: Option<Poly>,
    /// Real part certified to be exactly zero.
    pub on_axis_exact: bool,
}

impl SpectrumEntry {
    fn float(value: Complex64, multiplicity: usize) -> Self {
        SpectrumEntry {
            value,
            multiplicity,
            exact: None,
            factor: None,
            on_axis_exact: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
    /// Characteristic polynomial (exact backend only).
    pub characteristic_polynomial: Option<Poly>,
    /// Clustering tolerance (zero on the exact backend).
    pub tolerance: f64,
}

impl Spectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Multiplicity of the entry within `radius` of `z`, or zero.
    pub fn multiplicity_near(&self, z: Complex64, radius: f64) -> usize {
        self.entries
            .iter()
            .filter(|e| (e.value - z).norm() <= radius)
            .map(|e| e.multiplicity)
            .sum()
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect()
    }

    fn sort(&mut self) {
        self.entries.sort_by(|a, b| {
            a.value
                .re
                .total_cmp(&b.value.re)
                .then(a.value.im.total_cmp(&b.value.im))
        });
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Semisimplicity {
    Semisimple {
        minimal_polynomial: Option<Poly>,
    },
    Defective {
        /// Eigenvalues whose geometric multiplicity is below the algebraic one.
        eigenvalues: Vec<SpectrumEntry>,
        minimal_polynomial: Option<Poly>,
    },
    Indeterminate {
        eigenvalue: Complex64,
        singular_values: Vec<f64>,
        tolerance: f64,
    },
}

impl Semisimplicity {
    pub fn decided(&self) -> Option<bool> {
        match self {
            Semisimplicity::Semisimple { .. } => Some(true),
            Semisimplicity::Defective { .. } => Some(false),
            Semisimplicity::Indeterminate { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AxisTest {
    /// `p(x) = x^e·r(x²)` with `r` having only real non-positive roots (exact),
    /// or every `|Re λ| ≤ tol` (float).
    OnAxis {
        reduced: Option<Poly>,
    },
    OffAxis {
        witness: Complex64,
    },
    Indeterminate {
        eigenvalue: Complex64,
        tolerance: f64,
    },
}

impl AxisTest {
    pub fn decided(&self) -> Option<bool> {
        match self {
            AxisTest::OnAxis { .. } => Some(true),
            AxisTest::OffAxis { .. } => Some(false),
            AxisTest::Indeterminate { .. } => None,
        }
    }
}

/// Roots of a square-free polynomial with exact values where available.
/// Output flags: `(value, exact, on_axis_exact)`.
pub(crate) fn roots_of_square_free(
    f: &Poly,
) -> Vec<(Complex64, Option<(Rational, Rational)>, bool)> {
    let deg = f.deg();
    let mut out = Vec::with_capacity(deg);
    let real = isolate_real_roots(f);
    for r in &real {
        let v = root_to_f64(f, r);
        let exact = r.exact.clone().map(|x| (x, Rational::zero()));
        let on_axis = r.exact.as_ref().is_some_and(Zero::is_zero);
        out.push((Complex64::new(v, 0.0), exact, on_axis));
    }
    if real.len() == deg {
        return out;
    }
    if let Some((_, r)) = f.parity_split() {
        // non-real roots of f are ±√μ for the roots μ of r that are not ≥ 0
        let r_real = isolate_real_roots(&r);
        for mu in r_real.iter() {
            if root_sign(&r, mu) >= 0 {
                continue;
            }
            let m = root_to_f64(&r, mu);
            let y = (-m).sqrt();
            let exact = mu.exact.as_ref().and_then(|x| exact_sqrt(&-x.clone()));
            for sign in [1.0, -1.0] {
                let ex = exact.as_ref().map(|s| {
                    (
                        Rational::zero(),
                        if sign > 0.0 { s.clone() } else { -s.clone() },
                    )
                });
                out.push((Complex64::new(0.0, sign * y), ex, true));
            }
        }
        let complex_mu = r.deg() - r_real.len();
        if complex_mu > 0 {
            let mut mus = numeric_roots(&r);
            mus.sort_by(|a, b| b.im.abs().total_cmp(&a.im.abs()));
            for mu in mus.into_iter().take(complex_mu).filter(|m| m.im > 0.0) {
                let s = mu.sqrt();
                for z in [s, -s, s.conj(), -s.conj()] {
                    out.push((z, None, false));
                }
            }
        }
        return out;
    }
    let mut zs = numeric_roots(f);
    zs.sort_by(|a, b| b.im.abs().total_cmp(&a.im.abs()));
    for z in zs.into_iter().take(deg - real.len()).filter(|z| z.im > 0.0) {
        out.push((z, None, false));
        out.push((z.conj(), None, false));
    }
    out
}

/// Sign of an isolated real root. Zero roots are always recovered exactly.
fn root_sign(p: &Poly, root: &RealRoot) -> i8 {
    if let Some(x) = &root.exact {
        return x.sign(0.0);
    }
    let mut r = root.clone();
    loop {
        if !r.hi.is_positive() {
            return -1;
        }
        if !r.lo.is_negative() {
            return 1;
        }
        let w = r.width() / Rational::from_integer(2.into());
        r = refine_root(p, &r, &w);
        if let Some(x) = &r.exact {
            return x.sign(0.0);
        }
    }
}

pub(crate) fn exact_spectrum(a: &Matrix<Rational>) -> Spectrum {
    let p = characteristic_polynomial(a);
    let mut entries = Vec::new();
    for (f, mult) in p.square_free_decomposition() {
        for (value, exact, on_axis) in roots_of_square_free(&f) {
            entries.push(SpectrumEntry {
                value,
                multiplicity: mult,
                exact,
                factor: Some(f.clone()),
                on_axis_exact: on_axis,
            });
        }
    }
    let mut s = Spectrum {
        entries,
        characteristic_polynomial: Some(p),
        tolerance: 0.0,
    };
    s.sort();
    s
}

/// Semisimple iff the minimal polynomial `m` is square-free, i.e. `gcd(m, m') = 1`.
/// The defective eigenvalues are exactly the roots of `gcd(m, m')`.
pub(crate) fn exact_semisimplicity(a: &Matrix<Rational>) -> Semisimplicity {
    let m = minimal_polynomial(a);
    let g = m.gcd(&m.derivative());
    if g.is_constant() {
        return Semisimplicity::Semisimple {
            minimal_polynomial: Some(m),
        };
    }
    let p = characteristic_polynomial(a);
    let mut eigenvalues = Vec::new();
    for (f, mult) in p.square_free_decomposition() {
        let h = f.gcd(&g);
        if h.is_constant() {
            continue;
        }
        for (value, exact, on_axis) in roots_of_square_free(&h) {
            eigenvalues.push(SpectrumEntry {
                value,
                multiplicity: mult,
                exact,
                factor: Some(f.clone()),
                on_axis_exact: on_axis,
            });
        }
    }
    Semisimplicity::Defective {
        eigenvalues,
        minimal_polynomial: Some(m),
    }
}

/// Characteristic polynomial of the form `x^e·r(x²)` with every root of `r`
/// real and non-positive.
pub(crate) fn exact_axis_test(a: &Matrix<Rational>) -> AxisTest {
    let p = characteristic_polynomial(a);
    let on_axis = p.parity_split().filter(|(_, r)| {
        let s = r.square_free_part();
        s.is_constant() || SturmSequence::new(&s).count_at_most(&Rational::zero()) == s.deg()
    });
    match on_axis {
        Some((_, r)) => AxisTest::OnAxis { reduced: Some(r) },
        None => {
            let spec = exact_spectrum(a);
            let witness = spec
                .entries
                .iter()
                .max_by(|x, y| x.value.re.abs().total_cmp(&y.value.re.abs()))
                .map(|e| e.value)
                .unwrap_or_default();
            AxisTest::OffAxis { witness }
        }
    }
}

fn raw_float_eigenvalues(a: &Matrix<f64>) -> Vec<Complex64> {
    if a.rows() == 0 {
        return Vec::new();
    }
    a.to_nalgebra()
        .complex_eigenvalues()
        .iter()
        .copied()
        .collect()
}

/// Single-linkage clustering at distance `tol`; entries carry cluster means.
fn cluster(values: &[Complex64], tol: f64) -> Vec<SpectrumEntry> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut k = i;
        while p[k] != r {
            let next = p[k];
            p[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for (i, v) in values.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(*v);
    }
    groups
        .into_values()
        .map(|g| {
            let mean = g.iter().sum::<Complex64>() / g.len() as f64;
            SpectrumEntry::float(mean, g.len())
        })
        .collect()
}

pub(crate) fn float_spectrum(a: &Matrix<f64>, tol: f64) -> Spectrum {
    let mut s = Spectrum {
        entries: cluster(&raw_float_eigenvalues(a), tol),
        characteristic_polynomial: None,
        tolerance: tol,
    };
    s.sort();
    s
}

fn shifted(a: &Matrix<f64>, lambda: Complex64) -> DMatrix<Complex64> {
    let n = a.rows();
    DMatrix::from_fn(n, n, |i, j| {
        let v = Complex64::new(a[(i, j)], 0.0);
        if i == j {
            v - lambda
        } else {
            v
        }
    })
}

/// For each eigenvalue cluster `λ` of algebraic size `k`: semisimple at `λ`
/// iff `rank(A − λI) = rank((A − λI)²) = n − k`.
pub(crate) fn float_semisimplicity(a: &Matrix<f64>, tol: &Tolerance) -> Semisimplicity {
    let abs = tol.absolute_for(a);
    let band = abs * tol.band_factor;
    let n = a.rows();
    let spec = float_spectrum(a, abs);
    let mut defective = Vec::new();
    for e in &spec.entries {
        let b = shifted(a, e.value);
        let b2 = &b * &b;
        let (r1, s1) = complex_rank(&b, abs);
        let (r2, s2) = complex_rank(&b2, abs);
        if let Some(&s) = s1.iter().chain(&s2).find(|&&s| s > abs && s <= band) {
            let _ = s;
            return Semisimplicity::Indeterminate {
                eigenvalue: e.value,
                singular_values: s1,
                tolerance: abs,
            };
        }
        if r2 < r1 || n - r1 < e.multiplicity {
            defective.push(e.clone());
        }
    }
    if defective.is_empty() {
        Semisimplicity::Semisimple {
            minimal_polynomial: None,
        }
    } else {
        Semisimplicity::Defective {
            eigenvalues: defective,
            minimal_polynomial: None,
        }
    }
}

pub(crate) fn float_axis_test(a: &Matrix<f64>, tol: &Tolerance) -> AxisTest {
    let abs = tol.absolute_for(a);
    let band = abs * tol.band_factor;
    let values = raw_float_eigenvalues(a);
    if let Some(w) = values
        .iter()
        .filter(|z| z.re.abs() > band)
        .max_by(|x, y| x.re.abs().total_cmp(&y.re.abs()))
    {
        return AxisTest::OffAxis { witness: *w };
    }
    if let Some(z) = values.iter().find(|z| z.re.abs() > abs) {
        return AxisTest::Indeterminate {
            eigenvalue: *z,
            tolerance: abs,
        };
    }
    AxisTest::OnAxis { reduced: None }
}
