//! Planar n-body-type problems with potential `U = Σ mᵢmⱼ / |qᵢ − qⱼ|^α`:
//! central configurations on the inertia sphere, the amended-potential
//! Hessian, the E₁ linearization, and the parity verdicts.
//!
//! Configurations are flat vectors `(x₁, y₁, …, xₙ, yₙ)`; `M = diag(m₁, m₁, …)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{rational_from_f64, Rational};
use crate::linalg::{inertia, solve, IndexReport, Tolerance};
use crate::matrix::{dot, Matrix};
use crate::stability::TheoremVerdict;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NBodySystem {
    masses: Vec<f64>,
    alpha: f64,
    q: Vec<f64>,
    /// Relative collision guard: distances must exceed `guard · diameter`.
    collision_guard: f64,
}

pub const DEFAULT_COLLISION_GUARD: f64 = 1e-6;

impl NBodySystem {
    /// Positions are translated so that the center of mass is at the origin.
    pub fn new(masses: Vec<f64>, alpha: f64, positions: &[[f64; 2]]) -> Result<Self> {
        if masses.len() < 2 {
            return Err(Error::Invalid(format!(
                "need at least two bodies, got {}",
                masses.len()
            )));
        }
        if positions.len() != masses.len() {
            return Err(Error::DimensionMismatch {
                expected: masses.len(),
                found: positions.len(),
            });
        }
        if let Some(m) = masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(Error::Invalid(format!("masses must be positive, got {m}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Invalid(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if positions.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("positions must be finite".into()));
        }
        let q = positions.iter().flat_map(|p| [p[0], p[1]]).collect();
        let mut sys = NBodySystem {
            masses,
            alpha,
            q,
            collision_guard: DEFAULT_COLLISION_GUARD,
        };
        sys.center();
        Ok(sys)
    }

    pub fn with_collision_guard(mut self, guard: f64) -> Self {
        self.collision_guard = guard;
        self
    }

    pub fn n(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn collision_guard(&self) -> f64 {
        self.collision_guard
    }

    pub fn positions(&self) -> Vec<[f64; 2]> {
        self.q.chunks(2).map(|c| [c[0], c[1]]).collect()
    }

    /// Same masses and exponent at a new flat configuration (recentred).
    pub fn with_q(&self, q: Vec<f64>) -> Self {
        let mut s = NBodySystem { q, ..self.clone() };
        s.center();
        s
    }

    /// Diagonal of `M`.
    pub fn mass_diagonal(&self) -> Vec<f64> {
        self.masses.iter().flat_map(|&m| [m, m]).collect()
    }

    pub fn mass_matrix(&self) -> Matrix<f64> {
        Matrix::diagonal(&self.mass_diagonal())
    }

    fn center(&mut self) {
        let total: f64 = self.masses.iter().sum();
        for c in 0..2 {
            let com = self
                .masses
                .iter()
                .enumerate()
                .map(|(i, m)| m * self.q[2 * i + c])
                .sum::<f64>()
                / total;
            for i in 0..self.n() {
                self.q[2 * i + c] -= com;
            }
        }
    }

    fn pair(&self, i: usize, j: usize) -> ([f64; 2], f64) {
        let d = [
            self.q[2 * i] - self.q[2 * j],
            self.q[2 * i + 1] - self.q[2 * j + 1],
        ];
        (d, d[0].hypot(d[1]))
    }

    pub fn diameter(&self) -> f64 {
        let n = self.n();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| self.pair(i, j).1)
            .fold(0.0, f64::max)
    }

    /// Errors if some pair is closer than the collision guard.
    pub fn check_collision(&self) -> Result<()> {
        let guard = self.collision_guard * self.diameter();
        let n = self.n();
        for i in 0..n {
            for j in (i + 1)..n {
                let r = self.pair(i, j).1;
                if r <= guard || r == 0.0 {
                    return Err(Error::Collision {
                        i,
                        j,
                        distance: r,
                        guard,
                    });
                }
            }
        }
        Ok(())
    }

    /// `q⊥ = (−y₁, x₁, …, −yₙ, xₙ)`.
    pub fn rotational_direction(&self) -> Vec<f64> {
        self.q.chunks(2).flat_map(|c| [-c[1], c[0]]).collect()
    }
}

pub fn potential_u(sys: &NBodySystem) -> Result<f64> {
    sys.check_collision()?;
    let n = sys.n();
    let mut u = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let r = sys.pair(i, j).1;
            u += sys.masses[i] * sys.masses[j] / r.powf(sys.alpha);
        }
    }
    Ok(u)
}

pub fn grad_u(sys: &NBodySystem) -> Result<Vec<f64>> {
    sys.check_collision()?;
    let n = sys.n();
    let a = sys.alpha;
    let mut g = vec![0.0; 2 * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (d, r) = sys.pair(i, j);
            let c = -a * sys.masses[i] * sys.masses[j] * r.powf(-a - 2.0);
            for k in 0..2 {
                g[2 * i + k] += c * d[k];
                g[2 * j + k] -= c * d[k];
            }
        }
    }
    Ok(g)
}

/// Pair block `mᵢmⱼ(−α r^{−α−2} I + α(α+2) r^{−α−4} d dᵀ)`, added on the
/// diagonal blocks and subtracted off the diagonal.
pub fn hess_u(sys: &NBodySystem) -> Result<Matrix<f64>> {
    sys.check_collision()?;
    let n = sys.n();
    let a = sys.alpha;
    let mut h = Matrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in (i + 1)..n {
            let (d, r) = sys.pair(i, j);
            let mm = sys.masses[i] * sys.masses[j];
            for k in 0..2 {
                for l in 0..2 {
                    let iso = if k == l { -a * r.powf(-a - 2.0) } else { 0.0 };
                    let block = mm * (iso + a * (a + 2.0) * r.powf(-a - 4.0) * d[k] * d[l]);
                    h[(2 * i + k, 2 * i + l)] += block;
                    h[(2 * j + k, 2 * j + l)] += block;
                    h[(2 * i + k, 2 * j + l)] -= block;
                    h[(2 * j + k, 2 * i + l)] -= block;
                }
            }
        }
    }
    Ok(h)
}

/// `𝕀(q) = qᵀMq`.
pub fn locked_inertia(sys: &NBodySystem) -> f64 {
    sys.q
        .iter()
        .zip(sys.mass_diagonal())
        .map(|(x, m)| m * x * x)
        .sum()
}

/// `∇𝕀 = 2Mq`.
pub fn inertia_gradient(sys: &NBodySystem) -> Vec<f64> {
    sys.q
        .iter()
        .zip(sys.mass_diagonal())
        .map(|(x, m)| 2.0 * m * x)
        .collect()
}

/// `DU + αU·Mq`, zero exactly at central configurations on `𝕀 = 1`.
pub fn cc_residual(sys: &NBodySystem) -> Result<Vec<f64>> {
    let u = potential_u(sys)?;
    let g = grad_u(sys)?;
    Ok(g.iter()
        .zip(sys.q.iter().zip(sys.mass_diagonal()))
        .map(|(gi, (x, m))| gi + sys.alpha * u * m * x)
        .collect())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Centred, scaled to `𝕀 = 1`, and rotated so the first body off the origin
/// lies on the positive horizontal axis.
pub fn normalize(sys: &NBodySystem) -> NBodySystem {
    let mut s = sys.with_q(sys.q.clone());
    let scale = locked_inertia(&s).sqrt();
    if scale > 0.0 {
        s.q.iter_mut().for_each(|x| *x /= scale);
    }
    let anchor = s.q.chunks(2).find(|c| c[0].hypot(c[1]) > 1e-12);
    if let Some(c) = anchor {
        let (sin, cos) = (-c[1].atan2(c[0])).sin_cos();
        for p in s.q.chunks_mut(2) {
            let (x, y) = (p[0], p[1]);
            p[0] = cos * x - sin * y;
            p[1] = sin * x + cos * y;
            if p[1].abs() < 1e-300 {
                p[1] = 0.0;
            }
        }
    }
    s
}

/// `M`-orthonormal basis of `T_qŜ = {v : Σ mᵢvᵢ = 0, vᵀMq = 0, vᵀMq⊥ = 0}`.
pub fn tangent_basis(sys: &NBodySystem) -> Result<Vec<Vec<f64>>> {
    let n = sys.n();
    let m = sys.mass_diagonal();
    let ip = |u: &[f64], v: &[f64]| -> f64 {
        u.iter().zip(v).zip(&m).map(|((a, b), w)| a * b * w).sum()
    };
    let tx: Vec<f64> = (0..2 * n)
        .map(|k| if k % 2 == 0 { 1.0 } else { 0.0 })
        .collect();
    let ty: Vec<f64> = (0..2 * n)
        .map(|k| if k % 2 == 1 { 1.0 } else { 0.0 })
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let push = |v: Vec<f64>, basis: &mut Vec<Vec<f64>>| -> bool {
        let mut w = v;
        for _ in 0..2 {
            for b in basis.iter() {
                let c = ip(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nw = ip(&w, &w).sqrt();
        if nw > 1e-8 {
            basis.push(w.into_iter().map(|x| x / nw).collect());
            true
        } else {
            false
        }
    };
    let fixed = [tx, ty, sys.q.clone(), sys.rotational_direction()];
    for v in fixed {
        if !push(v, &mut basis) {
            return Err(Error::DependentBasis {
                rank: basis.len(),
                count: 4,
            });
        }
    }
    for k in 0..2 * n {
        let mut e = vec![0.0; 2 * n];
        e[k] = 1.0 / m[k].sqrt();
        push(e, &mut basis);
    }
    let tangent: Vec<Vec<f64>> = basis.split_off(4);
    if tangent.len() != 2 * n - 4 {
        return Err(Error::DependentBasis {
            rank: tangent.len(),
            count: 2 * n - 4,
        });
    }
    Ok(tangent)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CcSettings {
    pub cc_tol: f64,
    pub max_iter: usize,
    pub collision_guard: f64,
}

impl Default for CcSettings {
    fn default() -> Self {
        CcSettings {
            cc_tol: 1e-10,
            max_iter: 200,
            collision_guard: DEFAULT_COLLISION_GUARD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CentralConfiguration {
    pub system: NBodySystem,
    pub xi_squared: f64,
    pub residual: f64,
    pub inertia: f64,
    pub iterations: usize,
    pub newton_steps: usize,
    pub gradient_steps: usize,
    pub cc_tol: f64,
}

impl CentralConfiguration {
    /// Accepts a configuration that is already central after normalization.
    pub fn from_system(sys: &NBodySystem, cc_tol: f64) -> Result<Self> {
        let s = normalize(sys);
        let residual = norm(&cc_residual(&s)?);
        if residual > cc_tol {
            return Err(Error::Precondition(format!(
                "not a central configuration: residual {residual:e} > {cc_tol:e}"
            )));
        }
        Ok(CentralConfiguration {
            xi_squared: s.alpha * potential_u(&s)?,
            inertia: locked_inertia(&s),
            system: s,
            residual,
            iterations: 0,
            newton_steps: 0,
            gradient_steps: 0,
            cc_tol,
        })
    }
}

fn matvec(m: &Matrix<f64>, v: &[f64]) -> Vec<f64> {
    m.mul_vec(v)
}

fn combine(basis: &[Vec<f64>], coeffs: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (b, c) in basis.iter().zip(coeffs) {
        out.iter_mut().zip(b).for_each(|(o, x)| *o += c * x);
    }
    out
}

/// `Tᵀ(D²U + αU·M)T`.
fn constrained_hessian(sys: &NBodySystem, t: &[Vec<f64>]) -> Result<Matrix<f64>> {
    let h = hess_u(sys)?;
    let xi2 = sys.alpha * potential_u(sys)?;
    let form = &h + &sys.mass_matrix().scale(&xi2);
    Ok(form.congruence(&Matrix::from_columns(2 * sys.n(), t)))
}

/// Projected Newton on `U|_{𝕀=1}` with a backtracking merit on the residual;
/// falls back to projected gradient on `½‖r‖²` with Armijo backtracking.
pub fn find_central_configuration(
    seed: &NBodySystem,
    settings: &CcSettings,
) -> Result<CentralConfiguration> {
    let mut sys = normalize(&seed.clone().with_collision_guard(settings.collision_guard));
    sys.check_collision()?;
    let dim = 2 * sys.n();
    let (mut newton_steps, mut gradient_steps) = (0, 0);
    let mut residual = norm(&cc_residual(&sys)?);
    for iter in 0..=settings.max_iter {
        if residual <= settings.cc_tol {
            return Ok(CentralConfiguration {
                xi_squared: sys.alpha * potential_u(&sys)?,
                inertia: locked_inertia(&sys),
                system: sys,
                residual,
                iterations: iter,
                newton_steps,
                gradient_steps,
                cc_tol: settings.cc_tol,
            });
        }
        if iter == settings.max_iter {
            break;
        }
        let t = tangent_basis(&sys)?;
        if t.is_empty() {
            break;
        }
        let g = grad_u(&sys)?;
        let c = constrained_hessian(&sys, &t)?;
        let rhs: Vec<f64> = t.iter().map(|v| -dot(v, &g)).collect();
        let rhs_m = Matrix::from_columns(t.len(), &[rhs]);
        let mut accepted = None;
        if let Ok(a) = solve(&c, &rhs_m, 1e-14 * (1.0 + c.norm_inf())) {
            let step = combine(&t, &a.column(0), dim);
            let mut lambda = 1.0;
            for _ in 0..40 {
                let cand = normalize(
                    &sys.with_q(
                        sys.q
                            .iter()
                            .zip(&step)
                            .map(|(x, d)| x + lambda * d)
                            .collect(),
                    ),
                );
                if cand.check_collision().is_ok() {
                    let r = norm(&cc_residual(&cand)?);
                    if r < (1.0 - 1e-4 * lambda) * residual {
                        accepted = Some((cand, r));
                        break;
                    }
                }
                lambda *= 0.5;
            }
        }
        if let Some((cand, r)) = accepted {
            sys = cand;
            residual = r;
            newton_steps += 1;
            continue;
        }
        // gradient of ½‖r‖² is J_rᵀ r with J_r = D²U + α·Mq·∇Uᵀ + αU·M
        let r = cc_residual(&sys)?;
        let u = potential_u(&sys)?;
        let h = hess_u(&sys)?;
        let m = sys.mass_diagonal();
        let mq: Vec<f64> = sys.q.iter().zip(&m).map(|(x, w)| w * x).collect();
        let mut jt_r = matvec(&h, &r);
        let gr = sys.alpha * dot(&mq, &r);
        for k in 0..dim {
            jt_r[k] += gr * g[k] + sys.alpha * u * m[k] * r[k];
        }
        let coeffs: Vec<f64> = t.iter().map(|v| dot(v, &jt_r)).collect();
        let slope: f64 = coeffs.iter().map(|x| x * x).sum();
        let dir = combine(&t, &coeffs.iter().map(|x| -x).collect::<Vec<_>>(), dim);
        let phi = 0.5 * residual * residual;
        let mut lambda = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let cand = normalize(
                &sys.with_q(
                    sys.q
                        .iter()
                        .zip(&dir)
                        .map(|(x, d)| x + lambda * d)
                        .collect(),
                ),
            );
            if cand.check_collision().is_ok() {
                let rc = norm(&cc_residual(&cand)?);
                if 0.5 * rc * rc <= phi - 1e-4 * lambda * slope {
                    sys = cand;
                    residual = rc;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !moved {
            sys.check_collision()?;
            return Err(Error::NoConvergence {
                iterations: iter,
                residual,
            });
        }
        gradient_steps += 1;
    }
    Err(Error::NoConvergence {
        iterations: settings.max_iter,
        residual,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmendedHessianReport {
    /// Form `δ²V_μ` on the `M`-orthonormal basis `[T | q]` of `𝒱`.
    pub matrix_on_v: Matrix<f64>,
    pub inertia_v: IndexReport,
    /// `Tᵀ(D²U + αU·M)T`.
    pub hess_u_on_shat: Matrix<f64>,
    pub inertia_shat: IndexReport,
    /// `qᵀ(δ²V_μ)q`, expected `(2 − α)ξ²`.
    pub radial_eigenvalue: f64,
    /// `‖M⁻¹(δ²V_μ)q − (2 − α)ξ²q‖`.
    pub radial_residual: f64,
    /// Frobenius norm of `M⁻¹δ²V_μ`.
    pub operator_norm: f64,
    /// `max |δ²V_μ|_{T_qŜ} + δ²U|_Ŝ|`.
    pub sign_identity_residual: f64,
    /// `max |tᵀ(δ²V_μ)q|` over the tangent basis.
    pub cross_term: f64,
    pub xi_squared: f64,
    pub alpha: f64,
    pub n: usize,
    pub tolerance: Tolerance,
}

/// The form `−D²U − ξ²M + 4ξ²·Mq(Mq)ᵀ` of `δ²V_μ` at `𝕀 = 1`.
pub fn amended_form(sys: &NBodySystem, xi_squared: f64) -> Result<Matrix<f64>> {
    let h = hess_u(sys)?;
    let m = sys.mass_diagonal();
    let mq: Vec<f64> = sys.q.iter().zip(&m).map(|(x, w)| w * x).collect();
    let dim = 2 * sys.n();
    let mut k = -&(&h + &sys.mass_matrix().scale(&xi_squared));
    for i in 0..dim {
        for j in 0..dim {
            k[(i, j)] += 4.0 * xi_squared * mq[i] * mq[j];
        }
    }
    Ok(k)
}

pub fn amended_hessian(cc: &CentralConfiguration, tol: &Tolerance) -> Result<AmendedHessianReport> {
    let sys = &cc.system;
    let residual = norm(&cc_residual(sys)?);
    if residual > cc.cc_tol || (locked_inertia(sys) - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!(
            "not a normalized central configuration (residual {residual:e})"
        )));
    }
    let dim = 2 * sys.n();
    let xi2 = cc.xi_squared;
    let k = amended_form(sys, xi2)?;
    let t = tangent_basis(sys)?;
    let mut v_basis = t.clone();
    v_basis.push(sys.q.clone());
    let matrix_on_v = k
        .congruence(&Matrix::from_columns(dim, &v_basis))
        .symmetrized();
    let hess_u_on_shat = constrained_hessian(sys, &t)?.symmetrized();
    let k_t = k.congruence(&Matrix::from_columns(dim, &t));
    let sign_identity_residual = (&k_t + &hess_u_on_shat).max_abs();
    let kq = k.mul_vec(&sys.q);
    let cross_term = t.iter().map(|v| dot(v, &kq).abs()).fold(0.0, f64::max);
    let m = sys.mass_diagonal();
    let target = (2.0 - sys.alpha) * xi2;
    let op_q: Vec<f64> = kq.iter().zip(&m).map(|(x, w)| x / w).collect();
    let radial_residual = norm(
        &op_q
            .iter()
            .zip(&sys.q)
            .map(|(a, x)| a - target * x)
            .collect::<Vec<_>>(),
    );
    let operator_norm = Matrix::from_fn(dim, dim, |i, j| k[(i, j)] / m[i]).frobenius_norm();
    Ok(AmendedHessianReport {
        inertia_v: inertia(&matrix_on_v, tol)?,
        inertia_shat: inertia(&hess_u_on_shat, tol)?,
        radial_eigenvalue: dot(&sys.q, &kq),
        matrix_on_v,
        hess_u_on_shat,
        radial_residual,
        operator_norm,
        sign_identity_residual,
        cross_term,
        xi_squared: xi2,
        alpha: sys.alpha,
        n: sys.n(),
        tolerance: *tol,
    })
}

/// The linearization on `E₁ = span{(q,0), (0,Mq), (q⊥,0), (0,Mq⊥)}`.
pub fn e1_matrix<T: crate::field::Field>(xi: &T, alpha: &T) -> Matrix<T> {
    let z = T::zero;
    let one = T::one;
    let xi2 = xi.clone() * xi.clone();
    let rows = vec![
        vec![z(), -xi.clone(), one(), z()],
        vec![xi.clone(), z(), z(), one()],
        vec![(alpha.clone() + one()) * xi2.clone(), z(), z(), -xi.clone()],
        vec![z(), -xi2, xi.clone(), z()],
    ];
    Matrix::from_rows(rows).expect("4×4")
}

#[derive(Clone, Debug, PartialEq)]
pub struct E1Report {
    pub alpha: f64,
    pub xi: f64,
    pub matrix: Matrix<f64>,
    /// `{0, 0, −√(α−2)ξ, √(α−2)ξ}`.
    pub closed_form: Vec<Complex64>,
    /// From the exact characteristic polynomial of the rational matrix.
    pub computed: Vec<Complex64>,
    pub max_deviation: f64,
    /// `rank(A^k)` for `k = 1, …, 4`, exact.
    pub rank_powers: Vec<usize>,
    pub single_jordan_block: bool,
    pub zero_semisimple: bool,
}

pub fn e1_closed_form(xi: f64, alpha: f64) -> Vec<Complex64> {
    let s = Complex64::new(alpha - 2.0, 0.0).sqrt() * xi;
    vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), -s, s]
}

fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// The matrix is assembled over ℚ from the binary values of `ξ` and `α`,
/// so multiplicities and Jordan structure are exact.
pub fn e1_linearization(xi: f64, alpha: f64) -> Result<E1Report> {
    if xi == 0.0 || !xi.is_finite() {
        return Err(Error::Precondition("ξ must be nonzero".into()));
    }
    let (xq, aq) = match (rational_from_f64(xi), rational_from_f64(alpha)) {
        (Some(x), Some(a)) => (x, a),
        _ => return Err(Error::Invalid("ξ and α must be finite".into())),
    };
    let a = e1_matrix::<Rational>(&xq, &aq);
    let spec = crate::linalg::complex_spectrum(&a, &Tolerance::default())?;
    let mut computed = spec.values();
    sort_complex(&mut computed);
    let mut closed_form = e1_closed_form(xi, alpha);
    sort_complex(&mut closed_form);
    let max_deviation = computed
        .iter()
        .zip(&closed_form)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let rank_powers: Vec<usize> = (1..=4)
        .map(|k| crate::linalg::rank_rref(&a.pow(k), 0.0))
        .collect();
    let single_jordan_block = rank_powers == [3, 2, 1, 0];
    let zero_semisimple =
        crate::linalg::rank_rref(&a, 0.0) == crate::linalg::rank_rref(&a.pow(2), 0.0);
    Ok(E1Report {
        alpha,
        xi,
        matrix: e1_matrix(&xi, &alpha),
        closed_form,
        computed,
        max_deviation,
        rank_powers,
        single_jordan_block,
        zero_semisimple,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    ReducedSpaceOddIndex,
    ReducedSpaceOddNullity,
    E2OddIndex,
    E2OddNullity,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NBodyVerdict {
    pub alpha: f64,
    pub n: usize,
    pub inertia_shat: IndexReport,
    /// Indices of `δ²V_μ|𝒱` via the index relations; `None` outside `0 < α < 2`.
    pub inertia_v: Option<IndexReport>,
    /// Reduced-space verdict; suppressed outside `0 < α < 2`.
    pub reduced: Option<TheoremVerdict>,
    pub e2: TheoremVerdict,
    pub predicts_instability: bool,
    pub criteria: Vec<Criterion>,
}

/// Parity verdicts from the indices of `δ²U|Ŝ` alone.
pub fn verdict_from_indices(alpha: f64, n: usize, inertia_shat: IndexReport) -> NBodyVerdict {
    let e2 = TheoremVerdict::from_inertia(&inertia_shat);
    let in_range = alpha > 0.0 && alpha < 2.0;
    let inertia_v = in_range.then(|| {
        let nu = inertia_shat.nullity;
        let m = 2 * n - 4 - nu - inertia_shat.morse_index;
        IndexReport::new(m, nu, 2 * n - 3 - m - nu)
    });
    let reduced = inertia_v.as_ref().map(TheoremVerdict::from_inertia);
    let mut criteria = Vec::new();
    if let Some(r) = &reduced {
        if r.morse_index % 2 == 1 {
            criteria.push(Criterion::ReducedSpaceOddIndex);
        }
        if r.nullity % 2 == 1 {
            criteria.push(Criterion::ReducedSpaceOddNullity);
        }
    }
    if inertia_shat.morse_index % 2 == 1 {
        criteria.push(Criterion::E2OddIndex);
    }
    if inertia_shat.nullity % 2 == 1 {
        criteria.push(Criterion::E2OddNullity);
    }
    if criteria.is_empty() {
        criteria.push(Criterion::None);
    }
    NBodyVerdict {
        alpha,
        n,
        inertia_shat,
        inertia_v,
        predicts_instability: e2.predicts_instability
            || reduced.is_some_and(|r| r.predicts_instability),
        reduced,
        e2,
        criteria,
    }
}

pub fn stability_verdict(
    cc: &CentralConfiguration,
    tol: &Tolerance,
) -> Result<(AmendedHessianReport, NBodyVerdict)> {
    let report = amended_hessian(cc, tol)?;
    let mut verdict = verdict_from_indices(cc.system.alpha, cc.system.n(), report.inertia_shat);
    if verdict.inertia_v.is_some() {
        verdict.inertia_v = Some(report.inertia_v);
        verdict.reduced = Some(TheoremVerdict::from_inertia(&report.inertia_v));
    }
    Ok((report, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_body() -> NBodySystem {
        NBodySystem::new(vec![1.0, 1.0], 1.0, &[[0.5, 0.0], [-0.5, 0.0]]).unwrap()
    }

    fn equilateral(side: f64) -> NBodySystem {
        let h = side * 3f64.sqrt() / 2.0;
        NBodySystem::new(
            vec![1.0; 3],
            1.0,
            &[[0.0, 0.0], [side, 0.0], [side / 2.0, h]],
        )
        .unwrap()
    }

    #[test]
    fn potential_examples() {
        assert!((potential_u(&two_body()).unwrap() - 1.0).abs() < 1e-15);
        assert!((potential_u(&equilateral(1.0)).unwrap() - 3.0).abs() < 1e-14);
        let s = equilateral(1.0);
        let scaled = s.with_q(s.q().iter().map(|x| 2.0 * x).collect());
        assert!((potential_u(&scaled).unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn inertia_examples() {
        assert!((locked_inertia(&two_body()) - 0.5).abs() < 1e-15);
        assert_eq!(inertia_gradient(&two_body()), vec![1.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn two_body_gradient() {
        let g = grad_u(&two_body()).unwrap();
        // body 1 at +1/2 is pulled toward the partner at −1/2
        assert!((g[0] + 1.0).abs() < 1e-15 && (g[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn collision_is_reported() {
        let s = NBodySystem::new(
            vec![1.0, 1.0, 1.0],
            1.0,
            &[[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
        )
        .unwrap();
        assert!(matches!(potential_u(&s), Err(Error::Collision { .. })));
    }

    #[test]
    fn equilateral_cc_from_perturbed_seed() {
        let seed = NBodySystem::new(
            vec![1.0; 3],
            1.0,
            &[[0.02, -0.01], [1.0, 0.03], [0.45, 0.9]],
        )
        .unwrap();
        let cc = find_central_configuration(&seed, &CcSettings::default()).unwrap();
        assert!(cc.residual <= 1e-10);
        assert!((cc.inertia - 1.0).abs() < 1e-12);
        let s = &cc.system;
        let d: Vec<f64> = [(0, 1), (1, 2), (0, 2)]
            .iter()
            .map(|&(i, j)| s.pair(i, j).1)
            .collect();
        assert!((d[0] - d[1]).abs() < 1e-9 && (d[1] - d[2]).abs() < 1e-9);
        assert!(s.q()[1].abs() < 1e-15 && s.q()[0] > 0.0);
    }

    #[test]
    fn two_body_cc_is_immediate() {
        let seed = NBodySystem::new(vec![1.0, 3.0], 1.0, &[[0.0, 0.0], [0.3, 0.4]]).unwrap();
        let cc = find_central_configuration(&seed, &CcSettings::default()).unwrap();
        assert_eq!(cc.iterations, 0);
        assert!((cc.inertia - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_body_radial_eigenvalue() {
        let cc = CentralConfiguration::from_system(&two_body(), 1e-10).unwrap();
        let r = amended_hessian(&cc, &Tolerance::default()).unwrap();
        assert!((r.radial_eigenvalue - cc.xi_squared).abs() < 1e-12);
        assert!(r.radial_residual < 1e-10);
        assert_eq!(r.matrix_on_v.rows(), 1);
    }

    #[test]
    fn equilateral_indices() {
        let cc = CentralConfiguration::from_system(&equilateral(1.0), 1e-10).unwrap();
        let (r, v) = stability_verdict(&cc, &Tolerance::default()).unwrap();
        assert_eq!((r.inertia_shat.morse_index, r.inertia_shat.nullity), (0, 0));
        assert_eq!(r.inertia_v.morse_index, 2);
        assert!(r.sign_identity_residual < 1e-8);
        assert!(!v.predicts_instability);
        assert_eq!(v.criteria, vec![Criterion::None]);
    }

    #[test]
    fn nullity_branch_fires() {
        let v = verdict_from_indices(1.0, 3, IndexReport::new(0, 1, 1));
        assert!(v.predicts_instability);
        assert!(v.criteria.contains(&Criterion::E2OddNullity));
        assert!(v.criteria.contains(&Criterion::ReducedSpaceOddNullity));
        let v = verdict_from_indices(3.0, 3, IndexReport::new(1, 0, 1));
        assert!(v.reduced.is_none());
        assert_eq!(v.criteria, vec![Criterion::E2OddIndex]);
    }

    #[test]
    fn e1_examples() {
        let r = e1_linearization(1.0, 1.0).unwrap();
        assert!(r.max_deviation < 1e-12);
        assert!(r
            .computed
            .iter()
            .any(|z| (z - Complex64::new(0.0, 1.0)).norm() < 1e-12));
        let r = e1_linearization(2.0, 3.0).unwrap();
        assert!(r
            .computed
            .iter()
            .any(|z| (z - Complex64::new(2.0, 0.0)).norm() < 1e-12));
        let r = e1_linearization(1.0, 2.0).unwrap();
        assert_eq!(r.rank_powers, vec![3, 2, 1, 0]);
        assert!(r.single_jordan_block);
        assert!(e1_linearization(0.0, 1.0).is_err());
    }
}
