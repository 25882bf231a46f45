//! Stability taxonomy for `JB` (and `ΩB` via `Ω = QJQᵀ`), the parity theorem,
//! kernel-based certificates, and the 2×2 block normal forms.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{exact_sqrt, Field, FieldKind, Rational};
use crate::linalg::{
    determinant, inertia, kernel, restrict_form, solve, symplectic_reduction, AxisTest, Backend,
    IndexReport, Semisimplicity, Spectrum, SpectrumEntry, Tolerance,
};
use crate::matrix::Matrix;
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    SpectrallyUnstable,
    SpectrallyStableNotLinear,
    LinearlyStable,
    /// Float backend only: a decision fell inside the tolerance band.
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::SpectrallyUnstable => "spectrally_unstable",
            Verdict::SpectrallyStableNotLinear => "spectrally_stable_not_linear",
            Verdict::LinearlyStable => "linearly_stable",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityClassification {
    /// `None` when undecided on the float backend.
    pub spectrum_on_axis: Option<bool>,
    pub semisimple: Option<bool>,
    pub verdict: Verdict,
    pub off_axis_witness: Option<Complex64>,
    pub defective_eigenvalues: Vec<SpectrumEntry>,
    pub axis_test: AxisTest,
    pub semisimplicity: Semisimplicity,
    pub spectrum: Spectrum,
    pub field: FieldKind,
    pub tolerance: Tolerance,
    pub absolute_tolerance: f64,
    /// A nonstandard Ω was reduced to `J` by congruence.
    pub reduced_from_omega: bool,
}

/// Hamiltonian matrix `J·B` (or `J·QᵀBQ` for `Ω = QJQᵀ`) after shape checks.
pub fn hamiltonian_matrix<T: Backend>(
    b: &Matrix<T>,
    omega: Option<&Matrix<T>>,
    tol: &Tolerance,
) -> Result<Matrix<T>> {
    let dim = b.ensure_square()?;
    if dim % 2 != 0 {
        return Err(Error::OddDimension(dim));
    }
    let b = b.require_symmetric(tol.absolute_for(b))?;
    let b = match omega {
        None => b,
        Some(om) => {
            if om.rows() != dim || om.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: om.rows(),
                });
            }
            let q = symplectic_reduction(om, tol)?;
            b.congruence(&q)
        }
    };
    Ok(&Matrix::symplectic_j(dim / 2) * &b)
}

/// Spectral and linear stability of `ΩB` (`Ω = J` when absent).
pub fn classify<T: Backend>(
    b: &Matrix<T>,
    omega: Option<&Matrix<T>>,
    tol: &Tolerance,
) -> Result<StabilityClassification> {
    let a = hamiltonian_matrix(b, omega, tol)?;
    let abs = tol.absolute_for(&a);
    let axis_test = T::imaginary_axis_test(&a, tol);
    let semisimplicity = T::semisimplicity_of(&a, tol);
    let spectrum = T::spectrum_of(&a, abs);
    let spectrum_on_axis = axis_test.decided();
    let semisimple = semisimplicity.decided();
    let verdict = match (spectrum_on_axis, semisimple) {
        (Some(false), _) => Verdict::SpectrallyUnstable,
        (None, _) | (Some(true), None) => Verdict::Indeterminate,
        (Some(true), Some(true)) => Verdict::LinearlyStable,
        (Some(true), Some(false)) => Verdict::SpectrallyStableNotLinear,
    };
    let off_axis_witness = match &axis_test {
        AxisTest::OffAxis { witness } => Some(*witness),
        _ => None,
    };
    let defective_eigenvalues = match &semisimplicity {
        Semisimplicity::Defective { eigenvalues, .. } => eigenvalues.clone(),
        _ => Vec::new(),
    };
    Ok(StabilityClassification {
        spectrum_on_axis,
        semisimple,
        verdict,
        off_axis_witness,
        defective_eigenvalues,
        axis_test,
        semisimplicity,
        spectrum,
        field: T::KIND,
        tolerance: *tol,
        absolute_tolerance: abs,
        reduced_from_omega: omega.is_some(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityReason {
    OddIndex,
    OddNullity,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremVerdict {
    pub morse_index: usize,
    pub nullity: usize,
    pub predicts_instability: bool,
    pub reason: ParityReason,
}

impl TheoremVerdict {
    pub fn from_inertia(r: &IndexReport) -> Self {
        let reason = if r.morse_index % 2 == 1 {
            ParityReason::OddIndex
        } else if r.nullity % 2 == 1 {
            ParityReason::OddNullity
        } else {
            ParityReason::None
        };
        TheoremVerdict {
            morse_index: r.morse_index,
            nullity: r.nullity,
            predicts_instability: reason != ParityReason::None,
            reason,
        }
    }
}

/// Odd Morse index or odd nullity of `B` forces linear instability of `JB`.
/// Reads the inertia only.
pub fn theorem_predict<T: Backend>(b: &Matrix<T>, tol: &Tolerance) -> Result<TheoremVerdict> {
    Ok(TheoremVerdict::from_inertia(&inertia(b, tol)?))
}

#[derive(Clone, Debug, PartialEq)]
pub enum KernelInvariance<T: Backend> {
    /// `J·ker B = ker B`; such a subspace carries a complex structure, so its
    /// dimension is even.
    JInvariant {
        kernel: Subspace<T>,
        dimension_even: bool,
    },
    /// `w` with `JBw ≠ 0` and `(JB)²w = 0`: a Jordan chain at zero.
    NotInvariantDefective {
        kernel: Subspace<T>,
        witness: Vec<T>,
        jb_witness: Vec<T>,
    },
    /// Not J-invariant, yet `J·ker B ∩ range B = 0`: no Jordan chain at zero.
    NotInvariantNoChain { kernel: Subspace<T> },
}

impl<T: Backend> KernelInvariance<T> {
    pub fn is_j_invariant(&self) -> bool {
        matches!(self, KernelInvariance::JInvariant { .. })
    }

    pub fn kernel(&self) -> &Subspace<T> {
        match self {
            KernelInvariance::JInvariant { kernel, .. }
            | KernelInvariance::NotInvariantDefective { kernel, .. }
            | KernelInvariance::NotInvariantNoChain { kernel } => kernel,
        }
    }
}

/// Solves `Bw = u` with `w` in the complement `W` of the kernel.
fn pull_back<T: Backend>(b: &Matrix<T>, w: &Subspace<T>, u: &[T], tol: f64) -> Result<Vec<T>> {
    let basis = w.basis_matrix();
    let gram = b.congruence(&basis);
    let rhs = Matrix::from_columns(w.dim(), &[basis.transpose().mul_vec(u)]);
    let c = solve(&gram, &rhs, tol)?;
    Ok(basis.mul_vec(&c.column(0)))
}

/// Is `V = ker B` invariant under `J`? If not, looks for `u ∈ J·V ∩ range B`
/// and returns `w = B⁻¹u` (taken in `V⊥`), which satisfies `JBw = Ju ∈ V`.
pub fn kernel_invariance_test<T: Backend>(
    b: &Matrix<T>,
    tol: &Tolerance,
) -> Result<KernelInvariance<T>> {
    let dim = b.ensure_square()?;
    if dim % 2 != 0 {
        return Err(Error::OddDimension(dim));
    }
    let b = b.require_symmetric(tol.absolute_for(b))?;
    let abs = tol.absolute_for(&b);
    let j = Matrix::<T>::symplectic_j(dim / 2);
    let v = kernel(&b, tol)?;
    if v.is_invariant_under(&j, abs) {
        let dimension_even = v.dim() % 2 == 0;
        return Ok(KernelInvariance::JInvariant {
            kernel: v,
            dimension_even,
        });
    }
    let range = v.orthogonal_complement(abs);
    let w1 = v.image(&j, abs).intersection(&range, abs);
    let Some(u) = w1.basis().first() else {
        return Ok(KernelInvariance::NotInvariantNoChain { kernel: v });
    };
    let witness = pull_back(&b, &range, u, abs)?;
    let jb_witness = j.mul_vec(&b.mul_vec(&witness));
    Ok(KernelInvariance::NotInvariantDefective {
        kernel: v,
        witness,
        jb_witness,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvenIndexCheck {
    pub morse_index: usize,
    pub index_odd: bool,
    pub verdict: Verdict,
    /// Sign of `det(ΩB)`, which is `(−1)^𝓜(B)` since `det Ω > 0`.
    pub det_sign: i8,
    /// `𝓜(B)` odd implies spectral instability.
    pub consistent: bool,
}

/// For invertible `B`: odd `𝓜(B)` gives `det(ΩB) < 0`, impossible when every
/// eigenvalue lies on the imaginary axis.
pub fn invertible_even_index_check<T: Backend>(
    b: &Matrix<T>,
    omega: Option<&Matrix<T>>,
    tol: &Tolerance,
) -> Result<EvenIndexCheck> {
    let r = inertia(b, tol)?;
    if r.nullity > 0 {
        return Err(Error::Singular(format!("B has nullity {}", r.nullity)));
    }
    let c = classify(b, omega, tol)?;
    let om = match omega {
        Some(o) => o.clone(),
        None => Matrix::symplectic_j(b.rows() / 2),
    };
    let det = determinant(&(&om * b))?;
    let index_odd = r.morse_index % 2 == 1;
    let det_sign = det.sign(0.0);
    let consistent = !index_odd || (c.verdict == Verdict::SpectrallyUnstable && det_sign < 0);
    Ok(EvenIndexCheck {
        morse_index: r.morse_index,
        index_odd,
        verdict: c.verdict,
        det_sign,
        consistent,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantSplit<T: Backend> {
    pub kernel: Subspace<T>,
    pub complement: Subspace<T>,
    /// Gram matrix of `B` on the complement basis.
    pub restricted: Matrix<T>,
}

/// `ℝ²ⁿ = V ⊕ V⊥` for a J-invariant kernel; `V⊥` is then J- and B-invariant
/// and `B` is an isomorphism on it.
pub fn invariant_split<T: Backend>(b: &Matrix<T>, tol: &Tolerance) -> Result<InvariantSplit<T>> {
    let test = kernel_invariance_test(b, tol)?;
    if !test.is_j_invariant() {
        return Err(Error::Hypothesis(
            "kernel is not J-invariant; the split does not apply".into(),
        ));
    }
    let b = b.require_symmetric(tol.absolute_for(b))?;
    let abs = tol.absolute_for(&b);
    let kernel = test.kernel().clone();
    let complement = kernel.orthogonal_complement(abs);
    let checks = hypothesis_checks(&b, &complement, tol)?;
    if let Some(msg) = checks.failure_message() {
        return Err(Error::Hypothesis(format!(
            "complement of the kernel: {msg}"
        )));
    }
    let restricted = restrict_form(&b, &complement)?;
    Ok(InvariantSplit {
        kernel,
        complement,
        restricted,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisChecks {
    pub j_invariant: bool,
    pub b_invariant: bool,
    pub b_isomorphism: bool,
}

impl HypothesisChecks {
    pub fn all(&self) -> bool {
        self.j_invariant && self.b_invariant && self.b_isomorphism
    }

    pub fn failure_message(&self) -> Option<String> {
        let mut failed = Vec::new();
        if !self.j_invariant {
            failed.push("not J-invariant");
        }
        if !self.b_invariant {
            failed.push("not B-invariant");
        }
        if !self.b_isomorphism {
            failed.push("B is not an isomorphism on it");
        }
        (!failed.is_empty()).then(|| failed.join("; "))
    }
}

pub fn hypothesis_checks<T: Backend>(
    b: &Matrix<T>,
    w: &Subspace<T>,
    tol: &Tolerance,
) -> Result<HypothesisChecks> {
    let n = b.ensure_square()?;
    if w.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.ambient_dim(),
        });
    }
    let abs = tol.absolute_for(b);
    let j = Matrix::<T>::symplectic_j(n / 2);
    let b_invariant = w.is_invariant_under(b, abs);
    // with BW ⊆ W, the Gram matrix is singular iff B kills a vector of W
    let b_isomorphism = inertia(&restrict_form(b, w)?, tol)?.nullity == 0;
    Ok(HypothesisChecks {
        j_invariant: w.is_invariant_under(&j, abs),
        b_invariant,
        b_isomorphism,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateVerdict {
    SpectrallyUnstable,
    NoConclusion,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstabilityCertificate<T: Backend> {
    pub subspace: Subspace<T>,
    pub restricted_inertia: IndexReport,
    pub checks: HypothesisChecks,
    pub verdict: CertificateVerdict,
}

/// Odd `𝓜(B|_W)` on a J-invariant, B-invariant `W` where `B` is invertible
/// forces spectral instability. `W` defaults to the complement of a J-invariant kernel.
pub fn spectral_instability_certificate<T: Backend>(
    b: &Matrix<T>,
    w: Option<&Subspace<T>>,
    tol: &Tolerance,
) -> Result<InstabilityCertificate<T>> {
    let b = b.require_symmetric(tol.absolute_for(b))?;
    if b.rows() % 2 != 0 {
        return Err(Error::OddDimension(b.rows()));
    }
    let subspace = match w {
        Some(w) => w.clone(),
        None => invariant_split(&b, tol)?.complement,
    };
    let checks = hypothesis_checks(&b, &subspace, tol)?;
    if let Some(msg) = checks.failure_message() {
        return Err(Error::Hypothesis(msg));
    }
    let restricted_inertia = inertia(&restrict_form(&b, &subspace)?, tol)?;
    let verdict = if restricted_inertia.morse_index % 2 == 1 {
        CertificateVerdict::SpectrallyUnstable
    } else {
        CertificateVerdict::NoConclusion
    };
    Ok(InstabilityCertificate {
        subspace,
        restricted_inertia,
        checks,
        verdict,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    NilpotentJordan,
    ImaginaryPair,
    RealPair,
    Zero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockNormalForm<T: Field> {
    pub b_k: T,
    pub b_nk: T,
    pub kind: BlockKind,
    /// `+√(−b_k b_{n+k})` and its negative.
    pub eigenvalues: [Complex64; 2],
    /// Exact Gaussian-rational eigenvalues when `|b_k b_{n+k}|` is a rational square.
    pub exact_eigenvalues: Option<[(Rational, Rational); 2]>,
}

impl<T: Field> BlockNormalForm<T> {
    /// `[[0, −b_{n+k}], [b_k, 0]]`.
    pub fn matrix(&self) -> Matrix<T> {
        block_matrix(&self.b_k, &self.b_nk)
    }
}

pub fn block_matrix<T: Field>(b_k: &T, b_nk: &T) -> Matrix<T> {
    Matrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => -b_nk.clone(),
        (1, 0) => b_k.clone(),
        _ => T::zero(),
    })
}

/// The 2×2 block of `JB` for `B = diag{…, b_k, …, b_{n+k}, …}`.
pub fn block_normal_form<T: Field>(b_k: T, b_nk: T, tol: &Tolerance) -> BlockNormalForm<T> {
    let abs = if T::is_exact() {
        0.0
    } else {
        tol.relative * (1.0 + b_k.magnitude().max(b_nk.magnitude()))
    };
    let (sk, snk) = (b_k.sign(abs), b_nk.sign(abs));
    let kind = match (sk, snk) {
        (0, 0) => BlockKind::Zero,
        (0, _) | (_, 0) => BlockKind::NilpotentJordan,
        _ if sk == snk => BlockKind::ImaginaryPair,
        _ => BlockKind::RealPair,
    };
    let prod = b_k.as_f64() * b_nk.as_f64();
    let root = match kind {
        BlockKind::ImaginaryPair => Complex64::new(0.0, prod.sqrt()),
        BlockKind::RealPair => Complex64::new((-prod).sqrt(), 0.0),
        _ => Complex64::new(0.0, 0.0),
    };
    let exact_eigenvalues = match (b_k.exact_value(), b_nk.exact_value()) {
        (Some(x), Some(y)) => {
            let p = x * y;
            let zero = Rational::from_int(0);
            exact_sqrt(&num_traits::Signed::abs(&p)).map(|s| {
                if p > zero {
                    [(zero.clone(), s.clone()), (zero, -s)]
                } else {
                    [(s.clone(), zero.clone()), (-s, zero)]
                }
            })
        }
        _ => None,
    };
    BlockNormalForm {
        b_k,
        b_nk,
        kind,
        eigenvalues: [root, -root],
        exact_eigenvalues,
    }
}
