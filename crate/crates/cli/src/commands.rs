use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use relequil::io::{self, AnyMatrix, PathSpec};
use relequil::linalg::{inertia, symplectic_reduction};
use relequil::nbody::{
    e1_linearization, find_central_configuration, potential_u, stability_verdict,
};
use relequil::spectral_flow::{
    kappa_identity_check, spectral_flow, FlowOptions, KreinPath, LinearPath, SelfAdjointPath,
};
use relequil::stability::{
    classify, invertible_even_index_check, kernel_invariance_test,
    spectral_instability_certificate, theorem_predict, Verdict,
};
use relequil::{Backend, Error, FieldKind, Matrix, Tolerance};

use crate::report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Classify,
    Flow,
    NbodyFindCc,
    NbodyStability,
    WorkedExamples,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BackendChoice {
    /// Exact for rational input, float otherwise.
    #[default]
    Auto,
    Exact,
    Float,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub input: Option<PathBuf>,
    pub backend: BackendChoice,
    pub tol: Tolerance,
    pub omega: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub s_max: Option<f64>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(subcommand: Subcommand) -> Self {
        RunConfig {
            subcommand,
            input: None,
            backend: BackendChoice::Auto,
            tol: Tolerance::default(),
            omega: None,
            out: None,
            s_max: None,
            seed: 0,
        }
    }
}

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INPUT: i32 = 1;
    pub const INDETERMINATE: i32 = 2;
    pub const IRREGULAR: i32 = 3;
}

/// What a subcommand produced: a JSON report, a human table, or both.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<Value>,
    pub table: Option<String>,
    pub diagnostic: Option<String>,
}

impl Outcome {
    fn failure(e: &Error) -> Self {
        Outcome {
            code: exit_code(e),
            report: None,
            table: None,
            diagnostic: Some(e.to_string()),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::IrregularCrossing { .. } => exit::IRREGULAR,
        Error::Indeterminate(_)
        | Error::UnresolvedCrossing { .. }
        | Error::NoConvergence { .. } => exit::INDETERMINATE,
        _ => exit::INPUT,
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    let result = match cfg.subcommand {
        Subcommand::Classify => run_classify(cfg),
        Subcommand::Flow => run_flow(cfg),
        Subcommand::NbodyFindCc => run_find_cc(cfg),
        Subcommand::NbodyStability => run_nbody_stability(cfg),
        Subcommand::WorkedExamples => return crate::worked::run_worked_examples(cfg.seed),
    };
    result.unwrap_or_else(|e| Outcome::failure(&e))
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn input(cfg: &RunConfig) -> Result<Value, Error> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| Error::Invalid("missing input file".into()))?;
    read_json(path)
}

/// Resolved arithmetic for a set of input matrices.
fn resolve(choice: BackendChoice, inputs: &[&AnyMatrix]) -> Result<FieldKind, Error> {
    let all_rational = inputs.iter().all(|m| m.field() == FieldKind::Rational);
    match choice {
        BackendChoice::Float => Ok(FieldKind::Float64),
        BackendChoice::Auto if all_rational => Ok(FieldKind::Rational),
        BackendChoice::Auto => Ok(FieldKind::Float64),
        BackendChoice::Exact if all_rational => Ok(FieldKind::Rational),
        BackendChoice::Exact => Err(Error::FieldMismatch {
            expected: FieldKind::Rational,
            found: FieldKind::Float64,
        }),
    }
}

fn backend_name(k: FieldKind) -> &'static str {
    match k {
        FieldKind::Rational => "exact",
        FieldKind::Float64 => "float",
    }
}

pub fn classify_report<T: Backend>(
    b: &Matrix<T>,
    omega: Option<&Matrix<T>>,
    tol: &Tolerance,
) -> Result<(Value, Verdict), Error> {
    let c = classify(b, omega, tol)?;
    let r = inertia(b, tol)?;
    let t = theorem_predict(b, tol)?;
    // certificates are stated for the standard form
    let b_std = match omega {
        Some(om) => b.congruence(&symplectic_reduction(om, tol)?),
        None => b.clone(),
    };
    let kernel = kernel_invariance_test(&b_std, tol)?;
    let certificate = match spectral_instability_certificate(&b_std, None, tol) {
        Ok(cert) => report::certificate(&cert),
        Err(e @ (Error::Hypothesis(_) | Error::Singular(_))) => report::not_applicable(e),
        Err(e) => return Err(e),
    };
    let even = match invertible_even_index_check(b, omega, tol) {
        Ok(e) => report::even_index(&e),
        Err(e @ Error::Singular(_)) => report::not_applicable(e),
        Err(e) => return Err(e),
    };
    let value = json!({
        "inertia": report::index(&r),
        "classification": report::classification(&c),
        "theorem": {
            "morse_index": t.morse_index,
            "nullity": t.nullity,
            "predicts_instability": t.predicts_instability,
            "reason": serde_json::to_value(t.reason)?,
            "consistent": !(t.predicts_instability && c.verdict == Verdict::LinearlyStable),
        },
        "certificates": {
            "kernel_invariance": report::kernel_invariance(&kernel),
            "instability_certificate": certificate,
            "even_index": even,
        },
    });
    Ok((value, c.verdict))
}

pub fn run_classify(cfg: &RunConfig) -> Result<Outcome, Error> {
    let b = io::matrix_from_json(&input(cfg)?)?;
    let omega = cfg
        .omega
        .as_deref()
        .map(read_json)
        .transpose()?
        .map(|v| io::matrix_from_json(&v))
        .transpose()?;
    let mut all = vec![&b];
    all.extend(omega.as_ref());
    let kind = resolve(cfg.backend, &all)?;
    let (mut value, verdict) = match kind {
        FieldKind::Rational => {
            let om = omega.as_ref().map(AnyMatrix::to_rational).transpose()?;
            classify_report(&b.to_rational()?, om.as_ref(), &cfg.tol)?
        }
        FieldKind::Float64 => {
            let om = omega.as_ref().map(AnyMatrix::to_f64);
            classify_report(&b.to_f64(), om.as_ref(), &cfg.tol)?
        }
    };
    value["input"] = json!({
        "dimension": b.rows(),
        "field": b.field().to_string(),
        "backend": backend_name(kind),
        "omega": omega.is_some(),
    });
    let code = if verdict == Verdict::Indeterminate {
        exit::INDETERMINATE
    } else {
        exit::SUCCESS
    };
    Ok(Outcome {
        code,
        report: Some(value),
        ..Outcome::default()
    })
}

fn endpoint_formula<T: Backend>(
    a0: &Matrix<T>,
    a1: &Matrix<T>,
    tol: &Tolerance,
) -> Result<Value, Error> {
    let (r0, r1) = (inertia(a0, tol)?, inertia(a1, tol)?);
    Ok(json!({
        "start": report::index(&r0),
        "end": report::index(&r1),
        "nondegenerate": r0.nullity == 0 && r1.nullity == 0,
        "index_difference": r0.morse_index as i64 - r1.morse_index as i64,
    }))
}

fn flow_report(path: &dyn SelfAdjointPath, opts: &FlowOptions) -> Result<Value, Error> {
    Ok(report::flow(&spectral_flow(path, opts)?))
}

fn kappa_value<T: Backend>(b: &Matrix<T>, tol: &Tolerance) -> Result<Value, Error> {
    match kappa_identity_check(b, tol) {
        Ok(k) => Ok(report::kappa(&k)),
        Err(e @ (Error::Precondition(_) | Error::Indeterminate(_))) => {
            Ok(report::not_applicable(e))
        }
        Err(e) => Err(e),
    }
}

/// Every crossing of `B + sG` lies in `[0, ‖B‖_∞]`.
fn default_s_max(b: &AnyMatrix) -> f64 {
    1.0 + b.to_f64().norm_inf()
}

pub fn run_flow(cfg: &RunConfig) -> Result<Outcome, Error> {
    let spec = io::path_from_json(&input(cfg)?)?;
    let opts = FlowOptions {
        tol: cfg.tol,
        ..FlowOptions::default()
    };
    let value = match &spec {
        PathSpec::Krein { b, s_max } => {
            let kind = resolve(cfg.backend, &[b])?;
            let s_max = cfg
                .s_max
                .or_else(|| s_max.as_ref().map(relequil::field::rational_to_f64))
                .unwrap_or_else(|| default_s_max(b));
            let (flow, kappa) = match kind {
                FieldKind::Rational => {
                    let bq = b.to_rational()?;
                    let path = KreinPath::new(&bq, s_max, &cfg.tol)?;
                    (flow_report(&path, &opts)?, kappa_value(&bq, &cfg.tol)?)
                }
                FieldKind::Float64 => {
                    let bf = b.to_f64();
                    let path = KreinPath::new(&bf, s_max, &opts.tol)?;
                    let opts = FlowOptions {
                        force_float: true,
                        ..opts
                    };
                    (flow_report(&path, &opts)?, kappa_value(&bf, &cfg.tol)?)
                }
            };
            json!({
                "path": { "type": "krein", "dimension": b.rows(), "domain": [io::float(0.0), io::float(s_max)] },
                "backend": backend_name(kind),
                "flow": flow,
                "kappa_identity": kappa,
            })
        }
        PathSpec::Linear { a0, a1 } => {
            let kind = resolve(cfg.backend, &[a0, a1])?;
            let (flow, endpoints) = match kind {
                FieldKind::Rational => {
                    let (p, q) = (a0.to_rational()?, a1.to_rational()?);
                    let path = LinearPath::new(&p, &q, &cfg.tol)?;
                    (
                        flow_report(&path, &opts)?,
                        endpoint_formula(&p, &q, &cfg.tol)?,
                    )
                }
                FieldKind::Float64 => {
                    let (p, q) = (a0.to_f64(), a1.to_f64());
                    let path = LinearPath::new(&p, &q, &cfg.tol)?;
                    let opts = FlowOptions {
                        force_float: true,
                        ..opts
                    };
                    (
                        flow_report(&path, &opts)?,
                        endpoint_formula(&p, &q, &cfg.tol)?,
                    )
                }
            };
            json!({
                "path": { "type": "linear", "dimension": a0.rows(), "domain": [io::float(0.0), io::float(1.0)] },
                "backend": backend_name(kind),
                "flow": flow,
                "endpoints": endpoints,
            })
        }
    };
    Ok(Outcome {
        code: exit::SUCCESS,
        report: Some(value),
        ..Outcome::default()
    })
}

fn float_only(cfg: &RunConfig) -> Result<(), Error> {
    if cfg.backend == BackendChoice::Exact {
        return Err(Error::Invalid(
            "n-body computations run on the float backend only".into(),
        ));
    }
    Ok(())
}

pub fn run_find_cc(cfg: &RunConfig) -> Result<Outcome, Error> {
    float_only(cfg)?;
    let (sys, settings) = io::problem_from_json(&input(cfg)?)?;
    let cc = find_central_configuration(&sys, &settings)?;
    let mut value = report::central_configuration(&cc);
    value["potential"] = io::float(potential_u(&cc.system)?);
    Ok(Outcome {
        code: exit::SUCCESS,
        report: Some(json!({ "central_configuration": value })),
        ..Outcome::default()
    })
}

pub fn run_nbody_stability(cfg: &RunConfig) -> Result<Outcome, Error> {
    float_only(cfg)?;
    let (sys, settings) = io::problem_from_json(&input(cfg)?)?;
    let cc = find_central_configuration(&sys, &settings)?;
    let (amended, verdict) = stability_verdict(&cc, &cfg.tol)?;
    let e1 = e1_linearization(cc.xi_squared.sqrt(), cc.system.alpha())?;
    let value = json!({
        "central_configuration": report::central_configuration(&cc),
        "amended_hessian": report::amended(&amended),
        "verdict": report::nbody_verdict(&verdict),
        "e1": report::e1(&e1),
    });
    Ok(Outcome {
        code: exit::SUCCESS,
        report: Some(value),
        ..Outcome::default()
    })
}
