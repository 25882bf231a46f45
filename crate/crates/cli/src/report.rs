//! JSON views of library results.

use num_complex::Complex64;
use serde_json::{json, Value};

use relequil::io::{float, float_matrix_to_json, rational, subspace_to_json};
use relequil::linalg::{AxisTest, Semisimplicity, Spectrum, SpectrumEntry};
use relequil::nbody::{AmendedHessianReport, CentralConfiguration, E1Report, NBodyVerdict};
use relequil::spectral_flow::{Crossing, CrossingPosition, FlowReport, KappaReport};
use relequil::stability::{
    EvenIndexCheck, InstabilityCertificate, KernelInvariance, StabilityClassification,
    TheoremVerdict,
};
use relequil::{Backend, IndexReport, Tolerance};

pub fn complex(z: Complex64) -> Value {
    json!({ "re": float(z.re), "im": float(z.im) })
}

pub fn index(r: &IndexReport) -> Value {
    json!({
        "morse_index": r.morse_index,
        "nullity": r.nullity,
        "coindex": r.coindex,
        "dimension": r.subspace_dim,
        "signature": r.signature(),
    })
}

pub fn tolerance(t: &Tolerance) -> Value {
    json!({ "relative": float(t.relative), "band_factor": float(t.band_factor) })
}

fn entry(e: &SpectrumEntry) -> Value {
    json!({
        "value": complex(e.value),
        "multiplicity": e.multiplicity,
        "exact": e.exact.as_ref().map(|(re, im)| json!({ "re": rational(re), "im": rational(im) })),
        "factor": e.factor.as_ref().map(|p| p.to_string()),
        "on_axis_exact": e.on_axis_exact,
    })
}

pub fn spectrum(s: &Spectrum) -> Value {
    json!({
        "eigenvalues": s.entries.iter().map(entry).collect::<Vec<_>>(),
        "characteristic_polynomial": s.characteristic_polynomial.as_ref().map(|p| p.to_string()),
        "total_multiplicity": s.total_multiplicity(),
    })
}

fn semisimplicity(s: &Semisimplicity) -> Value {
    match s {
        Semisimplicity::Semisimple { minimal_polynomial } => json!({
            "status": "semisimple",
            "minimal_polynomial": minimal_polynomial.as_ref().map(|p| p.to_string()),
        }),
        Semisimplicity::Defective {
            eigenvalues,
            minimal_polynomial,
        } => json!({
            "status": "defective",
            "defective_eigenvalues": eigenvalues.iter().map(entry).collect::<Vec<_>>(),
            "minimal_polynomial": minimal_polynomial.as_ref().map(|p| p.to_string()),
        }),
        Semisimplicity::Indeterminate {
            eigenvalue,
            singular_values,
            tolerance,
        } => json!({
            "status": "indeterminate",
            "eigenvalue": complex(*eigenvalue),
            "singular_values": singular_values.iter().map(|x| float(*x)).collect::<Vec<_>>(),
            "tolerance": float(*tolerance),
        }),
    }
}

fn axis(a: &AxisTest) -> Value {
    match a {
        AxisTest::OnAxis { reduced } => json!({
            "status": "on_axis",
            "reduced_polynomial": reduced.as_ref().map(|p| p.to_string()),
        }),
        AxisTest::OffAxis { witness } => {
            json!({ "status": "off_axis", "witness": complex(*witness) })
        }
        AxisTest::Indeterminate {
            eigenvalue,
            tolerance,
        } => json!({
            "status": "indeterminate",
            "eigenvalue": complex(*eigenvalue),
            "tolerance": float(*tolerance),
        }),
    }
}

pub fn classification(c: &StabilityClassification) -> Value {
    json!({
        "verdict": c.verdict.as_str(),
        "spectrum_on_axis": c.spectrum_on_axis,
        "semisimple": c.semisimple,
        "off_axis_witness": c.off_axis_witness.map(complex),
        "axis_test": axis(&c.axis_test),
        "semisimplicity": semisimplicity(&c.semisimplicity),
        "spectrum": spectrum(&c.spectrum),
        "field": c.field.to_string(),
        "tolerance": tolerance(&c.tolerance),
        "absolute_tolerance": float(c.absolute_tolerance),
        "reduced_from_omega": c.reduced_from_omega,
    })
}

pub fn theorem(t: &TheoremVerdict) -> Value {
    serde_json::to_value(t).unwrap_or(Value::Null)
}

pub fn kernel_invariance<T: Backend>(k: &KernelInvariance<T>) -> Value {
    let vec = |v: &[T]| -> Value {
        Value::Array(
            v.iter()
                .map(|x| {
                    x.exact_value()
                        .map_or_else(|| float(x.as_f64()), |r| rational(&r))
                })
                .collect(),
        )
    };
    match k {
        KernelInvariance::JInvariant {
            kernel,
            dimension_even,
        } => json!({
            "status": "j_invariant",
            "kernel": subspace_to_json(kernel),
            "dimension_even": dimension_even,
        }),
        KernelInvariance::NotInvariantDefective {
            kernel,
            witness,
            jb_witness,
        } => json!({
            "status": "not_invariant_defective",
            "kernel": subspace_to_json(kernel),
            "witness": vec(witness),
            "jb_witness": vec(jb_witness),
        }),
        KernelInvariance::NotInvariantNoChain { kernel } => json!({
            "status": "not_invariant_no_chain",
            "kernel": subspace_to_json(kernel),
        }),
    }
}

pub fn certificate<T: Backend>(c: &InstabilityCertificate<T>) -> Value {
    json!({
        "applicable": true,
        "subspace_dimension": c.subspace.dim(),
        "restricted_inertia": index(&c.restricted_inertia),
        "checks": serde_json::to_value(c.checks).unwrap_or(Value::Null),
        "verdict": serde_json::to_value(c.verdict).unwrap_or(Value::Null),
    })
}

pub fn even_index(e: &EvenIndexCheck) -> Value {
    json!({
        "morse_index": e.morse_index,
        "index_odd": e.index_odd,
        "verdict": e.verdict.as_str(),
        "det_sign": e.det_sign,
        "consistent": e.consistent,
    })
}

pub fn not_applicable(reason: impl ToString) -> Value {
    json!({ "applicable": false, "reason": reason.to_string() })
}

fn position(p: CrossingPosition) -> &'static str {
    match p {
        CrossingPosition::Start => "start",
        CrossingPosition::Interior => "interior",
        CrossingPosition::End => "end",
    }
}

pub fn crossing(c: &Crossing) -> Value {
    json!({
        "location": float(c.location),
        "exact_location": c.exact_location.as_ref().map(rational),
        "position": position(c.position),
        "multiplicity": c.multiplicity,
        "kernel_dimension": c.kernel_dim(),
        "operator_eigenvalues": c.operator_eigenvalues.iter().map(|x| float(*x)).collect::<Vec<_>>(),
        "positive": c.positive,
        "negative": c.negative,
        "signature": c.signature,
        "regular": c.regular,
    })
}

pub fn flow(f: &FlowReport) -> Value {
    json!({
        "crossings": f.crossings.iter().map(crossing).collect::<Vec<_>>(),
        "spectral_flow": f.spectral_flow,
        "relative_morse_index": -f.spectral_flow,
        "start_correction": f.start_correction,
        "end_correction": f.end_correction,
        "method": serde_json::to_value(f.method).unwrap_or(Value::Null),
    })
}

pub fn kappa(k: &KappaReport) -> Value {
    json!({
        "n": k.n,
        "kappa": k.kappa,
        "epsilon": k.epsilon.map(float),
        "nullity_b": k.nullity_b,
        "nullity_gb": k.nullity_gb,
        "holds": k.holds,
    })
}

pub fn central_configuration(cc: &CentralConfiguration) -> Value {
    let s = &cc.system;
    json!({
        "masses": s.masses().iter().map(|m| float(*m)).collect::<Vec<_>>(),
        "alpha": float(s.alpha()),
        "positions": s.positions().iter().map(|p| json!([float(p[0]), float(p[1])])).collect::<Vec<_>>(),
        "xi_squared": float(cc.xi_squared),
        "residual": float(cc.residual),
        "inertia": float(cc.inertia),
        "iterations": cc.iterations,
        "newton_steps": cc.newton_steps,
        "gradient_steps": cc.gradient_steps,
        "cc_tol": float(cc.cc_tol),
    })
}

pub fn amended(r: &AmendedHessianReport) -> Value {
    json!({
        "matrix_on_v": float_matrix_to_json(&r.matrix_on_v),
        "inertia_v": index(&r.inertia_v),
        "hess_u_on_shat": float_matrix_to_json(&r.hess_u_on_shat),
        "inertia_shat": index(&r.inertia_shat),
        "radial_eigenvalue": float(r.radial_eigenvalue),
        "expected_radial_eigenvalue": float((2.0 - r.alpha) * r.xi_squared),
        "radial_residual": float(r.radial_residual),
        "operator_norm": float(r.operator_norm),
        "sign_identity_residual": float(r.sign_identity_residual),
        "cross_term": float(r.cross_term),
        "xi_squared": float(r.xi_squared),
        "alpha": float(r.alpha),
        "n": r.n,
    })
}

pub fn nbody_verdict(v: &NBodyVerdict) -> Value {
    json!({
        "alpha": float(v.alpha),
        "n": v.n,
        "inertia_shat": index(&v.inertia_shat),
        "inertia_v": v.inertia_v.as_ref().map(index),
        "reduced": v.reduced.as_ref().map(theorem),
        "reduced_suppressed": v.reduced.is_none(),
        "e2": theorem(&v.e2),
        "predicts_instability": v.predicts_instability,
        "criteria": serde_json::to_value(&v.criteria).unwrap_or(Value::Null),
    })
}

pub fn e1(r: &E1Report) -> Value {
    json!({
        "alpha": float(r.alpha),
        "xi": float(r.xi),
        "matrix": float_matrix_to_json(&r.matrix),
        "closed_form": r.closed_form.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
        "computed": r.computed.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
        "max_deviation": float(r.max_deviation),
        "rank_powers": r.rank_powers,
        "single_jordan_block": r.single_jordan_block,
        "zero_semisimple": r.zero_semisimple,
    })
}
