//! Built-in reproduction of the worked examples: block taxonomy, the
//! spectrally-stable-but-not-linearly-stable matrix, E₁ eigenvalues, and the
//! two-body / three-body central-configuration pipeline.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use relequil::field::int;
use relequil::linalg::{complex_spectrum, inertia, is_semisimple};
use relequil::nbody::{
    amended_hessian, e1_linearization, find_central_configuration, stability_verdict,
    AmendedHessianReport, CcSettings, CentralConfiguration, NBodySystem,
};
use relequil::stability::{block_normal_form, classify, theorem_predict, BlockKind, Verdict};
use relequil::{Matrix, Rational, Tolerance};

use crate::commands::{exit, Outcome};

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub id: &'static str,
    /// How the expected value is known: `exact`, `closed_form`, or `derived`.
    pub check: &'static str,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

fn row(
    id: &'static str,
    check: &'static str,
    expected: impl Into<String>,
    computed: impl Into<String>,
    pass: bool,
) -> Row {
    Row {
        id,
        check,
        expected: expected.into(),
        computed: computed.into(),
        pass,
    }
}

fn failed(
    id: &'static str,
    check: &'static str,
    expected: impl Into<String>,
    e: impl ToString,
) -> Row {
    row(
        id,
        check,
        expected,
        format!("error: {}", e.to_string()),
        false,
    )
}

fn fmt_complex(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re:.6}"),
        (true, false) => format!("{im:.6}i"),
        _ => format!("{re:.6}{im:+.6}i"),
    }
}

fn fmt_values(values: &[Complex64]) -> String {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    format!(
        "{{{}}}",
        v.iter()
            .map(|z| fmt_complex(*z))
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn block_rows(tol: &Tolerance) -> Vec<Row> {
    let cases: [(&'static str, i64, i64, BlockKind, [Complex64; 2]); 3] = [
        (
            "block_nilpotent",
            1,
            0,
            BlockKind::NilpotentJordan,
            [Complex64::new(0.0, 0.0); 2],
        ),
        (
            "block_imaginary_pair",
            2,
            8,
            BlockKind::ImaginaryPair,
            [Complex64::new(0.0, 4.0), Complex64::new(0.0, -4.0)],
        ),
        (
            "block_real_pair",
            -1,
            4,
            BlockKind::RealPair,
            [Complex64::new(2.0, 0.0), Complex64::new(-2.0, 0.0)],
        ),
    ];
    cases
        .into_iter()
        .map(|(id, bk, bnk, kind, expected)| {
            let form = block_normal_form(int(bk), int(bnk), tol);
            let spec = match complex_spectrum(&form.matrix(), tol) {
                Ok(s) => s,
                Err(e) => return failed(id, "exact", "", e),
            };
            let semisimple = is_semisimple(&form.matrix(), tol)
                .ok()
                .and_then(|s| s.decided());
            let values = spec.values();
            let agree = fmt_values(&values) == fmt_values(&expected)
                && fmt_values(&form.eigenvalues) == fmt_values(&expected);
            let jordan_ok = semisimple == Some(kind != BlockKind::NilpotentJordan);
            row(
                id,
                "exact",
                format!(
                    "{kind:?} {} semisimple={}",
                    fmt_values(&expected),
                    kind != BlockKind::NilpotentJordan
                ),
                format!(
                    "{:?} {} semisimple={}",
                    form.kind,
                    fmt_values(&values),
                    semisimple.map_or("?".into(), |b| b.to_string())
                ),
                form.kind == kind && agree && jordan_ok,
            )
        })
        .collect()
}

fn counterexample() -> Matrix<Rational> {
    Matrix::diag_i64(&[-2, -1, 1, -1, 0, 0])
}

fn counterexample_rows(tol: &Tolerance) -> Vec<Row> {
    let b = counterexample();
    let mut rows = Vec::new();
    let expected_values = fmt_values(&[
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 2f64.sqrt()),
        Complex64::new(0.0, -(2f64.sqrt())),
    ]);
    match classify(&b, None, tol) {
        Ok(c) => {
            let on_axis = c.spectrum.entries.iter().all(|e| e.on_axis_exact);
            rows.push(row(
                "counterexample_spectrum",
                "exact",
                format!("{expected_values} on axis"),
                format!(
                    "{}{}",
                    fmt_values(&c.spectrum.values()),
                    if on_axis { " on axis" } else { " off axis" }
                ),
                fmt_values(&c.spectrum.values()) == expected_values
                    && on_axis
                    && c.spectrum_on_axis == Some(true),
            ));
            rows.push(row(
                "counterexample_semisimple",
                "exact",
                "false",
                c.semisimple.map_or("?".into(), |s| s.to_string()),
                c.semisimple == Some(false),
            ));
            rows.push(row(
                "counterexample_verdict",
                "exact",
                Verdict::SpectrallyStableNotLinear.as_str(),
                c.verdict.as_str(),
                c.verdict == Verdict::SpectrallyStableNotLinear,
            ));
        }
        Err(e) => rows.push(failed("counterexample_verdict", "exact", "", e)),
    }
    match inertia(&b, tol) {
        Ok(r) => rows.push(row(
            "counterexample_inertia",
            "exact",
            "morse=3 nullity=2",
            format!("morse={} nullity={}", r.morse_index, r.nullity),
            r.morse_index == 3 && r.nullity == 2,
        )),
        Err(e) => rows.push(failed(
            "counterexample_inertia",
            "exact",
            "morse=3 nullity=2",
            e,
        )),
    }
    match theorem_predict(&b, tol) {
        Ok(t) => rows.push(row(
            "counterexample_parity",
            "exact",
            "predicts_instability=true",
            format!("predicts_instability={}", t.predicts_instability),
            t.predicts_instability,
        )),
        Err(e) => rows.push(failed("counterexample_parity", "exact", "", e)),
    }
    rows
}

fn e1_rows() -> Vec<Row> {
    let mut rows = Vec::new();
    let cases: [(&'static str, f64, f64, [Complex64; 4]); 2] = [
        (
            "e1_alpha_1",
            1.0,
            1.0,
            [
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
            ],
        ),
        (
            "e1_alpha_3",
            2.0,
            3.0,
            [
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(-2.0, 0.0),
            ],
        ),
    ];
    for (id, xi, alpha, expected) in cases {
        match e1_linearization(xi, alpha) {
            Ok(r) => {
                let dev = r
                    .computed
                    .iter()
                    .zip({
                        let mut e = expected.to_vec();
                        e.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                        e
                    })
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                rows.push(row(
                    id,
                    "closed_form",
                    fmt_values(&expected),
                    fmt_values(&r.computed),
                    dev <= 1e-10 && r.max_deviation <= 1e-10,
                ))
            }
            Err(e) => rows.push(failed(id, "closed_form", fmt_values(&expected), e)),
        }
    }
    match e1_linearization(1.0, 2.0) {
        Ok(r) => rows.push(row(
            "e1_alpha_2_jordan",
            "exact",
            "ranks (3, 2, 1, 0)",
            format!("ranks {:?}", r.rank_powers)
                .replace('[', "(")
                .replace(']', ")"),
            r.single_jordan_block,
        )),
        Err(e) => rows.push(failed(
            "e1_alpha_2_jordan",
            "exact",
            "ranks (3, 2, 1, 0)",
            e,
        )),
    }
    rows
}

/// `δ²V_μ` on `T_qŜ` (the leading block of the form on 𝒱) against `−δ²U|Ŝ`.
pub fn sign_identity_row(r: &AmendedHessianReport) -> Row {
    let k = r.hess_u_on_shat.rows();
    let mut dev: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            dev = dev.max((r.matrix_on_v[(i, j)] + r.hess_u_on_shat[(i, j)]).abs());
        }
    }
    let bound = 1e-8 * (1.0 + r.hess_u_on_shat.norm_inf());
    row(
        "sign_identity_tangent",
        "derived",
        format!("max deviation <= {bound:.1e}"),
        format!("max deviation {dev:.1e}"),
        dev <= bound,
    )
}

fn equilateral_seed(seed: u64) -> NBodySystem {
    let mut rng = StdRng::seed_from_u64(seed);
    let h = 3f64.sqrt() / 2.0;
    let mut pos = [[0.0, 0.0], [1.0, 0.0], [0.5, h]];
    for p in pos.iter_mut() {
        p[0] += rng.random_range(-0.05..0.05);
        p[1] += rng.random_range(-0.05..0.05);
    }
    NBodySystem::new(vec![1.0; 3], 1.0, &pos).expect("valid seed")
}

fn nbody_rows(seed: u64, tol: &Tolerance) -> Vec<Row> {
    let mut rows = Vec::new();
    let settings = CcSettings::default();

    let two = NBodySystem::new(vec![1.0, 1.0], 1.0, &[[0.5, 0.0], [-0.5, 0.0]]).expect("valid");
    match CentralConfiguration::from_system(&two, settings.cc_tol)
        .and_then(|cc| amended_hessian(&cc, tol).map(|r| (cc, r)))
    {
        Ok((cc, r)) => rows.push(row(
            "two_body_radial_eigenvalue",
            "closed_form",
            format!("{:.12}", cc.xi_squared),
            format!("{:.12}", r.radial_eigenvalue),
            (r.radial_eigenvalue - cc.xi_squared).abs() <= 1e-8 * (1.0 + r.operator_norm)
                && r.radial_residual <= 1e-8 * r.operator_norm,
        )),
        Err(e) => rows.push(failed(
            "two_body_radial_eigenvalue",
            "closed_form",
            "xi^2",
            e,
        )),
    }

    let cc = match find_central_configuration(&equilateral_seed(seed), &settings) {
        Ok(cc) => cc,
        Err(e) => {
            rows.push(failed("equilateral_cc", "derived", "residual <= 1e-10", e));
            return rows;
        }
    };
    let s = cc.system.positions();
    let d = |i: usize, j: usize| (s[i][0] - s[j][0]).hypot(s[i][1] - s[j][1]);
    let sides = [d(0, 1), d(1, 2), d(0, 2)];
    let spread = sides.iter().cloned().fold(f64::MIN, f64::max)
        - sides.iter().cloned().fold(f64::MAX, f64::min);
    rows.push(row(
        "equilateral_cc",
        "derived",
        "residual <= 1.0e-10, equal sides",
        format!("residual {:.1e}, side spread {:.1e}", cc.residual, spread),
        cc.residual <= 1e-10 && spread <= 1e-9 && (cc.inertia - 1.0).abs() <= 1e-10,
    ));
    match stability_verdict(&cc, tol) {
        Ok((r, v)) => {
            rows.push(row(
                "equilateral_indices",
                "derived",
                "shat morse=0 nullity=0, v morse=2",
                format!(
                    "shat morse={} nullity={}, v morse={}",
                    r.inertia_shat.morse_index, r.inertia_shat.nullity, r.inertia_v.morse_index
                ),
                r.inertia_shat.morse_index == 0
                    && r.inertia_shat.nullity == 0
                    && r.inertia_v.morse_index == 2,
            ));
            rows.push(row(
                "equilateral_radial_identity",
                "closed_form",
                format!("residual <= {:.1e}", 1e-8 * r.operator_norm),
                format!("residual {:.1e}", r.radial_residual),
                r.radial_residual <= 1e-8 * r.operator_norm,
            ));
            rows.push(sign_identity_row(&r));
            rows.push(row(
                "equilateral_verdict",
                "derived",
                "no parity claim",
                format!(
                    "parity claim: {}",
                    if v.predicts_instability {
                        "unstable"
                    } else {
                        "none"
                    }
                ),
                !v.predicts_instability,
            ));
        }
        Err(e) => rows.push(failed("equilateral_indices", "derived", "", e)),
    }

    let euler =
        NBodySystem::new(vec![1.0; 3], 1.0, &[[-1.0, 0.0], [0.1, 0.0], [1.0, 0.0]]).expect("valid");
    match find_central_configuration(&euler, &settings).and_then(|cc| stability_verdict(&cc, tol)) {
        Ok((r, v)) => rows.push(row(
            "collinear_three_body_verdict",
            "derived",
            "shat morse=1, parity claim: unstable",
            format!(
                "shat morse={}, parity claim: {}",
                r.inertia_shat.morse_index,
                if v.predicts_instability {
                    "unstable"
                } else {
                    "none"
                }
            ),
            r.inertia_shat.morse_index == 1 && v.predicts_instability,
        )),
        Err(e) => rows.push(failed("collinear_three_body_verdict", "derived", "", e)),
    }
    rows
}

pub fn worked_examples(seed: u64) -> Vec<Row> {
    let tol = Tolerance::default();
    let mut rows = block_rows(&tol);
    rows.extend(counterexample_rows(&tol));
    rows.extend(e1_rows());
    rows.extend(nbody_rows(seed, &tol));
    rows
}

pub fn render_table(rows: &[Row]) -> String {
    let headers = ["id", "check", "expected", "computed", "status"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.id.to_string(),
                r.check.to_string(),
                r.expected.clone(),
                r.computed.clone(),
                if r.pass { "PASS" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    let mut widths = headers.map(str::len);
    for c in &cells {
        for (w, s) in widths.iter_mut().zip(c) {
            *w = (*w).max(s.chars().count());
        }
    }
    let line = |c: &[String; 5]| -> String {
        let parts: Vec<String> = c
            .iter()
            .zip(widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        format!("{}\n", parts.join("  ").trim_end())
    };
    let mut out = line(&headers.map(String::from));
    out.push_str(&line(&widths.map(|w| "-".repeat(w))));
    for c in &cells {
        out.push_str(&line(c));
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    out.push_str(&format!("\n{passed}/{} passed\n", rows.len()));
    out
}

pub fn rows_json(rows: &[Row], seed: u64) -> Value {
    json!({
        "seed": seed,
        "passed": rows.iter().filter(|r| r.pass).count(),
        "total": rows.len(),
        "rows": rows.iter().map(|r| json!({
            "id": r.id,
            "check": r.check,
            "expected": r.expected,
            "computed": r.computed,
            "status": if r.pass { "PASS" } else { "FAIL" },
        })).collect::<Vec<_>>(),
    })
}

pub fn run_worked_examples(seed: u64) -> Outcome {
    let rows = worked_examples(seed);
    let failing: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    Outcome {
        code: if failing.is_empty() {
            exit::SUCCESS
        } else {
            exit::INPUT
        },
        report: Some(rows_json(&rows, seed)),
        table: Some(render_table(&rows)),
        diagnostic: (!failing.is_empty()).then(|| format!("failing rows: {}", failing.join(", "))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverted_sign_convention_fails_row() {
        let cc = find_central_configuration(&equilateral_seed(7), &CcSettings::default()).unwrap();
        let mut r = amended_hessian(&cc, &Tolerance::default()).unwrap();
        assert!(sign_identity_row(&r).pass);
        r.matrix_on_v = r.matrix_on_v.scale(&-1.0);
        assert!(!sign_identity_row(&r).pass);
    }

    #[test]
    fn same_seed_same_report() {
        let a = relequil::io::to_canonical_string(&rows_json(&worked_examples(3), 3));
        let b = relequil::io::to_canonical_string(&rows_json(&worked_examples(3), 3));
        assert_eq!(a, b);
    }

    #[test]
    fn table_marks_failures() {
        let rows = vec![row("x", "exact", "1", "2", false)];
        assert!(render_table(&rows).contains("FAIL"));
        assert!(render_table(&rows).contains("0/1 passed"));
    }
}
