mod common;

use proptest::prelude::*;
use relequil::field::{rat, rational_from_f64};
use relequil::linalg::characteristic_polynomial;
use relequil::nbody::{
    amended_hessian, e1_linearization, e1_matrix, find_central_configuration, grad_u, hess_u,
    inertia_gradient, locked_inertia, potential_u, stability_verdict, verdict_from_indices,
    CcSettings, CentralConfiguration, Criterion, NBodySystem,
};
use relequil::{Error, IndexReport, Rational, Tolerance};

use common::config;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn sys(masses: &[f64], alpha: f64, pos: &[[f64; 2]]) -> NBodySystem {
    NBodySystem::new(masses.to_vec(), alpha, pos).unwrap()
}

fn two_body(alpha: f64) -> NBodySystem {
    sys(&[1.0, 1.0], alpha, &[[-0.5, 0.0], [0.5, 0.0]])
}

fn equilateral(side: f64) -> NBodySystem {
    let h = side * 3f64.sqrt() / 2.0;
    sys(
        &[1.0; 3],
        1.0,
        &[
            [-side / 2.0, -h / 3.0],
            [side / 2.0, -h / 3.0],
            [0.0, 2.0 * h / 3.0],
        ],
    )
}

fn fd_gradient(s: &NBodySystem, f: impl Fn(&NBodySystem) -> f64, h: f64) -> Vec<f64> {
    let q = s.q().to_vec();
    (0..q.len())
        .map(|k| {
            let (mut qp, mut qm) = (q.clone(), q.clone());
            qp[k] += h;
            qm[k] -= h;
            (f(&s.with_q(qp)) - f(&s.with_q(qm))) / (2.0 * h)
        })
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cc(seed: &NBodySystem) -> CentralConfiguration {
    find_central_configuration(seed, &CcSettings::default()).unwrap()
}

#[test]
fn potential_examples() {
    assert!((potential_u(&two_body(1.0)).unwrap() - 1.0).abs() < 1e-15);
    assert!((locked_inertia(&two_body(1.0)) - 0.5).abs() < 1e-15);
    assert!((potential_u(&equilateral(1.0)).unwrap() - 3.0).abs() < 1e-12);
    let s = equilateral(1.0);
    for (lambda, alpha) in [(2.0, 1.0), (0.5, 1.5), (3.0, 0.7)] {
        let a = sys(&[1.0; 3], alpha, &s.positions());
        let b = a.with_q(a.q().iter().map(|x| x * lambda).collect());
        let u = potential_u(&a).unwrap();
        assert!((potential_u(&b).unwrap() - lambda.powf(-alpha) * u).abs() < 1e-12 * u);
        assert!((locked_inertia(&b) - lambda * lambda * locked_inertia(&a)).abs() < 1e-12);
    }
}

#[test]
fn two_body_gradient() {
    for alpha in [0.5, 1.0, 2.0] {
        let s = two_body(alpha);
        let g = grad_u(&s).unwrap();
        // body 1 sits at −1/2 and is pulled toward +x
        let expected = [alpha, 0.0, -alpha, 0.0];
        for (a, e) in g.iter().zip(expected) {
            assert!((a - e).abs() < 1e-12, "{g:?}");
        }
        let fd = fd_gradient(&s, |t| potential_u(t).unwrap(), 1e-6);
        assert!(dist(&fd, &g) < 1e-6 * norm(&g));
    }
}

#[test]
fn inertia_gradient_matches_fd() {
    let s = sys(
        &[1.0, 2.0, 0.5],
        1.0,
        &[[0.3, -0.2], [1.1, 0.4], [-0.7, 0.9]],
    );
    let fd = fd_gradient(&s, locked_inertia, 1e-6);
    let g = inertia_gradient(&s);
    assert!(dist(&fd, &g) < 1e-7 * norm(&g));
}

#[test]
fn collision_is_rejected() {
    let s = sys(&[1.0; 3], 1.0, &[[0.0, 0.0], [1e-9, 0.0], [1.0, 0.0]]);
    assert!(matches!(potential_u(&s), Err(Error::Collision { .. })));
    assert!(matches!(grad_u(&s), Err(Error::Collision { .. })));
}

#[test]
fn equilateral_cc() {
    let seed = sys(
        &[1.0; 3],
        1.0,
        &[[-0.52, -0.3], [0.49, -0.28], [0.01, 0.61]],
    );
    let c = cc(&seed);
    assert!(c.residual <= 1e-10);
    assert!((locked_inertia(&c.system) - 1.0).abs() < 1e-12);
    let p = c.system.positions();
    let d = [dist(&p[0], &p[1]), dist(&p[1], &p[2]), dist(&p[0], &p[2])];
    assert!((d[0] - d[1]).abs() < 1e-9 && (d[0] - d[2]).abs() < 1e-9);
    // gauge: body 1 on the positive x axis
    assert!(p[0][0] > 0.0 && p[0][1].abs() < 1e-12);
}

#[test]
fn two_body_cc_any_masses() {
    for (m1, m2) in [(1.0, 1.0), (1.0, 3.0), (0.2, 5.0)] {
        let seed = sys(&[m1, m2], 1.0, &[[0.3, 0.8], [-1.0, 0.1]]);
        let c = cc(&seed);
        assert!(c.residual <= 1e-10);
        assert!((locked_inertia(&c.system) - 1.0).abs() < 1e-12);
        assert!((c.xi_squared - potential_u(&c.system).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn collinear_seed_gives_euler() {
    let seed = sys(&[1.0; 3], 1.0, &[[-1.0, 0.0], [0.1, 0.0], [1.2, 0.0]]);
    let c = cc(&seed);
    assert!(c.residual <= 1e-10);
    let p = c.system.positions();
    assert!(p.iter().all(|x| x[1].abs() < 1e-12));
    // the gauge may flip the line; the middle body stays in the middle
    let xs: Vec<f64> = p.iter().map(|x| x[0]).collect();
    assert!((xs[0] - xs[1]) * (xs[1] - xs[2]) > 0.0);
    assert!(xs[1].abs() < 1e-10);
}

#[test]
fn amended_examples() {
    let c = CentralConfiguration::from_system(&two_body(1.0), 1e-10).unwrap();
    let r = amended_hessian(&c, &tol()).unwrap();
    assert!((r.radial_eigenvalue - c.xi_squared).abs() < 1e-9);
    assert!(r.radial_residual <= 1e-8 * r.operator_norm);

    let c = CentralConfiguration::from_system(&equilateral(1.0), 1e-10).unwrap();
    let r = amended_hessian(&c, &tol()).unwrap();
    let t = r.hess_u_on_shat.rows();
    for i in 0..t {
        for j in 0..t {
            assert!((r.matrix_on_v[(i, j)] + r.hess_u_on_shat[(i, j)]).abs() < 1e-9);
        }
    }
    assert_eq!(r.inertia_shat, IndexReport::new(0, 0, 2));
    assert_eq!(r.inertia_v.morse_index, 2);
    assert_eq!(r.inertia_v.nullity, 0);
}

#[test]
fn e1_examples() {
    let r = e1_linearization(1.0, 1.0).unwrap();
    assert!(r.max_deviation < 1e-12);
    let imag: Vec<f64> = r.computed.iter().map(|z| z.im).collect();
    assert!(
        imag.iter().any(|y| (y - 1.0).abs() < 1e-12)
            && imag.iter().any(|y| (y + 1.0).abs() < 1e-12)
    );
    let r = e1_linearization(2.0, 3.0).unwrap();
    assert!(r
        .computed
        .iter()
        .any(|z| (z.re - 2.0).abs() < 1e-12 && z.im.abs() < 1e-12));
    assert!(r.computed.iter().any(|z| (z.re + 2.0).abs() < 1e-12));
    let r = e1_linearization(1.0, 2.0).unwrap();
    assert_eq!(r.rank_powers, vec![3, 2, 1, 0]);
    assert!(r.single_jordan_block);
    assert!(matches!(
        e1_linearization(0.0, 1.0),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn verdict_examples() {
    let c = CentralConfiguration::from_system(&equilateral(1.0), 1e-10).unwrap();
    let (_, v) = stability_verdict(&c, &tol()).unwrap();
    assert!(!v.predicts_instability);
    assert_eq!(v.criteria, vec![Criterion::None]);
    assert!(v.reduced.is_some());

    let c = cc(&sys(&[1.0; 3], 1.0, &[[-1.0, 0.0], [0.1, 0.0], [1.2, 0.0]]));
    let (_, v) = stability_verdict(&c, &tol()).unwrap();
    assert_eq!(v.inertia_shat.morse_index, 1);
    assert!(v.predicts_instability);
    assert!(v.criteria.contains(&Criterion::E2OddIndex));

    let v = verdict_from_indices(1.0, 3, IndexReport::new(0, 1, 1));
    assert!(v.predicts_instability);
    assert!(v.criteria.contains(&Criterion::E2OddNullity));
    assert!(v.criteria.contains(&Criterion::ReducedSpaceOddNullity));

    let c = cc(&sys(&[1.0; 3], 3.0, &[[-1.0, 0.0], [0.1, 0.0], [1.2, 0.0]]));
    let (_, v) = stability_verdict(&c, &tol()).unwrap();
    assert!(v.reduced.is_none() && v.inertia_v.is_none());
    assert!(v.criteria.contains(&Criterion::E2OddIndex));
}

/// Random non-collision configuration with minimum pair distance at least 0.25.
fn configuration(
    n: std::ops::RangeInclusive<usize>,
    alpha: std::ops::Range<f64>,
) -> impl Strategy<Value = NBodySystem> {
    (n, alpha)
        .prop_flat_map(|(n, a)| {
            (
                proptest::collection::vec(0.5f64..2.0, n),
                proptest::collection::vec((-1.5f64..1.5, -1.5f64..1.5), n),
                Just(a),
            )
        })
        .prop_filter_map("close pair", |(m, p, a)| {
            let pos: Vec<[f64; 2]> = p.iter().map(|(x, y)| [*x, *y]).collect();
            let ok =
                (0..pos.len()).all(|i| (i + 1..pos.len()).all(|j| dist(&pos[i], &pos[j]) >= 0.25));
            ok.then(|| NBodySystem::new(m, a, &pos).unwrap())
        })
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn rotation_invariance(s in configuration(2..=6, 0.3..3.0), th in 0.0f64..6.3) {
        let (c, si) = (th.cos(), th.sin());
        let q: Vec<f64> = s.q().chunks(2).flat_map(|p| [c * p[0] - si * p[1], si * p[0] + c * p[1]]).collect();
        let r = s.with_q(q);
        let u = potential_u(&s).unwrap();
        prop_assert!((potential_u(&r).unwrap() - u).abs() <= 1e-12 * u);
        prop_assert!((locked_inertia(&r) - locked_inertia(&s)).abs() <= 1e-12 * locked_inertia(&s));
    }

    #[test]
    fn homogeneity(s in configuration(2..=6, 0.3..3.0), lambda in 0.5f64..2.0) {
        let a = s.alpha();
        let u = potential_u(&s).unwrap();
        let g = grad_u(&s).unwrap();
        let h = hess_u(&s).unwrap();
        let scaled = s.with_q(s.q().iter().map(|x| x * lambda).collect());
        prop_assert!((potential_u(&scaled).unwrap() - lambda.powf(-a) * u).abs() < 1e-8);
        prop_assert!((dot(&g, s.q()) + a * u).abs() < 1e-8);
        let hq = h.mul_vec(s.q());
        let res: Vec<f64> = hq.iter().zip(&g).map(|(x, y)| x + (a + 1.0) * y).collect();
        prop_assert!(norm(&res) < 1e-8);
    }

    #[test]
    fn derivatives_match_finite_differences(s in configuration(2..=5, 0.3..3.0)) {
        let step = 1e-6 * s.diameter();
        let g = grad_u(&s).unwrap();
        let fd = fd_gradient(&s, |t| potential_u(t).unwrap(), step);
        prop_assert!(dist(&fd, &g) <= 1e-5 * norm(&g));
        let h = hess_u(&s).unwrap();
        let dim = g.len();
        for k in 0..dim {
            let col = fd_gradient(&s, |t| grad_u(t).unwrap()[k], step);
            let exact: Vec<f64> = (0..dim).map(|j| h[(k, j)]).collect();
            prop_assert!(dist(&col, &exact) <= 1e-5 * h.frobenius_norm());
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn cc_invariants(s in configuration(3..=4, 0.4..1.9)) {
        let found = find_central_configuration(&s, &CcSettings::default());
        prop_assume!(found.is_ok());
        let c = found.unwrap();
        let u = potential_u(&c.system).unwrap();
        prop_assert!(c.residual <= c.cc_tol);
        prop_assert!((locked_inertia(&c.system) - 1.0).abs() <= 1e-10);
        prop_assert!((c.xi_squared - c.system.alpha() * u).abs() <= 1e-10);
        let r = amended_hessian(&c, &tol()).unwrap();
        prop_assert!(r.radial_residual <= 1e-8 * r.operator_norm);
        prop_assert!((r.radial_eigenvalue - (2.0 - c.system.alpha()) * c.xi_squared).abs() <= 1e-8 * r.operator_norm);
        let n = c.system.n();
        prop_assert_eq!(r.inertia_v.nullity, r.inertia_shat.nullity);
        prop_assert_eq!(r.inertia_v.morse_index, 2 * n - 4 - r.inertia_shat.nullity - r.inertia_shat.morse_index);
    }

    #[test]
    fn e1_matches_characteristic_polynomial(xi in 0.25f64..3.0, alpha in 0.1f64..4.0) {
        let r = e1_linearization(xi, alpha).unwrap();
        prop_assert!(r.max_deviation <= 1e-10);
        let (x, a) = (rational_from_f64(xi).unwrap(), rational_from_f64(alpha).unwrap());
        let p = characteristic_polynomial(&e1_matrix::<Rational>(&x, &a));
        let c2 = -(a - rat(2, 1)) * x.clone() * x;
        prop_assert_eq!(p.coeffs().to_vec(), vec![rat(0, 1), rat(0, 1), c2, rat(0, 1), rat(1, 1)]);
        prop_assert!(!r.zero_semisimple);
    }
}
