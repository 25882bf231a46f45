use relequil::nbody::*;
use relequil::Tolerance;
fn main() {
    for (n, a) in [(3, 1.0), (4, 1.0), (4, 0.5), (3, 3.0)] {
        let pos: Vec<[f64; 2]> = (0..n)
            .map(|i| [i as f64 + 0.1 * (i * i) as f64, 0.0])
            .collect();
        let s = NBodySystem::new(vec![1.0; n], a, &pos).unwrap();
        let cc = find_central_configuration(&s, &CcSettings::default()).unwrap();
        let (r, v) = stability_verdict(&cc, &Tolerance::default()).unwrap();
        println!(
            "n={n} a={a} it={} res={:e} pos={:?} shat={:?} v={:?} crit={:?} rad={:e} sign={:e}",
            cc.iterations,
            cc.residual,
            cc.system.positions(),
            r.inertia_shat,
            r.inertia_v,
            v.criteria,
            r.radial_residual,
            r.sign_identity_residual
        );
    }
}
