use hopfion::algebra::{HomogeneousPair, PairKind, Quat};
use hopfion::checks::charge_additivity;
use hopfion::fields::{act, make_ansatz, pure_gauge_potential, AnsatzKind, LiftField, MapField, PotentialField};
use hopfion::gauge::make_stabilizer;
use hopfion::lattice::{Grid, LatticeField};
use hopfion::samples::{smooth_scalar, smooth_sphere};
use hopfion::topology::{
    assign_sector, charge_report, chern_simons_charge, chern_simons_terms, lift_charge, linking_charge,
    preimage_degree, whitehead_charge, ChargeReport,
};
use hopfion::Error;

const J: [f64; 3] = [0.0, 1.0, 0.0];
const K: [f64; 3] = [0.0, 0.0, 1.0];

fn pole(g: Grid) -> MapField {
    MapField::constant_sphere(g, [1.0, 0.0, 0.0])
}

#[test]
fn constant_field_routes() {
    let g = Grid::with_n(16).unwrap();
    let u = LiftField::identity(g);
    assert_eq!(lift_charge(&u).unwrap(), 0.0);
    let a = PotentialField::new(LatticeField::zeros(g, 1, 3)).unwrap();
    let r = chern_simons_charge(&a, &HomogeneousPair::su2_u1()).unwrap();
    assert_eq!(r.cs_value, vec![0.0]);
    assert_eq!(whitehead_charge(&pole(g)).unwrap().abs(), 0.0);
    assert!(linking_charge(&pole(g), J, K).is_err());
    assert!(chern_simons_charge(&a, &HomogeneousPair::new(PairKind::Su3Flag)).is_err());
}

#[test]
fn hopf_ansatz_charges() {
    let g = Grid::with_n(48).unwrap();
    for q in [1i64, 2] {
        let (psi, u) = make_ansatz(AnsatzKind::Hopf, g, q as i32).unwrap();
        let r = charge_report(&psi, Some(&u)).unwrap();
        let cs = r.cs_value[0];
        let wh = r.whitehead_value.unwrap();
        assert!((cs - q as f64).abs() <= 0.02, "cs {cs}");
        assert!((wh - q as f64).abs() <= 0.02, "wh {wh}");
        assert!((wh - cs).abs() <= 0.01, "wh {wh} cs {cs}");
        assert_eq!(r.linking_value, Some(q));
        assert_eq!(r.rounded, vec![q]);
        assert!(r.routes_agree());
        assert!(r.max_deviation <= 0.02);
    }
}

#[test]
fn ball_degree_charges() {
    let g = Grid::with_n(48).unwrap();
    let (_, u1) = make_ansatz(AnsatzKind::BallDegree, g, 1).unwrap();
    assert!((lift_charge(&u1).unwrap() - 1.0).abs() <= 0.02);
    assert_eq!(preimage_degree(&u1, Quat::new(0.6, 0.48, -0.32, 0.56)).unwrap(), 1);
    let (_, u2) = make_ansatz(AnsatzKind::BallDegree, g, 2).unwrap();
    assert!((lift_charge(&u2).unwrap() - 2.0).abs() <= 0.02);
    assert_eq!(preimage_degree(&u2, Quat::new(0.6, 0.48, -0.32, 0.56)).unwrap(), 2);
}

#[test]
fn four_split_terms_sum_to_value() {
    let g = Grid::with_n(24).unwrap();
    let (phi, _) = smooth_sphere(g, 1, 1.0);
    let (_, u) = make_ansatz(AnsatzKind::Hopf, g, 1).unwrap();
    let a = pure_gauge_potential(&u).unwrap();
    let with_i = chern_simons_terms(&a, None).iter().sum::<f64>();
    let with_phi = chern_simons_terms(&a, Some(&phi)).iter().sum::<f64>();
    assert!((with_i - with_phi).abs() <= 1e-10 * with_i.abs().max(1.0));
}

fn reflect_x<T: Copy>(g: Grid, f: impl Fn(usize) -> T) -> impl Fn(usize) -> T {
    move |s| {
        let [x, y, z] = g.coords(s);
        f(g.index((g.n - x) % g.n, y, z))
    }
}

#[test]
fn reflection_negates_charges() {
    let g = Grid::with_n(32).unwrap();
    let (psi, u) = make_ansatz(AnsatzKind::Hopf, g, 1).unwrap();
    let psi_r = MapField::sphere_from_fn(g, reflect_x(g, |s| psi.sphere(s)));
    let u_r = LiftField::from_fn_raw(g, reflect_x(g, |s| u.at(s)));
    let a = charge_report(&psi, Some(&u)).unwrap();
    let b = charge_report(&psi_r, Some(&u_r)).unwrap();
    assert_eq!(a.rounded, vec![1]);
    assert_eq!(b.rounded, vec![-1]);
    assert_eq!(b.whitehead_value.unwrap().round(), -1.0);
    assert_eq!(b.linking_value, Some(-1));
    let (_, d) = make_ansatz(AnsatzKind::BallDegree, g, 1).unwrap();
    let d_r = LiftField::from_fn_raw(g, reflect_x(g, |s| d.at(s)));
    let p = Quat::new(0.6, 0.48, -0.32, 0.56);
    assert_eq!(preimage_degree(&d_r, p).unwrap(), -preimage_degree(&d, p).unwrap());
}

#[test]
fn constant_gauge_leaves_charge() {
    let g = Grid::with_n(24).unwrap();
    let (_, u) = make_ansatz(AnsatzKind::Hopf, g, 1).unwrap();
    let c = LiftField::from_fn(g, |_| Quat::new(0.2, -0.5, 0.7, 0.1));
    let q0 = lift_charge(&u).unwrap();
    let q1 = lift_charge(&c.mul(&u)).unwrap();
    assert!((q0 - q1).abs() <= 1e-10);
}

#[test]
fn integrality_improves_under_refinement() {
    let devs: Vec<f64> = [24, 32, 48]
        .iter()
        .map(|&n| {
            let (_, u) = make_ansatz(AnsatzKind::Hopf, Grid::with_n(n).unwrap(), 1).unwrap();
            (lift_charge(&u).unwrap() - 1.0).abs()
        })
        .collect();
    let hs = [1.0 / 24.0, 1.0 / 32.0, 1.0 / 48.0];
    let order = hopfion::gauge::fitted_order(&hs, &devs);
    assert!(order >= 1.5, "order {order}, {devs:?}");
}

#[test]
fn charges_are_additive() {
    for c in charge_additivity(32, 1).unwrap() {
        assert!(c.passed(), "{c:?}");
    }
}

#[test]
fn sector_labels() {
    let g = Grid::with_n(32).unwrap();
    let phi = pole(g);
    let triv = assign_sector(&phi, &phi, &LiftField::identity(g)).unwrap();
    assert_eq!(triv.charge, vec![0]);
    let (psi, u) = make_ansatz(AnsatzKind::Hopf, g, 1).unwrap();
    let label = assign_sector(&psi, &phi, &u).unwrap();
    assert_eq!(label.charge, vec![1]);
    assert_eq!(label.reference_id, triv.reference_id);

    // u·w with w a stabilizer of the pole.
    let w = make_stabilizer(&phi, &smooth_scalar(g, 4, 1.5)).unwrap();
    let uw = u.mul(&w.w);
    assert_eq!(assign_sector(&act(&uw, &phi).unwrap(), &phi, &uw).unwrap().charge, vec![1]);

    let err = assign_sector(&psi, &phi, &LiftField::identity(g)).unwrap_err();
    assert!(matches!(err, Error::Factorization(_)));
}

#[test]
fn report_json_keys() {
    let r = ChargeReport::assemble(vec![0.98], Some(1.01), Some(1));
    assert_eq!(r.rounded, vec![1]);
    assert!((r.max_deviation - 0.02).abs() <= 1e-12);
    let v = r.to_json();
    for k in ["cs", "whitehead", "linking", "rounded", "deviation"] {
        assert!(v.get(k).is_some(), "{k}");
    }
    let bad = ChargeReport::assemble(vec![1.2], Some(0.4), Some(1));
    assert!(!bad.routes_agree());
}
