use hopfion::algebra::Quat;
use hopfion::fields::{pullback_coisotropy, LiftField, MapField, PotentialField};
use hopfion::gauge::{
    coset_curvature, fitted_order, gauge_formula, gauge_smooth, gauge_transform_potential, identity_suite,
    make_stabilizer, maurer_cartan, project_par, project_perp, relative_l2, IdentityClass, StabilizerField,
};
use hopfion::lattice::{wedge, Grid, LatticeField, Product};
use hopfion::samples::{smooth_isotropic, smooth_scalar, smooth_sphere};
use hopfion::Error;
use std::f64::consts::PI;

fn constant_theta(g: Grid, t: f64) -> LatticeField {
    LatticeField::from_fn(g, 0, 1, |_, _, o| o[0] = t)
}

fn pole(g: Grid) -> MapField {
    MapField::constant_sphere(g, [1.0, 0.0, 0.0])
}

#[test]
fn stabilizer_examples() {
    let g = Grid::with_n(8).unwrap();
    let (phi, _) = smooth_sphere(g, 1, 1.0);
    let w0 = make_stabilizer(&phi, &constant_theta(g, 0.0)).unwrap();
    assert!(w0.w.data.iter().all(|q| *q == Quat::ONE));

    let wpi = make_stabilizer(&pole(g), &constant_theta(g, PI)).unwrap();
    assert!(wpi.w.data.iter().all(|q| (*q - (-Quat::ONE)).norm() <= 1e-15));
    assert!(wpi.residual() <= 1e-15);

    let theta = LatticeField::from_fn(g, 0, 1, |s, _, o| o[0] = (2.0 * PI * g.position(s)[1] / g.length).sin());
    let w = make_stabilizer(&pole(g), &theta).unwrap();
    assert!(w.w.data.iter().all(|q| q.y == 0.0 && q.z == 0.0));
    assert_eq!(w.residual(), 0.0);

    let ws = make_stabilizer(&phi, &smooth_scalar(g, 2, 3.0)).unwrap();
    assert!(ws.residual() <= 1e-12);
}

#[test]
fn identity_stabilizer_is_neutral() {
    let g = Grid::with_n(8).unwrap();
    let (phi, _) = smooth_sphere(g, 3, 1.0);
    let b = smooth_isotropic(&phi, 3, 1.0);
    let w = make_stabilizer(&phi, &constant_theta(g, 0.0)).unwrap();
    let bw = gauge_transform_potential(&b, &w, &phi).unwrap();
    assert!(bw.a.sub(&b.a).unwrap().max_abs() <= 1e-15);
}

#[test]
fn non_isotropic_input_is_rejected() {
    let g = Grid::with_n(8).unwrap();
    let phi = pole(g);
    let a = PotentialField::new(LatticeField::from_fn(g, 1, 3, |_, _, o| o[1] = 0.5)).unwrap();
    let w = make_stabilizer(&phi, &constant_theta(g, 0.3)).unwrap();
    assert!(matches!(gauge_transform_potential(&a, &w, &phi), Err(Error::NotIsotropic(_))));
}

fn stabilizer(phi: &MapField, seed: u64) -> StabilizerField {
    make_stabilizer(phi, &smooth_scalar(phi.grid, seed, 2.0)).unwrap()
}

#[test]
fn zero_potential_transforms_to_isotropic_maurer_cartan() {
    let mut hs = Vec::new();
    let mut res = Vec::new();
    for n in [16, 32, 64] {
        let g = Grid::with_n(n).unwrap();
        let (phi, _) = smooth_sphere(g, 4, 1.2);
        let w = stabilizer(&phi, 5);
        let zero = PotentialField::new(LatticeField::zeros(g, 1, 3)).unwrap();
        let bw = gauge_transform_potential(&zero, &w, &phi).unwrap();
        let mc_par = project_par(&maurer_cartan(&w.w).unwrap(), &phi);
        hs.push(g.h());
        res.push(relative_l2(&bw.a, &mc_par).unwrap());
    }
    let order = fitted_order(&hs, &res);
    assert!(order >= 0.9, "order {order}, {res:?}");
}

#[test]
fn gauge_action_composes() {
    let mut hs = Vec::new();
    let mut res = Vec::new();
    for n in [16, 32, 64] {
        let g = Grid::with_n(n).unwrap();
        let (phi, _) = smooth_sphere(g, 6, 1.2);
        let b = smooth_isotropic(&phi, 6, 1.5);
        let (w1, w2) = (stabilizer(&phi, 7), stabilizer(&phi, 8));
        let w12 = StabilizerField { w: w1.w.mul(&w2.w), phi: phi.clone() };
        let twice = gauge_formula(&gauge_formula(&b.a, &w1, &phi).unwrap(), &w2, &phi).unwrap();
        let once = gauge_formula(&b.a, &w12, &phi).unwrap();
        hs.push(g.h());
        res.push(relative_l2(&twice, &once).unwrap());
    }
    let order = fitted_order(&hs, &res);
    assert!(order >= 0.9, "order {order}, {res:?}");
}

#[test]
fn curvature_of_zero_potential() {
    let g = Grid::with_n(16).unwrap();
    let zero = PotentialField::new(LatticeField::zeros(g, 1, 3)).unwrap();
    assert_eq!(coset_curvature(&zero, &pole(g)).unwrap().max_abs(), 0.0);

    let (phi, _) = smooth_sphere(g, 9, 1.5);
    let om = pullback_coisotropy(&phi).unwrap();
    let oo = wedge(&om, &om, Product::Bracket).unwrap().scale(0.5);
    let f = coset_curvature(&zero, &phi).unwrap();
    assert!(f.add(&project_par(&oo, &phi)).unwrap().max_abs() <= 1e-15);
    // Symmetric pair: the projection is redundant.
    assert!(project_perp(&oo, &phi).max_abs() <= 1e-10 * oo.max_abs());
    assert!(relative_l2(&f, &oo.scale(-1.0)).unwrap() <= 1e-10);
}

#[test]
fn identity_suite_passes() {
    let suite = identity_suite(&[16, 32, 64], 0).unwrap();
    assert!(suite.iter().any(|r| r.class == IdentityClass::Pointwise));
    for r in &suite {
        assert!(r.passed(), "{r:?}");
        assert!(r.l2_residual.iter().all(|v| *v >= 0.0));
    }
    assert!(identity_suite(&[16, 32], 0).is_err());
}

#[test]
fn smoothing_zero_potential_is_a_fixed_point() {
    let g = Grid::with_n(8).unwrap();
    let phi = pole(g);
    let zero = PotentialField::new(LatticeField::zeros(g, 1, 3)).unwrap();
    let r = gauge_smooth(&zero, &phi, 10, 1.0).unwrap();
    assert_eq!(r.theta.max_abs(), 0.0);
    assert!(r.stabilizer.w.data.iter().all(|q| *q == Quat::ONE));
}

#[test]
fn smoothing_recovers_planted_gauge() {
    let g = Grid::with_n(16).unwrap();
    let (phi, _) = smooth_sphere(g, 10, 1.0);
    let w0 = stabilizer(&phi, 11);
    let planted = PotentialField::new(project_par(&maurer_cartan(&w0.w).unwrap(), &phi)).unwrap();
    let r = gauge_smooth(&planted, &phi, 50, 1.0).unwrap();
    let first = r.objective[0];
    let last = *r.objective.last().unwrap();
    assert!(last <= 0.1 * first, "{first} -> {last}");
    assert!(r.objective.windows(2).all(|p| p[1] <= p[0]));
    assert!(r.stabilizer.residual() <= 1e-12);
}

#[test]
fn gauge_calculus_needs_sphere_reference() {
    let g = Grid::with_n(6).unwrap();
    let su2 = LiftField::identity(g).as_map();
    assert!(make_stabilizer(&su2, &constant_theta(g, 0.1)).is_err());
}
