use hopfion::algebra::{
    ad_action, coisotropy_form, cp1_coisotropy, cp1_omega, cp1_omega_ext, project_isotropy, quat_mul, tangent_norm,
    vec3, CMat, CosetPoint, HomogeneousPair, LieVector, PairKind, Quat, Tangent,
};
use proptest::prelude::*;
use std::f64::consts::PI;

fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
    (0..3).all(|i| (a[i] - b[i]).abs() <= tol)
}

fn lv(v: [f64; 3]) -> LieVector {
    LieVector::new(v.to_vec())
}

#[test]
fn quaternion_table() {
    assert_eq!(quat_mul(Quat::I, Quat::J), Quat::K);
    assert_eq!(quat_mul(Quat::J, Quat::I), -Quat::K);
    let q = Quat::new(0.3, -1.2, 0.5, 2.0);
    assert_eq!(quat_mul(q, Quat::ONE), q);
    assert_eq!(quat_mul(Quat::ONE, q), q);
    assert_eq!(Quat::I * Quat::I, -Quat::ONE);
}

#[test]
fn adjoint_action_examples() {
    let xi = [0.4, -0.1, 2.5];
    assert_eq!(ad_action(Quat::ONE, xi).unwrap(), xi);
    // exp(iπ/2) = i and i j i⁻¹ = -j.
    let q = Quat::exp([PI / 2.0, 0.0, 0.0]);
    assert!(close(ad_action(q, [0.0, 1.0, 0.0]).unwrap(), [0.0, -1.0, 0.0], 1e-15));
    assert!(ad_action(Quat::new(2.0, 0.0, 0.0, 0.0), xi).is_err());
}

#[test]
fn cp1_isotropy_examples() {
    let p = HomogeneousPair::su2_u1();
    let i = CosetPoint::Sphere([1.0, 0.0, 0.0]);
    let cases = [
        ([0.0, 1.0, 0.0], [0.0; 3], [0.0, 1.0, 0.0]),
        ([1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0; 3]),
        ([2.0, 3.0, 0.0], [2.0, 0.0, 0.0], [0.0, 3.0, 0.0]),
    ];
    for (xi, par, perp) in cases {
        let (a, b) = project_isotropy(&p, &i, &lv(xi)).unwrap();
        assert_eq!(a.coeffs, par.to_vec());
        assert_eq!(b.coeffs, perp.to_vec());
    }
}

#[test]
fn cp1_coisotropy_examples() {
    assert_eq!(cp1_coisotropy([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap(), [0.0, 0.0, 0.5]);
    assert_eq!(cp1_coisotropy([0.0, 0.6, 0.8], [0.0; 3]).unwrap(), [0.0; 3]);
    assert!(cp1_coisotropy([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]).is_err());
    assert!(cp1_coisotropy([2.0, 0.0, 0.0], [0.0, 1.0, 0.0]).is_err());
}

#[test]
fn coisotropy_at_base_point_is_complement_projection() {
    for kind in [PairKind::Su2U1, PairKind::Su3Flag] {
        let p = HomogeneousPair::new(kind);
        let xi = LieVector::new((0..p.dim_g).map(|k| 0.3 * k as f64 - 0.7).collect());
        let x0 = CosetPoint::Rep(CMat::identity(p.group_dim));
        let w = coisotropy_form(&p, &x0, &Tangent::Lift(xi.clone())).unwrap();
        let want = p.proj_hperp(&xi);
        assert!(w.sub(&want).norm() <= 1e-14, "{kind:?}");
    }
}

#[test]
fn pair_axioms() {
    for kind in [PairKind::Su2U1, PairKind::Su2Group, PairKind::Su3Flag] {
        let p = HomogeneousPair::new(kind);
        assert!(p.axiom_residual() <= 1e-12, "{kind:?}");
    }
    assert!(HomogeneousPair::su2_u1().bracket_closes_on_h());
    assert!(!HomogeneousPair::new(PairKind::Su3Flag).bracket_closes_on_h());
}

#[test]
fn su2_bracket_is_twice_cross_product() {
    let p = HomogeneousPair::su2_u1();
    let (x, y) = ([0.3, -0.4, 1.1], [2.0, 0.5, -0.2]);
    let br = p.bracket(&lv(x), &lv(y));
    let want = vec3::scale(2.0, vec3::cross(x, y));
    assert!(close([br.coeffs[0], br.coeffs[1], br.coeffs[2]], want, 1e-14));
}

#[test]
fn extended_omega_agrees_on_tangents() {
    let q = vec3::normalize([0.2, -0.5, 0.7]);
    let eta = vec3::reject([1.0, 0.3, -0.4], q);
    assert!(close(cp1_omega_ext(q, eta), cp1_omega(q, eta), 1e-15));
    let normal = vec3::scale(0.8, q);
    assert!((vec3::norm(cp1_omega_ext(q, normal)) - 0.4).abs() <= 1e-15);
}

fn unit_quat() -> impl Strategy<Value = Quat> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("away from zero", |a| a.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|a| Quat::from_array(a).normalize())
}

fn v3() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-2.0f64..2.0)
}

proptest! {
    #[test]
    fn ad_is_an_isometry(g in unit_quat(), xi in v3()) {
        let r = ad_action(g, xi).unwrap();
        prop_assert!((vec3::norm(r) - vec3::norm(xi)).abs() <= 1e-12);
    }

    #[test]
    fn ad_is_a_lie_automorphism(g in unit_quat(), x in v3(), y in v3()) {
        let p = HomogeneousPair::su2_u1();
        let lhs = ad_action(g, p.bracket(&lv(x), &lv(y)).coeffs[..].try_into().unwrap()).unwrap();
        let gx = ad_action(g, x).unwrap();
        let gy = ad_action(g, y).unwrap();
        let rhs = p.bracket(&lv(gx), &lv(gy));
        prop_assert!(close(lhs, rhs.coeffs[..].try_into().unwrap(), 1e-12));
    }

    #[test]
    fn ad_matches_matrix_representation(g in unit_quat(), x in v3()) {
        let p = HomogeneousPair::su2_u1();
        let m = p.ad(&CMat::from_quat(g), &lv(x)).unwrap();
        prop_assert!(close(ad_action(g, x).unwrap(), m.coeffs[..].try_into().unwrap(), 1e-12));
    }

    #[test]
    fn cp1_coisotropy_is_isometric(q in v3(), eta in v3()) {
        prop_assume!(vec3::norm(q) > 1e-2);
        let q = vec3::normalize(q);
        let eta = vec3::reject(eta, q);
        let w = cp1_coisotropy(q, eta).unwrap();
        let s = tangent_norm(&HomogeneousPair::su2_u1(), &Tangent::Sphere(eta));
        prop_assert!((vec3::norm(w) - s).abs() <= 1e-12);
    }

    #[test]
    fn lifted_coisotropy_is_isometric(g in unit_quat(), x in v3()) {
        let p = HomogeneousPair::su2_u1();
        let t = Tangent::Lift(lv(x));
        let w = coisotropy_form(&p, &CosetPoint::Rep(CMat::from_quat(g)), &t).unwrap();
        prop_assert!((w.norm() - tangent_norm(&p, &t)).abs() <= 1e-12);
    }

    #[test]
    fn isotropy_split_is_orthogonal(phi in v3(), xi in v3()) {
        prop_assume!(vec3::norm(phi) > 1e-2);
        let p = HomogeneousPair::su2_u1();
        let (a, b) = project_isotropy(&p, &CosetPoint::Sphere(vec3::normalize(phi)), &lv(xi)).unwrap();
        prop_assert!(a.dot(&b).abs() <= 1e-12);
        prop_assert!(a.add(&b).sub(&lv(xi)).norm() <= 1e-12);
    }

    #[test]
    fn exp_log_roundtrip(v in prop::array::uniform3(-1.5f64..1.5)) {
        prop_assume!(vec3::norm(v) < 3.0);
        prop_assert!(close(Quat::exp(v).log(), v, 1e-12));
    }
}
