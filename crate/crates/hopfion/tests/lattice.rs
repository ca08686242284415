use hopfion::gauge::fitted_order;
use hopfion::lattice::{d, integrate_3form, l2_inner, wedge, Grid, LatticeField, Product};
use hopfion::samples::{smooth_potential, smooth_scalar};
use proptest::prelude::*;
use std::f64::consts::PI;

fn random_form(grid: Grid, degree: usize, dim: usize, seed: u64) -> LatticeField {
    hopfion::checks::random_field(grid, degree, dim, seed)
}

#[test]
fn grid_validation() {
    assert!(Grid::new(3, 1.0).is_err());
    assert!(Grid::new(8, 0.0).is_err());
    assert!(Grid::new(8, f64::NAN).is_err());
    let g = Grid::new(8, 2.0).unwrap();
    assert_eq!(g.h(), 0.25);
    assert_eq!(g.shift(g.index(7, 0, 0), 0, 1), g.index(0, 0, 0));
    assert_eq!(g.shift(g.index(0, 3, 0), 1, -4), g.index(0, 7, 0));
}

#[test]
fn d_of_constant_is_zero() {
    let g = Grid::new(6, 1.7).unwrap();
    for k in 0..3 {
        let f = LatticeField::from_fn(g, k, 2, |_, slot, o| {
            o[0] = 1.5 + slot as f64;
            o[1] = -0.25;
        });
        assert_eq!(d(&f).unwrap().max_abs(), 0.0);
    }
    assert!(d(&LatticeField::zeros(g, 3, 1)).is_err());
}

#[test]
fn derivative_of_sine_is_first_order() {
    let mut errs = Vec::new();
    let mut hs = Vec::new();
    for n in [16, 32, 64] {
        let g = Grid::new(n, 3.0).unwrap();
        let k = 2.0 * PI / g.length;
        let f = LatticeField::from_fn(g, 0, 1, |s, _, o| o[0] = (k * g.position(s)[0]).sin());
        let df = d(&f).unwrap();
        let err = (0..g.sites())
            .map(|s| (df.at(s, 0)[0] - k * (k * g.position(s)[0]).cos()).abs())
            .fold(0.0, f64::max);
        assert!(df.at(0, 1)[0] == 0.0 && df.at(0, 2)[0] == 0.0);
        errs.push(err);
        hs.push(g.h());
    }
    let order = fitted_order(&hs, &errs);
    assert!((0.9..1.2).contains(&order), "order {order}");
}

#[test]
fn wedge_examples() {
    let g = Grid::new(4, 1.0).unwrap();
    let a = random_form(g, 1, 3, 4);
    let z = LatticeField::zeros(g, 0, 1);
    assert_eq!(wedge(&a, &z, Product::Scalar).unwrap().max_abs(), 0.0);

    let (xi, eta) = ([0.2, -0.7, 0.4], [1.1, 0.3, -0.5]);
    let alpha = LatticeField::from_fn(g, 1, 3, |_, mu, o| {
        if mu == 0 {
            o.copy_from_slice(&xi)
        }
    });
    let beta = LatticeField::from_fn(g, 1, 3, |_, mu, o| {
        if mu == 1 {
            o.copy_from_slice(&eta)
        }
    });
    let w = wedge(&alpha, &beta, Product::Quaternion).unwrap();
    let want = (hopfion::algebra::Quat::pure(xi) * hopfion::algebra::Quat::pure(eta)).to_array();
    for s in 0..g.sites() {
        assert_eq!(w.at(s, 0), &want);
        assert_eq!(w.at(s, 1), &[0.0; 4]);
        assert_eq!(w.at(s, 2), &[0.0; 4]);
    }
    assert!(wedge(&alpha, &LatticeField::zeros(g, 1, 2), Product::Cross).is_err());
    assert!(wedge(&w, &w, Product::Quaternion).is_err());
}

#[test]
fn self_wedge_is_half_bracket() {
    let g = Grid::new(5, 2.0).unwrap();
    let a = random_form(g, 1, 3, 11);
    let q = wedge(&a, &a, Product::Quaternion).unwrap();
    let b = wedge(&a, &a, Product::Bracket).unwrap();
    for s in 0..g.sites() {
        for slot in 0..3 {
            let qa = q.at(s, slot);
            let ba = b.at(s, slot);
            assert!(qa[0].abs() <= 1e-14);
            for c in 0..3 {
                assert!((qa[c + 1] - 0.5 * ba[c]).abs() <= 1e-13);
            }
        }
    }
}

#[test]
fn inner_product_examples() {
    let g = Grid::new(6, 1.3).unwrap();
    let c = LatticeField::from_fn(g, 0, 1, |_, _, o| o[0] = 2.5);
    let exact = 2.5 * 2.5 * 1.3f64.powi(3);
    assert!((l2_inner(&c, &c).unwrap() - exact).abs() <= 1e-12 * exact);
    assert_eq!(l2_inner(&LatticeField::zeros(g, 0, 1), &c).unwrap(), 0.0);
    assert!(l2_inner(&c, &LatticeField::zeros(g, 1, 1)).is_err());
}

#[test]
fn integrate_examples() {
    let g = Grid::new(5, 1.7).unwrap();
    assert_eq!(integrate_3form(&LatticeField::zeros(g, 3, 1)).unwrap(), vec![0.0]);
    let one = LatticeField::from_fn(g, 3, 1, |_, _, o| o[0] = 1.0);
    let v = integrate_3form(&one).unwrap()[0];
    assert!((v - 1.7f64.powi(3)).abs() <= 1e-12);
    assert!(integrate_3form(&LatticeField::zeros(g, 2, 1)).is_err());
}

#[test]
fn leibniz_defect_is_first_order() {
    let mut errs = Vec::new();
    let mut hs = Vec::new();
    for n in [16, 32, 64] {
        let g = Grid::with_n(n).unwrap();
        let f = smooth_scalar(g, 1, 1.0);
        let gg = smooth_scalar(g, 2, 1.0);
        let fg = LatticeField::from_fn(g, 0, 1, |s, _, o| o[0] = f.at(s, 0)[0] * gg.at(s, 0)[0]);
        let lhs = d(&fg).unwrap();
        let rhs = wedge(&d(&f).unwrap(), &gg, Product::Scalar)
            .unwrap()
            .add(&wedge(&f, &d(&gg).unwrap(), Product::Scalar).unwrap())
            .unwrap();
        errs.push(lhs.sub(&rhs).unwrap().norm());
        hs.push(g.h());
    }
    assert!(fitted_order(&hs, &errs) >= 0.9, "{errs:?}");
}

#[test]
fn stokes_on_smooth_two_form() {
    let g = Grid::with_n(16).unwrap();
    let a = smooth_potential(g, 3, 1.0).a;
    let da = d(&a).unwrap();
    let beta = wedge(&a, &a, Product::Cross).unwrap().add(&da).unwrap();
    let total = integrate_3form(&d(&beta).unwrap()).unwrap();
    let scale = d(&beta).unwrap().data.iter().map(|v| v.abs()).sum::<f64>() * g.h().powi(3);
    for t in total {
        assert!(t.abs() <= 1e-10 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dd_vanishes(seed in any::<u64>(), k in 0usize..2, n in 4usize..8) {
        let g = Grid::new(n, 1.0 + (seed % 7) as f64).unwrap();
        let f = random_form(g, k, 2, seed);
        let dd = d(&d(&f).unwrap()).unwrap();
        let scale = f.max_abs() / (g.h() * g.h());
        prop_assert!(dd.max_abs() <= 1e-13 * scale);
    }

    #[test]
    fn stokes_on_random_two_forms(seed in any::<u64>()) {
        let g = Grid::new(6, 2.0).unwrap();
        let beta = random_form(g, 2, 3, seed);
        let db = d(&beta).unwrap();
        let scale = db.data.iter().map(|v| v.abs()).sum::<f64>() * g.h().powi(3);
        for t in integrate_3form(&db).unwrap() {
            prop_assert!(t.abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn wedge_is_antisymmetric_for_symmetric_products(seed in any::<u64>()) {
        let g = Grid::new(4, 1.0).unwrap();
        let a = random_form(g, 1, 1, seed);
        let b = random_form(g, 1, 1, seed.wrapping_add(1));
        let ab = wedge(&a, &b, Product::Scalar).unwrap();
        let ba = wedge(&b, &a, Product::Scalar).unwrap();
        prop_assert!(ab.add(&ba).unwrap().max_abs() <= 1e-15);
    }

    #[test]
    fn inner_product_is_symmetric_and_positive(seed in any::<u64>()) {
        let g = Grid::new(4, 1.5).unwrap();
        let a = random_form(g, 2, 3, seed);
        let b = random_form(g, 2, 3, seed ^ 0xff);
        let ab = l2_inner(&a, &b).unwrap();
        prop_assert!((ab - l2_inner(&b, &a).unwrap()).abs() <= 1e-12 * (1.0 + ab.abs()));
        prop_assert!(l2_inner(&a, &a).unwrap() > 0.0);
    }
}
