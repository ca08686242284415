//! Gauge calculus on the coset bundle of a sphere-valued reference map:
//! stabilizers, gauge actions, curvatures and the identity suite.

use crate::algebra::{cp1_split, vec3, Quat, V3};
use crate::error::{Error, Result};
use crate::fields::{pullback_coisotropy, pure_gauge_potential, sphere_tangent, split_form, LiftField, MapField, PotentialField, Target, LOG_CUT};
use crate::lattice::{d, wedge, wedge_with, Grid, LatticeField, Product, SLOT_PAIRS};
use crate::samples;
use crate::topology::whitehead::fft3;
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Isotropy residual accepted for inputs of [`gauge_transform_potential`].
pub const ISOTROPY_TOL: f64 = 1e-10;

/// Section `w` of the isotropy bundle of `φ` (`w φ w⁻¹ = φ`).
#[derive(Clone, Debug)]
pub struct StabilizerField {
    pub w: LiftField,
    pub phi: MapField,
}

impl StabilizerField {
    /// `max |w φ w⁻¹ - φ|`.
    pub fn residual(&self) -> f64 {
        (0..self.phi.grid.sites())
            .map(|s| vec3::norm(vec3::sub(self.w.at(s).rotate(self.phi.sphere(s)), self.phi.sphere(s))))
            .fold(0.0, f64::max)
    }
}

fn require_sphere(phi: &MapField) -> Result<()> {
    if phi.target != Target::Sphere {
        return Err(Error::Unsupported("gauge calculus is implemented for the CP¹ pair".into()));
    }
    Ok(())
}

fn same_grid(a: Grid, b: Grid) -> Result<()> {
    if a != b {
        return Err(Error::Shape("grid mismatch".into()));
    }
    Ok(())
}

/// `w(x) = cos θ(x) + sin θ(x) φ(x)`.
pub fn make_stabilizer(phi: &MapField, theta: &LatticeField) -> Result<StabilizerField> {
    require_sphere(phi)?;
    same_grid(phi.grid, theta.grid)?;
    if theta.degree != 0 || theta.dim != 1 {
        return Err(Error::Shape("θ must be a scalar 0-form".into()));
    }
    let w = LiftField::from_fn_raw(phi.grid, |s| {
        let t = theta.at(s, 0)[0];
        Quat::new(t.cos(), 0.0, 0.0, 0.0) + Quat::pure(vec3::scale(t.sin(), phi.sphere(s)))
    });
    Ok(StabilizerField { w, phi: phi.clone() })
}

/// Pointwise `Φξ = (ξ·φ)φ` on every slot.
pub fn project_par(f: &LatticeField, phi: &MapField) -> LatticeField {
    f.map(3, |s, _, v, o| o.copy_from_slice(&cp1_split(phi.sphere(s), [v[0], v[1], v[2]]).0))
}

/// Pointwise `(I - Φ)ξ`.
pub fn project_perp(f: &LatticeField, phi: &MapField) -> LatticeField {
    f.map(3, |s, _, v, o| o.copy_from_slice(&cp1_split(phi.sphere(s), [v[0], v[1], v[2]]).1))
}

/// Largest coisotropic component of an su(2)-valued form.
pub fn isotropy_residual(b: &LatticeField, phi: &MapField) -> f64 {
    project_perp(b, phi).max_abs()
}

/// `Ad(w⁻¹)` applied slotwise.
fn ad_inv(w: &LiftField, f: &LatticeField) -> LatticeField {
    f.map(3, |s, _, v, o| o.copy_from_slice(&w.at(s).conj().rotate([v[0], v[1], v[2]])))
}

/// `w⁻¹dw` from principal logarithms of `w(x)⁻¹w(x+ê_μ)`.
pub fn maurer_cartan(w: &LiftField) -> Result<LatticeField> {
    Ok(pure_gauge_potential(w)?.a)
}

/// `Ad(w⁻¹)b + w⁻¹dw - (Ad(w⁻¹) - I)φ*ω⊥` without checking the isotropy of `b`.
pub fn gauge_formula(b: &LatticeField, w: &StabilizerField, phi: &MapField) -> Result<LatticeField> {
    require_sphere(phi)?;
    same_grid(b.grid, phi.grid)?;
    same_grid(w.w.grid, phi.grid)?;
    let om = pullback_coisotropy(phi)?;
    let mc = maurer_cartan(&w.w)?;
    let rot_om = ad_inv(&w.w, &om);
    ad_inv(&w.w, b).add(&mc)?.sub(&rot_om.sub(&om)?)
}

/// Gauge action on isotropic potentials; rejects `b` with a coisotropic
/// component above [`ISOTROPY_TOL`].
///
/// The principal-log `w⁻¹dw` and the centered `φ*ω⊥` cancel in the
/// coisotropic directions only up to `O(h)`, so the result is isotropic to
/// that order.
pub fn gauge_transform_potential(b: &PotentialField, w: &StabilizerField, phi: &MapField) -> Result<PotentialField> {
    require_sphere(phi)?;
    same_grid(b.grid(), phi.grid)?;
    let r = isotropy_residual(&b.a, phi);
    if !(r <= ISOTROPY_TOL) {
        return Err(Error::NotIsotropic(r));
    }
    PotentialField::new(gauge_formula(&b.a, w, phi)?)
}

/// Gauge action on arbitrary potentials in the form
/// `Ad(w⁻¹)a + Φ(w⁻¹dw) + (Ad(w⁻¹) - I)φ*ω⊥`.
///
/// The coisotropic part of `w⁻¹dw` is replaced by its continuum value, which
/// makes `(aʷ)⊥ + φ*ω⊥ = Ad(w⁻¹)(a⊥ + φ*ω⊥)` hold exactly on the lattice.
pub fn gauge_transform_full(a: &PotentialField, w: &StabilizerField, phi: &MapField) -> Result<PotentialField> {
    require_sphere(phi)?;
    same_grid(a.grid(), phi.grid)?;
    let om = pullback_coisotropy(phi)?;
    let mc = project_par(&maurer_cartan(&w.w)?, phi);
    let rot_om = ad_inv(&w.w, &om);
    PotentialField::new(ad_inv(&w.w, &a.a).add(&mc)?.add(&rot_om.sub(&om)?)?)
}

/// Link-variable action `exp(h bʷ_μ(x)) = w(x)⁻¹ exp(h b_μ(x)) w(x+ê_μ)`.
pub fn link_gauge_transform(b: &PotentialField, w: &LiftField) -> Result<PotentialField> {
    let g = b.grid();
    same_grid(g, w.grid)?;
    let h = g.h();
    let mut worst = (0usize, 0.0f64);
    let links: Vec<Quat> = (0..g.sites() * 3)
        .map(|k| {
            let (s, mu) = (k / 3, k % 3);
            let q = w.at(s).conj() * b.link(s, mu) * w.at(g.shift(s, mu, 1));
            let ang = q.angle();
            if ang > worst.1 {
                worst = (s, ang);
            }
            q
        })
        .collect();
    if worst.1 >= LOG_CUT {
        return Err(Error::TooRough { site: worst.0, angle: worst.1 });
    }
    PotentialField::new(LatticeField::from_fn(g, 1, 3, |s, mu, o| {
        o.copy_from_slice(&vec3::scale(1.0 / h, links[3 * s + mu].log()));
    }))
}

/// A unit quaternion `q` with `q i q⁻¹ = φ`.
fn frame(phi: V3) -> Quat {
    let c = 1.0 + phi[0];
    if c < 1e-8 {
        return Quat::J;
    }
    Quat::new(c, 0.0, -phi[2], phi[1]).normalize()
}

/// Curvature from `U(1)` holonomy: in frames `g(x)` of `φ`, the links
/// `π_H(g(x)⁻¹ exp(h b_μ) g(x+ê_μ))` with `π_H(z + wj) = z/|z|` define an
/// abelian connection whose plaquette angle `θ_{μν}` gives `F_{μν} = θ_{μν} φ(x) / h²`.
pub fn holonomy_curvature(b: &PotentialField, phi: &MapField) -> Result<LatticeField> {
    require_sphere(phi)?;
    let g = b.grid();
    same_grid(g, phi.grid)?;
    let h = g.h();
    let frames: Vec<Quat> = (0..g.sites()).into_par_iter().map(|s| frame(phi.sphere(s))).collect();
    let angle = |s: usize, mu: usize| -> f64 {
        let q = frames[s].conj() * b.link(s, mu) * frames[g.shift(s, mu, 1)];
        q.x.atan2(q.w)
    };
    let alpha: Vec<[f64; 3]> = (0..g.sites()).into_par_iter().map(|s| std::array::from_fn(|mu| angle(s, mu))).collect();
    Ok(LatticeField::from_fn(g, 2, 3, |s, slot, o| {
        let (mu, nu) = SLOT_PAIRS[slot];
        let t = alpha[s][mu] + alpha[g.shift(s, mu, 1)][nu] - alpha[g.shift(s, nu, 1)][mu] - alpha[s][nu];
        let t = t - 2.0 * PI * (t / (2.0 * PI)).round();
        o.copy_from_slice(&vec3::scale(t / (h * h), phi.sphere(s)));
    }))
}

/// `α∧α = ½[α∧α]` for su(2)-valued 1-forms.
fn self_wedge(a: &LatticeField) -> Result<LatticeField> {
    Ok(wedge(a, a, Product::Bracket)?.scale(0.5))
}

/// `F(b) = db + b∧b - [b, φ*ω⊥] - (φ*ω⊥∧φ*ω⊥)∥` with lattice `d` and wedges.
pub fn coset_curvature(b: &PotentialField, phi: &MapField) -> Result<LatticeField> {
    require_sphere(phi)?;
    same_grid(b.grid(), phi.grid)?;
    let om = pullback_coisotropy(phi)?;
    let db = d(&b.a)?;
    let bb = self_wedge(&b.a)?;
    let bo = wedge(&b.a, &om, Product::Bracket)?;
    let oo = project_par(&self_wedge(&om)?, phi);
    db.add(&bb)?.sub(&bo)?.sub(&oo)
}

/// Centered tangent `∂_μφ` (projected to `T_φS²`) as a 1-form.
pub fn sphere_differential(phi: &MapField) -> LatticeField {
    LatticeField::from_fn(phi.grid, 1, 3, |s, mu, o| o.copy_from_slice(&sphere_tangent(phi, s, mu)))
}

/// `dΦ∧α` with `(∂_μΦ)ξ = (ξ·∂_μφ)φ + (ξ·φ)∂_μφ`.
pub fn dproj_wedge(dphi: &LatticeField, phi: &MapField, alpha: &LatticeField) -> Result<LatticeField> {
    wedge_with(dphi, alpha, 3, |s, t, xi, o| {
        let p = phi.sphere(s);
        let t = [t[0], t[1], t[2]];
        let xi = [xi[0], xi[1], xi[2]];
        let v = vec3::add(vec3::scale(vec3::dot(xi, t), p), vec3::scale(vec3::dot(xi, p), t));
        o.copy_from_slice(&v);
    })
}

/// Whether an identity is pointwise algebra (roundoff budget) or a
/// discretized differential statement (convergence-order budget).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityClass {
    Pointwise,
    Differential,
}

/// Residuals of one identity across grid sizes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub name: String,
    pub class: IdentityClass,
    pub sizes: Vec<usize>,
    /// Relative residual per grid size.
    pub l2_residual: Vec<f64>,
    /// Slope of `log residual` against `log h`.
    pub fitted_order: f64,
    /// Residual bound for pointwise identities, minimum order for differential ones.
    pub budget: f64,
}

/// Minimum fitted order of differential identities.
pub const MIN_ORDER: f64 = 0.9;

impl IdentityResidual {
    pub fn passed(&self) -> bool {
        match self.class {
            IdentityClass::Pointwise => self.l2_residual.iter().all(|r| *r <= self.budget),
            IdentityClass::Differential => self.fitted_order >= self.budget && self.l2_residual.iter().all(|r| r.is_finite()),
        }
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn fitted_order(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.max(1e-300).ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// `‖lhs - rhs‖ / max(‖lhs‖, ‖rhs‖)`.
pub fn relative_l2(lhs: &LatticeField, rhs: &LatticeField) -> Result<f64> {
    let num = lhs.sub(rhs)?.norm();
    let den = lhs.norm().max(rhs.norm());
    Ok(if den == 0.0 { num } else { num / den })
}

/// Largest pointwise difference relative to the largest value.
pub fn relative_max(lhs: &LatticeField, rhs: &LatticeField) -> Result<f64> {
    let num = lhs.sub(rhs)?.max_abs();
    let den = lhs.max_abs().max(rhs.max_abs());
    Ok(if den == 0.0 { num } else { num / den })
}

/// Fields sampled from one seed on one grid.
struct Inputs {
    phi: MapField,
    dphi: LatticeField,
    om: LatticeField,
    par: LatticeField,
    perp: LatticeField,
    generic: PotentialField,
    b: PotentialField,
    w: StabilizerField,
}

fn inputs(n: usize, seed: u64) -> Result<Inputs> {
    let grid = Grid::with_n(n)?;
    let (phi, _) = samples::smooth_sphere(grid, seed, 1.2);
    let u = samples::smooth_lift(grid, seed, 1.2);
    let a = pure_gauge_potential(&u)?;
    let (par, perp) = split_form(&a.a, &phi)?;
    let theta = samples::smooth_scalar(grid, seed, 2.0);
    Ok(Inputs {
        dphi: sphere_differential(&phi),
        om: pullback_coisotropy(&phi)?,
        generic: samples::smooth_potential(grid, seed, 2.0),
        b: samples::smooth_isotropic(&phi, seed, 2.0),
        w: make_stabilizer(&phi, &theta)?,
        par,
        perp,
        phi,
    })
}

type Check = fn(&Inputs) -> Result<f64>;

fn check_thm_iii(x: &Inputs) -> Result<f64> {
    relative_l2(&coset_curvature(&x.b, &x.phi)?, &holonomy_curvature(&x.b, &x.phi)?)
}

fn check_e067_par(x: &Inputs) -> Result<f64> {
    let db = project_par(&d(&x.b.a)?, &x.phi);
    let rhs = db.add(&self_wedge(&x.b.a)?)?.sub(&project_par(&self_wedge(&x.om)?, &x.phi))?;
    relative_l2(&holonomy_curvature(&x.b, &x.phi)?, &rhs)
}

fn check_e067_perp(x: &Inputs) -> Result<f64> {
    let lhs = project_perp(&d(&x.b.a)?, &x.phi);
    relative_l2(&lhs, &wedge(&x.om, &x.b.a, Product::Bracket)?)
}

fn par_curvature(x: &Inputs) -> Result<LatticeField> {
    coset_curvature(&PotentialField::new(x.par.clone())?, &x.phi)
}

fn check_dcurv_i(x: &Inputs) -> Result<f64> {
    let pp = self_wedge(&x.perp)?;
    let rhs = dproj_wedge(&x.dphi, &x.phi, &x.perp)?
        .sub(&project_par(&pp, &x.phi))?
        .sub(&project_par(&self_wedge(&x.om)?, &x.phi))?;
    relative_l2(&par_curvature(x)?, &rhs)
}

fn check_dcurv_i_sym(x: &Inputs) -> Result<f64> {
    let rhs = dproj_wedge(&x.dphi, &x.phi, &x.perp)?.sub(&self_wedge(&x.perp)?)?.sub(&self_wedge(&x.om)?)?;
    relative_l2(&par_curvature(x)?, &rhs)
}

fn dcurv_ii_common(x: &Inputs) -> Result<LatticeField> {
    let t1 = dproj_wedge(&x.dphi, &x.phi, &x.par)?;
    let t2 = dproj_wedge(&x.dphi, &x.phi, &x.perp)?;
    let t3 = wedge(&x.par, &x.perp, Product::Bracket)?;
    Ok(t1.add(&t2)?.add(&t3)?.scale(-1.0))
}

fn check_dcurv_ii(x: &Inputs) -> Result<f64> {
    let rhs = dcurv_ii_common(x)?.sub(&project_perp(&self_wedge(&x.perp)?, &x.phi))?;
    relative_l2(&d(&x.perp)?, &rhs)
}

fn check_dcurv_ii_sym(x: &Inputs) -> Result<f64> {
    relative_l2(&d(&x.perp)?, &dcurv_ii_common(x)?)
}

fn check_dcurv_iii_sym(x: &Inputs) -> Result<f64> {
    let pp = self_wedge(&x.perp)?;
    let lhs = d(&pp)?;
    let dpar = dproj_wedge(&x.dphi, &x.phi, &x.par)?;
    let rhs = dproj_wedge(&x.dphi, &x.phi, &pp)?.sub(&wedge(&dpar, &x.perp, Product::Bracket)?)?;
    relative_l2(&lhs, &rhs)
}

fn check_e0100(x: &Inputs) -> Result<f64> {
    relative_l2(&dproj_wedge(&x.dphi, &x.phi, &x.par)?, &project_perp(&d(&x.par)?, &x.phi))
}

fn check_e0101(x: &Inputs) -> Result<f64> {
    relative_l2(&dproj_wedge(&x.dphi, &x.phi, &x.perp)?, &project_par(&d(&x.perp)?, &x.phi).scale(-1.0))
}

fn check_e0109(x: &Inputs) -> Result<f64> {
    let pp = self_wedge(&x.perp)?;
    let r = project_perp(&pp, &x.phi).max_abs();
    Ok(r / pp.max_abs().max(f64::MIN_POSITIVE))
}

fn check_dafi(x: &Inputs) -> Result<f64> {
    let aw = gauge_transform_full(&x.generic, &x.w, &x.phi)?;
    let (_, aw_perp) = split_form(&aw.a, &x.phi)?;
    let lhs = aw_perp.add(&x.om)?;
    let (_, a_perp) = split_form(&x.generic.a, &x.phi)?;
    let rhs = ad_inv(&x.w.w, &a_perp.add(&x.om)?);
    relative_max(&lhs, &rhs)
}

fn check_thm_ii(x: &Inputs) -> Result<f64> {
    let bw = link_gauge_transform(&x.b, &x.w.w)?;
    let lhs = holonomy_curvature(&bw, &x.phi)?;
    let rhs = ad_inv(&x.w.w, &holonomy_curvature(&x.b, &x.phi)?);
    Ok(lhs.sub(&rhs)?.norm() / rhs.norm())
}

/// Names, classes, budgets and checks of the suite.
fn catalogue() -> Vec<(&'static str, IdentityClass, f64, Check)> {
    use IdentityClass::*;
    vec![
        ("coset curvature formula", Differential, MIN_ORDER, check_thm_iii as Check),
        ("curvature isotropic part", Differential, MIN_ORDER, check_e067_par),
        ("(db)⊥ = [φ*ω⊥, b]", Differential, MIN_ORDER, check_e067_perp),
        ("flat F(a∥) (i)", Differential, MIN_ORDER, check_dcurv_i),
        ("flat da⊥ (ii)", Differential, MIN_ORDER, check_dcurv_ii),
        ("flat F(a∥) symmetric (i')", Differential, MIN_ORDER, check_dcurv_i_sym),
        ("flat da⊥ symmetric (ii')", Differential, MIN_ORDER, check_dcurv_ii_sym),
        ("flat d(a⊥∧a⊥) symmetric (iii')", Differential, MIN_ORDER, check_dcurv_iii_sym),
        ("dΦ∧a∥ = (da∥)⊥", Differential, MIN_ORDER, check_e0100),
        ("dΦ∧a⊥ = -(da⊥)∥", Differential, MIN_ORDER, check_e0101),
        ("coisotropic part of a⊥∧a⊥ vanishes", Pointwise, 1e-10, check_e0109),
        ("D_φ(aʷ) = Ad(w⁻¹)D_φa", Pointwise, 1e-10, check_dafi),
        ("F(bʷ) = Ad(w⁻¹)F(b)", Pointwise, 1e-8, check_thm_ii),
    ]
}

/// Runs every identity on the given grid sizes with fields sampled from `seed`.
pub fn identity_suite(sizes: &[usize], seed: u64) -> Result<Vec<IdentityResidual>> {
    if sizes.len() < 3 {
        return Err(Error::Grid("identity suite needs at least three grid sizes".into()));
    }
    let cat = catalogue();
    let mut res: Vec<Vec<f64>> = vec![Vec::with_capacity(sizes.len()); cat.len()];
    for &n in sizes {
        let x = inputs(n, seed)?;
        let vals: Vec<Result<f64>> = cat.par_iter().map(|(_, _, _, f)| f(&x)).collect();
        for (r, v) in res.iter_mut().zip(vals) {
            r.push(v?);
        }
    }
    let hs: Vec<f64> = sizes.iter().map(|&n| 2.0 * PI / n as f64).collect();
    Ok(cat
        .into_iter()
        .zip(res)
        .map(|((name, class, budget, _), l2)| IdentityResidual {
            name: name.to_string(),
            class,
            sizes: sizes.to_vec(),
            fitted_order: fitted_order(&hs, &l2),
            l2_residual: l2,
            budget,
        })
        .collect())
}

/// Result of [`gauge_smooth`].
#[derive(Clone, Debug)]
pub struct GaugeSmoothing {
    pub stabilizer: StabilizerField,
    pub theta: LatticeField,
    /// Objective after the start and after every accepted step.
    pub objective: Vec<f64>,
}

/// `‖bʷ‖²` for `w = w(θ)`; `None` when `w` is too rough for the logarithm.
fn smoothing_objective(b: &PotentialField, phi: &MapField, theta: &LatticeField) -> Option<(f64, LatticeField)> {
    let w = make_stabilizer(phi, theta).ok()?;
    let bw = gauge_formula(&b.a, &w, phi).ok()?;
    let v = bw.norm().powi(2);
    v.is_finite().then_some((v, bw))
}

/// Descent on `θ ↦ ‖b^{w(θ)}‖²` with the inverse lattice Laplacian as
/// preconditioner and step halving; only decreasing steps are accepted.
pub fn gauge_smooth(b: &PotentialField, phi: &MapField, iterations: usize, step: f64) -> Result<GaugeSmoothing> {
    require_sphere(phi)?;
    let g = b.grid();
    same_grid(g, phi.grid)?;
    let n = g.n;
    let h = g.h();
    let mut theta = LatticeField::zeros(g, 0, 1);
    let (mut obj, mut bw) = smoothing_objective(b, phi, &theta)
        .ok_or_else(|| Error::Unsupported("gauge_smooth: objective undefined at θ = 0".into()))?;
    let mut history = vec![obj];
    let sym: Vec<C> = (0..n).map(|m| (C::from_polar(1.0, 2.0 * PI * m as f64 / n as f64) - 1.0) / h).collect();
    for _ in 0..iterations {
        // Isotropic components β_μ, then δθ = -(d*d)⁻¹ d*β.
        let mut beta: Vec<Vec<C>> = (0..3)
            .map(|mu| (0..g.sites()).map(|s| C::new(vec3::dot(bw.v3(s, mu), phi.sphere(s)), 0.0)).collect())
            .collect();
        for v in beta.iter_mut() {
            fft3(v, n, false);
        }
        let mut dt: Vec<C> = (0..g.sites())
            .map(|s| {
                let c = [s % n, (s / n) % n, s / (n * n)];
                let dm = [sym[c[0]], sym[c[1]], sym[c[2]]];
                let lap: f64 = dm.iter().map(|z| z.norm_sqr()).sum();
                if lap == 0.0 {
                    return C::new(0.0, 0.0);
                }
                -(0..3).map(|mu| dm[mu].conj() * beta[mu][s]).sum::<C>() / lap
            })
            .collect();
        fft3(&mut dt, n, true);
        let mut t = step;
        let mut accepted = false;
        while t > 1e-8 {
            let trial = LatticeField::from_fn(g, 0, 1, |s, _, o| o[0] = theta.at(s, 0)[0] + t * dt[s].re);
            if let Some((v, nb)) = smoothing_objective(b, phi, &trial) {
                if v < obj {
                    theta = trial;
                    obj = v;
                    bw = nb;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        history.push(obj);
    }
    Ok(GaugeSmoothing { stabilizer: make_stabilizer(phi, &theta)?, theta, objective: history })
}
