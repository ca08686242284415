//! Invariant checks with explicit budgets, shared by the `check` command and
//! the acceptance run.

use crate::algebra::{
    coisotropy_form, cp1_coisotropy, tangent_norm, vec3, CMat, CosetPoint, HomogeneousPair, LieVector, Quat, Tangent,
};
use crate::energy::{energy_map_with, energy_potential, d_phi, Model, Variant, SKYRME_RATIO};
use crate::error::Result;
use crate::fields::{act, make_ansatz, pure_gauge_centered, pure_gauge_potential, split_form, AnsatzKind, MapField};
use crate::gauge::{fitted_order, gauge_transform_full, make_stabilizer};
use crate::lattice::{d, Grid, LatticeField};
use crate::samples;
use crate::topology::lift_charge;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub value: f64,
    pub budget: f64,
    pub bound: Bound,
}

impl CheckOutcome {
    fn at_most(name: &str, value: f64, budget: f64) -> Self {
        CheckOutcome { name: name.into(), value, budget, bound: Bound::AtMost }
    }

    fn at_least(name: &str, value: f64, budget: f64) -> Self {
        CheckOutcome { name: name.into(), value, budget, bound: Bound::AtLeast }
    }

    /// NaN never passes.
    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.value <= self.budget,
            Bound::AtLeast => self.value >= self.budget,
        }
    }
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0xd134_2543_de82_ef95))
}

/// Independent uniform entries in `[-1, 1]`.
pub fn random_field(grid: Grid, degree: usize, dim: usize, seed: u64) -> LatticeField {
    let mut r = rng(seed, 11);
    let mut f = LatticeField::zeros(grid, degree, dim);
    f.data.iter_mut().for_each(|x| *x = r.gen_range(-1.0..1.0));
    f
}

fn random_v3(r: &mut ChaCha8Rng) -> [f64; 3] {
    std::array::from_fn(|_| r.gen_range(-1.0..1.0))
}

fn random_unit_quat(r: &mut ChaCha8Rng) -> Quat {
    loop {
        let q = Quat::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        if q.norm2() > 1e-4 && q.norm2() <= 1.0 {
            return q.normalize();
        }
    }
}

/// `max | |ω⊥(S)| - |S| |` over random tangents, on CP¹ and on the lifted
/// (SU₂, U₁) representation.
pub fn coisotropy_isometry(samples: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let pair = HomogeneousPair::su2_u1();
    let mut r = rng(seed, 1);
    let (mut cp1, mut lifted) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let q = vec3::normalize(random_vec_nonzero(&mut r));
        let eta = vec3::reject(random_v3(&mut r), q);
        let w = cp1_coisotropy(q, eta)?;
        cp1 = cp1.max((vec3::norm(w) - tangent_norm(&pair, &Tangent::Sphere(eta))).abs());

        let g = CMat::from_quat(random_unit_quat(&mut r));
        let xi = Tangent::Lift(LieVector::new(random_v3(&mut r).to_vec()));
        let w = coisotropy_form(&pair, &CosetPoint::Rep(g), &xi)?;
        lifted = lifted.max((w.norm() - tangent_norm(&pair, &xi)).abs());
    }
    Ok(vec![
        CheckOutcome::at_most("coisotropy isometry on CP1", cp1, 1e-12),
        CheckOutcome::at_most("coisotropy isometry on (SU2, U1)", lifted, 1e-12),
    ])
}

fn random_vec_nonzero(r: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = random_v3(r);
        if vec3::norm2(v) > 1e-4 {
            return v;
        }
    }
}

/// `d∘d = 0`, pure-gauge plaquette triviality and the `a∥ + a⊥` split.
pub fn exact_identities(n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let grid = Grid::with_n(n)?;
    let h2 = grid.h() * grid.h();
    let f0 = random_field(grid, 0, 3, seed);
    let f1 = random_field(grid, 1, 3, seed.wrapping_add(1));
    let dd0 = d(&d(&f0)?)?.max_abs() * h2 / f0.max_abs();
    let dd1 = d(&d(&f1)?)?.max_abs() * h2 / f1.max_abs();

    let u = samples::smooth_lift(grid, seed, 1.2);
    let a = pure_gauge_potential(&u)?;
    let mut plaq = 0.0f64;
    for s in 0..grid.sites() {
        for (mu, nu) in crate::lattice::SLOT_PAIRS {
            plaq = plaq.max(a.plaquette(s, mu, nu).angle());
        }
    }

    let (phi, _) = samples::smooth_sphere(grid, seed, 1.2);
    let (par, perp) = split_form(&f1, &phi)?;
    let recon = par.add(&perp)?.sub(&f1)?.max_abs() / f1.max_abs();
    let mut ortho = 0.0f64;
    for s in 0..grid.sites() {
        for mu in 0..3 {
            ortho = ortho.max(vec3::dot(par.v3(s, mu), perp.v3(s, mu)).abs());
        }
    }
    let ortho = ortho / f1.max_abs().powi(2);
    Ok(vec![
        CheckOutcome::at_most("d∘d on 0-forms", dd0, 1e-12),
        CheckOutcome::at_most("d∘d on 1-forms", dd1, 1e-12),
        CheckOutcome::at_most("pure-gauge plaquette angle", plaq, 1e-12),
        CheckOutcome::at_most("a∥ + a⊥ = a", recon, 1e-12),
        CheckOutcome::at_most("a∥ ⟂ a⊥", ortho, 1e-12),
    ])
}

/// `|D_φ(aʷ)|² = |D_φa|²` sitewise and `E_φ(aʷ) = E_φ(a)` for a stabilizer `w`.
pub fn gauge_invariance(n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let grid = Grid::with_n(n)?;
    let (phi, _) = samples::smooth_sphere(grid, seed, 1.2);
    let a = samples::smooth_potential(grid, seed, 2.0);
    let w = make_stabilizer(&phi, &samples::smooth_scalar(grid, seed, 2.0))?;
    let aw = gauge_transform_full(&a, &w, &phi)?;
    let (da, daw) = (d_phi(&a, &phi)?.pointwise_norm2(), d_phi(&aw, &phi)?.pointwise_norm2());
    let pointwise = daw.sub(&da)?.max_abs() / da.max_abs();
    let (e, ew) = (energy_potential(&a, &phi)?.total, energy_potential(&aw, &phi)?.total);
    Ok(vec![
        CheckOutcome::at_most("|D_φ(aʷ)|² = |D_φa|² sitewise", pointwise, 1e-10),
        CheckOutcome::at_most("E_φ(aʷ) = E_φ(a)", (ew - e).abs() / e.abs(), 1e-10),
    ])
}

/// Degree additivity of lifts: `Q(uw) = Q(u) + Q(w)` for a stabilizer `w`,
/// and `Q(uu) = 2Q(u)`, with `u` the `hopf(1)` lift.
pub fn charge_additivity(n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let grid = Grid::with_n(n)?;
    let (_, u) = make_ansatz(AnsatzKind::Hopf, grid, 1)?;
    let (phi, _) = samples::smooth_sphere(grid, seed, 1.2);
    let w = make_stabilizer(&phi, &samples::smooth_scalar(grid, seed, 2.0))?.w;
    let (qu, qw) = (lift_charge(&u)?, lift_charge(&w)?);
    let quw = lift_charge(&u.mul(&w))?;
    let quu = lift_charge(&u.mul(&u))?;
    Ok(vec![
        CheckOutcome::at_most("Q(uw) - Q(u) - Q(w)", (quw - qu - qw).abs(), 0.03),
        CheckOutcome::at_most("Q(uu) - 2Q(u)", (quu - 2.0 * qu).abs(), 0.03),
    ])
}

/// Relative gap between `E(uφ)` and `E_φ(u⁻¹du)` on one grid.
pub fn dual_gap(n: usize, seed: u64) -> Result<f64> {
    let grid = Grid::with_n(n)?;
    let u = samples::smooth_lift(grid, seed, 1.2);
    let (phi, _) = samples::smooth_sphere(grid, seed, 1.2);
    let e_map = energy_map_with(&act(&u, &phi)?, &Model::default())?.total;
    let e_pot = energy_potential(&pure_gauge_centered(&u)?, &phi)?.total;
    Ok((e_map - e_pot).abs() / e_map.abs())
}

/// Sitewise coisotropy/cross-product Skyrme ratio: `(mean, std/mean)` over
/// sites where the cross-product density is not negligible.
pub fn skyrme_ratio(psi: &MapField) -> Result<(f64, f64)> {
    let skyrme_only = |variant| Model { variant, dirichlet_scale: 0.0, skyrme_scale: 1.0 };
    let co = energy_map_with(psi, &skyrme_only(Variant::Coisotropy))?.density;
    let cr = energy_map_with(psi, &skyrme_only(Variant::CrossProduct))?.density;
    let floor = 1e-12 * cr.max_abs();
    let ratios: Vec<f64> = (0..psi.grid.sites())
        .filter(|&s| cr.at(s, 0)[0] > floor)
        .map(|s| co.at(s, 0)[0] / cr.at(s, 0)[0])
        .collect();
    let m = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let var = ratios.iter().map(|r| (r - m).powi(2)).sum::<f64>() / ratios.len() as f64;
    Ok((m, var.sqrt() / m))
}

/// Refinement order of the dual-formulation gap and the frozen Skyrme ratio.
pub fn dual_formulation(sizes: &[usize], seed: u64) -> Result<Vec<CheckOutcome>> {
    let gaps = sizes.iter().map(|&n| dual_gap(n, seed)).collect::<Result<Vec<_>>>()?;
    let hs: Vec<f64> = sizes.iter().map(|&n| 1.0 / n as f64).collect();
    let grid = Grid::with_n(sizes[sizes.len() / 2])?;
    let (psi, _) = samples::smooth_sphere(grid, seed, 1.2);
    let (mean, spread) = skyrme_ratio(&psi)?;
    Ok(vec![
        CheckOutcome::at_least("E(uφ) vs E_φ(u⁻¹du) refinement order", fitted_order(&hs, &gaps), 0.9),
        CheckOutcome::at_most("Skyrme ratio spread (std/mean)", spread, 1e-10),
        CheckOutcome::at_most("Skyrme ratio vs frozen value", (mean - SKYRME_RATIO).abs(), 1e-12),
    ])
}

/// Algebra and lattice invariants run by the `check` command.
pub fn invariant_suite(n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = coisotropy_isometry(10_000, seed)?;
    out.extend(exact_identities(n, seed)?);
    out.extend(gauge_invariance(n, seed)?);
    Ok(out)
}
