//! Faddeev-Skyrme energies in the map and potential formulations, and the
//! exact gradient of the discretized map energy.

use crate::algebra::{cp1_omega_ext, vec3, HomogeneousPair, LieVector, V3};
use crate::error::{Error, Result};
use crate::fields::{pullback_coisotropy, MapField, PotentialField, Target};
use crate::lattice::{det_sum, wedge, LatticeField, Product, SLOT_PAIRS};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `½|ψ*ω⊥|² + ¼|ψ*(ω⊥∧ω⊥)|²`.
    #[default]
    Coisotropy,
    /// `½|dψ|² + ¼|dψ×dψ|²` with Euclidean `dψ` (sphere only).
    CrossProduct,
    /// Skyrme term projected to the isotropy algebra: `¼|pr_𝔥(ω⊥∧ω⊥)|²`.
    IsotropicSkyrme,
}

impl Variant {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "coisotropy" => Some(Variant::Coisotropy),
            "cross_product" => Some(Variant::CrossProduct),
            "isotropic_skyrme" => Some(Variant::IsotropicSkyrme),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Coisotropy => "coisotropy",
            Variant::CrossProduct => "cross_product",
            Variant::IsotropicSkyrme => "isotropic_skyrme",
        }
    }
}

/// Sitewise ratio of the coisotropy to the cross-product Skyrme density on S².
pub const SKYRME_RATIO: f64 = 1.0 / 16.0;

/// Functional variant with optional global scales on the two terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub variant: Variant,
    pub dirichlet_scale: f64,
    pub skyrme_scale: f64,
}

impl Default for Model {
    fn default() -> Self {
        Model { variant: Variant::Coisotropy, dirichlet_scale: 1.0, skyrme_scale: 1.0 }
    }
}

impl Model {
    pub fn new(variant: Variant) -> Self {
        Model { variant, ..Model::default() }
    }
}

#[derive(Clone, Debug)]
pub struct EnergyReport {
    pub dirichlet: f64,
    pub skyrme: f64,
    pub total: f64,
    pub density: LatticeField,
    pub model_tag: String,
}

impl EnergyReport {
    fn from_densities(grid: crate::lattice::Grid, dens: Vec<(f64, f64)>, tag: String) -> Self {
        let h3 = grid.h().powi(3);
        let dirichlet = det_sum(dens.len(), |s| dens[s].0) * h3;
        let skyrme = det_sum(dens.len(), |s| dens[s].1) * h3;
        let density = LatticeField::from_fn(grid, 0, 1, |s, _, o| o[0] = dens[s].0 + dens[s].1);
        EnergyReport { dirichlet, skyrme, total: dirichlet + skyrme, density, model_tag: tag }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "model": self.model_tag,
            "dirichlet": self.dirichlet,
            "skyrme": self.skyrme,
            "total": self.total,
        })
    }
}

/// One-sided chords `d^σ_μ = σ(ψ(x+σê_μ) - ψ(x)) / h`, `σ = +1` at index 0.
///
/// The sphere densities are built from full chords with ω⊥ extended by
/// [`cp1_omega_ext`]. Forms built from `ψ×d` alone vanish between antipodal
/// neighbours and let sublattice flips unwind a configuration at no cost.
/// Averaging both sides and the four corners `(σ, τ)` of every plaquette
/// keeps the stencil free of decoupled sublattices.
#[inline]
fn sphere_chords(psi: &MapField, s: usize) -> [[V3; 3]; 2] {
    let g = psi.grid;
    let p = psi.sphere(s);
    let mut d = [[[0.0; 3]; 3]; 2];
    for (side, sigma) in SIDES {
        for (mu, dm) in d[side].iter_mut().enumerate() {
            let q = psi.sphere(g.shift(s, mu, sigma));
            *dm = vec3::scale(sigma as f64 / g.h(), vec3::sub(q, p));
        }
    }
    d
}

const SIDES: [(usize, isize); 2] = [(0, 1), (1, -1)];

/// Mean over the four plaquette corners of `f(v^σ_μ, v^τ_ν)`, summed over `μ < ν`.
#[inline]
fn corner_mean<F: Fn(V3, V3) -> f64>(v: &[[V3; 3]; 2], f: F) -> f64 {
    let mut acc = 0.0;
    for &(m, n) in SLOT_PAIRS.iter() {
        for a in v.iter() {
            for b in v.iter() {
                acc += f(a[m], b[n]);
            }
        }
    }
    0.25 * acc
}

/// `(Dirichlet, Skyrme)` densities of the sphere functionals at one site.
fn sphere_density(psi: &MapField, s: usize, variant: Variant) -> (f64, f64) {
    let p = psi.sphere(s);
    let d = sphere_chords(psi, s);
    let half = |v: &[[V3; 3]; 2]| 0.25 * v.iter().flat_map(|x| x.iter()).map(|x| vec3::norm2(*x)).sum::<f64>();
    match variant {
        Variant::CrossProduct => {
            let sk = corner_mean(&d, |a, b| 0.25 * vec3::norm2(vec3::scale(2.0, vec3::cross(a, b))));
            (half(&d), sk)
        }
        v => {
            let w = d.map(|side| side.map(|x| cp1_omega_ext(p, x)));
            let sk = corner_mean(&w, |a, b| {
                let br = vec3::scale(2.0, vec3::cross(a, b));
                let br = if v == Variant::IsotropicSkyrme { vec3::scale(vec3::dot(br, p), p) } else { br };
                0.25 * vec3::norm2(br)
            });
            (half(&w), sk)
        }
    }
}

fn skyrme_pairs<F: Fn(usize, usize) -> f64>(f: F) -> f64 {
    SLOT_PAIRS.iter().map(|&(m, n)| f(m, n)).sum()
}

/// Map-formulation energy with unit scales.
pub fn energy_map(psi: &MapField, variant: Variant) -> Result<EnergyReport> {
    energy_map_with(psi, &Model::new(variant))
}

pub fn energy_map_with(psi: &MapField, model: &Model) -> Result<EnergyReport> {
    let g = psi.grid;
    let (sd, ss) = (model.dirichlet_scale, model.skyrme_scale);
    let tag = model.variant.name().to_string();
    let dens: Vec<(f64, f64)> = match (psi.target, model.variant) {
        (_, Variant::CrossProduct) if psi.target != Target::Sphere => {
            return Err(Error::Unsupported("cross_product variant needs the su2_u1 pair".into()))
        }
        (Target::Sphere, v) => (0..g.sites())
            .into_par_iter()
            .map(|s| {
                let (dir, sk) = sphere_density(psi, s, v);
                (sd * dir, ss * sk)
            })
            .collect(),
        (Target::Su2, v) => {
            let om = pullback_coisotropy(psi)?;
            (0..g.sites())
                .into_par_iter()
                .map(|s| {
                    let w: Vec<V3> = (0..3).map(|mu| om.v3(s, mu)).collect();
                    let dir = 0.5 * w.iter().map(|x| vec3::norm2(*x)).sum::<f64>();
                    let sk = if v == Variant::IsotropicSkyrme {
                        0.0
                    } else {
                        0.25 * skyrme_pairs(|m, n| vec3::norm2(vec3::scale(2.0, vec3::cross(w[m], w[n]))))
                    };
                    (sd * dir, ss * sk)
                })
                .collect()
        }
        (Target::Su3, v) => {
            let pair = HomogeneousPair::new(psi.target.pair_kind());
            let om = pullback_coisotropy(psi)?;
            (0..g.sites())
                .into_par_iter()
                .map(|s| {
                    let w: Vec<LieVector> = (0..3).map(|mu| LieVector::new(om.at(s, mu).to_vec())).collect();
                    let dir = 0.5 * w.iter().map(|x| x.dot(x)).sum::<f64>();
                    let rep = psi.mat(s);
                    let sk = 0.25
                        * skyrme_pairs(|m, n| {
                            let br = pair.bracket(&w[m], &w[n]);
                            let br = if v == Variant::IsotropicSkyrme {
                                let local = pair.ad_unchecked(&rep.adjoint(), &br);
                                pair.ad_unchecked(&rep, &pair.proj_h(&local))
                            } else {
                                br
                            };
                            br.dot(&br)
                        });
                    (sd * dir, ss * sk)
                })
                .collect()
        }
    };
    Ok(EnergyReport::from_densities(g, dens, tag))
}

/// `D_φa = a⊥ + φ*ω⊥`.
pub fn d_phi(a: &PotentialField, phi: &MapField) -> Result<LatticeField> {
    if a.grid() != phi.grid {
        return Err(Error::Shape("energy_potential: grid mismatch".into()));
    }
    let (_, perp) = a.split_against(phi)?;
    perp.add(&pullback_coisotropy(phi)?)
}

/// `E_φ(a) = ½‖D_φa‖² + ¼‖D_φa ∧ D_φa‖²` with the quaternion-product wedge.
pub fn energy_potential(a: &PotentialField, phi: &MapField) -> Result<EnergyReport> {
    let d = d_phi(a, phi)?;
    let dd = wedge(&d, &d, Product::Quaternion)?;
    let g = phi.grid;
    let dens: Vec<(f64, f64)> = (0..g.sites())
        .into_par_iter()
        .map(|s| {
            let dir: f64 = (0..3).map(|mu| vec3::norm2(d.v3(s, mu))).sum();
            let sk: f64 = (0..3).map(|k| dd.at(s, k).iter().map(|x| x * x).sum::<f64>()).sum();
            (0.5 * dir, 0.25 * sk)
        })
        .collect();
    Ok(EnergyReport::from_densities(g, dens, "potential".into()))
}

/// Effective coisotropy-form scales: the cross-product functional equals the
/// coisotropy one with Dirichlet ×4 and Skyrme ×16 on S².
fn effective_scales(model: &Model) -> (f64, f64) {
    match model.variant {
        Variant::CrossProduct => (4.0 * model.dirichlet_scale, 16.0 * model.skyrme_scale),
        _ => (model.dirichlet_scale, model.skyrme_scale),
    }
}

/// L² gradient of the discrete energy on S²: `(∂E/∂ψ(x)) / h³`, projected onto `T_ψS²`.
pub fn energy_gradient(psi: &MapField, model: &Model) -> Result<LatticeField> {
    if psi.target != Target::Sphere {
        return Err(Error::Unsupported("energy_gradient needs a sphere-valued map".into()));
    }
    let g = psi.grid;
    let h = g.h();
    let (sd, ss) = effective_scales(model);
    let isotropic = model.variant == Variant::IsotropicSkyrme;
    // Coisotropy density: (sd/16) Σ|d|² + (ss/64) Σ_{μ<ν,σ,τ} |d^σ_μ × d^τ_ν|².
    // The isotropic variant keeps only T = ψ·(d^σ_μ × d^τ_ν) in the Skyrme sum.
    let (ca, cb) = (sd / 16.0, ss / 64.0);
    // D^σ_μ = ∂e/∂d^σ_μ and the explicit ∂e/∂ψ at every site.
    let parts: Vec<([[V3; 3]; 2], V3)> = (0..g.sites())
        .into_par_iter()
        .map(|s| {
            let p = psi.sphere(s);
            let d = sphere_chords(psi, s);
            let mut dd = d.map(|side| side.map(|x| vec3::scale(2.0 * ca, x)));
            let mut direct = [0.0; 3];
            for &(m, n) in SLOT_PAIRS.iter() {
                for i in 0..2 {
                    for j in 0..2 {
                        let (a, b) = (d[i][m], d[j][n]);
                        let (da, db) = if isotropic {
                            let ab = vec3::cross(a, b);
                            let k = 2.0 * cb * vec3::dot(p, ab);
                            direct = vec3::add(direct, vec3::scale(k, ab));
                            (vec3::scale(k, vec3::cross(b, p)), vec3::scale(k, vec3::cross(p, a)))
                        } else {
                            let ab = vec3::dot(a, b);
                            let da = vec3::sub(vec3::scale(vec3::norm2(b), a), vec3::scale(ab, b));
                            let db = vec3::sub(vec3::scale(vec3::norm2(a), b), vec3::scale(ab, a));
                            (vec3::scale(2.0 * cb, da), vec3::scale(2.0 * cb, db))
                        };
                        dd[i][m] = vec3::add(dd[i][m], da);
                        dd[j][n] = vec3::add(dd[j][n], db);
                    }
                }
            }
            (dd, direct)
        })
        .collect();
    // d^σ_μ(x) depends on ψ(x) with weight -σ/h and on ψ(x+σê_μ) with +σ/h.
    Ok(LatticeField::from_fn(g, 0, 3, |s, _, o| {
        let p = psi.sphere(s);
        let mut acc = [0.0; 3];
        for mu in 0..3 {
            for (side, sigma) in SIDES {
                let y = g.shift(s, mu, sigma);
                let both = vec3::add(parts[s].0[side][mu], parts[y].0[1 - side][mu]);
                acc = vec3::sub(acc, vec3::scale(sigma as f64 / h, both));
            }
        }
        o.copy_from_slice(&vec3::reject(vec3::add(acc, parts[s].1), p));
    }))
}
