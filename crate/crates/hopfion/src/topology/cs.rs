//! Chern-Simons route: `c ∫ tr(a∧a∧a)` for su(2) potentials, assembled from
//! the four-term isotropic/coisotropic split.

use crate::algebra::{cp1_split, vec3, Quat, V3};
use crate::error::Result;
use crate::fields::{pure_gauge_potential, LiftField, MapField, PotentialField, Target, LOG_CUT};
use crate::lattice::det_sum;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Normalization of the SU₂ block, fixed so that `ball_degree(1)` has charge +1.
pub const C_SU2: f64 = 1.0 / (24.0 * PI * PI);

const PERMS: [([usize; 3], f64); 6] = [
    ([0, 1, 2], 1.0),
    ([1, 2, 0], 1.0),
    ([2, 0, 1], 1.0),
    ([0, 2, 1], -1.0),
    ([2, 1, 0], -1.0),
    ([1, 0, 2], -1.0),
];

/// `tr(α∧β∧γ)` on the 012 slot with the 2×2 trace `tr q = 2 Re q`; for
/// imaginary quaternions `Re(xyz) = -det(x, y, z)`.
#[inline]
pub fn trace_triple(al: &[V3; 3], be: &[V3; 3], ga: &[V3; 3]) -> f64 {
    let mut s = 0.0;
    for (p, sign) in PERMS {
        s += sign * vec3::det(al[p[0]], be[p[1]], ga[p[2]]);
    }
    -2.0 * s
}

/// Pointwise terms `tr(a∥³)`, `3tr(a∥²a⊥)`, `3tr(a∥a⊥²)`, `tr(a⊥³)`.
#[inline]
pub fn split_terms(par: &[V3; 3], perp: &[V3; 3]) -> [f64; 4] {
    [
        trace_triple(par, par, par),
        3.0 * trace_triple(par, par, perp),
        3.0 * trace_triple(par, perp, perp),
        trace_triple(perp, perp, perp),
    ]
}

/// Source of the reference direction used by the split.
#[derive(Clone, Copy)]
pub(crate) enum Reference<'a> {
    /// Trivial isotropy: everything is coisotropic.
    None,
    Map(&'a MapField),
}

/// Raw integrals `∫` of the four split terms on a (possibly coarse) periodic lattice.
/// `links(x, μ)` returns the link variable and `phi(x)` the reference value.
pub(crate) fn term_integrals<L, P>(n: usize, h: f64, links: L, phi: P) -> Option<[f64; 4]>
where
    L: Fn(usize, usize) -> Quat + Sync,
    P: Fn(usize) -> Option<V3> + Sync,
{
    let sites = n * n * n;
    let per_site = |s: usize| -> Option<[f64; 4]> {
        let mut par = [[0.0; 3]; 3];
        let mut perp = [[0.0; 3]; 3];
        for mu in 0..3 {
            let l = links(s, mu);
            if l.angle() >= LOG_CUT {
                return None;
            }
            let a = vec3::scale(1.0 / h, l.log());
            match phi(s) {
                Some(p) => {
                    let (x, y) = cp1_split(p, a);
                    par[mu] = x;
                    perp[mu] = y;
                }
                None => perp[mu] = a,
            }
        }
        Some(split_terms(&par, &perp))
    };
    let terms: Vec<Option<[f64; 4]>> = (0..sites).into_par_iter().map(per_site).collect();
    if terms.iter().any(|t| t.is_none()) {
        return None;
    }
    let h3 = h.powi(3);
    let mut out = [0.0; 4];
    for (k, o) in out.iter_mut().enumerate() {
        *o = det_sum(sites, |s| terms[s].map_or(0.0, |t| t[k])) * h3;
    }
    Some(out)
}

fn sub_index(n: usize, off: [usize; 3], s: usize) -> usize {
    let m = n / 2;
    let (x, y, z) = (s % m, (s / m) % m, s / (m * m));
    (2 * x + off[0]) + n * ((2 * y + off[1]) + n * (2 * z + off[2]))
}

/// Four calibrated term integrals `c_G ∫ (…)` on the given grid, without extrapolation.
pub fn chern_simons_terms(a: &PotentialField, reference: Option<&MapField>) -> [f64; 4] {
    let g = a.grid();
    let refr = reference.map(Reference::Map).unwrap_or(Reference::None);
    let raw = term_integrals(g.n, g.h(), |s, mu| a.link(s, mu), |s| phi_at(refr, s)).unwrap_or([f64::NAN; 4]);
    raw.map(|v| C_SU2 * v)
}

fn phi_at(r: Reference, s: usize) -> Option<V3> {
    match r {
        Reference::None => None,
        Reference::Map(m) => Some(m.sphere(s)),
    }
}

/// Chern-Simons charge of an su(2) potential.
///
/// On even grids the fine-grid value `Q_h` is combined with the mean
/// `Q̄_{2h}` over the eight stride-2 sublattices (links are products of two
/// fine links) as `(4Q_h - Q̄_{2h})/3`, cancelling the leading `O(h²)` error.
/// Odd grids, or coarse links beyond the log cut, return `Q_h`.
pub fn chern_simons_value(a: &PotentialField, reference: Option<&MapField>) -> f64 {
    let g = a.grid();
    let n = g.n;
    let h = g.h();
    let refr = reference.map(Reference::Map).unwrap_or(Reference::None);
    let fine: f64 = chern_simons_terms(a, reference).iter().sum();
    if n % 2 != 0 || n / 2 < 2 {
        return fine;
    }
    let m = n / 2;
    let mut coarse = 0.0;
    for ox in 0..2 {
        for oy in 0..2 {
            for oz in 0..2 {
                let off = [ox, oy, oz];
                let raw = term_integrals(
                    m,
                    2.0 * h,
                    |s, mu| {
                        let x = sub_index(n, off, s);
                        a.link(x, mu) * a.link(g.shift(x, mu, 1), mu)
                    },
                    |s| phi_at(refr, sub_index(n, off, s)),
                );
                match raw {
                    Some(t) => coarse += C_SU2 * t.iter().sum::<f64>(),
                    None => return fine,
                }
            }
        }
    }
    (4.0 * fine - coarse / 8.0) / 3.0
}

/// Reference map used for the split: the cached one, else `φ ≡ i` for su2_u1.
pub(crate) fn default_reference(a: &PotentialField) -> MapField {
    match &a.split {
        Some(sp) if sp.phi.target == Target::Sphere => sp.phi.clone(),
        _ => MapField::constant_sphere(a.grid(), [1.0, 0.0, 0.0]),
    }
}

/// Chern-Simons charge of a lift, via its pure-gauge potential.
pub fn lift_charge(u: &LiftField) -> Result<f64> {
    let a = pure_gauge_potential(u)?;
    let phi = default_reference(&a);
    Ok(chern_simons_value(&a, Some(&phi)))
}
