//! Signed preimage count of a lift `u: T³ → S³` at a regular value.

use super::simplex::{det3, kuhn_tets, site_at};
use crate::algebra::Quat;
use crate::error::{Error, Result};
use crate::fields::LiftField;
use rayon::prelude::*;

/// Orientation convention of the count, calibrated on `ball_degree(1)`.
pub const DEGREE_SIGN: i64 = -1;

const TIE: f64 = 1e-12;

/// Gnomonic chart around `p`: `q ↦ Im(p⁻¹q) / Re(p⁻¹q)`, defined on `Re(p⁻¹q) > 0`.
#[inline]
fn chart(p: Quat, q: Quat) -> Option<[f64; 3]> {
    let r = p.conj() * q;
    if r.w <= 0.1 {
        return None;
    }
    Some([r.x / r.w, r.y / r.w, r.z / r.w])
}

/// Signed count over tetrahedra; `None` when some simplex is degenerate.
fn count(u: &LiftField, p: Quat) -> Option<i64> {
    let n = u.grid.n;
    let tets = kuhn_tets();
    let per_cube: Vec<Option<i64>> = (0..n * n * n)
        .into_par_iter()
        .map(|s| {
            let base = [s % n, (s / n) % n, s / (n * n)];
            let mut acc = 0i64;
            for (v, sign) in &tets {
                let mut y = [[0.0; 3]; 4];
                let mut ok = true;
                for k in 0..4 {
                    match chart(p, u.at(site_at(n, base, v[k]))) {
                        Some(c) => y[k] = c,
                        None => ok = false,
                    }
                }
                if !ok {
                    continue;
                }
                let e = |k: usize| [y[k][0] - y[0][0], y[k][1] - y[0][1], y[k][2] - y[0][2]];
                let m = [e(1), e(2), e(3)];
                let det = det3(m);
                let scale = m.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs())).powi(3);
                if det.abs() <= TIE * scale.max(1e-300) {
                    // Flat image: only a problem if the origin is close.
                    let near = y.iter().any(|c| c.iter().all(|v| v.abs() < 1e-9));
                    if near {
                        return None;
                    }
                    continue;
                }
                // Solve Σ λ_k e_k = -y0 by Cramer's rule.
                let rhs = [-y[0][0], -y[0][1], -y[0][2]];
                let mut lam = [0.0; 4];
                for k in 0..3 {
                    let mut mk = m;
                    mk[k] = rhs;
                    lam[k + 1] = det3(mk) / det;
                }
                lam[0] = 1.0 - lam[1] - lam[2] - lam[3];
                let lo = lam.iter().cloned().fold(f64::INFINITY, f64::min);
                if lo.abs() <= TIE {
                    return None;
                }
                if lo > 0.0 {
                    acc += (det.signum() * sign) as i64;
                }
            }
            Some(acc)
        })
        .collect();
    per_cube.into_iter().sum::<Option<i64>>()
}

/// Deterministic perturbations of the regular value used on ties.
pub(crate) const NUDGES: [[f64; 4]; 5] = [
    [0.0, 0.0, 0.0, 0.0],
    [0.31, -0.52, 0.77, 0.19],
    [-0.64, 0.11, 0.29, -0.70],
    [0.45, 0.83, -0.21, 0.26],
    [-0.12, -0.37, -0.58, 0.71],
];

/// Degree of `u` as the signed number of preimages of `p` (tetrahedral
/// linear interpolation in a gnomonic chart at `p`).
pub fn preimage_degree(u: &LiftField, p: Quat) -> Result<i64> {
    for (k, d) in NUDGES.iter().enumerate() {
        let q = (p + Quat::from_array(*d) * (1e-7 * k as f64)).normalize();
        if let Some(c) = count(u, q) {
            return Ok(DEGREE_SIGN * c);
        }
    }
    Err(Error::DegeneratePreimage("regular value lies on simplex boundaries after perturbation".into()))
}
