//! Whitehead route: helicity `∫ A∧F` of the pulled-back area form
//! `F = ψ*(Ω/4π)`, with `dA = F` solved spectrally.

use crate::algebra::{vec3, V3};
use crate::error::{Error, Result};
use crate::fields::{MapField, Target};
use crate::lattice::det_sum;
use num_complex::Complex64 as C;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Flux tolerance through coordinate 2-tori.
pub const FLUX_TOL: f64 = 1e-6;

/// Signed solid angle of the geodesic triangle `(a, b, c)` on S².
#[inline]
pub fn solid_angle(a: V3, b: V3, c: V3) -> f64 {
    let num = vec3::det(a, b, c);
    let den = 1.0 + vec3::dot(a, b) + vec3::dot(b, c) + vec3::dot(c, a);
    2.0 * num.atan2(den)
}

struct Periodic<'a> {
    n: usize,
    h: f64,
    psi: &'a (dyn Fn(usize) -> V3 + Sync),
}

impl Periodic<'_> {
    #[inline]
    fn idx(&self, x: usize, y: usize, z: usize) -> usize {
        let n = self.n;
        (x % n) + n * ((y % n) + n * (z % n))
    }
    #[inline]
    fn coords(&self, s: usize) -> [usize; 3] {
        let n = self.n;
        [s % n, (s / n) % n, s / (n * n)]
    }
    #[inline]
    fn step(&self, s: usize, e: [usize; 3]) -> usize {
        let c = self.coords(s);
        self.idx(c[0] + e[0], c[1] + e[1], c[2] + e[2])
    }
}

const PLANES: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn unit(axis: usize) -> [usize; 3] {
    let mut e = [0; 3];
    e[axis] = 1;
    e
}

fn add3(a: [usize; 3], b: [usize; 3]) -> [usize; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// `F_{μν}(x)`: solid angle of the plaquette quad split into two triangles,
/// divided by `4πh²`. The resulting 2-cochain is exactly closed.
fn area_form(p: &Periodic) -> Vec<[f64; 3]> {
    let sites = p.n.pow(3);
    let h2 = p.h * p.h;
    (0..sites)
        .into_par_iter()
        .map(|s| {
            let mut f = [0.0; 3];
            for (k, &(mu, nu)) in PLANES.iter().enumerate() {
                let p0 = (p.psi)(s);
                let p1 = (p.psi)(p.step(s, unit(mu)));
                let p2 = (p.psi)(p.step(s, add3(unit(mu), unit(nu))));
                let p3 = (p.psi)(p.step(s, unit(nu)));
                f[k] = (solid_angle(p0, p1, p2) + solid_angle(p0, p2, p3)) / (4.0 * PI * h2);
            }
            f
        })
        .collect()
}

/// Largest flux `∫ F` through a coordinate 2-torus slice.
fn max_flux(p: &Periodic, f: &[[f64; 3]]) -> f64 {
    let n = p.n;
    let h2 = p.h * p.h;
    let mut worst: f64 = 0.0;
    for (k, &(mu, nu)) in PLANES.iter().enumerate() {
        let other = 3 - mu - nu;
        for t in 0..n {
            let mut sum = 0.0;
            for a in 0..n {
                for b in 0..n {
                    let mut c = [0usize; 3];
                    c[mu] = a;
                    c[nu] = b;
                    c[other] = t;
                    sum += f[p.idx(c[0], c[1], c[2])][k];
                }
            }
            worst = worst.max((sum * h2).abs());
        }
    }
    worst
}

/// In-place 3D FFT on x-fastest data.
pub(crate) fn fft3(data: &mut [C], n: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    let mut line = vec![C::new(0.0, 0.0); n];
    for axis in 0..3 {
        let stride = n.pow(axis as u32);
        for a in 0..n {
            for b in 0..n {
                let base = match axis {
                    0 => n * (a + n * b),
                    1 => a + n * n * b,
                    _ => a + n * b,
                };
                for (i, l) in line.iter_mut().enumerate() {
                    *l = data[base + i * stride];
                }
                fft.process(&mut line);
                for (i, l) in line.iter().enumerate() {
                    data[base + i * stride] = *l;
                }
            }
        }
    }
    if inverse {
        let s = 1.0 / (n.pow(3) as f64);
        data.iter_mut().for_each(|v| *v *= s);
    }
}

/// Coulomb-gauge `A` with forward-difference `dA = F` (exact on the lattice
/// for closed `F` with zero flux).
fn solve_potential(n: usize, h: f64, f: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let sites = n.pow(3);
    let mut fh: Vec<Vec<C>> = (0..3)
        .map(|k| {
            let mut v: Vec<C> = f.iter().map(|x| C::new(x[k], 0.0)).collect();
            fft3(&mut v, n, false);
            v
        })
        .collect();
    let sym: Vec<C> = (0..n).map(|m| (C::from_polar(1.0, 2.0 * PI * m as f64 / n as f64) - 1.0) / h).collect();
    // F̂_{μν} with antisymmetry; slot k of PLANES.
    let get = |fh: &Vec<Vec<C>>, mu: usize, nu: usize, s: usize| -> C {
        if mu == nu {
            return C::new(0.0, 0.0);
        }
        let (a, b, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
        let k = PLANES.iter().position(|&p| p == (a, b)).unwrap();
        fh[k][s] * sign
    };
    let mut ah: Vec<Vec<C>> = vec![vec![C::new(0.0, 0.0); sites]; 3];
    for s in 0..sites {
        let c = [s % n, (s / n) % n, s / (n * n)];
        let d = [sym[c[0]], sym[c[1]], sym[c[2]]];
        let lap: f64 = d.iter().map(|z| z.norm_sqr()).sum();
        if lap == 0.0 {
            continue;
        }
        for (nu, a_nu) in ah.iter_mut().enumerate() {
            let mut acc = C::new(0.0, 0.0);
            for (mu, dm) in d.iter().enumerate() {
                acc += dm.conj() * get(&fh, mu, nu, s);
            }
            a_nu[s] = acc / lap;
        }
    }
    for v in ah.iter_mut() {
        fft3(v, n, true);
    }
    fh.clear();
    (0..sites).map(|s| [ah[0][s].re, ah[1][s].re, ah[2][s].re]).collect()
}

/// `∫ A∧F` as the mean of the cubical cup products `A∪F` and `F∪A`.
fn helicity_raw(p: &Periodic) -> Result<f64> {
    let f = area_form(p);
    let flux = max_flux(p, &f);
    if flux > FLUX_TOL {
        return Err(Error::NonzeroFlux(flux));
    }
    let a = solve_potential(p.n, p.h, &f);
    let e = [unit(0), unit(1), unit(2)];
    let sum = det_sum(p.n.pow(3), |s| {
        let af = a[s][0] * f[p.step(s, e[0])][2] - a[s][1] * f[p.step(s, e[1])][1] + a[s][2] * f[p.step(s, e[2])][0];
        let fa = f[s][0] * a[p.step(s, add3(e[0], e[1]))][2] - f[s][1] * a[p.step(s, add3(e[0], e[2]))][1]
            + f[s][2] * a[p.step(s, add3(e[1], e[2]))][0];
        0.5 * (af + fa)
    });
    Ok(sum * p.h.powi(3))
}

/// Orientation convention of the helicity, calibrated on `hopf(1)`.
pub const WHITEHEAD_SIGN: f64 = 1.0;

/// Hopf charge of a sphere-valued map from its helicity.
///
/// Even grids use the same `(4Q_h - Q̄_{2h})/3` sublattice extrapolation as
/// the Chern-Simons route; it is skipped when a sublattice fails the flux check.
pub fn whitehead_charge(psi: &MapField) -> Result<f64> {
    if psi.target != Target::Sphere {
        return Err(Error::Unsupported("whitehead_charge needs a sphere-valued map".into()));
    }
    let g = psi.grid;
    let n = g.n;
    let look = |s: usize| psi.sphere(s);
    let fine = helicity_raw(&Periodic { n, h: g.h(), psi: &look })?;
    if n % 2 != 0 || n / 2 < 2 {
        return Ok(WHITEHEAD_SIGN * fine);
    }
    let m = n / 2;
    let mut coarse = 0.0;
    for o in 0..8 {
        let off = [o & 1, (o >> 1) & 1, (o >> 2) & 1];
        let sub = |s: usize| {
            let (x, y, z) = (s % m, (s / m) % m, s / (m * m));
            psi.sphere(g.index(2 * x + off[0], 2 * y + off[1], 2 * z + off[2]))
        };
        match helicity_raw(&Periodic { n: m, h: 2.0 * g.h(), psi: &sub }) {
            Ok(v) => coarse += v,
            Err(_) => return Ok(WHITEHEAD_SIGN * fine),
        }
    }
    Ok(WHITEHEAD_SIGN * (4.0 * fine - coarse / 8.0) / 3.0)
}

/// Plain fine-grid helicity, without extrapolation.
pub fn whitehead_raw(psi: &MapField) -> Result<f64> {
    if psi.target != Target::Sphere {
        return Err(Error::Unsupported("whitehead_charge needs a sphere-valued map".into()));
    }
    let look = |s: usize| psi.sphere(s);
    Ok(WHITEHEAD_SIGN * helicity_raw(&Periodic { n: psi.grid.n, h: psi.grid.h(), psi: &look })?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octant_solid_angle() {
        let w = solid_angle([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
        assert!((w - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn fft_roundtrip() {
        let n = 6;
        let orig: Vec<C> = (0..n * n * n).map(|i| C::new((i as f64).sin(), 0.0)).collect();
        let mut v = orig.clone();
        fft3(&mut v, n, false);
        fft3(&mut v, n, true);
        for (a, b) in v.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
