//! Deterministic random smooth periodic fields.
//!
//! A field is a short Fourier series whose coefficients depend only on the
//! seed, so the same seed samples the same continuum field on every grid.

use crate::algebra::{vec3, Quat, V3};
use crate::fields::{LiftField, MapField, PotentialField};
use crate::lattice::{Grid, LatticeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// `f(x) = Σ_k c_k sin(2π m_k·x/L + δ_k)` with vector coefficients.
#[derive(Clone, Debug)]
pub struct SmoothSeries {
    modes: Vec<([f64; 3], f64, Vec<f64>)>,
    dim: usize,
}

impl SmoothSeries {
    /// `count` modes with wave numbers in `{-1..1}³ \ {0}` and coefficients of
    /// size up to `amplitude / count`.
    pub fn random(seed: u64, salt: u64, dim: usize, count: usize, amplitude: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let modes = (0..count)
            .map(|_| {
                let m = loop {
                    let m: [i32; 3] = std::array::from_fn(|_| rng.gen_range(-1..=1));
                    if m != [0, 0, 0] {
                        break m;
                    }
                };
                let phase = rng.gen_range(0.0..2.0 * PI);
                let c = (0..dim).map(|_| rng.gen_range(-1.0..1.0) * amplitude / count as f64).collect();
                (m.map(|v| v as f64), phase, c)
            })
            .collect();
        SmoothSeries { modes, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, grid: &Grid, s: usize, out: &mut [f64]) {
        let p = grid.position(s);
        let k = 2.0 * PI / grid.length;
        out.iter_mut().for_each(|o| *o = 0.0);
        for (m, phase, c) in &self.modes {
            let arg = k * vec3::dot(*m, p) + phase;
            let v = arg.sin();
            for (o, ci) in out.iter_mut().zip(c) {
                *o += ci * v;
            }
        }
    }

    pub fn eval3(&self, grid: &Grid, s: usize) -> V3 {
        let mut o = [0.0; 3];
        self.eval(grid, s, &mut o);
        o
    }
}

/// `u = exp(ξ)` for a smooth su(2) field `ξ`.
pub fn smooth_lift(grid: Grid, seed: u64, amplitude: f64) -> LiftField {
    let xi = SmoothSeries::random(seed, 1, 3, 6, amplitude);
    LiftField::from_fn(grid, |s| Quat::exp(xi.eval3(&grid, s)))
}

/// `φ = g i g⁻¹` for a smooth lift `g`, returned with `g`.
pub fn smooth_sphere(grid: Grid, seed: u64, amplitude: f64) -> (MapField, LiftField) {
    let xi = SmoothSeries::random(seed, 2, 3, 6, amplitude);
    let g = LiftField::from_fn(grid, |s| Quat::exp(xi.eval3(&grid, s)));
    let phi = MapField::sphere_from_fn(grid, |s| g.at(s).rotate([1.0, 0.0, 0.0]));
    (phi, g)
}

/// Smooth scalar 0-form.
pub fn smooth_scalar(grid: Grid, seed: u64, amplitude: f64) -> LatticeField {
    let f = SmoothSeries::random(seed, 3, 1, 6, amplitude);
    LatticeField::from_fn(grid, 0, 1, |s, _, o| f.eval(&grid, s, o))
}

/// Smooth su(2)-valued 1-form (not flat).
pub fn smooth_potential(grid: Grid, seed: u64, amplitude: f64) -> PotentialField {
    let f = SmoothSeries::random(seed, 4, 9, 6, amplitude);
    let a = LatticeField::from_fn(grid, 1, 3, |s, mu, o| {
        let mut v = [0.0; 9];
        f.eval(&grid, s, &mut v);
        o.copy_from_slice(&v[3 * mu..3 * mu + 3]);
    });
    PotentialField::new(a).expect("1-form with 3 components")
}

/// Isotropic potential `b_μ = β_μ φ` with a smooth scalar 1-form `β`.
pub fn smooth_isotropic(phi: &MapField, seed: u64, amplitude: f64) -> PotentialField {
    let grid = phi.grid;
    let f = SmoothSeries::random(seed, 5, 3, 6, amplitude);
    let a = LatticeField::from_fn(grid, 1, 3, |s, mu, o| {
        let beta = f.eval3(&grid, s)[mu];
        o.copy_from_slice(&vec3::scale(beta, phi.sphere(s)));
    });
    PotentialField::new(a).expect("1-form with 3 components")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_continuum_field() {
        let a = SmoothSeries::random(7, 1, 2, 4, 1.0);
        let g1 = Grid::with_n(8).unwrap();
        let g2 = Grid::with_n(16).unwrap();
        let (mut x, mut y) = ([0.0; 2], [0.0; 2]);
        a.eval(&g1, g1.index(3, 5, 1), &mut x);
        a.eval(&g2, g2.index(6, 10, 2), &mut y);
        assert_eq!(x, y);
    }
}
