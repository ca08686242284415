//! Periodic cubic grid and site-collocated discrete differential forms.

use crate::algebra::{vec3, HomogeneousPair, Quat, V3};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// 2-form slot order: (01), (02), (12).
pub const SLOT_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Index of the 2-form slot for the ordered axis pair `(mu, nu)`, `mu < nu`.
pub fn pair_slot(mu: usize, nu: usize) -> usize {
    match (mu, nu) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => panic!("not an ordered axis pair: ({mu}, {nu})"),
    }
}

pub fn slot_count(degree: usize) -> usize {
    [1, 3, 3, 1][degree]
}

/// Flat 3-torus of period `length`, `n` sites per axis, x-fastest indexing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
    pub length: f64,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 4 {
            return Err(Error::Grid(format!("n = {n} < 4")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Grid(format!("length = {length}")));
        }
        Ok(Grid { n, length })
    }

    /// Grid with the default period 2π.
    pub fn with_n(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * std::f64::consts::PI)
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.length / self.n as f64
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.n * self.n * self.n
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.n * (y + self.n * z)
    }

    #[inline]
    pub fn coords(&self, s: usize) -> [usize; 3] {
        let n = self.n;
        [s % n, (s / n) % n, s / (n * n)]
    }

    /// Site reached from `s` by `k` steps along `axis`, with periodic wrap.
    #[inline]
    pub fn shift(&self, s: usize, axis: usize, k: isize) -> usize {
        let mut c = self.coords(s);
        let n = self.n as isize;
        c[axis] = ((c[axis] as isize + k).rem_euclid(n)) as usize;
        self.index(c[0], c[1], c[2])
    }

    /// Physical coordinates `(i h, j h, k h)`.
    #[inline]
    pub fn position(&self, s: usize) -> V3 {
        let c = self.coords(s);
        let h = self.h();
        [c[0] as f64 * h, c[1] as f64 * h, c[2] as f64 * h]
    }

    #[inline]
    pub fn volume(&self) -> f64 {
        self.length.powi(3)
    }
}

const CHUNK: usize = 1024;

/// Sum of `f(0..len)` over fixed chunks; the result does not depend on the
/// number of worker threads.
pub fn det_sum<F: Fn(usize) -> f64 + Sync>(len: usize, f: F) -> f64 {
    let chunks = len.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            let mut s = 0.0;
            for i in lo..hi {
                s += f(i);
            }
            s
        })
        .collect();
    partial.iter().sum()
}

/// Discrete `k`-form with `dim` real components per slot, stored per site.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeField {
    pub grid: Grid,
    pub degree: usize,
    pub dim: usize,
    pub data: Vec<f64>,
}

impl LatticeField {
    pub fn zeros(grid: Grid, degree: usize, dim: usize) -> Self {
        assert!(degree <= 3);
        LatticeField { grid, degree, dim, data: vec![0.0; grid.sites() * slot_count(degree) * dim] }
    }

    /// Builds a field from `f(site, slot, out)`, evaluated in parallel.
    pub fn from_fn<F>(grid: Grid, degree: usize, dim: usize, f: F) -> Self
    where
        F: Fn(usize, usize, &mut [f64]) + Sync,
    {
        let mut out = Self::zeros(grid, degree, dim);
        let slots = slot_count(degree);
        out.data.par_chunks_mut(slots * dim).enumerate().for_each(|(s, chunk)| {
            for slot in 0..slots {
                f(s, slot, &mut chunk[slot * dim..(slot + 1) * dim]);
            }
        });
        out
    }

    #[inline]
    pub fn slots(&self) -> usize {
        slot_count(self.degree)
    }

    #[inline]
    pub fn at(&self, site: usize, slot: usize) -> &[f64] {
        let o = (site * self.slots() + slot) * self.dim;
        &self.data[o..o + self.dim]
    }

    #[inline]
    pub fn at_mut(&mut self, site: usize, slot: usize) -> &mut [f64] {
        let o = (site * self.slots() + slot) * self.dim;
        let d = self.dim;
        &mut self.data[o..o + d]
    }

    #[inline]
    pub fn v3(&self, site: usize, slot: usize) -> V3 {
        let a = self.at(site, slot);
        [a[0], a[1], a[2]]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    fn same_shape(&self, o: &LatticeField) -> Result<()> {
        if self.grid != o.grid || self.degree != o.degree || self.dim != o.dim {
            return Err(Error::Shape(format!(
                "(n={}, k={}, v={}) vs (n={}, k={}, v={})",
                self.grid.n, self.degree, self.dim, o.grid.n, o.degree, o.dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &LatticeField) -> Result<LatticeField> {
        self.same_shape(o)?;
        let mut r = self.clone();
        r.data.par_iter_mut().zip(&o.data).for_each(|(a, b)| *a += b);
        Ok(r)
    }

    pub fn sub(&self, o: &LatticeField) -> Result<LatticeField> {
        self.same_shape(o)?;
        let mut r = self.clone();
        r.data.par_iter_mut().zip(&o.data).for_each(|(a, b)| *a -= b);
        Ok(r)
    }

    pub fn scale(&self, s: f64) -> LatticeField {
        let mut r = self.clone();
        r.data.par_iter_mut().for_each(|a| *a *= s);
        r
    }

    /// Applies `f(site, slot, value, out)` slotwise, producing `dim_out` components.
    pub fn map<F>(&self, dim_out: usize, f: F) -> LatticeField
    where
        F: Fn(usize, usize, &[f64], &mut [f64]) + Sync,
    {
        LatticeField::from_fn(self.grid, self.degree, dim_out, |s, slot, out| f(s, slot, self.at(s, slot), out))
    }

    /// Discrete L² norm.
    pub fn norm(&self) -> f64 {
        l2_inner(self, self).expect("same shape").max(0.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Pointwise Euclidean norm over slots and components, as a scalar 0-form.
    pub fn pointwise_norm2(&self) -> LatticeField {
        let per = self.slots() * self.dim;
        LatticeField::from_fn(self.grid, 0, 1, |s, _, out| {
            out[0] = self.data[s * per..(s + 1) * per].iter().map(|v| v * v).sum();
        })
    }
}

/// Forward-difference exterior derivative with periodic wrap.
pub fn d(f: &LatticeField) -> Result<LatticeField> {
    if f.degree >= 3 {
        return Err(Error::Shape("exterior derivative of a 3-form".into()));
    }
    let g = f.grid;
    let h = g.h();
    let dim = f.dim;
    Ok(LatticeField::from_fn(g, f.degree + 1, dim, |s, slot, out| match f.degree {
        0 => {
            let sp = g.shift(s, slot, 1);
            for c in 0..dim {
                out[c] = (f.at(sp, 0)[c] - f.at(s, 0)[c]) / h;
            }
        }
        1 => {
            let (mu, nu) = SLOT_PAIRS[slot];
            let smu = g.shift(s, mu, 1);
            let snu = g.shift(s, nu, 1);
            for c in 0..dim {
                let dmu = f.at(smu, nu)[c] - f.at(s, nu)[c];
                let dnu = f.at(snu, mu)[c] - f.at(s, mu)[c];
                out[c] = (dmu - dnu) / h;
            }
        }
        _ => {
            let s0 = g.shift(s, 0, 1);
            let s1 = g.shift(s, 1, 1);
            let s2 = g.shift(s, 2, 1);
            for c in 0..dim {
                let t0 = f.at(s0, 2)[c] - f.at(s, 2)[c];
                let t1 = f.at(s1, 1)[c] - f.at(s, 1)[c];
                let t2 = f.at(s2, 0)[c] - f.at(s, 0)[c];
                out[c] = (t0 - t1 + t2) / h;
            }
        }
    }))
}

/// Bilinear value products available to [`wedge`].
#[derive(Clone, Copy, Debug)]
pub enum Product<'a> {
    /// Quaternion product; 3-component inputs are pure imaginary, output has 4.
    Quaternion,
    /// Lie bracket on su(2) ≅ Im ℍ: `[x, y] = 2 x × y`.
    Bracket,
    /// Lie bracket of a general pair, from its structure constants.
    PairBracket(&'a HomogeneousPair),
    Cross,
    /// One factor must be scalar (dim 1).
    Scalar,
}

fn as_quat(v: &[f64]) -> Quat {
    if v.len() == 3 {
        Quat::pure([v[0], v[1], v[2]])
    } else {
        Quat::new(v[0], v[1], v[2], v[3])
    }
}

impl Product<'_> {
    fn out_dim(&self, da: usize, db: usize) -> Result<usize> {
        let bad = || Error::Shape(format!("product {self:?} on dims {da} and {db}"));
        match self {
            Product::Quaternion => {
                if (da == 3 || da == 4) && (db == 3 || db == 4) {
                    Ok(4)
                } else {
                    Err(bad())
                }
            }
            Product::Bracket | Product::Cross => {
                if da == 3 && db == 3 {
                    Ok(3)
                } else {
                    Err(bad())
                }
            }
            Product::PairBracket(p) => {
                if da == p.dim_g && db == p.dim_g {
                    Ok(p.dim_g)
                } else {
                    Err(bad())
                }
            }
            Product::Scalar => {
                if da == 1 {
                    Ok(db)
                } else if db == 1 {
                    Ok(da)
                } else {
                    Err(bad())
                }
            }
        }
    }

    fn apply(&self, a: &[f64], b: &[f64], out: &mut [f64]) {
        match self {
            Product::Quaternion => out.copy_from_slice(&(as_quat(a) * as_quat(b)).to_array()),
            Product::Bracket => {
                let c = vec3::cross([a[0], a[1], a[2]], [b[0], b[1], b[2]]);
                for k in 0..3 {
                    out[k] = 2.0 * c[k];
                }
            }
            Product::Cross => out.copy_from_slice(&vec3::cross([a[0], a[1], a[2]], [b[0], b[1], b[2]])),
            Product::PairBracket(p) => {
                let d = p.dim_g;
                out.iter_mut().for_each(|o| *o = 0.0);
                for i in 0..d {
                    for j in 0..d {
                        let s = a[i] * b[j];
                        if s != 0.0 {
                            for k in 0..d {
                                out[k] += s * p.f(i, j, k);
                            }
                        }
                    }
                }
            }
            Product::Scalar => {
                if a.len() == 1 {
                    for (o, v) in out.iter_mut().zip(b) {
                        *o = a[0] * v;
                    }
                } else {
                    for (o, v) in out.iter_mut().zip(a) {
                        *o = v * b[0];
                    }
                }
            }
        }
    }
}

/// Signed terms `(sign, slot of α, slot of β)` of the antisymmetrized wedge
/// for output slot `slot`.
fn wedge_terms(k1: usize, k2: usize, slot: usize) -> Vec<(f64, usize, usize)> {
    match (k1, k2) {
        (0, _) => vec![(1.0, 0, slot)],
        (_, 0) => vec![(1.0, slot, 0)],
        (1, 1) => {
            let (mu, nu) = SLOT_PAIRS[slot];
            vec![(1.0, mu, nu), (-1.0, nu, mu)]
        }
        (1, 2) => vec![(1.0, 0, 2), (-1.0, 1, 1), (1.0, 2, 0)],
        (2, 1) => vec![(1.0, 0, 2), (-1.0, 1, 1), (1.0, 2, 0)],
        _ => unreachable!(),
    }
}

/// Wedge product with an arbitrary site-dependent bilinear map
/// `f(site, a, b, out)` that overwrites `out` (length `dim_out`).
pub fn wedge_with<F>(a: &LatticeField, b: &LatticeField, dim_out: usize, f: F) -> Result<LatticeField>
where
    F: Fn(usize, &[f64], &[f64], &mut [f64]) + Sync,
{
    if a.grid != b.grid {
        return Err(Error::Shape("wedge of fields on different grids".into()));
    }
    let k = a.degree + b.degree;
    if k > 3 {
        return Err(Error::Shape(format!("wedge degree {k} > 3")));
    }
    let slots = slot_count(k);
    let terms: Vec<Vec<(f64, usize, usize)>> = (0..slots).map(|s| wedge_terms(a.degree, b.degree, s)).collect();
    Ok(LatticeField::from_fn(a.grid, k, dim_out, |s, slot, out| {
        let mut tmp = vec![0.0; dim_out];
        out.iter_mut().for_each(|o| *o = 0.0);
        for &(sign, sa, sb) in &terms[slot] {
            f(s, a.at(s, sa), b.at(s, sb), &mut tmp);
            for c in 0..dim_out {
                out[c] += sign * tmp[c];
            }
        }
    }))
}

/// Pointwise antisymmetrized wedge product of forms.
pub fn wedge(a: &LatticeField, b: &LatticeField, product: Product) -> Result<LatticeField> {
    let dim = product.out_dim(a.dim, b.dim)?;
    wedge_with(a, b, dim, |_, x, y, out| product.apply(x, y, out))
}

/// `Σ αβ h³` over sites, slots and components.
pub fn l2_inner(a: &LatticeField, b: &LatticeField) -> Result<f64> {
    a.same_shape(b)?;
    let per = a.slots() * a.dim;
    let h3 = a.grid.h().powi(3);
    Ok(det_sum(a.grid.sites(), |s| {
        let lo = s * per;
        a.data[lo..lo + per].iter().zip(&b.data[lo..lo + per]).map(|(x, y)| x * y).sum::<f64>()
    }) * h3)
}

/// `Σ ω h³`, componentwise.
pub fn integrate_3form(w: &LatticeField) -> Result<Vec<f64>> {
    if w.degree != 3 {
        return Err(Error::Shape(format!("integrate_3form on a {}-form", w.degree)));
    }
    let h3 = w.grid.h().powi(3);
    Ok((0..w.dim).map(|c| det_sum(w.grid.sites(), |s| w.at(s, 0)[c]) * h3).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_indexing() {
        let g = Grid::with_n(5).unwrap();
        let s = g.index(4, 2, 1);
        assert_eq!(g.coords(s), [4, 2, 1]);
        assert_eq!(g.coords(g.shift(s, 0, 1)), [0, 2, 1]);
        assert_eq!(g.coords(g.shift(s, 2, -2)), [4, 2, 4]);
        assert!(Grid::new(3, 1.0).is_err());
        assert!(Grid::new(8, 0.0).is_err());
    }

    #[test]
    fn d_of_constant_and_sine() {
        let g = Grid::with_n(32).unwrap();
        let c = LatticeField::from_fn(g, 0, 2, |_, _, o| o.copy_from_slice(&[3.0, -1.0]));
        assert_eq!(d(&c).unwrap().max_abs(), 0.0);
        let f = LatticeField::from_fn(g, 0, 1, |s, _, o| o[0] = (2.0 * PI * g.position(s)[0] / g.length).sin());
        let df = d(&f).unwrap();
        let k = 2.0 * PI / g.length;
        let err = (0..g.sites())
            .map(|s| (df.at(s, 0)[0] - k * (k * g.position(s)[0]).cos()).abs())
            .fold(0.0, f64::max);
        assert!(err < 0.6 * k * k * g.h(), "{err}");
        assert!(d(&LatticeField::zeros(g, 3, 1)).is_err());
    }

    #[test]
    fn constant_inner_product() {
        let g = Grid::new(6, 2.5).unwrap();
        let c = LatticeField::from_fn(g, 0, 1, |_, _, o| o[0] = 1.5);
        let v = l2_inner(&c, &c).unwrap();
        assert!((v - 2.25 * 2.5f64.powi(3)).abs() < 1e-12);
        let one = LatticeField::from_fn(g, 3, 1, |_, _, o| o[0] = 1.0);
        assert!((integrate_3form(&one).unwrap()[0] - g.volume()).abs() < 1e-12);
    }

    #[test]
    fn single_term_wedge() {
        let g = Grid::with_n(4).unwrap();
        let xi = [0.0, 1.0, 0.0];
        let eta = [0.0, 0.0, 1.0];
        let a = LatticeField::from_fn(g, 1, 3, |_, s, o| if s == 0 { o.copy_from_slice(&xi) });
        let b = LatticeField::from_fn(g, 1, 3, |_, s, o| if s == 1 { o.copy_from_slice(&eta) });
        let w = wedge(&a, &b, Product::Quaternion).unwrap();
        let want = (Quat::pure(xi) * Quat::pure(eta)).to_array();
        for s in 0..g.sites() {
            assert_eq!(w.at(s, 0), &want);
            assert_eq!(w.at(s, 1), &[0.0; 4]);
            assert_eq!(w.at(s, 2), &[0.0; 4]);
        }
        assert!(wedge(&a, &LatticeField::zeros(g, 1, 2), Product::Cross).is_err());
    }
}
