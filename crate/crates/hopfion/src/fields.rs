//! Coset-, group- and algebra-valued lattice fields, potentials of lifts and
//! charged initial configurations.

use crate::algebra::{cp1_omega, cp1_split, vec3, CMat, HomogeneousPair, LieVector, PairKind, Quat, V3};
use crate::error::{Error, Result};
use crate::lattice::{Grid, LatticeField};
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest admissible link angle for the principal logarithm.
pub const LOG_CUT: f64 = PI - 1e-6;

/// Value type of a [`MapField`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// Unit imaginary quaternions (CP¹ = S²), 3 components.
    Sphere,
    /// Unit quaternions (SU₂), 4 components.
    Su2,
    /// SU₃ representatives of points of SU₃/𝕋², 18 components (row-major, re/im).
    Su3,
}

impl Target {
    pub fn comps(self) -> usize {
        match self {
            Target::Sphere => 3,
            Target::Su2 => 4,
            Target::Su3 => 18,
        }
    }

    pub fn pair_kind(self) -> PairKind {
        match self {
            Target::Sphere => PairKind::Su2U1,
            Target::Su2 => PairKind::Su2Group,
            Target::Su3 => PairKind::Su3Flag,
        }
    }
}

/// Map from the lattice into G/H.
#[derive(Clone, Debug, PartialEq)]
pub struct MapField {
    pub grid: Grid,
    pub target: Target,
    pub data: Vec<f64>,
}

impl MapField {
    pub fn from_raw(grid: Grid, target: Target, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.sites() * target.comps() {
            return Err(Error::Shape(format!("{} values for {:?} on n = {}", data.len(), target, grid.n)));
        }
        Ok(MapField { grid, target, data })
    }

    /// Sphere-valued map from `f(site)`, normalized pointwise.
    pub fn sphere_from_fn<F: Fn(usize) -> V3 + Sync>(grid: Grid, f: F) -> Self {
        let mut data = vec![0.0; grid.sites() * 3];
        data.par_chunks_mut(3).enumerate().for_each(|(s, o)| o.copy_from_slice(&vec3::normalize(f(s))));
        MapField { grid, target: Target::Sphere, data }
    }

    pub fn su2_from_fn<F: Fn(usize) -> Quat + Sync>(grid: Grid, f: F) -> Self {
        let mut data = vec![0.0; grid.sites() * 4];
        data.par_chunks_mut(4).enumerate().for_each(|(s, o)| o.copy_from_slice(&f(s).normalize().to_array()));
        MapField { grid, target: Target::Su2, data }
    }

    pub fn su3_from_fn<F: Fn(usize) -> CMat + Sync>(grid: Grid, f: F) -> Self {
        let mut data = vec![0.0; grid.sites() * 18];
        data.par_chunks_mut(18).enumerate().for_each(|(s, o)| {
            let m = f(s);
            for (k, z) in m.data.iter().enumerate() {
                o[2 * k] = z.re;
                o[2 * k + 1] = z.im;
            }
        });
        MapField { grid, target: Target::Su3, data }
    }

    pub fn constant_sphere(grid: Grid, v: V3) -> Self {
        Self::sphere_from_fn(grid, |_| v)
    }

    pub fn pair(&self) -> HomogeneousPair {
        HomogeneousPair::new(self.target.pair_kind())
    }

    #[inline]
    pub fn sphere(&self, s: usize) -> V3 {
        [self.data[3 * s], self.data[3 * s + 1], self.data[3 * s + 2]]
    }

    #[inline]
    pub fn quat(&self, s: usize) -> Quat {
        let o = 4 * s;
        Quat::new(self.data[o], self.data[o + 1], self.data[o + 2], self.data[o + 3])
    }

    pub fn mat(&self, s: usize) -> CMat {
        let o = 18 * s;
        CMat { n: 3, data: (0..9).map(|k| C::new(self.data[o + 2 * k], self.data[o + 2 * k + 1])).collect() }
    }

    /// Largest deviation from the pointwise constraint.
    pub fn unit_residual(&self) -> f64 {
        (0..self.grid.sites())
            .map(|s| match self.target {
                Target::Sphere => (vec3::norm(self.sphere(s)) - 1.0).abs(),
                Target::Su2 => (self.quat(s).norm() - 1.0).abs(),
                Target::Su3 => self.mat(s).unitarity_residual(),
            })
            .fold(0.0, f64::max)
    }

    /// Rescales every value back onto the target (sphere and SU₂ targets).
    pub fn renormalize(&mut self) {
        let c = self.target.comps();
        if self.target == Target::Su3 {
            return;
        }
        self.data.par_chunks_mut(c).for_each(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= n);
        });
    }

    pub fn sphere_vec(&self) -> Vec<V3> {
        (0..self.grid.sites()).map(|s| self.sphere(s)).collect()
    }

    fn require(&self, t: Target) -> Result<()> {
        if self.target != t {
            return Err(Error::Unsupported(format!("expected a {t:?} map, got {:?}", self.target)));
        }
        Ok(())
    }
}

/// Group-valued (SU₂) map.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftField {
    pub grid: Grid,
    pub data: Vec<Quat>,
}

impl LiftField {
    pub fn from_fn<F: Fn(usize) -> Quat + Sync>(grid: Grid, f: F) -> Self {
        LiftField { grid, data: (0..grid.sites()).into_par_iter().map(|s| f(s).normalize()).collect() }
    }

    /// Like [`LiftField::from_fn`] but keeps values exactly as produced.
    pub fn from_fn_raw<F: Fn(usize) -> Quat + Sync>(grid: Grid, f: F) -> Self {
        LiftField { grid, data: (0..grid.sites()).into_par_iter().map(|s| f(s)).collect() }
    }

    pub fn identity(grid: Grid) -> Self {
        LiftField { grid, data: vec![Quat::ONE; grid.sites()] }
    }

    #[inline]
    pub fn at(&self, s: usize) -> Quat {
        self.data[s]
    }

    /// Pointwise product `u·w`.
    pub fn mul(&self, o: &LiftField) -> LiftField {
        LiftField::from_fn_raw(self.grid, |s| self.data[s] * o.data[s])
    }

    pub fn inv(&self) -> LiftField {
        LiftField::from_fn_raw(self.grid, |s| self.data[s].conj())
    }

    pub fn unit_residual(&self) -> f64 {
        self.data.iter().map(|q| (q.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn as_map(&self) -> MapField {
        MapField {
            grid: self.grid,
            target: Target::Su2,
            data: self.data.iter().flat_map(|q| q.to_array()).collect(),
        }
    }

    pub fn from_map(m: &MapField) -> Result<Self> {
        m.require(Target::Su2)?;
        Ok(LiftField { grid: m.grid, data: (0..m.grid.sites()).map(|s| m.quat(s)).collect() })
    }
}

/// Isotropic/coisotropic split of a potential against a reference map `φ`.
#[derive(Clone, Debug)]
pub struct Split {
    pub phi: MapField,
    pub par: LatticeField,
    pub perp: LatticeField,
}

/// su(2)-valued 1-form `a` with an optional cached split.
#[derive(Clone, Debug)]
pub struct PotentialField {
    pub a: LatticeField,
    pub split: Option<Split>,
}

impl PotentialField {
    pub fn new(a: LatticeField) -> Result<Self> {
        if a.degree != 1 || a.dim != 3 {
            return Err(Error::Shape(format!("potential must be an su2 1-form, got k={} v={}", a.degree, a.dim)));
        }
        Ok(PotentialField { a, split: None })
    }

    pub fn grid(&self) -> Grid {
        self.a.grid
    }

    /// Attaches the split of `a` against `φ`.
    pub fn with_split(mut self, phi: &MapField) -> Result<Self> {
        let (par, perp) = split_form(&self.a, phi)?;
        self.split = Some(Split { phi: phi.clone(), par, perp });
        Ok(self)
    }

    /// Split against `φ`, reusing the cache when it was built for the same map.
    pub fn split_against(&self, phi: &MapField) -> Result<(LatticeField, LatticeField)> {
        if let Some(sp) = &self.split {
            if sp.phi == *phi {
                return Ok((sp.par.clone(), sp.perp.clone()));
            }
        }
        split_form(&self.a, phi)
    }

    /// Link variable `exp(h a_μ(x))`, equal to `u(x)⁻¹u(x+ê_μ)` for pure gauge `a`.
    #[inline]
    pub fn link(&self, s: usize, mu: usize) -> Quat {
        Quat::exp(vec3::scale(self.a.grid.h(), self.a.v3(s, mu)))
    }

    /// Ordered product of the four links around the plaquette `(μ, ν)` at `s`.
    pub fn plaquette(&self, s: usize, mu: usize, nu: usize) -> Quat {
        let g = self.a.grid;
        self.link(s, mu) * self.link(g.shift(s, mu, 1), nu) * self.link(g.shift(s, nu, 1), mu).conj() * self.link(s, nu).conj()
    }
}

/// Slotwise split of an su(2)-valued form into parts along and orthogonal to `φ(x)`.
pub fn split_form(a: &LatticeField, phi: &MapField) -> Result<(LatticeField, LatticeField)> {
    phi.require(Target::Sphere)?;
    if a.dim != 3 || a.grid != phi.grid {
        return Err(Error::Shape("split needs an su2 form on the grid of φ".into()));
    }
    let par = a.map(3, |s, _, v, o| o.copy_from_slice(&cp1_split(phi.sphere(s), [v[0], v[1], v[2]]).0));
    let perp = a.sub(&par)?;
    Ok((par, perp))
}

/// `a_μ(x) = log(u(x)⁻¹u(x+ê_μ)) / h`.
pub fn pure_gauge_potential(u: &LiftField) -> Result<PotentialField> {
    let g = u.grid;
    let h = g.h();
    let worst = (0..g.sites())
        .into_par_iter()
        .flat_map_iter(|s| (0..3).map(move |mu| (s, (u.at(s).conj() * u.at(g.shift(s, mu, 1))).angle())))
        .reduce(|| (0, 0.0), |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
    if worst.1 >= LOG_CUT {
        return Err(Error::TooRough { site: worst.0, angle: worst.1 });
    }
    let a = LatticeField::from_fn(g, 1, 3, |s, mu, o| {
        let l = (u.at(s).conj() * u.at(g.shift(s, mu, 1))).log();
        o.copy_from_slice(&vec3::scale(1.0 / h, l));
    });
    PotentialField::new(a)
}

/// Site-centered `u⁻¹du`: `(log(u(x)⁻¹u(x+ê_μ)) - log(u(x)⁻¹u(x-ê_μ))) / 2h`.
///
/// Second-order accurate at the site, in the frame of `u(x)`; the link form
/// [`pure_gauge_potential`] is only first order there.
pub fn pure_gauge_centered(u: &LiftField) -> Result<PotentialField> {
    let g = u.grid;
    let h = g.h();
    for s in 0..g.sites() {
        for mu in 0..3 {
            let angle = (u.at(s).conj() * u.at(g.shift(s, mu, 1))).angle();
            if angle >= LOG_CUT {
                return Err(Error::TooRough { site: s, angle });
            }
        }
    }
    let a = LatticeField::from_fn(g, 1, 3, |s, mu, o| {
        let ui = u.at(s).conj();
        let f = (ui * u.at(g.shift(s, mu, 1))).log();
        let b = (ui * u.at(g.shift(s, mu, -1))).log();
        o.copy_from_slice(&vec3::scale(0.5 / h, vec3::sub(f, b)));
    });
    PotentialField::new(a)
}

/// `ψ = u φ u⁻¹` on the sphere, `ψ = u φ` for group targets.
pub fn act(u: &LiftField, phi: &MapField) -> Result<MapField> {
    if u.grid != phi.grid {
        return Err(Error::Shape("act: grid mismatch".into()));
    }
    match phi.target {
        Target::Sphere => Ok(MapField::sphere_from_fn(phi.grid, |s| u.at(s).rotate(phi.sphere(s)))),
        Target::Su2 => Ok(MapField::su2_from_fn(phi.grid, |s| u.at(s) * phi.quat(s))),
        Target::Su3 => Err(Error::Unsupported("lifts are SU₂-valued; no action on SU₃ maps".into())),
    }
}

/// Centered difference `(ψ(x+ê_μ) - ψ(x-ê_μ)) / 2h` projected onto `T_ψS²`.
#[inline]
pub fn sphere_tangent(psi: &MapField, s: usize, mu: usize) -> V3 {
    let g = psi.grid;
    let p = psi.sphere(s);
    let d = vec3::sub(psi.sphere(g.shift(s, mu, 1)), psi.sphere(g.shift(s, mu, -1)));
    vec3::reject(vec3::scale(0.5 / g.h(), d), p)
}

/// Centered Lie algebra increment `ξ_μ(x)` with `g(x±ê_μ) ≈ g(x) exp(±h ξ_μ)`,
/// read off the anti-Hermitian part of `g(x)⁻¹g(x±ê_μ)`.
pub fn su3_increment(pair: &HomogeneousPair, m: &MapField, s: usize, mu: usize) -> LieVector {
    let g = m.grid;
    let gi = m.mat(s).adjoint();
    let up = pair.from_matrix(&gi.mul(&m.mat(g.shift(s, mu, 1))));
    let dn = pair.from_matrix(&gi.mul(&m.mat(g.shift(s, mu, -1))));
    up.sub(&dn).scale(0.5 / g.h())
}

/// `ψ*ω⊥` from centered tangents: `½ψ×t_μ` on the sphere, the
/// right-invariant form `dψ ψ⁻¹` on SU₂, `Ad(g) pr_𝔥⊥ ξ_μ` on SU₃/𝕋².
pub fn pullback_coisotropy(psi: &MapField) -> Result<LatticeField> {
    let g = psi.grid;
    let h = g.h();
    match psi.target {
        Target::Sphere => Ok(LatticeField::from_fn(g, 1, 3, |s, mu, o| {
            o.copy_from_slice(&cp1_omega(psi.sphere(s), sphere_tangent(psi, s, mu)));
        })),
        Target::Su2 => Ok(LatticeField::from_fn(g, 1, 3, |s, mu, o| {
            let d = (psi.quat(g.shift(s, mu, 1)) - psi.quat(g.shift(s, mu, -1))) * (0.5 / h);
            o.copy_from_slice(&(d * psi.quat(s).conj()).vec());
        })),
        Target::Su3 => {
            let pair = psi.pair();
            Ok(LatticeField::from_fn(g, 1, 8, |s, mu, o| {
                let xi = su3_increment(&pair, psi, s, mu);
                let w = pair.ad_unchecked(&psi.mat(s), &pair.proj_hperp(&xi));
                o.copy_from_slice(&w.coeffs);
            }))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzKind {
    Constant,
    Hopf,
    BallDegree,
    GreatCircle,
}

impl AnsatzKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "constant" => Some(AnsatzKind::Constant),
            "hopf" => Some(AnsatzKind::Hopf),
            "ball_degree" => Some(AnsatzKind::BallDegree),
            "great_circle" => Some(AnsatzKind::GreatCircle),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AnsatzKind::Constant => "constant",
            AnsatzKind::Hopf => "hopf",
            AnsatzKind::BallDegree => "ball_degree",
            AnsatzKind::GreatCircle => "great_circle",
        }
    }
}

/// `6t⁵ - 15t⁴ + 10t³` clamped to `[0, 1]`: first and second derivatives vanish at both ends.
pub fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

/// Unit vector from the stereographic coordinate `w^q` of the rational map
/// `w = (x + iy)/(r + z)` (`conj(w)^{|q|}` for negative `q`).
fn rational_map_direction(r: V3, q: i32) -> V3 {
    let rn = vec3::norm(r);
    let den = rn + r[2];
    if den <= 1e-14 * rn.max(1e-300) {
        return [0.0, 0.0, -1.0];
    }
    let mut w = C::new(r[0] / den, r[1] / den);
    if q < 0 {
        w = w.conj();
    }
    let wq = w.powi(q.abs());
    let m = wq.norm_sqr();
    if !m.is_finite() {
        return [0.0, 0.0, -1.0];
    }
    [2.0 * wq.re / (1.0 + m), 2.0 * wq.im / (1.0 + m), (1.0 - m) / (1.0 + m)]
}

/// Initial configurations `(ψ, u)` with `ψ = u i u⁻¹`.
///
/// `hopf(Q)` uses the suspension `u = cos f + sin f n̂` of the degree-`Q`
/// rational map with `f = π(1 - s(r/R))` on the ball `r < R = L/3` around the
/// cell centre. `ball_degree(Q)` is the radial hedgehog `n̂ = x̂` with
/// `f = Qπ(1 - s(r/R))`. `great_circle` is periodic with
/// `ψ = i cos(2πx/L) + j sin(2πx/L)`.
pub fn make_ansatz(kind: AnsatzKind, grid: Grid, charge: i32) -> Result<(MapField, LiftField)> {
    let l = grid.length;
    let c = 0.5 * l;
    let big_r = l / 3.0;
    let rel = move |s: usize| {
        let p = grid.position(s);
        [p[0] - c, p[1] - c, p[2] - c]
    };
    let u = match kind {
        AnsatzKind::Constant => LiftField::identity(grid),
        AnsatzKind::Hopf if charge == 0 => LiftField::identity(grid),
        AnsatzKind::Hopf => LiftField::from_fn(grid, |s| {
            let r = rel(s);
            let rn = vec3::norm(r);
            if rn >= big_r {
                return Quat::ONE;
            }
            let f = PI * (1.0 - smoothstep(rn / big_r));
            let n = rational_map_direction(r, charge);
            Quat::new(f.cos(), 0.0, 0.0, 0.0) + Quat::pure(vec3::scale(f.sin(), n))
        }),
        AnsatzKind::BallDegree => LiftField::from_fn(grid, |s| {
            let r = rel(s);
            let rn = vec3::norm(r);
            if rn >= big_r {
                return Quat::ONE;
            }
            let f = charge as f64 * PI * (1.0 - smoothstep(rn / big_r));
            let n = if rn > 0.0 { vec3::scale(1.0 / rn, r) } else { [0.0, 0.0, 1.0] };
            Quat::new(f.cos(), 0.0, 0.0, 0.0) + Quat::pure(vec3::scale(f.sin(), n))
        }),
        AnsatzKind::GreatCircle => LiftField::from_fn(grid, |s| {
            let t = PI * grid.position(s)[0] / l;
            Quat::exp([0.0, 0.0, t]) * Quat::exp([t, 0.0, 0.0])
        }),
    };
    let psi = MapField::sphere_from_fn(grid, |s| u.at(s).rotate([1.0, 0.0, 0.0]));
    Ok((psi, u))
}
