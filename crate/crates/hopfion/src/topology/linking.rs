//! Linking route: preimage curves of two regular values, traced through a
//! tetrahedral subdivision, and their linking number from a signed crossing
//! count in a generic projection.

use super::preimage::NUDGES;
use super::simplex::{det3, kuhn_tets, site_at};
use crate::algebra::{vec3, V3};
use crate::error::{Error, Result};
use crate::fields::{MapField, Target};
use std::collections::HashMap;

/// Orientation convention, calibrated so that `hopf(1)` with `p = j`, `q = k` gives +1.
pub const LINK_SIGN: i64 = 1;

const TIE: f64 = 1e-12;

type FaceKey = [usize; 3];

#[derive(Clone, Copy, Debug)]
struct Crossing {
    key: FaceKey,
    point: V3,
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    from: Crossing,
    to: Crossing,
}

enum Fail {
    /// Recoverable by perturbing the regular value.
    Degenerate(&'static str),
    Hard(Error),
}

/// Closed polylines (vertex lists, last joined to first) in unwrapped coordinates.
pub type Curves = Vec<Vec<V3>>;

fn frame(p: V3) -> (V3, V3) {
    let a = if p[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = vec3::normalize(vec3::reject(a, p));
    (e1, vec3::cross(p, e1))
}

#[inline]
fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Zero of the linear interpolation of `f` on a triangle, in the barycentric
/// coordinates of the given vertex order.
fn face_zero(f: [[f64; 2]; 3]) -> std::result::Result<Option<[f64; 3]>, Fail> {
    let n = [cross2(f[1], f[2]), cross2(f[2], f[0]), cross2(f[0], f[1])];
    let d = n[0] + n[1] + n[2];
    let scale = f.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).powi(2);
    if d.abs() <= TIE * scale {
        if f.iter().any(|v| v[0].abs() <= TIE && v[1].abs() <= TIE) {
            return Err(Fail::Degenerate("image of a face is flat through the value"));
        }
        return Ok(None);
    }
    let lam = n.map(|x| x / d);
    let lo = lam.iter().cloned().fold(f64::INFINITY, f64::min);
    if lo.abs() <= TIE {
        return Err(Fail::Degenerate("value on a face boundary"));
    }
    Ok(if lo > 0.0 { Some(lam) } else { None })
}

fn trace(psi: &MapField, p: V3) -> std::result::Result<Curves, Fail> {
    let g = psi.grid;
    let n = g.n;
    let h = g.h();
    let l = g.length;
    let (e1, e2) = frame(p);
    let val = |s: usize| {
        let v = psi.sphere(s);
        ([vec3::dot(v, e1), vec3::dot(v, e2)], vec3::dot(v, p))
    };
    let tets = kuhn_tets();
    let mut segs = Vec::new();
    for s in 0..g.sites() {
        let base = g.coords(s);
        for (v, _) in &tets {
            let ids: [usize; 4] = std::array::from_fn(|k| site_at(n, base, v[k]));
            let pos: [V3; 4] = std::array::from_fn(|k| {
                std::array::from_fn(|c| (base[c] + v[k][c]) as f64 * h)
            });
            let vals: [([f64; 2], f64); 4] = std::array::from_fn(|k| val(ids[k]));
            let mut found: Vec<Crossing> = Vec::with_capacity(2);
            for omit in 0..4 {
                let mut loc: Vec<usize> = (0..4).filter(|&k| k != omit).collect();
                loc.sort_by_key(|&k| ids[k]);
                let f = [vals[loc[0]].0, vals[loc[1]].0, vals[loc[2]].0];
                if let Some(lam) = face_zero(f)? {
                    let up: f64 = (0..3).map(|k| lam[k] * vals[loc[k]].1).sum();
                    if up.abs() <= 1e-9 {
                        return Err(Fail::Degenerate("crossing near the equator of the value"));
                    }
                    if up < 0.0 {
                        continue;
                    }
                    let mut point = [0.0; 3];
                    for k in 0..3 {
                        point = vec3::add(point, vec3::scale(lam[k], pos[loc[k]]));
                    }
                    found.push(Crossing { key: [ids[loc[0]], ids[loc[1]], ids[loc[2]]], point });
                }
            }
            match found.len() {
                0 => {}
                2 => {
                    let e: [V3; 3] = std::array::from_fn(|k| vec3::sub(pos[k + 1], pos[0]));
                    let det = det3(e);
                    let grad = |c: usize| -> V3 {
                        let rhs: V3 = std::array::from_fn(|k| vals[k + 1].0[c] - vals[0].0[c]);
                        std::array::from_fn(|col| {
                            let mut m = e;
                            for (row, r) in m.iter_mut().enumerate() {
                                r[col] = rhs[row];
                            }
                            det3(m) / det
                        })
                    };
                    let dir = vec3::cross(grad(0), grad(1));
                    let chord = vec3::sub(found[1].point, found[0].point);
                    let w = vec3::dot(dir, chord);
                    if w.abs() <= TIE * vec3::norm(dir) * vec3::norm(chord).max(h * 1e-6) {
                        return Err(Fail::Degenerate("segment transverse to its own direction"));
                    }
                    let (a, b) = if w > 0.0 { (found[0], found[1]) } else { (found[1], found[0]) };
                    segs.push(Segment { from: a, to: b });
                }
                _ => return Err(Fail::Degenerate("tetrahedron with an odd number of crossings")),
            }
        }
    }
    chain(&segs, l)
}

fn chain(segs: &[Segment], l: f64) -> std::result::Result<Curves, Fail> {
    let mut by_in: HashMap<FaceKey, usize> = HashMap::with_capacity(segs.len());
    for (i, sg) in segs.iter().enumerate() {
        if by_in.insert(sg.from.key, i).is_some() {
            return Err(Fail::Degenerate("two curve pieces enter the same face"));
        }
    }
    let mut seen = vec![false; segs.len()];
    let mut curves = Vec::new();
    for start in 0..segs.len() {
        if seen[start] {
            continue;
        }
        let mut pts = Vec::new();
        let mut cur = start;
        let mut off = [0.0; 3];
        loop {
            seen[cur] = true;
            let out = vec3::add(segs[cur].to.point, off);
            pts.push(out);
            let Some(&next) = by_in.get(&segs[cur].to.key) else {
                return Err(Fail::Degenerate("open preimage curve"));
            };
            let d = vec3::sub(out, segs[next].from.point);
            let noff: V3 = d.map(|x| (x / l).round() * l);
            if next == start {
                if noff.iter().any(|&x| x != 0.0) {
                    return Err(Fail::Hard(Error::Unsupported(
                        "preimage curve winds around the torus; linking number undefined".into(),
                    )));
                }
                break;
            }
            if seen[next] {
                return Err(Fail::Degenerate("preimage curves merge"));
            }
            cur = next;
            off = noff;
        }
        curves.push(pts);
    }
    Ok(curves)
}

/// Preimage curves of the regular value `p`, with the same deterministic
/// perturbation schedule used by [`linking_charge`].
pub fn preimage_curves(psi: &MapField, p: V3) -> Result<Curves> {
    with_nudges(p, |pp| trace(psi, pp))
}

fn nudged(p: V3, k: usize) -> V3 {
    let d = NUDGES[k];
    vec3::normalize(vec3::add(p, vec3::scale(1e-7 * k as f64, [d[0], d[1], d[2]])))
}

fn with_nudges<T>(p: V3, mut f: impl FnMut(V3) -> std::result::Result<T, Fail>) -> Result<T> {
    let mut last = "";
    for k in 0..NUDGES.len() {
        match f(nudged(p, k)) {
            Ok(t) => return Ok(t),
            Err(Fail::Hard(e)) => return Err(e),
            Err(Fail::Degenerate(why)) => last = why,
        }
    }
    Err(Error::DegeneratePreimage(format!("{last} at {p:?}")))
}

const DIRECTIONS: [V3; 5] = [
    [0.267_261_2, 0.534_522_5, 0.801_783_7],
    [-0.613_295_1, 0.350_454_3, 0.707_841_2],
    [0.811_107_1, -0.162_221_4, 0.562_004_7],
    [0.120_385_9, 0.963_087_3, -0.240_771_8],
    [-0.436_435_8, -0.654_653_7, 0.617_213_4],
];

/// Sum of crossing signs where a segment of `a` passes over one of `b`, and
/// the same with the roles exchanged; `None` on a projection tie.
fn crossing_sums(a: &Curves, b: &Curves, view: V3) -> Option<(i64, i64)> {
    let d = vec3::normalize(view);
    let (u1, u2) = frame(d);
    let pr = |x: V3| ([vec3::dot(x, u1), vec3::dot(x, u2)], vec3::dot(x, d));
    let edges = |c: &Curves| -> Vec<(([f64; 2], f64), ([f64; 2], f64))> {
        c.iter()
            .flat_map(|pts| (0..pts.len()).map(move |i| (pts[i], pts[(i + 1) % pts.len()])))
            .map(|(x, y)| (pr(x), pr(y)))
            .collect()
    };
    let ea = edges(a);
    let eb = edges(b);
    let (mut over_a, mut over_b) = (0i64, 0i64);
    for &((a0, za0), (a1, za1)) in &ea {
        let r = [a1[0] - a0[0], a1[1] - a0[1]];
        for &((b0, zb0), (b1, zb1)) in &eb {
            let s = [b1[0] - b0[0], b1[1] - b0[1]];
            let den = cross2(r, s);
            let w = [b0[0] - a0[0], b0[1] - a0[1]];
            let rn = r[0].hypot(r[1]);
            let sn = s[0].hypot(s[1]);
            if den.abs() <= 1e-12 * rn * sn {
                // Parallel: harmless unless collinear.
                if cross2(w, r).abs() <= 1e-12 * rn * (rn + sn + w[0].hypot(w[1])) {
                    let lo_b = w[0] * r[0] + w[1] * r[1];
                    let hi_b = lo_b + s[0] * r[0] + s[1] * r[1];
                    let (lo, hi) = if lo_b < hi_b { (lo_b, hi_b) } else { (hi_b, lo_b) };
                    if hi >= 0.0 && lo <= rn * rn {
                        return None;
                    }
                }
                continue;
            }
            let t = cross2(w, s) / den;
            let u = cross2(w, r) / den;
            let eps = 1e-9;
            let inside = |x: f64| x > -eps && x < 1.0 + eps;
            if !(inside(t) && inside(u)) {
                continue;
            }
            if t.abs() <= eps || (t - 1.0).abs() <= eps || u.abs() <= eps || (u - 1.0).abs() <= eps {
                return None;
            }
            let za = za0 + t * (za1 - za0);
            let zb = zb0 + u * (zb1 - zb0);
            if (za - zb).abs() <= 1e-12 {
                return None;
            }
            let sign = if den > 0.0 { 1 } else { -1 };
            if za > zb {
                over_a += sign;
            } else {
                over_b -= sign;
            }
        }
    }
    Some((over_a, over_b))
}

fn bbox(c: &Curves) -> Option<(V3, V3)> {
    let mut it = c.iter().flatten();
    let first = *it.next()?;
    Some(it.fold((first, first), |(lo, hi), p| {
        (std::array::from_fn(|k| lo[k].min(p[k])), std::array::from_fn(|k| hi[k].max(p[k])))
    }))
}

/// Linking number of two families of closed curves in the 3-torus of side `l`,
/// summing over the periodic images of `b` whose bounding boxes meet that of `a`.
pub fn linking_number(a: &Curves, b: &Curves, l: f64) -> Option<i64> {
    let (alo, ahi) = bbox(a)?;
    let (blo, bhi) = bbox(b)?;
    let reach = |k: usize| -> std::ops::RangeInclusive<i64> {
        let lo = ((alo[k] - bhi[k]) / l).floor() as i64;
        let hi = ((ahi[k] - blo[k]) / l).ceil() as i64;
        lo..=hi
    };
    let mut total = 0;
    for kx in reach(0) {
        for ky in reach(1) {
            for kz in reach(2) {
                let sh = [kx as f64 * l, ky as f64 * l, kz as f64 * l];
                let overlaps = (0..3).all(|k| blo[k] + sh[k] <= ahi[k] && bhi[k] + sh[k] >= alo[k]);
                if !overlaps {
                    continue;
                }
                let bs: Curves = b.iter().map(|c| c.iter().map(|&p| vec3::add(p, sh)).collect()).collect();
                let lk = DIRECTIONS.iter().find_map(|&d| match crossing_sums(a, &bs, d) {
                    Some((x, y)) if x == y => Some(x),
                    _ => None,
                })?;
                total += lk;
            }
        }
    }
    Some(total)
}

/// Linking number of the preimages of `p` and `q` under a sphere-valued map.
pub fn linking_charge(psi: &MapField, p: V3, q: V3) -> Result<i64> {
    if psi.target != Target::Sphere {
        return Err(Error::Unsupported("linking route needs a sphere-valued map".into()));
    }
    let p = vec3::normalize(p);
    let q = vec3::normalize(q);
    let ca = preimage_curves(psi, p)?;
    let cb = preimage_curves(psi, q)?;
    for (c, v) in [(&ca, p), (&cb, q)] {
        if c.is_empty() {
            return Err(Error::DegeneratePreimage(format!("no preimage of {v:?}")));
        }
    }
    linking_number(&ca, &cb, psi.grid.length)
        .map(|x| LINK_SIGN * x)
        .ok_or_else(|| Error::DegeneratePreimage("projection ties in every direction".into()))
}
