//! Quaternions, matrix Lie pairs (G, H), isotropy projections and the
//! coisotropy form `ω⊥`.

pub mod cmat;
pub mod pair;
pub mod quat;
pub mod vec3;

pub use cmat::CMat;
pub use pair::{HomogeneousPair, LieVector, PairKind};
pub use quat::{ad_action, quat_mul, Quat};
pub use vec3::V3;

use crate::error::{Error, Result};

/// Tolerance for tangency and unit-norm input checks.
pub const INPUT_TOL: f64 = 1e-10;

/// A point of X = G/H: a unit vector of S² ⊂ Im ℍ on the CP¹ fast path, or a
/// group representative `g` with `x = gH`.
#[derive(Clone, Debug)]
pub enum CosetPoint {
    Sphere(V3),
    Rep(CMat),
}

/// A tangent vector at a coset point: `η ∈ T_φS² ⊂ Im ℍ`, or `π_*(gξ)` for a
/// Lie algebra element `ξ` when the point is a representative `g`.
#[derive(Clone, Debug)]
pub enum Tangent {
    Sphere(V3),
    Lift(LieVector),
}

/// `(ξ·φ)φ` and `ξ - (ξ·φ)φ`; no input checks.
#[inline]
pub fn cp1_split(phi: V3, xi: V3) -> (V3, V3) {
    let par = vec3::scale(vec3::dot(xi, phi), phi);
    (par, vec3::sub(xi, par))
}

/// `½ φ [ξ, φ]` evaluated with quaternion products.
pub fn cp1_perp_quat(phi: V3, xi: V3) -> V3 {
    let p = Quat::pure(phi);
    let x = Quat::pure(xi);
    let br = x * p - p * x;
    (p * br * 0.5).vec()
}

/// `ω⊥_q(η) = ½ q η` as an imaginary quaternion; no input checks.
#[inline]
pub fn cp1_omega(q: V3, eta: V3) -> V3 {
    vec3::scale(0.5, vec3::cross(q, eta))
}

/// Extension of `ω⊥_q` to all of ℝ³ by `½` times the quarter turn about `q`.
///
/// Agrees with [`cp1_omega`] on `T_qS²` and keeps the normal component, so
/// `|ω(v)| = ½|v|` for every `v`.
#[inline]
pub fn cp1_omega_ext(q: V3, v: V3) -> V3 {
    vec3::scale(0.5, vec3::add(vec3::scale(vec3::dot(q, v), q), vec3::cross(q, v)))
}

fn check_sphere_point(phi: V3) -> Result<()> {
    let n = vec3::norm(phi);
    if (n - 1.0).abs() > INPUT_TOL {
        return Err(Error::NotUnit(n));
    }
    Ok(())
}

/// Checked CP¹ coisotropy form. The real part of `½qη` is `-½ q·η`, which
/// vanishes for tangent `η`.
pub fn cp1_coisotropy(q: V3, eta: V3) -> Result<V3> {
    check_sphere_point(q)?;
    let normal = vec3::dot(q, eta).abs();
    if normal > INPUT_TOL * vec3::norm(eta).max(1.0) {
        return Err(Error::NotTangent(normal));
    }
    Ok((Quat::pure(q) * Quat::pure(eta) * 0.5).vec())
}

/// Splits `ξ` into its components along `𝔥_x = Ad(g)𝔥` and its orthogonal complement.
pub fn project_isotropy(pair: &HomogeneousPair, x: &CosetPoint, xi: &LieVector) -> Result<(LieVector, LieVector)> {
    match x {
        CosetPoint::Sphere(phi) => {
            if pair.kind != PairKind::Su2U1 {
                return Err(Error::Unsupported("sphere points need the su2_u1 pair".into()));
            }
            check_sphere_point(*phi)?;
            let v = [xi.coeffs[0], xi.coeffs[1], xi.coeffs[2]];
            let par = vec3::scale(vec3::dot(v, *phi), *phi);
            let perp = cp1_perp_quat(*phi, v);
            Ok((LieVector::new(par.to_vec()), LieVector::new(perp.to_vec())))
        }
        CosetPoint::Rep(g) => {
            let local = pair.ad(&g.adjoint(), xi)?;
            let par = pair.ad_unchecked(g, &pair.proj_h(&local));
            let perp = xi.sub(&par);
            Ok((par, perp))
        }
    }
}

/// `ω⊥(S)`: `½qη` on the sphere, `Ad(g) pr_𝔥⊥ ξ` for a lifted tangent.
pub fn coisotropy_form(pair: &HomogeneousPair, x: &CosetPoint, t: &Tangent) -> Result<LieVector> {
    match (x, t) {
        (CosetPoint::Sphere(q), Tangent::Sphere(eta)) => {
            if pair.kind != PairKind::Su2U1 {
                return Err(Error::Unsupported("sphere points need the su2_u1 pair".into()));
            }
            Ok(LieVector::new(cp1_coisotropy(*q, *eta)?.to_vec()))
        }
        (CosetPoint::Rep(g), Tangent::Lift(xi)) => pair.ad(g, &pair.proj_hperp(xi)),
        _ => Err(Error::Unsupported("point and tangent representations differ".into())),
    }
}

/// Length of a tangent vector in the quotient metric of G/H. On S² ⊂ Im ℍ the
/// embedding `gH ↦ g i g⁻¹` doubles lengths, so `|S| = ½|η|`.
pub fn tangent_norm(pair: &HomogeneousPair, t: &Tangent) -> f64 {
    match t {
        Tangent::Sphere(eta) => 0.5 * vec3::norm(*eta),
        Tangent::Lift(xi) => pair.proj_hperp(xi).norm(),
    }
}

/// Image in `T_φS²` of the lifted tangent `π_*(gξ)`, where `φ = g i g⁻¹`.
pub fn sphere_tangent_of_lift(g: Quat, xi: V3) -> (V3, V3) {
    let phi = g.rotate([1.0, 0.0, 0.0]);
    let z = g.rotate(xi);
    (phi, vec3::scale(2.0, vec3::cross(z, phi)))
}
