use super::vec3::{self, V3};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Tolerance used when a unit quaternion is required as input.
pub const UNIT_TOL: f64 = 1e-10;

/// Quaternion `w + x i + y j + z k`.
///
/// Unit quaternions model SU(2); pure imaginary ones model su(2) ≅ Im ℍ with
/// the inner product that makes `i, j, k` orthonormal.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const ONE: Quat = Quat::new(1.0, 0.0, 0.0, 0.0);
    pub const ZERO: Quat = Quat::new(0.0, 0.0, 0.0, 0.0);
    pub const I: Quat = Quat::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quat = Quat::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quat = Quat::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat { w, x, y, z }
    }

    pub const fn pure(v: V3) -> Self {
        Quat::new(0.0, v[0], v[1], v[2])
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quat::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn vec(self) -> V3 {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn conj(self) -> Self {
        Quat::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn inv(self) -> Self {
        self.conj() * (1.0 / self.norm2())
    }

    pub fn normalize(self) -> Self {
        self * (1.0 / self.norm())
    }

    #[inline]
    pub fn dot(self, o: Quat) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// `exp(v) = cos|v| + sin|v| v/|v|` for imaginary `v`.
    pub fn exp(v: V3) -> Self {
        let t = vec3::norm(v);
        if t == 0.0 {
            return Quat::ONE;
        }
        let s = t.sin() / t;
        Quat::new(t.cos(), s * v[0], s * v[1], s * v[2])
    }

    /// Rotation angle `θ ∈ [0, π]` with `q = cos θ + sin θ n̂` for unit `q`.
    #[inline]
    pub fn angle(self) -> f64 {
        vec3::norm(self.vec()).atan2(self.w)
    }

    /// Principal logarithm of a unit quaternion, returned as `θ n̂ ∈ Im ℍ`.
    ///
    /// At `q = -1` the axis is undefined and `π i` is returned.
    pub fn log(self) -> V3 {
        let v = self.vec();
        let s = vec3::norm(v);
        let t = s.atan2(self.w);
        if s > 1e-300 {
            vec3::scale(t / s, v)
        } else if self.w >= 0.0 {
            [0.0; 3]
        } else {
            [std::f64::consts::PI, 0.0, 0.0]
        }
    }

    /// `q v q⁻¹` for unit `q` and imaginary `v`.
    #[inline]
    pub fn rotate(self, v: V3) -> V3 {
        let u = self.vec();
        let t = vec3::scale(2.0, vec3::cross(u, v));
        vec3::add(v, vec3::add(vec3::scale(self.w, t), vec3::cross(u, t)))
    }

    pub fn is_unit(self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOL
    }
}

/// `Ad_*(g)ξ = g ξ g⁻¹`; rejects `g` that is not unit to [`UNIT_TOL`].
pub fn ad_action(g: Quat, xi: V3) -> Result<V3> {
    if !g.is_unit() {
        return Err(Error::NotUnit(g.norm()));
    }
    Ok(g.rotate(xi))
}

/// Hamilton product.
pub fn quat_mul(p: Quat, q: Quat) -> Quat {
    p * q
}

impl Mul for Quat {
    type Output = Quat;
    #[inline]
    fn mul(self, b: Quat) -> Quat {
        let a = self;
        Quat::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quat {
    type Output = Quat;
    #[inline]
    fn mul(self, s: f64) -> Quat {
        Quat::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Add for Quat {
    type Output = Quat;
    #[inline]
    fn add(self, b: Quat) -> Quat {
        Quat::new(self.w + b.w, self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl Sub for Quat {
    type Output = Quat;
    #[inline]
    fn sub(self, b: Quat) -> Quat {
        Quat::new(self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl Neg for Quat {
    type Output = Quat;
    #[inline]
    fn neg(self) -> Quat {
        Quat::new(-self.w, -self.x, -self.y, -self.z)
    }
}
