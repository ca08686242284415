//! Small helpers on `[f64; 3]`, used for imaginary quaternions and points of S².

pub type V3 = [f64; 3];

#[inline]
pub fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(s: f64, a: V3) -> V3 {
    [s * a[0], s * a[1], s * a[2]]
}

#[inline]
pub fn norm2(a: V3) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

/// Scales `a` to unit length; the zero vector is returned unchanged.
#[inline]
pub fn normalize(a: V3) -> V3 {
    let n = norm(a);
    if n > 0.0 {
        scale(1.0 / n, a)
    } else {
        a
    }
}

/// Component of `v` orthogonal to the unit vector `p`.
#[inline]
pub fn reject(v: V3, p: V3) -> V3 {
    sub(v, scale(dot(v, p), p))
}

#[inline]
pub fn det(a: V3, b: V3, c: V3) -> f64 {
    dot(a, cross(b, c))
}
