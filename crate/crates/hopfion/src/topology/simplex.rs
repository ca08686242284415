//! Kuhn (Freudenthal) subdivision of lattice cubes into six tetrahedra.

/// Vertex offsets of the six Kuhn tetrahedra and the sign of their
/// orientation `det[v1-v0, v2-v0, v3-v0]`.
pub fn kuhn_tets() -> [([[usize; 3]; 4], f64); 6] {
    let perms: [([usize; 3], f64); 6] = [
        ([0, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([0, 2, 1], -1.0),
        ([2, 1, 0], -1.0),
        ([1, 0, 2], -1.0),
    ];
    perms.map(|(p, sign)| {
        let mut v = [[0usize; 3]; 4];
        for k in 1..4 {
            v[k] = v[k - 1];
            if k <= 3 {
                v[k][p[k - 1]] += 1;
            }
        }
        (v, sign)
    })
}

/// Site index of `base + off` on an `n³` periodic lattice (x fastest).
#[inline]
pub fn site_at(n: usize, base: [usize; 3], off: [usize; 3]) -> usize {
    ((base[0] + off[0]) % n) + n * (((base[1] + off[1]) % n) + n * ((base[2] + off[2]) % n))
}

/// Determinant of the 3×3 matrix with rows `r`.
#[inline]
pub fn det3(r: [[f64; 3]; 3]) -> f64 {
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}
