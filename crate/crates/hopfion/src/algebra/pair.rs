use super::cmat::CMat;
use super::quat::Quat;
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

/// Coefficients of a Lie algebra element in the orthonormal basis of its pair.
#[derive(Clone, Debug, PartialEq)]
pub struct LieVector {
    pub coeffs: Vec<f64>,
}

impl LieVector {
    pub fn new(coeffs: Vec<f64>) -> Self {
        LieVector { coeffs }
    }

    pub fn zeros(dim: usize) -> Self {
        LieVector { coeffs: vec![0.0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn dot(&self, o: &LieVector) -> f64 {
        self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn add(&self, o: &LieVector) -> LieVector {
        LieVector::new(self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &LieVector) -> LieVector {
        LieVector::new(self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> LieVector {
        LieVector::new(self.coeffs.iter().map(|a| s * a).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// (SU₂, U₁): target CP¹ = S².
    Su2U1,
    /// (SU₂, {1}): group-valued Skyrme model.
    Su2Group,
    /// (SU₃, 𝕋²): full flag manifold, non-symmetric.
    Su3Flag,
}

impl PairKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "su2_u1" => Some(PairKind::Su2U1),
            "su2_group" => Some(PairKind::Su2Group),
            "su3_flag" => Some(PairKind::Su3Flag),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PairKind::Su2U1 => "su2_u1",
            PairKind::Su2Group => "su2_group",
            PairKind::Su3Flag => "su3_flag",
        }
    }
}

/// A pair (G, H) given by an anti-Hermitian basis of 𝔤 in the defining
/// representation, orthonormal for `⟨X, Y⟩ = -½ Re tr(XY)`.
#[derive(Clone, Debug)]
pub struct HomogeneousPair {
    pub kind: PairKind,
    pub dim_g: usize,
    pub dim_h: usize,
    pub basis_h: Vec<usize>,
    /// `f[a][b][c] = ⟨[e_a, e_b], e_c⟩`, flattened.
    pub structure_consts: Vec<f64>,
    pub group_dim: usize,
    pub simple_block_map: Vec<Vec<usize>>,
    pub symmetric: bool,
    pub basis: Vec<CMat>,
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

impl HomogeneousPair {
    pub fn new(kind: PairKind) -> Self {
        match kind {
            PairKind::Su2U1 => Self::build(kind, su2_basis(), vec![0], vec![(0..3).collect()], true),
            PairKind::Su2Group => Self::build(kind, su2_basis(), vec![], vec![(0..3).collect()], false),
            PairKind::Su3Flag => Self::build(kind, su3_basis(), vec![2, 7], vec![(0..8).collect()], false),
        }
    }

    pub fn su2_u1() -> Self {
        Self::new(PairKind::Su2U1)
    }

    fn build(kind: PairKind, basis: Vec<CMat>, basis_h: Vec<usize>, blocks: Vec<Vec<usize>>, symmetric: bool) -> Self {
        let d = basis.len();
        let group_dim = basis[0].n;
        let mut f = vec![0.0; d * d * d];
        for a in 0..d {
            for b in 0..d {
                let br = basis[a].commutator(&basis[b]);
                for k in 0..d {
                    f[(a * d + b) * d + k] = inner_mat(&br, &basis[k]);
                }
            }
        }
        HomogeneousPair {
            kind,
            dim_g: d,
            dim_h: basis_h.len(),
            basis_h,
            structure_consts: f,
            group_dim,
            simple_block_map: blocks,
            symmetric,
            basis,
        }
    }

    #[inline]
    pub fn f(&self, a: usize, b: usize, k: usize) -> f64 {
        self.structure_consts[(a * self.dim_g + b) * self.dim_g + k]
    }

    pub fn bracket(&self, x: &LieVector, y: &LieVector) -> LieVector {
        let d = self.dim_g;
        let mut r = vec![0.0; d];
        for a in 0..d {
            if x.coeffs[a] == 0.0 {
                continue;
            }
            for b in 0..d {
                let s = x.coeffs[a] * y.coeffs[b];
                if s == 0.0 {
                    continue;
                }
                for k in 0..d {
                    r[k] += s * self.f(a, b, k);
                }
            }
        }
        LieVector::new(r)
    }

    pub fn to_matrix(&self, x: &LieVector) -> CMat {
        let mut m = CMat::zeros(self.group_dim);
        for (a, &xa) in x.coeffs.iter().enumerate() {
            if xa != 0.0 {
                m = m.add(&self.basis[a].scale(c(xa, 0.0)));
            }
        }
        m
    }

    /// Coefficients of the anti-Hermitian traceless part of `m`.
    pub fn from_matrix(&self, m: &CMat) -> LieVector {
        LieVector::new(self.basis.iter().map(|b| inner_mat(m, b)).collect())
    }

    pub fn proj_h(&self, x: &LieVector) -> LieVector {
        let mut r = vec![0.0; self.dim_g];
        for &i in &self.basis_h {
            r[i] = x.coeffs[i];
        }
        LieVector::new(r)
    }

    pub fn proj_hperp(&self, x: &LieVector) -> LieVector {
        x.sub(&self.proj_h(x))
    }

    /// `Ad_*(g)ξ = g ξ g⁻¹` for a unitary representative `g`.
    pub fn ad(&self, g: &CMat, x: &LieVector) -> Result<LieVector> {
        let r = g.unitarity_residual();
        if r > 1e-10 {
            return Err(Error::NotUnit(r));
        }
        Ok(self.ad_unchecked(g, x))
    }

    pub fn ad_unchecked(&self, g: &CMat, x: &LieVector) -> LieVector {
        self.from_matrix(&g.mul(&self.to_matrix(x)).mul(&g.adjoint()))
    }

    pub fn exp(&self, x: &LieVector) -> CMat {
        self.to_matrix(x).exp()
    }

    /// Largest violation of the pair axioms over basis pairs: `[𝔥,𝔥] ⊆ 𝔥`,
    /// `[𝔥,𝔥⊥] ⊆ 𝔥⊥`, and `[𝔥⊥,𝔥⊥] ⊆ 𝔥` when flagged symmetric.
    pub fn axiom_residual(&self) -> f64 {
        let d = self.dim_g;
        let in_h = |i: usize| self.basis_h.contains(&i);
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                let mut ea = LieVector::zeros(d);
                ea.coeffs[a] = 1.0;
                let mut eb = LieVector::zeros(d);
                eb.coeffs[b] = 1.0;
                let br = self.bracket(&ea, &eb);
                let res = match (in_h(a), in_h(b)) {
                    (true, true) => self.proj_hperp(&br).norm(),
                    (true, false) | (false, true) => self.proj_h(&br).norm(),
                    (false, false) if self.symmetric => self.proj_hperp(&br).norm(),
                    _ => 0.0,
                };
                worst = worst.max(res);
            }
        }
        worst
    }

    /// Whether `[𝔥⊥, 𝔥⊥] ⊆ 𝔥` actually holds on the basis.
    pub fn bracket_closes_on_h(&self) -> bool {
        let d = self.dim_g;
        for a in (0..d).filter(|i| !self.basis_h.contains(i)) {
            for b in (0..d).filter(|i| !self.basis_h.contains(i)) {
                let mut ea = LieVector::zeros(d);
                ea.coeffs[a] = 1.0;
                let mut eb = LieVector::zeros(d);
                eb.coeffs[b] = 1.0;
                if self.proj_hperp(&self.bracket(&ea, &eb)).norm() > 1e-12 {
                    return false;
                }
            }
        }
        true
    }
}

/// `⟨X, Y⟩ = -½ Re tr(XY)`.
pub fn inner_mat(x: &CMat, y: &CMat) -> f64 {
    -0.5 * x.mul(y).trace().re
}

fn su2_basis() -> Vec<CMat> {
    vec![CMat::from_quat(Quat::I), CMat::from_quat(Quat::J), CMat::from_quat(Quat::K)]
}

/// `i λ_a` for the Gell-Mann matrices `λ_1 … λ_8`.
fn su3_basis() -> Vec<CMat> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let r3 = 1.0 / 3f64.sqrt();
    let lambdas = [
        CMat::from_rows(&[&[z, o, z], &[o, z, z], &[z, z, z]]),
        CMat::from_rows(&[&[z, -i, z], &[i, z, z], &[z, z, z]]),
        CMat::from_rows(&[&[o, z, z], &[z, -o, z], &[z, z, z]]),
        CMat::from_rows(&[&[z, z, o], &[z, z, z], &[o, z, z]]),
        CMat::from_rows(&[&[z, z, -i], &[z, z, z], &[i, z, z]]),
        CMat::from_rows(&[&[z, z, z], &[z, z, o], &[z, o, z]]),
        CMat::from_rows(&[&[z, z, z], &[z, z, -i], &[z, i, z]]),
        CMat::from_rows(&[&[c(r3, 0.0), z, z], &[z, c(r3, 0.0), z], &[z, z, c(-2.0 * r3, 0.0)]]),
    ];
    lambdas.iter().map(|l| l.scale(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bases_are_orthonormal() {
        for kind in [PairKind::Su2U1, PairKind::Su3Flag] {
            let p = HomogeneousPair::new(kind);
            for a in 0..p.dim_g {
                for b in 0..p.dim_g {
                    let ip = inner_mat(&p.basis[a], &p.basis[b]);
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((ip - want).abs() < 1e-14, "{kind:?} {a} {b} {ip}");
                }
            }
        }
    }

    #[test]
    fn su2_structure_constants() {
        let p = HomogeneousPair::su2_u1();
        assert!((p.f(0, 1, 2) - 2.0).abs() < 1e-15);
        assert!((p.f(1, 0, 2) + 2.0).abs() < 1e-15);
        assert!((p.f(1, 2, 0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn pair_axioms() {
        assert!(HomogeneousPair::new(PairKind::Su2U1).axiom_residual() < 1e-12);
        assert!(HomogeneousPair::new(PairKind::Su2U1).bracket_closes_on_h());
        let su3 = HomogeneousPair::new(PairKind::Su3Flag);
        assert!(su3.axiom_residual() < 1e-12);
        assert!(!su3.bracket_closes_on_h());
        assert_eq!(su3.dim_h, 2);
    }

    #[test]
    fn matrix_roundtrip() {
        let p = HomogeneousPair::new(PairKind::Su3Flag);
        let x = LieVector::new((0..8).map(|k| 0.1 * k as f64 - 0.3).collect());
        let y = p.from_matrix(&p.to_matrix(&x));
        assert!(x.sub(&y).norm() < 1e-14);
    }
}
