use num_complex::Complex64 as C;
use super::quat::Quat;

/// Dense complex square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    pub n: usize,
    pub data: Vec<C>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat { n, data: vec![C::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = C::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C]]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            data.extend_from_slice(r);
        }
        CMat { n, data }
    }

    /// 2×2 image of a quaternion: `i ↦ diag(i, -i)`, `j ↦ [[0,1],[-1,0]]`, `k ↦ [[0,i],[i,0]]`.
    pub fn from_quat(q: Quat) -> Self {
        CMat {
            n: 2,
            data: vec![
                C::new(q.w, q.x),
                C::new(q.y, q.z),
                C::new(-q.y, q.z),
                C::new(q.w, -q.x),
            ],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        let n = self.n;
        let mut r = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    r.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        r
    }

    pub fn adjoint(&self) -> CMat {
        let n = self.n;
        let mut r = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                r.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        r
    }

    pub fn add(&self, o: &CMat) -> CMat {
        CMat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        CMat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: C) -> CMat {
        CMat { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn trace(&self) -> C {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn frob(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn commutator(&self, o: &CMat) -> CMat {
        self.mul(o).sub(&o.mul(self))
    }

    /// Matrix exponential by scaling and squaring with a Taylor core.
    pub fn exp(&self) -> CMat {
        let norm = self.frob();
        let mut s = 0;
        while norm / f64::powi(2.0, s) > 0.25 {
            s += 1;
        }
        let a = self.scale(C::new(1.0 / f64::powi(2.0, s), 0.0));
        let mut term = CMat::identity(self.n);
        let mut sum = CMat::identity(self.n);
        for k in 1..=18 {
            term = term.mul(&a).scale(C::new(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum
    }

    /// Frobenius distance of `M†M` from the identity.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint().mul(self).sub(&CMat::identity(self.n)).frob()
    }
}
