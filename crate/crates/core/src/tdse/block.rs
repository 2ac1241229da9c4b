//! Block-tridiagonal direct solver over 2x2 complex blocks, used by the
//! implicit time stepper. The factorization is computed once per
//! (potential, dt) pair and reused every step.

use crate::C64;

/// 2x2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

/// 2-component complex vector (main, aux) at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub m: C64,
    pub a: C64,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 {
        a: C64::new(0.0, 0.0),
        b: C64::new(0.0, 0.0),
        c: C64::new(0.0, 0.0),
        d: C64::new(0.0, 0.0),
    };

    pub fn diag(a: C64, d: C64) -> Mat2 {
        Mat2 { a, b: C64::new(0.0, 0.0), c: C64::new(0.0, 0.0), d }
    }

    #[inline]
    pub fn mul_vec(&self, v: Vec2) -> Vec2 {
        Vec2 { m: self.a * v.m + self.b * v.a, a: self.c * v.m + self.d * v.a }
    }

    #[inline]
    pub fn mul_mat(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    #[inline]
    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2 { a: self.a - o.a, b: self.b - o.b, c: self.c - o.c, d: self.d - o.d }
    }

    /// Inverse; returns None when the determinant underflows to zero.
    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.a * self.d - self.b * self.c;
        if det.norm_sqr() == 0.0 {
            return None;
        }
        let inv = C64::new(1.0, 0.0) / det;
        Some(Mat2 { a: self.d * inv, b: -self.b * inv, c: -self.c * inv, d: self.a * inv })
    }
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { m: C64::new(0.0, 0.0), a: C64::new(0.0, 0.0) };

    #[inline]
    pub fn sub(self, o: Vec2) -> Vec2 {
        Vec2 { m: self.m - o.m, a: self.a - o.a }
    }
}

/// Block-tridiagonal matrix: sub[i] couples node i to i-1 (valid for
/// i >= 1), diag[i] is the on-node block, sup[i] couples node i to i+1
/// (valid for i <= n-2).
#[derive(Debug, Clone)]
pub struct BlockTridiag {
    pub sub: Vec<Mat2>,
    pub diag: Vec<Mat2>,
    pub sup: Vec<Mat2>,
}

impl BlockTridiag {
    pub fn zeros(n: usize) -> Self {
        Self { sub: vec![Mat2::ZERO; n], diag: vec![Mat2::ZERO; n], sup: vec![Mat2::ZERO; n] }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// y = M x.
    pub fn mul_vec(&self, x: &[Vec2], y: &mut [Vec2]) {
        let n = self.len();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i].mul_vec(x[i]);
            if i > 0 {
                let l = self.sub[i].mul_vec(x[i - 1]);
                acc.m += l.m;
                acc.a += l.a;
            }
            if i + 1 < n {
                let u = self.sup[i].mul_vec(x[i + 1]);
                acc.m += u.m;
                acc.a += u.a;
            }
            y[i] = acc;
        }
    }
}

/// LU-style factorization of a block-tridiagonal matrix (block Thomas
/// algorithm, no pivoting). Valid for the diagonally dominant systems the
/// implicit stepper produces.
pub struct BlockFactor {
    /// inv(diag[i] - sub[i] * w[i-1]) per node.
    inv: Vec<Mat2>,
    /// w[i] = inv[i] * sup[i].
    w: Vec<Mat2>,
    sub: Vec<Mat2>,
}

impl BlockFactor {
    /// Factor `m`; fails only if a pivot block is singular, which cannot
    /// happen for the stepper's strictly diagonally dominant matrices.
    pub fn new(m: &BlockTridiag) -> Option<Self> {
        let n = m.len();
        let mut inv = Vec::with_capacity(n);
        let mut w = Vec::with_capacity(n);
        let mut prev_w = Mat2::ZERO;
        for i in 0..n {
            let pivot = if i == 0 { m.diag[0] } else { m.diag[i].sub(&m.sub[i].mul_mat(&prev_w)) };
            let pinv = pivot.inverse()?;
            let wi = if i + 1 < n { pinv.mul_mat(&m.sup[i]) } else { Mat2::ZERO };
            inv.push(pinv);
            w.push(wi);
            prev_w = wi;
        }
        Some(Self { inv, w, sub: m.sub.clone() })
    }

    /// Solve M x = r in place (r becomes x).
    pub fn solve(&self, r: &mut [Vec2]) {
        let n = self.inv.len();
        assert_eq!(r.len(), n);
        // forward sweep
        r[0] = self.inv[0].mul_vec(r[0]);
        for i in 1..n {
            let li = self.sub[i].mul_vec(r[i - 1]);
            r[i] = self.inv[i].mul_vec(r[i].sub(li));
        }
        // back substitution
        for i in (0..n - 1).rev() {
            let wi = self.w[i].mul_vec(r[i + 1]);
            r[i] = r[i].sub(wi);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn mat2_inverse_identity() {
        let m = Mat2 { a: c(2.0, 1.0), b: c(0.3, -0.2), c: c(-0.1, 0.4), d: c(1.5, -0.8) };
        let inv = m.inverse().unwrap();
        let id = m.mul_mat(&inv);
        assert!((id.a - c(1.0, 0.0)).norm() < 1e-14);
        assert!(id.b.norm() < 1e-14);
        assert!(id.c.norm() < 1e-14);
        assert!((id.d - c(1.0, 0.0)).norm() < 1e-14);
    }

    fn random_dominant_system(n: usize, seed: u64) -> (BlockTridiag, Vec<Vec2>) {
        // deterministic pseudo-random entries with a dominant diagonal
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = BlockTridiag::zeros(n);
        for i in 0..n {
            m.diag[i] = Mat2 {
                a: c(6.0 + next(), next()),
                b: c(next(), next()),
                c: c(next(), next()),
                d: c(6.0 + next(), next()),
            };
            if i > 0 {
                m.sub[i] = Mat2 { a: c(next(), next()), b: c(next(), next()), c: c(next(), next()), d: c(next(), next()) };
            }
            if i + 1 < n {
                m.sup[i] = Mat2 { a: c(next(), next()), b: c(next(), next()), c: c(next(), next()), d: c(next(), next()) };
            }
        }
        let x: Vec<Vec2> = (0..n).map(|_| Vec2 { m: c(next(), next()), a: c(next(), next()) }).collect();
        (m, x)
    }

    #[test]
    fn factor_solves_reference_system() {
        let (m, x) = random_dominant_system(64, 7);
        let mut rhs = vec![Vec2::ZERO; 64];
        m.mul_vec(&x, &mut rhs);
        let f = BlockFactor::new(&m).unwrap();
        f.solve(&mut rhs);
        for (got, want) in rhs.iter().zip(&x) {
            assert!((got.m - want.m).norm() < 1e-11);
            assert!((got.a - want.a).norm() < 1e-11);
        }
    }

    proptest! {
        #[test]
        fn solve_inverts_mul(seed in 0u64..500, n in 3usize..40) {
            let (m, x) = random_dominant_system(n, seed);
            let mut rhs = vec![Vec2::ZERO; n];
            m.mul_vec(&x, &mut rhs);
            let f = BlockFactor::new(&m).unwrap();
            f.solve(&mut rhs);
            for (got, want) in rhs.iter().zip(&x) {
                prop_assert!((got.m - want.m).norm() < 1e-9);
                prop_assert!((got.a - want.a).norm() < 1e-9);
            }
        }
    }
}
