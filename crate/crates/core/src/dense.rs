//! Dense LU factorization with partial pivoting, used for the small local
//! smoother blocks and for the coarsest-level solve.

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl DenseLu {
    /// Factors the row-major `n x n` matrix `a`. A pivot below
    /// `tol * max|a_ij|` counts as singular.
    pub fn factor(n: usize, mut a: Vec<f64>, tol: f64) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let scale = a.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
        if n > 0 && scale == 0.0 {
            return Err(Error::SingularSystem { column: 0 });
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = libm::fabs(a[k * n + k]);
            for r in k + 1..n {
                let v = libm::fabs(a[r * n + k]);
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best <= tol * scale {
                return Err(Error::SingularSystem { column: k });
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            let piv = a[k * n + k];
            for r in k + 1..n {
                let f = a[r * n + k] / piv;
                if f == 0.0 {
                    continue;
                }
                a[r * n + k] = f;
                for c in k + 1..n {
                    a[r * n + c] -= f * a[k * n + c];
                }
            }
        }
        Ok(Self { n, lu: a, perm })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let mut s = x[r];
            for c in 0..r {
                s -= self.lu[r * n + c] * x[c];
            }
            x[r] = s;
        }
        for r in (0..n).rev() {
            let mut s = x[r];
            for c in r + 1..n {
                s -= self.lu[r * n + c] * x[c];
            }
            x[r] = s / self.lu[r * n + r];
        }
        b.copy_from_slice(&x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn solves_saddle_point_block() {
        // [[1, 0, 1], [0, 2, -1], [1, -1, 0]] has a zero diagonal entry.
        let a = vec![1.0, 0.0, 1.0, 0.0, 2.0, -1.0, 1.0, -1.0, 0.0];
        let lu = DenseLu::factor(3, a.clone(), 1e-14).unwrap();
        let x = [0.5, -1.0, 2.0];
        let mut b: Vec<f64> = (0..3).map(|r| (0..3).map(|c| a[r * 3 + c] * x[c]).sum()).collect();
        lu.solve_in_place(&mut b);
        for k in 0..3 {
            assert!((b[k] - x[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_is_reported() {
        let a = vec![1.0, 2.0, 2.0, 4.0];
        assert!(matches!(DenseLu::factor(2, a, 1e-14), Err(Error::SingularSystem { column: 1 })));
    }
}
