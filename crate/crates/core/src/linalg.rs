//! Small dense linear algebra for shape operators (dimension ≤ `MAX_DIM`).

use crate::math::sqrt;
use crate::{Vector, MAX_DIM};

const CAP: usize = MAX_DIM * MAX_DIM;

/// Square matrix of dimension `n ≤ MAX_DIM`, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat {
    n: usize,
    a: [f64; CAP],
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= MAX_DIM, "matrix dimension {n} exceeds {MAX_DIM}");
        Mat { n, a: [0.0; CAP] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let n = self.n;
        Self::from_fn(n, |i, j| (0..n).map(|l| self[(i, l)] * other[(l, j)]).sum())
    }

    /// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
    pub fn cholesky(&self) -> Option<Mat> {
        let n = self.n;
        let mut l = Mat::zeros(n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for p in 0..j {
                d -= l[(j, p)] * l[(j, p)];
            }
            if !(d > 0.0) {
                return None;
            }
            let djj = sqrt(d);
            l[(j, j)] = djj;
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for p in 0..j {
                    s -= l[(i, p)] * l[(j, p)];
                }
                l[(i, j)] = s / djj;
            }
        }
        Some(l)
    }

    /// Inverse of a lower-triangular matrix.
    pub fn lower_inverse(&self) -> Mat {
        let n = self.n;
        let mut inv = Mat::zeros(n);
        for j in 0..n {
            inv[(j, j)] = 1.0 / self[(j, j)];
            for i in (j + 1)..n {
                let mut s = 0.0;
                for p in j..i {
                    s -= self[(i, p)] * inv[(p, j)];
                }
                inv[(i, j)] = s / self[(i, i)];
            }
        }
        inv
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut m = *self;
        let mut det = 1.0;
        for c in 0..n {
            let mut piv = c;
            for r in (c + 1)..n {
                if m[(r, c)].abs() > m[(piv, c)].abs() {
                    piv = r;
                }
            }
            if m[(piv, c)] == 0.0 {
                return 0.0;
            }
            if piv != c {
                for j in 0..n {
                    let tmp = m[(c, j)];
                    m[(c, j)] = m[(piv, j)];
                    m[(piv, j)] = tmp;
                }
                det = -det;
            }
            let p = m[(c, c)];
            det *= p;
            for r in (c + 1)..n {
                let f = m[(r, c)] / p;
                if f != 0.0 {
                    for j in c..n {
                        m[(r, j)] -= f * m[(c, j)];
                    }
                }
            }
        }
        det
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
    pub fn symmetric_eigenvalues(&self) -> Vector {
        let n = self.n;
        let mut m = *self;
        for _sweep in 0..64 {
            let mut off = 0.0;
            let mut scale = 0.0;
            for i in 0..n {
                scale += m[(i, i)] * m[(i, i)];
                for j in (i + 1)..n {
                    off += m[(i, j)] * m[(i, j)];
                }
            }
            if off <= 1e-32 * scale || off == 0.0 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m[(p, q)];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = m[(p, p)];
                    let aqq = m[(q, q)];
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + sqrt(theta * theta + 1.0));
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / sqrt(t * t + 1.0);
                    let s = t * c;
                    for r in 0..n {
                        let mrp = m[(r, p)];
                        let mrq = m[(r, q)];
                        m[(r, p)] = c * mrp - s * mrq;
                        m[(r, q)] = s * mrp + c * mrq;
                    }
                    for r in 0..n {
                        let mpr = m[(p, r)];
                        let mqr = m[(q, r)];
                        m[(p, r)] = c * mpr - s * mqr;
                        m[(q, r)] = s * mpr + c * mqr;
                    }
                }
            }
        }
        let mut ev: Vector = (0..n).map(|i| m[(i, i)]).collect();
        sort_ascending(&mut ev);
        ev
    }
}

impl core::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.n && j < self.n);
        &self.a[i * MAX_DIM + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.n && j < self.n);
        &mut self.a[i * MAX_DIM + j]
    }
}

pub fn sort_ascending(v: &mut [f64]) {
    v.sort_unstable_by(|a, b| a.total_cmp(b));
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

/// Eigenvalues of `g⁻¹·b` for symmetric `b` and positive-definite `g`.
///
/// Returns `None` when `g` is not positive definite.
pub fn generalized_eigenvalues(g: &Mat, b: &Mat) -> Option<Vector> {
    let l = g.cholesky()?;
    let li = l.lower_inverse();
    let c = li.mul(b).mul(&li.transpose());
    let sym = Mat::from_fn(c.dim(), |i, j| 0.5 * (c[(i, j)] + c[(j, i)]));
    Some(sym.symmetric_eigenvalues())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_matches_known_spectrum() {
        let m = Mat::from_fn(3, |i, j| [[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]][i][j]);
        let ev = m.symmetric_eigenvalues();
        let s2 = sqrt(2.0);
        let expect = [2.0 - s2, 2.0, 2.0 + s2];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
        assert!((m.det() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn generalized_problem_recovers_scaled_identity() {
        let g = Mat::from_fn(2, |i, j| [[4.0, 1.0], [1.0, 3.0]][i][j]);
        let b = Mat::from_fn(2, |i, j| 0.5 * g[(i, j)]);
        let ev = generalized_eigenvalues(&g, &b).unwrap();
        assert!(ev.iter().all(|e| (e - 0.5).abs() < 1e-14));
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let g = Mat::from_fn(2, |i, j| [[1.0, 2.0], [2.0, 1.0]][i][j]);
        assert!(g.cholesky().is_none());
    }
}
