//! Small dense linear algebra: Jacobi eigen/SVD, elimination, and a complex
//! Hessenberg QR eigenvalue solver for companion matrices.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use super::scalar::{c64, Scalar, C64};
use crate::error::{numerical, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T = f64> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = T::zero();
                for j in 0..self.cols {
                    s += self[(i, j)] * v[j];
                }
                s
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.modulus()))
    }
}

impl<T> core::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> core::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

pub type Mat4 = [[f64; 4]; 4];

pub fn mat4_to_matrix(m: &Mat4) -> Matrix {
    Matrix::from_rows(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

pub fn matrix_to_mat4(m: &Matrix) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = m[(i, j)];
        }
    }
    out
}

pub fn mat4_mul_vec(m: &Mat4, v: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = (0..4).map(|j| m[i][j] * v[j]).sum();
    }
    out
}

pub fn mat4_mul_cvec(m: &Mat4, v: &[C64; 4]) -> [C64; 4] {
    let mut out = [c64(0.0, 0.0); 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i] += v[j] * m[i][j];
        }
    }
    out
}

pub fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm4(a: &[f64; 4]) -> f64 {
    dot4(a, a).sqrt()
}

pub fn normalize4(a: &[f64; 4]) -> [f64; 4] {
    let n = norm4(a);
    [a[0] / n, a[1] / n, a[2] / n, a[3] / n]
}

/// Distance between the points of real projective space represented by `a`
/// and `b`: the smaller of |â − b̂| and |â + b̂| for unit representatives.
pub fn proj_dist(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    let (a, b) = (normalize4(a), normalize4(b));
    let mut minus = 0.0;
    let mut plus = 0.0;
    for i in 0..4 {
        minus += (a[i] - b[i]) * (a[i] - b[i]);
        plus += (a[i] + b[i]) * (a[i] + b[i]);
    }
    minus.min(plus).sqrt()
}

/// Projective distance for complex representatives: sqrt(1 − |⟨a,b⟩|²/(|a|²|b|²)).
pub fn proj_dist_c(a: &[C64; 4], b: &[C64; 4]) -> f64 {
    let mut ab = c64(0.0, 0.0);
    let mut aa = 0.0;
    let mut bb = 0.0;
    for i in 0..4 {
        ab += a[i].conj() * b[i];
        aa += a[i].norm_sqr();
        bb += b[i].norm_sqr();
    }
    (1.0 - ab.norm_sqr() / (aa * bb)).max(0.0).sqrt()
}

/// Generalized cross product: the vector orthogonal to three vectors in ℝ⁴,
/// given by cofactors of the 3×4 matrix with rows `a`, `b`, `c`.
pub fn cross4(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4]) -> [f64; 4] {
    let minor = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    [-minor(1, 2, 3), minor(0, 2, 3), -minor(0, 1, 3), minor(0, 1, 2)]
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns the
/// eigenvalues and a matrix whose columns are the matching unit eigenvectors.
pub fn sym_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.rows;
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[(i, i)]).collect(), v)
}

/// Singular values (descending) and right singular vectors (columns of the
/// returned matrix, same order) by one-sided Jacobi. Works for any shape;
/// when `rows < cols` the trailing singular values are zero.
pub fn svd_right(a: &Matrix) -> (Vec<f64>, Matrix) {
    let (m, n) = (a.rows, a.cols);
    let mut u = a.clone();
    let mut v = Matrix::identity(n);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..m {
                    alpha += u[(i, p)] * u[(i, p)];
                    beta += u[(i, q)] * u[(i, q)];
                    gamma += u[(i, p)] * u[(i, q)];
                }
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let up = u[(i, p)];
                    let uq = u[(i, q)];
                    u[(i, p)] = c * up - s * uq;
                    u[(i, q)] = s * up + c * uq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<(f64, usize)> =
        (0..n).map(|j| ((0..m).map(|i| u[(i, j)] * u[(i, j)]).sum::<f64>().sqrt(), j)).collect();
    sv.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut vs = Matrix::zeros(n, n);
    for (k, &(_, j)) in sv.iter().enumerate() {
        for i in 0..n {
            vs[(i, k)] = v[(i, j)];
        }
    }
    (sv.into_iter().map(|x| x.0).collect(), vs)
}

/// Numerical rank with threshold `rel_tol · σ_max`.
pub fn rank(a: &Matrix, rel_tol: f64) -> usize {
    let (s, _) = svd_right(a);
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * smax).count()
}

/// Orthonormal basis of the numerical null space (threshold `rel_tol · σ_max`).
pub fn null_space(a: &Matrix, rel_tol: f64) -> Vec<Vec<f64>> {
    let (s, v) = svd_right(a);
    let smax = s.first().copied().unwrap_or(0.0);
    (0..a.cols).filter(|&j| s[j] <= rel_tol * smax || smax == 0.0).map(|j| v.col(j)).collect()
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    let n = a.rows;
    assert_eq!(a.cols, n);
    assert_eq!(b.len(), n);
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = m.max_abs();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[(i, k)].modulus().total_cmp(&m[(j, k)].modulus())).unwrap_or(k);
        if m[(p, k)].modulus() <= 1e-14 * scale || scale == 0.0 {
            return Err(numerical("singular linear system"));
        }
        if p != k {
            for j in 0..n {
                m.data.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        let piv = m[(k, k)];
        for i in k + 1..n {
            let f = m[(i, k)] / piv;
            if f.modulus() == 0.0 {
                continue;
            }
            for j in k..n {
                let mkj = m[(k, j)];
                m[(i, j)] -= f * mkj;
            }
            let xk = x[k];
            x[i] -= f * xk;
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        for j in k + 1..n {
            s -= m[(k, j)] * x[j];
        }
        x[k] = s / m[(k, k)];
    }
    Ok(x)
}

/// Determinant by partial-pivot elimination.
pub fn det<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.rows;
    let mut m = a.clone();
    let mut d = T::one();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[(i, k)].modulus().total_cmp(&m[(j, k)].modulus())).unwrap_or(k);
        if m[(p, k)].modulus() == 0.0 {
            return T::zero();
        }
        if p != k {
            for j in 0..n {
                m.data.swap(k * n + j, p * n + j);
            }
            d = -d;
        }
        let piv = m[(k, k)];
        d *= piv;
        for i in k + 1..n {
            let f = m[(i, k)] / piv;
            for j in k..n {
                let mkj = m[(k, j)];
                m[(i, j)] -= f * mkj;
            }
        }
    }
    d
}

/// Inverse of a 4×4 real matrix.
pub fn inverse4(m: &Mat4) -> Result<Mat4> {
    let a = mat4_to_matrix(m);
    let mut out = [[0.0; 4]; 4];
    for j in 0..4 {
        let mut e = [0.0; 4];
        e[j] = 1.0;
        let col = solve(&a, &e)?;
        for i in 0..4 {
            out[i][j] = col[i];
        }
    }
    Ok(out)
}

/// Eigenvalues of an upper Hessenberg complex matrix by shifted QR with
/// Givens rotations and Wilkinson shifts. The input is consumed.
pub fn hessenberg_eigenvalues(mut h: Matrix<C64>) -> Result<Vec<C64>> {
    let n = h.rows;
    let mut eig = Vec::with_capacity(n);
    let mut hi = n;
    let mut iter = 0usize;
    let eps = f64::EPSILON;
    while hi > 0 {
        if hi == 1 {
            eig.push(h[(0, 0)]);
            break;
        }
        let mut l = hi - 1;
        while l > 0 {
            let s = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = c64(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi - 1 {
            eig.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 60 * n.max(4) {
            return Err(numerical("QR eigenvalue iteration did not converge"));
        }
        let a = h[(hi - 2, hi - 2)];
        let b = h[(hi - 2, hi - 1)];
        let c = h[(hi - 1, hi - 2)];
        let d = h[(hi - 1, hi - 1)];
        let mu = if iter % 11 == 10 {
            // exceptional shift to break cycles
            d + c64(c.norm() * 0.75, c.norm() * 0.5)
        } else {
            let tr2 = (a + d) * 0.5;
            let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
            let l1 = tr2 + disc;
            let l2 = tr2 - disc;
            if (l1 - d).norm() < (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        for k in l..hi {
            h[(k, k)] -= mu;
        }
        let mut rots: Vec<(C64, C64)> = Vec::with_capacity(hi - l);
        for k in l..hi - 1 {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cc, ss) = if r == 0.0 { (c64(1.0, 0.0), c64(0.0, 0.0)) } else { (x / r, y / r) };
            for j in k..hi {
                let hk = h[(k, j)];
                let hk1 = h[(k + 1, j)];
                h[(k, j)] = cc.conj() * hk + ss.conj() * hk1;
                h[(k + 1, j)] = -ss * hk + cc * hk1;
            }
            rots.push((cc, ss));
        }
        for (idx, &(cc, ss)) in rots.iter().enumerate() {
            let k = l + idx;
            let top = (k + 2).min(hi - 1);
            for i in l..=top {
                let hk = h[(i, k)];
                let hk1 = h[(i, k + 1)];
                h[(i, k)] = hk * cc + hk1 * ss;
                h[(i, k + 1)] = -hk * ss.conj() + hk1 * cc.conj();
            }
        }
        for k in l..hi {
            h[(k, k)] += mu;
        }
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_eigen_reconstructs() {
        let a = Matrix::from_rows(&[
            vec![2.0, 1.0, 0.5, 0.0],
            vec![1.0, -1.0, 0.3, 0.2],
            vec![0.5, 0.3, 0.7, -0.4],
            vec![0.0, 0.2, -0.4, -2.0],
        ]);
        let (vals, v) = sym_eigen(&a);
        for k in 0..4 {
            let x = v.col(k);
            let ax = a.mul_vec(&x);
            for i in 0..4 {
                assert!((ax[i] - vals[k] * x[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn svd_null_space_of_wide_matrix() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0, 4.0], vec![0.0, 1.0, 1.0, 0.0]]);
        let ns = null_space(&a, 1e-10);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let r = a.mul_vec(&v);
            assert!(r.iter().all(|x| x.abs() < 1e-12));
        }
        assert_eq!(rank(&a, 1e-10), 2);
    }

    #[test]
    fn cross4_is_orthogonal() {
        let a = [1.0, 2.0, -1.0, 0.5];
        let b = [0.3, -0.2, 0.9, 1.0];
        let c = [2.0, 0.1, 0.0, -1.0];
        let x = cross4(&a, &b, &c);
        assert!(dot4(&x, &a).abs() < 1e-12);
        assert!(dot4(&x, &b).abs() < 1e-12);
        assert!(dot4(&x, &c).abs() < 1e-12);
        assert!(norm4(&x) > 0.1);
    }

    #[test]
    fn solve_and_det_agree() {
        let a = Matrix::from_rows(&[vec![4.0, 1.0, 2.0], vec![1.0, 3.0, 0.0], vec![2.0, 0.0, 5.0]]);
        let x = solve(&a, &[1.0, 2.0, 3.0]).unwrap();
        let r = a.mul_vec(&x);
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12 && (r[2] - 3.0).abs() < 1e-12);
        assert!((det(&a) - 43.0).abs() < 1e-10);
    }

    #[test]
    fn hessenberg_qr_on_rotation() {
        // rotation by 90 degrees has eigenvalues ±i
        let mut h = Matrix::<C64>::zeros(2, 2);
        h[(0, 1)] = c64(-1.0, 0.0);
        h[(1, 0)] = c64(1.0, 0.0);
        let mut e = hessenberg_eigenvalues(h).unwrap();
        e.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((e[0] - c64(0.0, -1.0)).norm() < 1e-12);
        assert!((e[1] - c64(0.0, 1.0)).norm() < 1e-12);
    }
}
