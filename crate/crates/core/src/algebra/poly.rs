//! Univariate polynomials with real or complex coefficients and root solving.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use super::linalg::{hessenberg_eigenvalues, Matrix};
use super::scalar::{c64, Scalar, C64};
use crate::error::{invalid, Error, Result};

/// Polynomial with coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly<T = f64> {
    pub coeffs: Vec<T>,
}

/// Roots of a real polynomial split into real roots (ascending) and conjugate
/// pairs (stored by their upper-half-plane member).
#[derive(Debug, Clone, PartialEq)]
pub struct RootPartition {
    pub real: Vec<f64>,
    pub pairs: Vec<C64>,
    /// Largest |Im| among roots classified real.
    pub max_im_real: f64,
    /// Smallest |Im| among the pair members (infinite when there are none).
    pub min_im_pair: f64,
}

impl<T: Scalar> UniPoly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim_exact();
        p
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x − r`
    pub fn linear_root(r: T) -> Self {
        Self::new(vec![-r, T::one()])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Self::constant(T::one()), |acc, &r| acc.mul(&Self::linear_root(r)))
    }

    fn trim_exact(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.modulus() == 0.0) {
            self.coeffs.pop();
        }
    }

    /// Drops leading coefficients below `rel · max|c|`.
    pub fn trimmed(&self, rel: f64) -> Self {
        let m = self.max_abs();
        let mut c = self.coeffs.clone();
        while matches!(c.last(), Some(x) if x.modulus() <= rel * m) {
            c.pop();
        }
        UniPoly { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.modulus()))
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn eval_c(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(c64(0.0, 0.0), |acc, &c| acc * z + c.to_c64())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * T::from_f64(k as f64)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).copied().unwrap_or(T::zero());
                    let b = other.coeffs.get(k).copied().unwrap_or(T::zero());
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(T::one()), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or_else(|| invalid("division by the zero polynomial"))?;
        let lead = d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![T::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let f = rem[k + dd] / lead;
            q[k] = f;
            for j in 0..=dd {
                rem[k + j] -= f * d.coeffs[j];
            }
        }
        rem.truncate(dd);
        Ok((Self::new(q), Self::new(rem)))
    }

    pub fn to_complex(&self) -> UniPoly<C64> {
        UniPoly::new(self.coeffs.iter().map(|c| c.to_c64()).collect())
    }

    /// All complex roots (with multiplicity) via companion-matrix eigenvalues,
    /// each polished by a Newton step on the original polynomial. Leading
    /// coefficients below `1e-13 · max|c|` are treated as roots at infinity
    /// and dropped.
    pub fn roots(&self) -> Result<Vec<C64>> {
        let p = self.trimmed(1e-13);
        let n = match p.degree() {
            None => return Err(invalid("roots of the zero polynomial")),
            Some(0) => return Ok(Vec::new()),
            Some(n) => n,
        };
        let c: Vec<C64> = p.coeffs.iter().map(|x| x.to_c64()).collect();
        let mut roots = Vec::with_capacity(n);
        let mut low = 0;
        while c[low].norm() == 0.0 {
            roots.push(c64(0.0, 0.0));
            low += 1;
        }
        let c = &c[low..];
        let m = c.len() - 1;
        if m > 0 {
            // scale x = s·z so the monic coefficients are balanced
            let lead = c[m];
            let mut s = 0.0f64;
            for k in 0..m {
                let r = (c[k] / lead).norm().powf(1.0 / (m - k) as f64);
                s = s.max(r);
            }
            if s == 0.0 || !s.is_finite() {
                s = 1.0;
            }
            let mut comp = Matrix::<C64>::zeros(m, m);
            for k in 0..m {
                let a = c[k] / lead * s.powi(k as i32 - m as i32);
                comp[(0, m - 1 - k)] = -a;
            }
            for i in 1..m {
                comp[(i, i - 1)] = c64(1.0, 0.0);
            }
            let eig = hessenberg_eigenvalues(comp)?;
            let poly = UniPoly { coeffs: c.to_vec() };
            let dpoly = poly.derivative();
            for z in eig {
                let mut z = z * s;
                let fz = poly.eval_c(z);
                let dz = dpoly.eval_c(z);
                if dz.norm() > 0.0 {
                    let z1 = z - fz / dz;
                    if z1.re.is_finite() && z1.im.is_finite() && poly.eval_c(z1).norm() < fz.norm() {
                        z = z1;
                    }
                }
                roots.push(z);
            }
        }
        Ok(roots)
    }
}

impl UniPoly<f64> {
    /// Roots of a real polynomial partitioned into real roots and conjugate
    /// pairs. A root counts as real when |Im z| < `tol_im`·(1+|z|).
    pub fn real_roots(&self, tol_im: f64) -> Result<RootPartition> {
        let roots = self.roots()?;
        partition_roots(&roots, tol_im)
    }
}

/// Splits roots of a real polynomial into real ones and matched conjugate pairs.
pub fn partition_roots(roots: &[C64], tol_im: f64) -> Result<RootPartition> {
    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut max_im_real: f64 = 0.0;
    let mut min_im_pair = f64::INFINITY;
    for &z in roots {
        if z.im.abs() < tol_im * (1.0 + z.norm()) {
            real.push(z.re);
            max_im_real = max_im_real.max(z.im.abs());
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z);
        }
    }
    if upper.len() != lower.len() {
        return Err(Error::Ambiguous("unmatched conjugate root".into()));
    }
    let mut pairs = Vec::with_capacity(upper.len());
    let mut used = vec![false; lower.len()];
    for z in upper {
        let (k, _) = lower
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, w)| (k, (z - w.conj()).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::Ambiguous("unmatched conjugate root".into()))?;
        used[k] = true;
        let w = lower[k].conj();
        let avg = (z + w) * 0.5;
        min_im_pair = min_im_pair.min(avg.im.abs() / (1.0 + avg.norm()));
        pairs.push(avg);
    }
    real.sort_by(|a, b| a.total_cmp(b));
    Ok(RootPartition { real, pairs, max_im_real, min_im_pair })
}
