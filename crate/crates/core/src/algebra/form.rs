//! Homogeneous forms of degree 1–3 in four variables.
//!
//! Coefficients follow graded-lexicographic order on x0<x1<x2<x3: monomials
//! are the sorted index tuples i1 ≤ … ≤ id listed lexicographically, so the
//! quadratic order is x0², x0x1, x0x2, x0x3, x1², x1x2, x1x3, x2², x2x3, x3².

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::linalg::Mat4;
use super::poly::UniPoly;
use super::scalar::{Scalar, C64};
use crate::error::{invalid, Error, Result};

/// Name of the coefficient order, recorded in serialized forms.
pub const MONOMIAL_ORDER: &str = "grlex x0<x1<x2<x3";

/// Number of degree-`d` monomials in four variables.
pub const fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) * (d + 3) / 6
}

const fn build_table<const N: usize>(d: usize) -> [[u8; 4]; N] {
    let mut out = [[0u8; 4]; N];
    let mut idx = [0usize; 4];
    let mut n = 0;
    loop {
        let mut e = [0u8; 4];
        let mut t = 0;
        while t < d {
            e[idx[t]] += 1;
            t += 1;
        }
        out[n] = e;
        n += 1;
        // next non-decreasing index tuple
        let mut k = d;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] < 3 {
                idx[k] += 1;
                let mut j = k + 1;
                while j < d {
                    idx[j] = idx[k];
                    j += 1;
                }
                break;
            }
        }
    }
}

static MONO0: [[u8; 4]; 1] = [[0; 4]];
static MONO1: [[u8; 4]; 4] = build_table::<4>(1);
static MONO2: [[u8; 4]; 10] = build_table::<10>(2);
static MONO3: [[u8; 4]; 20] = build_table::<20>(3);
static MONO4: [[u8; 4]; 35] = build_table::<35>(4);

/// Exponent vectors of degree-`d` monomials (d ≤ 4) in coefficient order.
pub fn monomials(d: usize) -> &'static [[u8; 4]] {
    match d {
        0 => &MONO0,
        1 => &MONO1,
        2 => &MONO2,
        3 => &MONO3,
        4 => &MONO4,
        _ => panic!("forms of degree above 4 are not supported"),
    }
}

fn monomial_index(d: usize, e: &[u8; 4]) -> usize {
    monomials(d).iter().position(|m| m == e).expect("exponent vector of matching degree")
}

fn pow<T: Scalar>(x: T, k: u8) -> T {
    (0..k).fold(T::one(), |acc, _| acc * x)
}

/// Homogeneous form in x0..x3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiForm {
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl MultiForm {
    pub fn new(degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        if !(1..=4).contains(&degree) {
            return Err(invalid("form degree must be between 1 and 4"));
        }
        if coeffs.len() != monomial_count(degree) {
            return Err(invalid("coefficient count does not match the degree"));
        }
        Ok(MultiForm { degree, coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        MultiForm { degree, coeffs: vec![0.0; monomial_count(degree)] }
    }

    /// Linear form a·x.
    pub fn linear(a: [f64; 4]) -> Self {
        MultiForm { degree: 1, coeffs: a.to_vec() }
    }

    /// Quadratic form xᵀ M x of a symmetric matrix.
    pub fn from_symmetric(m: &Mat4) -> Self {
        let mut f = Self::zero(2);
        for (k, e) in monomials(2).iter().enumerate() {
            let ij: Vec<usize> = (0..4).flat_map(|i| core::iter::repeat(i).take(e[i] as usize)).collect();
            let (i, j) = (ij[0], ij[1]);
            f.coeffs[k] = if i == j { m[i][i] } else { m[i][j] + m[j][i] };
        }
        f
    }

    /// Symmetric matrix of a quadratic form.
    pub fn to_symmetric(&self) -> Result<Mat4> {
        if self.degree != 2 {
            return Err(invalid("only quadratic forms have a symmetric matrix"));
        }
        let mut m = [[0.0; 4]; 4];
        for (k, e) in monomials(2).iter().enumerate() {
            let ij: Vec<usize> = (0..4).flat_map(|i| core::iter::repeat(i).take(e[i] as usize)).collect();
            let (i, j) = (ij[0], ij[1]);
            if i == j {
                m[i][i] = self.coeffs[k];
            } else {
                m[i][j] = self.coeffs[k] / 2.0;
                m[j][i] = self.coeffs[k] / 2.0;
            }
        }
        Ok(m)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Copy scaled so the largest coefficient has modulus one.
    pub fn normalized(&self) -> Self {
        let s = self.max_abs();
        if s == 0.0 {
            return self.clone();
        }
        self.scale(1.0 / s)
    }

    pub fn scale(&self, s: f64) -> Self {
        MultiForm { degree: self.degree, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(invalid("adding forms of different degree"));
        }
        Ok(MultiForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    /// `self + s·other`
    pub fn axpy(&self, s: f64, other: &Self) -> Result<Self> {
        self.add(&other.scale(s))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.degree + other.degree;
        if d > 4 {
            return Err(invalid("product degree exceeds 4"));
        }
        let ma = monomials(self.degree);
        let mb = monomials(other.degree);
        let mut out = Self::zero(d);
        for (i, ea) in ma.iter().enumerate() {
            if self.coeffs[i] == 0.0 {
                continue;
            }
            for (j, eb) in mb.iter().enumerate() {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.coeffs[monomial_index(d, &e)] += self.coeffs[i] * other.coeffs[j];
            }
        }
        Ok(out)
    }

    /// Evaluates at a real or complex point.
    pub fn eval<T: Scalar>(&self, p: &[T; 4]) -> T {
        let mut s = T::zero();
        for (e, &c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if c == 0.0 {
                continue;
            }
            let mut m = T::from_f64(c);
            for i in 0..4 {
                m *= pow(p[i], e[i]);
            }
            s += m;
        }
        s
    }

    /// Evaluates, rejecting the zero vector (which is not a projective point).
    pub fn evaluate<T: Scalar>(&self, p: &[T; 4]) -> Result<T> {
        if p.iter().all(|x| x.modulus() == 0.0) {
            return Err(invalid("the zero vector is not a projective point"));
        }
        Ok(self.eval(p))
    }

    /// Partial derivatives at `p`.
    pub fn gradient<T: Scalar>(&self, p: &[T; 4]) -> [T; 4] {
        let mut g = [T::zero(); 4];
        for (e, &c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if c == 0.0 {
                continue;
            }
            for k in 0..4 {
                if e[k] == 0 {
                    continue;
                }
                let mut m = T::from_f64(c * e[k] as f64);
                for i in 0..4 {
                    let ex = if i == k { e[i] - 1 } else { e[i] };
                    m *= pow(p[i], ex);
                }
                g[k] += m;
            }
        }
        g
    }

    /// Form g with g(p) = f(M·p).
    pub fn compose_linear(&self, m: &Mat4) -> Self {
        let mut out = Self::zero(self.degree);
        for (e, &c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if c == 0.0 {
                continue;
            }
            let mut term = MultiForm { degree: 0, coeffs: vec![c] };
            for i in 0..4 {
                for _ in 0..e[i] {
                    term = term.mul_linear_raw(&m[i]);
                }
            }
            for (o, t) in out.coeffs.iter_mut().zip(&term.coeffs) {
                *o += t;
            }
        }
        out
    }

    // product with a linear form, allowing degree 0 as a starting point
    fn mul_linear_raw(&self, a: &[f64; 4]) -> Self {
        let d = self.degree + 1;
        let mut out = Self::zero(d);
        for (e, &c) in monomials(self.degree).iter().zip(&self.coeffs) {
            for k in 0..4 {
                let mut e2 = *e;
                e2[k] += 1;
                out.coeffs[monomial_index(d, &e2)] += c * a[k];
            }
        }
        out
    }

    /// Product of linear forms.
    pub fn product_of_linear(ls: &[[f64; 4]]) -> Result<Self> {
        if ls.is_empty() || ls.len() > 4 {
            return Err(invalid("product of 1 to 4 linear forms expected"));
        }
        Ok(ls.iter().fold(MultiForm { degree: 0, coeffs: vec![1.0] }, |acc, l| acc.mul_linear_raw(l)))
    }

    /// Composition with a parametrized curve γ (four polynomials): the
    /// univariate polynomial f∘γ. Fails when the components share a root,
    /// since γ is then not a map to projective space there.
    pub fn restrict_to_curve<T: Scalar>(&self, gamma: &[UniPoly<T>; 4]) -> Result<UniPoly<T>> {
        check_no_common_root(gamma)?;
        Ok(self.compose_poly(gamma))
    }

    /// f∘γ without the common-root check.
    pub fn compose_poly<T: Scalar>(&self, gamma: &[UniPoly<T>; 4]) -> UniPoly<T> {
        let mut powers: Vec<Vec<UniPoly<T>>> = Vec::with_capacity(4);
        for g in gamma {
            let mut v = vec![UniPoly::constant(T::one())];
            for k in 1..=self.degree {
                let next = v[k - 1].mul(g);
                v.push(next);
            }
            powers.push(v);
        }
        let mut out = UniPoly::zero();
        for (e, &c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if c == 0.0 {
                continue;
            }
            let mut term = UniPoly::constant(T::from_f64(c));
            for i in 0..4 {
                if e[i] > 0 {
                    term = term.mul(&powers[i][e[i] as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }
}

fn check_no_common_root<T: Scalar>(gamma: &[UniPoly<T>; 4]) -> Result<()> {
    let scale = gamma.iter().map(|g| g.max_abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(invalid("parametrization is identically zero"));
    }
    let lead = gamma
        .iter()
        .filter(|g| g.trimmed(1e-13).degree().unwrap_or(0) > 0)
        .min_by_key(|g| g.trimmed(1e-13).degree())
        .cloned();
    let Some(g0) = lead else { return Ok(()) };
    for z in g0.roots()? {
        let vals: Vec<C64> = gamma.iter().map(|g| g.eval_c(z)).collect();
        let zs = 1.0 + z.norm();
        let deg = gamma.iter().filter_map(|g| g.degree()).max().unwrap_or(0) as i32;
        let tol = 1e-9 * scale * zs.powi(deg);
        if vals.iter().all(|v| v.norm() < tol) {
            return Err(Error::InvalidInput("parametrization components share a root".into()));
        }
    }
    Ok(())
}
