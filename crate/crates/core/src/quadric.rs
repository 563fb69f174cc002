//! The ambient quadric: classification, global charts of the real locus,
//! real lines, and homology arithmetic on H₁(ℝX).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::algebra::form::MultiForm;
use crate::algebra::linalg::{inverse4, mat4_mul_vec, mat4_to_matrix, norm4, normalize4, sym_eigen, Mat4, Matrix};
use crate::error::{invalid, Error, Result};

/// Surface membership tolerance in normalized coordinates.
pub const SURFACE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadricKind {
    Ellipsoid,
    Hyperboloid,
    Cone,
}

impl QuadricKind {
    pub fn name(self) -> &'static str {
        match self {
            QuadricKind::Ellipsoid => "ellipsoid",
            QuadricKind::Hyperboloid => "hyperboloid",
            QuadricKind::Cone => "cone",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ellipsoid" => Some(QuadricKind::Ellipsoid),
            "hyperboloid" => Some(QuadricKind::Hyperboloid),
            "cone" => Some(QuadricKind::Cone),
            _ => None,
        }
    }

    /// Diagonal of the normal form.
    pub fn normal_diagonal(self) -> [f64; 4] {
        match self {
            QuadricKind::Ellipsoid => [1.0, 1.0, 1.0, -1.0],
            QuadricKind::Hyperboloid => [1.0, 1.0, -1.0, -1.0],
            QuadricKind::Cone => [1.0, 1.0, -1.0, 0.0],
        }
    }

    pub fn normal_form(self) -> Mat4 {
        let d = self.normal_diagonal();
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            m[i][i] = d[i];
        }
        m
    }
}

/// A classified real quadric surface. Points are handled in two coordinate
/// systems: the original one and the normalized one y = T·p in which the
/// equation is the kind's normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadric {
    pub matrix: Mat4,
    pub kind: QuadricKind,
    /// T with Tᵀ·N·T = s·matrix for some nonzero s.
    pub normalizer: Mat4,
    pub inverse: Mat4,
    /// The scale s above; negative when the sign of `matrix` was flipped.
    pub scale: f64,
}

/// Classifies a symmetric 4×4 matrix by signature.
pub fn classify_quadric(m: &Mat4) -> Result<Quadric> {
    let mut amax: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            amax = amax.max(m[i][j].abs());
            if (m[i][j] - m[j][i]).abs() > 1e-12 * (1.0 + m[i][j].abs()) {
                return Err(invalid("quadric matrix must be symmetric"));
            }
        }
    }
    if amax == 0.0 || !amax.is_finite() {
        return Err(invalid("quadric matrix must be nonzero and finite"));
    }
    let (vals, vecs) = sym_eigen(&mat4_to_matrix(m));
    let lmax = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = 1e-9 * lmax;
    let pos = vals.iter().filter(|&&v| v > tol).count();
    let neg = vals.iter().filter(|&&v| v < -tol).count();
    let flip = neg > pos;
    let (p, n) = if flip { (neg, pos) } else { (pos, neg) };
    let kind = match (p, n) {
        (3, 1) => QuadricKind::Ellipsoid,
        (2, 2) => QuadricKind::Hyperboloid,
        (2, 1) => QuadricKind::Cone,
        _ => return Err(Error::NotASurface(alloc::format!("signature ({p},{n}) with rank {}", p + n))),
    };
    let sign = if flip { -1.0 } else { 1.0 };
    let mut order: Vec<usize> = (0..4).collect();
    // positive first (descending), then negative, then the zero eigenvalue
    let key = |i: usize| {
        let v = sign * vals[i];
        if v > tol {
            (0, -v)
        } else if v < -tol {
            (1, v)
        } else {
            (2, 0.0)
        }
    };
    order.sort_by(|&a, &b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(a.cmp(&b))
    });
    let mut t = [[0.0; 4]; 4];
    for (row, &i) in order.iter().enumerate() {
        let lam = (sign * vals[i]).abs();
        let s = if lam > tol { (lam / lmax).sqrt() } else { 1.0 };
        for j in 0..4 {
            t[row][j] = s * vecs[(j, i)];
        }
    }
    let inverse = inverse4(&t)?;
    Ok(Quadric { matrix: *m, kind, normalizer: t, inverse, scale: sign / lmax })
}

impl Quadric {
    /// The quadric already in normal form.
    pub fn normal(kind: QuadricKind) -> Self {
        classify_quadric(&kind.normal_form()).expect("normal forms classify")
    }

    pub fn form(&self) -> MultiForm {
        MultiForm::from_symmetric(&self.matrix)
    }

    pub fn to_normalized(&self, p: &[f64; 4]) -> [f64; 4] {
        mat4_mul_vec(&self.normalizer, p)
    }

    pub fn from_normalized(&self, y: &[f64; 4]) -> [f64; 4] {
        mat4_mul_vec(&self.inverse, y)
    }

    /// |N(y)|/|y|² for y = T·p.
    pub fn residual(&self, p: &[f64; 4]) -> f64 {
        let y = self.to_normalized(p);
        normal_value(self.kind, &y).abs() / norm4(&y).powi(2)
    }

    pub fn contains(&self, p: &[f64; 4]) -> bool {
        self.residual(p) < SURFACE_TOL
    }

    /// Residual of the defining invariant Tᵀ·N·T = s·M, relative to |M|.
    pub fn normalizer_residual(&self) -> f64 {
        let n = self.kind.normal_diagonal();
        let mut worst: f64 = 0.0;
        let mut mmax: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let v: f64 = (0..4).map(|k| self.normalizer[k][i] * n[k] * self.normalizer[k][j]).sum();
                worst = worst.max((v - self.scale * self.matrix[i][j]).abs());
                mmax = mmax.max((self.scale * self.matrix[i][j]).abs());
            }
        }
        worst / mmax
    }

    pub fn chart(&self) -> Chart {
        Chart::new(self.kind)
    }

    /// Real lines on X through p.
    pub fn rulings(&self, p: &[f64; 4]) -> Result<Rulings> {
        if !self.contains(p) {
            return Err(invalid("point is not on the quadric"));
        }
        let y = normalize4(&self.to_normalized(p));
        let chart = self.chart();
        let line = |a: [f64; 4], b: [f64; 4]| RealLine::new(self.from_normalized(&a), self.from_normalized(&b));
        match self.kind {
            QuadricKind::Ellipsoid => Ok(Rulings::Lines(Vec::new())),
            QuadricKind::Hyperboloid => {
                let (u, v) = chart.inverse(&y);
                let a_line = line(chart.map(u, v), chart.map(u + PI, v));
                let b_line = line(chart.map(u, v), chart.map(u, v + PI));
                Ok(Rulings::Lines(vec![a_line, b_line]))
            }
            QuadricKind::Cone => {
                if y[0].abs() + y[1].abs() + y[2].abs() < 1e-9 {
                    return Ok(Rulings::AllGenerators);
                }
                Ok(Rulings::Lines(vec![line(y, [0.0, 0.0, 0.0, 1.0])]))
            }
        }
    }

    /// Real points of the plane section {a·p = 0} as closed polylines in
    /// original coordinates, sampled with `n` points per conic. A line pair
    /// yields two polylines; an empty section yields none.
    pub fn plane_section(&self, plane: &[f64; 4], n: usize) -> Result<Vec<Vec<[f64; 4]>>> {
        // the plane in normalized coordinates: a·T⁻¹ y = 0
        let mut an = [0.0; 4];
        for j in 0..4 {
            an[j] = (0..4).map(|i| plane[i] * self.inverse[i][j]).sum();
        }
        let basis = plane_basis(&an)?;
        let diag = self.kind.normal_diagonal();
        let mut a = Matrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                a[(i, j)] = (0..4).map(|k| basis[i][k] * diag[k] * basis[j][k]).sum();
            }
        }
        let (vals, vecs) = sym_eigen(&a);
        let lmax = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = 1e-10 * lmax.max(1e-300);
        let embed = |s: [f64; 3]| {
            let mut w = [0.0; 3];
            for k in 0..3 {
                for i in 0..3 {
                    w[i] += s[k] * vecs[(i, k)];
                }
            }
            let mut y = [0.0; 4];
            for k in 0..4 {
                y[k] = (0..3).map(|i| w[i] * basis[i][k]).sum();
            }
            self.from_normalized(&y)
        };
        let pos: Vec<usize> = (0..3).filter(|&i| vals[i] > tol).collect();
        let neg: Vec<usize> = (0..3).filter(|&i| vals[i] < -tol).collect();
        let zero: Vec<usize> = (0..3).filter(|&i| vals[i].abs() <= tol).collect();
        let (p2, n1) = if pos.len() == 2 && neg.len() == 1 {
            (pos, neg)
        } else if neg.len() == 2 && pos.len() == 1 {
            (neg, pos)
        } else if pos.len() + neg.len() == 2 && pos.len() == 1 {
            // two real lines through the null direction
            let z = zero[0];
            let (i, j) = (pos[0], neg[0]);
            let mut out = Vec::new();
            for sgn in [1.0, -1.0] {
                let mut line = Vec::with_capacity(n);
                for k in 0..n {
                    let th = PI * k as f64 / n as f64;
                    let mut s = [0.0; 3];
                    s[z] = th.cos();
                    s[i] = th.sin() / vals[i].abs().sqrt();
                    s[j] = sgn * th.sin() / vals[j].abs().sqrt();
                    line.push(embed(s));
                }
                out.push(line);
            }
            return Ok(out);
        } else {
            return Ok(Vec::new());
        };
        let (i, j, k) = (p2[0], p2[1], n1[0]);
        let mut conic = Vec::with_capacity(n);
        for m in 0..n {
            let th = TAU * m as f64 / n as f64;
            let mut s = [0.0; 3];
            s[i] = th.cos() / vals[i].abs().sqrt();
            s[j] = th.sin() / vals[j].abs().sqrt();
            s[k] = 1.0 / vals[k].abs().sqrt();
            conic.push(embed(s));
        }
        Ok(vec![conic])
    }
}

/// Orthonormal basis (three rows) of the hyperplane a·y = 0 in ℝ⁴.
pub fn plane_basis(a: &[f64; 4]) -> Result<[[f64; 4]; 3]> {
    let n = norm4(a);
    if n == 0.0 {
        return Err(invalid("zero plane"));
    }
    let a = [a[0] / n, a[1] / n, a[2] / n, a[3] / n];
    let mut out: Vec<[f64; 4]> = Vec::with_capacity(3);
    for e in 0..4 {
        let mut v = [0.0; 4];
        v[e] = 1.0;
        let d: f64 = a[e];
        for k in 0..4 {
            v[k] -= d * a[k];
        }
        for b in &out {
            let d: f64 = (0..4).map(|k| v[k] * b[k]).sum();
            for k in 0..4 {
                v[k] -= d * b[k];
            }
        }
        let nv = norm4(&v);
        if nv > 1e-6 {
            out.push([v[0] / nv, v[1] / nv, v[2] / nv, v[3] / nv]);
        }
        if out.len() == 3 {
            break;
        }
    }
    Ok([out[0], out[1], out[2]])
}

/// Value of the normal form at y.
pub fn normal_value(kind: QuadricKind, y: &[f64; 4]) -> f64 {
    let d = kind.normal_diagonal();
    (0..4).map(|i| d[i] * y[i] * y[i]).sum()
}

/// A real projective line spanned by two points, stored orthonormalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealLine {
    pub p: [f64; 4],
    pub q: [f64; 4],
}

impl RealLine {
    pub fn new(p: [f64; 4], q: [f64; 4]) -> Self {
        let p = normalize4(&p);
        let d: f64 = (0..4).map(|i| p[i] * q[i]).sum();
        let mut q2 = [0.0; 4];
        for i in 0..4 {
            q2[i] = q[i] - d * p[i];
        }
        RealLine { p, q: normalize4(&q2) }
    }

    /// Point at angle s; s and s+π give the same projective point.
    pub fn point(&self, s: f64) -> [f64; 4] {
        let (c, sn) = (s.cos(), s.sin());
        [
            c * self.p[0] + sn * self.q[0],
            c * self.p[1] + sn * self.q[1],
            c * self.p[2] + sn * self.q[2],
            c * self.p[3] + sn * self.q[3],
        ]
    }

    /// Two independent linear forms vanishing on the line.
    pub fn equations(&self) -> [[f64; 4]; 2] {
        let m = Matrix::from_rows(&[self.p.to_vec(), self.q.to_vec()]);
        let ns = crate::algebra::linalg::null_space(&m, 1e-10);
        [[ns[0][0], ns[0][1], ns[0][2], ns[0][3]], [ns[1][0], ns[1][1], ns[1][2], ns[1][3]]]
    }

    /// Distance from the projective point x to the line (sine of the angle
    /// between x and the spanned plane in ℝ⁴).
    pub fn distance(&self, x: &[f64; 4]) -> f64 {
        let x = normalize4(x);
        let a: f64 = (0..4).map(|i| x[i] * self.p[i]).sum();
        let b: f64 = (0..4).map(|i| x[i] * self.q[i]).sum();
        let r = [
            x[0] - a * self.p[0] - b * self.q[0],
            x[1] - a * self.p[1] - b * self.q[1],
            x[2] - a * self.p[2] - b * self.q[2],
            x[3] - a * self.p[3] - b * self.q[3],
        ];
        norm4(&r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rulings {
    Lines(Vec<RealLine>),
    /// The cone's apex lies on every generator.
    AllGenerators,
}

/// Fixed pole direction for the ellipsoid chart, chosen away from the
/// coordinate axes so that symmetric model features avoid the chart poles.
const ELLIPSOID_POLE: [f64; 3] = [0.31, -0.47, 0.83];

/// Global parametrization of ℝX in normalized coordinates.
///
/// * ellipsoid: spherical angles (u, v) ∈ [0,2π)×[0,π] about a fixed pole;
///   the rows v = 0 and v = π collapse to the poles.
/// * hyperboloid: torus angles with chart(u,v) = (cos((u+v)/2),
///   −sin((u+v)/2), cos((u−v)/2), sin((u−v)/2)); both directions have period
///   2π (a shift by 2π negates the representative). The loops v = const are
///   lines of class a = (1,0), the loops u = const lines of class b = (0,1).
/// * cone: (u, v) ↦ (cos u cos v, sin u cos v, cos v, sin v) with
///   v ∈ (−π/2, π/2); the apex sits at the boundary values v = ±π/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chart {
    pub kind: QuadricKind,
    frame: [[f64; 3]; 3],
}

impl Chart {
    pub fn new(kind: QuadricKind) -> Self {
        let e = {
            let n = (ELLIPSOID_POLE.iter().map(|x| x * x).sum::<f64>()).sqrt();
            [ELLIPSOID_POLE[0] / n, ELLIPSOID_POLE[1] / n, ELLIPSOID_POLE[2] / n]
        };
        // f1 ⟂ e from the x-axis, f2 = e × f1
        let d = e[0];
        let f1 = {
            let v = [1.0 - d * e[0], -d * e[1], -d * e[2]];
            let n = (v.iter().map(|x| x * x).sum::<f64>()).sqrt();
            [v[0] / n, v[1] / n, v[2] / n]
        };
        let f2 = [e[1] * f1[2] - e[2] * f1[1], e[2] * f1[0] - e[0] * f1[2], e[0] * f1[1] - e[1] * f1[0]];
        Chart { kind, frame: [f1, f2, e] }
    }

    /// Range of the second coordinate.
    pub fn v_range(&self) -> (f64, f64) {
        match self.kind {
            QuadricKind::Ellipsoid => (0.0, PI),
            QuadricKind::Hyperboloid => (0.0, TAU),
            QuadricKind::Cone => (-PI / 2.0, PI / 2.0),
        }
    }

    pub fn v_periodic(&self) -> bool {
        self.kind == QuadricKind::Hyperboloid
    }

    /// Chart point in normalized coordinates.
    pub fn map(&self, u: f64, v: f64) -> [f64; 4] {
        match self.kind {
            QuadricKind::Ellipsoid => {
                let [f1, f2, e] = self.frame;
                let (sv, cv) = (v.sin(), v.cos());
                let (su, cu) = (u.sin(), u.cos());
                let mut y = [0.0, 0.0, 0.0, 1.0];
                for i in 0..3 {
                    y[i] = sv * (cu * f1[i] + su * f2[i]) + cv * e[i];
                }
                y
            }
            QuadricKind::Hyperboloid => {
                let (s, d) = ((u + v) / 2.0, (u - v) / 2.0);
                [s.cos(), -s.sin(), d.cos(), d.sin()]
            }
            QuadricKind::Cone => {
                let cv = v.cos();
                [u.cos() * cv, u.sin() * cv, cv, v.sin()]
            }
        }
    }

    /// Chart coordinates of a point of ℝX (normalized coordinates), with u in
    /// [0, 2π) and, for the hyperboloid, v in [0, 2π).
    pub fn inverse(&self, y: &[f64; 4]) -> (f64, f64) {
        let wrap = wrap_2pi;
        match self.kind {
            QuadricKind::Ellipsoid => {
                let p = [y[0] / y[3], y[1] / y[3], y[2] / y[3]];
                let n = (p.iter().map(|x| x * x).sum::<f64>()).sqrt();
                let [f1, f2, e] = self.frame;
                let dot = |a: &[f64; 3]| (0..3).map(|i| a[i] * p[i]).sum::<f64>() / n;
                let v = dot(&e).clamp(-1.0, 1.0).acos();
                (wrap(dot(&f2).atan2(dot(&f1))), v)
            }
            QuadricKind::Hyperboloid => {
                let s = (-y[1]).atan2(y[0]);
                let d = y[3].atan2(y[2]);
                (wrap(s + d), wrap(s - d))
            }
            QuadricKind::Cone => {
                let sg = if y[2] < 0.0 { -1.0 } else { 1.0 };
                let u = (sg * y[1]).atan2(sg * y[0]);
                let v = (sg * y[3]).atan2(sg * y[2]);
                (wrap(u), v)
            }
        }
    }

    /// Projective distance from y to the chart image of `inverse(y)`.
    pub fn roundtrip_error(&self, y: &[f64; 4]) -> f64 {
        let (u, v) = self.inverse(y);
        crate::algebra::linalg::proj_dist(y, &self.map(u, v))
    }
}

/// Homology class of a closed curve in ℝX: (a, b) counts on the hyperboloid,
/// the circle winding on the cone (stored in `a`, with `b` = 0), and always
/// zero on the ellipsoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyClass {
    pub kind: QuadricKind,
    pub a: i32,
    pub b: i32,
}

impl HomologyClass {
    pub fn new(kind: QuadricKind, a: i32, b: i32) -> Self {
        HomologyClass { kind, a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Representative with a positive first nonzero entry (curves are
    /// unoriented until an orientation is chosen).
    pub fn unsigned(&self) -> Self {
        if self.a < 0 || (self.a == 0 && self.b < 0) {
            HomologyClass { kind: self.kind, a: -self.a, b: -self.b }
        } else {
            *self
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        HomologyClass { kind: self.kind, a: self.a + o.a, b: self.b + o.b }
    }
}

/// Intersection pairing with a·b = 1 = −b·a. Only the hyperboloid has a
/// nonzero pairing; on the cone's cylinder and the sphere it vanishes.
pub fn homology_pairing(x: &HomologyClass, y: &HomologyClass) -> Result<i32> {
    if x.kind != y.kind {
        return Err(invalid("homology classes on different surface kinds"));
    }
    Ok(match x.kind {
        QuadricKind::Hyperboloid => x.a * y.b - x.b * y.a,
        _ => 0,
    })
}

/// Reduces an angle into [0, 2π).
pub fn wrap_2pi(x: f64) -> f64 {
    let y = x - TAU * (x / TAU).floor();
    if y >= TAU {
        0.0
    } else {
        y
    }
}

/// Wraps an angle difference into (−π, π].
pub fn wrap_pi(x: f64) -> f64 {
    let y = wrap_2pi(x);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Winding numbers of a closed chart polyline around the periodic chart
/// directions. The path must return to its start modulo the periods; the
/// closing segment from the last to the first sample is included.
pub fn loop_class(path: &[(f64, f64)], kind: QuadricKind) -> Result<HomologyClass> {
    if path.len() < 3 {
        return Err(invalid("loop needs at least three samples"));
    }
    let periodic_v = kind == QuadricKind::Hyperboloid;
    let mut du = 0.0;
    let mut dv = 0.0;
    let mut max_step: f64 = 0.0;
    let n = path.len();
    for k in 0..n {
        let (u0, v0) = path[k];
        let (u1, v1) = path[(k + 1) % n];
        let a = wrap_pi(u1 - u0);
        let b = if periodic_v { wrap_pi(v1 - v0) } else { v1 - v0 };
        if k + 1 < n {
            max_step = max_step.max(a.abs()).max(b.abs());
        } else if kind != QuadricKind::Ellipsoid
            && (a.abs() > 3.0 * max_step.max(1e-3) || b.abs() > 3.0 * max_step.max(1e-3))
        {
            return Err(invalid("path is not closed"));
        }
        du += a;
        dv += b;
    }
    let a = (du / TAU).round() as i32;
    let b = (dv / TAU).round() as i32;
    Ok(match kind {
        QuadricKind::Ellipsoid => HomologyClass::new(kind, 0, 0),
        QuadricKind::Hyperboloid => HomologyClass::new(kind, a, b),
        QuadricKind::Cone => HomologyClass::new(kind, a, 0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_normal_forms() {
        for k in [QuadricKind::Ellipsoid, QuadricKind::Hyperboloid, QuadricKind::Cone] {
            let q = Quadric::normal(k);
            assert_eq!(q.kind, k);
            assert!(q.normalizer_residual() < 1e-12);
        }
        let mut m = QuadricKind::Ellipsoid.normal_form();
        m[3][3] = 1.0;
        assert!(matches!(classify_quadric(&m), Err(Error::NotASurface(_))));
        let neg = [[-1.0, 0.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0, 0.0, -1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        let q = classify_quadric(&neg).unwrap();
        assert_eq!(q.kind, QuadricKind::Ellipsoid);
        assert!(q.scale < 0.0);
        assert!(q.normalizer_residual() < 1e-12);
    }

    #[test]
    fn charts_land_on_surface() {
        for k in [QuadricKind::Ellipsoid, QuadricKind::Hyperboloid, QuadricKind::Cone] {
            let c = Chart::new(k);
            let (v0, v1) = c.v_range();
            for i in 0..40 {
                for j in 1..40 {
                    let u = TAU * i as f64 / 40.0;
                    let v = v0 + (v1 - v0) * j as f64 / 40.0;
                    let y = c.map(u, v);
                    assert!(normal_value(k, &y).abs() < 1e-12);
                    assert!(c.roundtrip_error(&y) < 1e-10, "{k:?} {u} {v}");
                }
            }
        }
    }

    #[test]
    fn hyperboloid_chart_loops_are_lines_of_classes_a_and_b() {
        let c = Chart::new(QuadricKind::Hyperboloid);
        let v0 = 0.7;
        let pts: Vec<[f64; 4]> = (0..5).map(|i| c.map(0.3 + i as f64, v0)).collect();
        let m = Matrix::from_rows(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>());
        assert_eq!(crate::algebra::linalg::rank(&m, 1e-10), 2);
        let path: Vec<(f64, f64)> = (0..100).map(|i| ((TAU * i as f64 / 100.0), v0)).collect();
        assert_eq!(
            loop_class(&path, QuadricKind::Hyperboloid).unwrap(),
            HomologyClass::new(QuadricKind::Hyperboloid, 1, 0)
        );
    }

    #[test]
    fn cone_apex_at_boundary() {
        let c = Chart::new(QuadricKind::Cone);
        for i in 0..8 {
            let y = c.map(i as f64, PI / 2.0);
            assert!(crate::algebra::linalg::proj_dist(&y, &[0.0, 0.0, 0.0, 1.0]) < 1e-12);
        }
    }

    #[test]
    fn pairing_examples() {
        let h = QuadricKind::Hyperboloid;
        let amb = HomologyClass::new(h, 1, -1);
        assert_eq!(homology_pairing(&amb, &HomologyClass::new(h, 3, 1)).unwrap(), 4);
        assert_eq!(homology_pairing(&amb, &HomologyClass::new(h, 3, 3)).unwrap(), 6);
        assert_eq!(homology_pairing(&amb, &amb).unwrap(), 0);
        assert!(homology_pairing(&amb, &HomologyClass::new(QuadricKind::Cone, 1, 0)).is_err());
    }

    #[test]
    fn rulings_by_kind() {
        let e = Quadric::normal(QuadricKind::Ellipsoid);
        assert_eq!(e.rulings(&[1.0, 0.0, 0.0, 1.0]).unwrap(), Rulings::Lines(Vec::new()));
        let h = Quadric::normal(QuadricKind::Hyperboloid);
        let q = h.form();
        match h.rulings(&[1.0, 0.0, 1.0, 0.0]).unwrap() {
            Rulings::Lines(ls) => {
                assert_eq!(ls.len(), 2);
                for l in ls {
                    for k in 0..5 {
                        assert!(q.eval(&l.point(0.4 * k as f64)).abs() < 1e-12);
                    }
                }
            }
            _ => panic!(),
        }
        let c = Quadric::normal(QuadricKind::Cone);
        match c.rulings(&[0.6, 0.8, 1.0, 0.3]).unwrap() {
            Rulings::Lines(ls) => {
                assert_eq!(ls.len(), 1);
                assert!(ls[0].distance(&[0.0, 0.0, 0.0, 1.0]) < 1e-12);
            }
            _ => panic!(),
        }
        assert_eq!(c.rulings(&[0.0, 0.0, 0.0, 1.0]).unwrap(), Rulings::AllGenerators);
        assert!(e.rulings(&[1.0, 1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn plane_sections_lie_on_both() {
        let h = Quadric::normal(QuadricKind::Hyperboloid);
        let plane = [0.0, 0.0, 1.0, -0.4];
        let loops = h.plane_section(&plane, 64).unwrap();
        assert_eq!(loops.len(), 1);
        for p in &loops[0] {
            assert!(h.residual(p) < 1e-12);
            assert!((0..4).map(|i| plane[i] * p[i]).sum::<f64>().abs() < 1e-12);
        }
        // tangent plane at (1,0,1,0) gives two lines
        let t = [1.0, 0.0, -1.0, 0.0];
        assert_eq!(h.plane_section(&t, 32).unwrap().len(), 2);
        let e = Quadric::normal(QuadricKind::Ellipsoid);
        assert!(e.plane_section(&[0.0, 0.0, 0.0, 1.0], 16).unwrap().is_empty());
    }
}
