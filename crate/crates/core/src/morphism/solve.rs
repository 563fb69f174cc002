//! Complex intersection X ∩ {K = 0} ∩ {M = 0} for a form M of degree 1 or 2,
//! in normalized coordinates.
//!
//! X is parametrized rationally by (α, β): a Segre map for the smooth kinds
//! and the weighted map (a, β) ↦ ((a₀²−a₁²)/2, a₀a₁, (a₀²+a₁²)/2, β) for the
//! cone, with a = U(1, α) and b = V(1, β) for fixed generic rotations. In
//! both cases a point is affine in β for fixed α, so K and M become
//! polynomials of degree 3 and e in β; their resultant in β is a polynomial
//! of degree 6e in α, recovered by sampling on the unit circle.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::algebra::linalg::{det, proj_dist_c, solve, Matrix};
use crate::algebra::{c64, MultiForm, UniPoly, C64};
use crate::error::{numerical, Result};
use crate::quadric::QuadricKind;

/// Rotation angles (for a and b) tried in turn; the first whose α roots
/// stay inside |α| ≤ ALPHA_MAX is used.
const ROTATIONS: [(f64, f64); 5] =
    [(0.371_9, 1.117_3), (1.942_7, 2.611_9), (0.981_1, 0.403_7), (2.620_3, 1.733_1), (1.411_7, 0.151_3)];
const ALPHA_MAX: f64 = 8.0;
const SAMPLES: usize = 32;

fn rot(t: f64) -> [[f64; 2]; 2] {
    let (s, c) = t.sin_cos();
    [[c, -s], [s, c]]
}

fn apply(m: &[[f64; 2]; 2], x0: C64, x1: C64) -> (C64, C64) {
    (x0 * m[0][0] + x1 * m[0][1], x0 * m[1][0] + x1 * m[1][1])
}

struct Param {
    kind: QuadricKind,
    u: [[f64; 2]; 2],
    v: [[f64; 2]; 2],
}

impl Param {
    fn new(kind: QuadricKind, angles: (f64, f64)) -> Self {
        Param { kind, u: rot(angles.0), v: rot(angles.1) }
    }

    fn segre(&self, a: (C64, C64), b: (C64, C64)) -> [C64; 4] {
        let z = [a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1];
        let h = 0.5;
        match self.kind {
            QuadricKind::Hyperboloid => [(z[0] + z[3]) * h, (z[1] - z[2]) * h, (z[0] - z[3]) * h, (z[1] + z[2]) * h],
            _ => [(z[1] + z[2]) * h, (z[1] - z[2]) * c64(0.0, -0.5), (z[0] - z[3]) * h, (z[0] + z[3]) * h],
        }
    }

    /// y(α, β) = y₀ + β·y₁.
    fn affine(&self, alpha: C64) -> ([C64; 4], [C64; 4]) {
        let one = c64(1.0, 0.0);
        let zero = c64(0.0, 0.0);
        let a = apply(&self.u, one, alpha);
        match self.kind {
            QuadricKind::Cone => {
                let y0 = [(a.0 * a.0 - a.1 * a.1) * 0.5, a.0 * a.1, (a.0 * a.0 + a.1 * a.1) * 0.5, zero];
                (y0, [zero, zero, zero, one])
            }
            _ => {
                let b0 = apply(&self.v, one, zero);
                let b1 = apply(&self.v, zero, one);
                (self.segre(a, b0), self.segre(a, b1))
            }
        }
    }
}

/// Coefficients (ascending) of β ↦ f(y₀ + β y₁) for deg f ≤ 3, by a
/// four-point transform.
fn beta_poly(f: &MultiForm, y0: &[C64; 4], y1: &[C64; 4]) -> Vec<C64> {
    let mut vals = [c64(0.0, 0.0); 4];
    for (j, v) in vals.iter_mut().enumerate() {
        let w = C64::from_polar(1.0, TAU * j as f64 / 4.0);
        let y = [y0[0] + w * y1[0], y0[1] + w * y1[1], y0[2] + w * y1[2], y0[3] + w * y1[3]];
        *v = f.eval(&y);
    }
    let mut out = vec![c64(0.0, 0.0); f.degree + 1];
    for (k, o) in out.iter_mut().enumerate() {
        let mut s = c64(0.0, 0.0);
        for (j, v) in vals.iter().enumerate() {
            s += *v * C64::from_polar(1.0, -TAU * (j * k) as f64 / 4.0);
        }
        *o = s * 0.25;
    }
    out
}

fn sylvester(f: &[C64], g: &[C64]) -> C64 {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut s = Matrix::<C64>::zeros(size, size);
    for r in 0..n {
        for (k, &c) in f.iter().rev().enumerate() {
            s[(r, r + k)] = c;
        }
    }
    for r in 0..m {
        for (k, &c) in g.iter().rev().enumerate() {
            s[(n + r, r + k)] = c;
        }
    }
    det(&s)
}

fn max_abs(v: &[C64; 4]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn scaled_residual(forms: &[&MultiForm], y: &[C64; 4]) -> f64 {
    let s = max_abs(y);
    forms.iter().map(|f| f.eval(y).norm() / s.powi(f.degree as i32)).fold(0.0, f64::max)
}

/// Newton refinement of a projective point on {N = K = M = 0}, with the
/// largest coordinate held at 1.
fn refine(forms: &[&MultiForm; 3], y: [C64; 4]) -> Option<[C64; 4]> {
    let j = (0..4).max_by(|&a, &b| y[a].norm().total_cmp(&y[b].norm()))?;
    let mut y = y.map(|z| z / y[j]);
    let free: Vec<usize> = (0..4).filter(|&i| i != j).collect();
    for _ in 0..40 {
        let f: Vec<C64> = forms.iter().map(|g| g.eval(&y)).collect();
        let res = f.iter().fold(0.0, |m, z| m.max(z.norm()));
        if res < 1e-14 {
            break;
        }
        let mut jac = Matrix::<C64>::zeros(3, 3);
        for (r, g) in forms.iter().enumerate() {
            let gr = g.gradient(&y);
            for (c, &i) in free.iter().enumerate() {
                jac[(r, c)] = gr[i];
            }
        }
        let rhs: Vec<C64> = f.iter().map(|z| -*z).collect();
        let d = solve(&jac, &rhs).ok()?;
        let step = d.iter().fold(0.0, |m, z| m.max(z.norm()));
        for (c, &i) in free.iter().enumerate() {
            y[i] += d[c];
        }
        if !y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) || max_abs(&y) > 1e8 {
            return None;
        }
        if step < 1e-15 {
            break;
        }
    }
    let k = (0..4).max_by(|&a, &b| y[a].norm().total_cmp(&y[b].norm()))?;
    let y = y.map(|z| z / y[k]);
    (scaled_residual(forms, &y) < 1e-9).then_some(y)
}

/// All 6e intersection points (with multiplicity, as projective points
/// scaled so the largest coordinate is 1). `n` and `k` are the normalized
/// surface and cubic; `m` has degree 1 or 2.
pub(crate) fn intersect(kind: QuadricKind, n: &MultiForm, k: &MultiForm, m: &MultiForm) -> Result<Vec<[C64; 4]>> {
    let mut best: Option<(f64, Vec<[C64; 4]>)> = None;
    let mut last_err = None;
    for angles in ROTATIONS {
        match intersect_in_chart(&Param::new(kind, angles), n, k, m) {
            Ok((amax, pts)) => {
                if amax <= ALPHA_MAX {
                    return Ok(pts);
                }
                if best.as_ref().map_or(true, |b| amax < b.0) {
                    best = Some((amax, pts));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    match (best, last_err) {
        (Some((_, pts)), _) => Ok(pts),
        (None, Some(e)) => Err(e),
        (None, None) => Err(numerical("no chart succeeded")),
    }
}

/// Intersection in one chart; also returns the largest |α| among the roots.
fn intersect_in_chart(param: &Param, n: &MultiForm, k: &MultiForm, m: &MultiForm) -> Result<(f64, Vec<[C64; 4]>)> {
    let e = m.degree;
    let expected = 6 * e;
    let vals: Vec<C64> = (0..SAMPLES)
        .map(|j| {
            let alpha = C64::from_polar(1.0, TAU * j as f64 / SAMPLES as f64);
            let (y0, y1) = param.affine(alpha);
            sylvester(&beta_poly(k, &y0, &y1), &beta_poly(m, &y0, &y1))
        })
        .collect();
    let coeffs: Vec<C64> = (0..=expected)
        .map(|k| {
            vals.iter()
                .enumerate()
                .fold(c64(0.0, 0.0), |s, (j, v)| s + *v * C64::from_polar(1.0, -TAU * (j * k) as f64 / SAMPLES as f64))
                / SAMPLES as f64
        })
        .collect();
    let res = UniPoly::new(coeffs);
    if res.max_abs() == 0.0 {
        return Err(numerical("resultant vanishes identically: the section shares a component with the curve"));
    }
    let mut alphas = res.roots()?;
    if alphas.len() != expected {
        return Err(numerical("intersection point outside the parametrized chart; change the generic rotation"));
    }
    let amax = alphas.iter().fold(0.0, |m: f64, a| m.max(a.norm()));
    if amax > 1e3 {
        return Err(numerical("intersection point too close to the edge of the chart"));
    }
    alphas.sort_by(|a, b| a.re.total_cmp(&b.re));
    // cluster near-equal α (points sharing a line of the parametrization)
    let mut used = vec![false; alphas.len()];
    let mut points = Vec::with_capacity(expected);
    let forms = [n, k, m];
    for i in 0..alphas.len() {
        if used[i] {
            continue;
        }
        let mut cluster = vec![i];
        used[i] = true;
        for j in i + 1..alphas.len() {
            if !used[j] && (alphas[j] - alphas[i]).norm() < 1e-3 * (1.0 + alphas[i].norm()) {
                used[j] = true;
                cluster.push(j);
            }
        }
        let abar = cluster.iter().fold(c64(0.0, 0.0), |s, &c| s + alphas[c]) / cluster.len() as f64;
        let (y0, y1) = param.affine(abar);
        let mut cands: Vec<[C64; 4]> = Vec::new();
        for f in [k, m] {
            let p = UniPoly::new(beta_poly(f, &y0, &y1));
            if p.max_abs() == 0.0 {
                continue;
            }
            for b in p.roots()? {
                let y = [y0[0] + b * y1[0], y0[1] + b * y1[1], y0[2] + b * y1[2], y0[3] + b * y1[3]];
                if !cands.iter().any(|c| proj_dist_c(c, &y) < 1e-9) {
                    cands.push(y);
                }
            }
        }
        let mut scored: Vec<(f64, [C64; 4])> = cands.into_iter().map(|y| (scaled_residual(&forms, &y), y)).collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0));
        // prefer good candidates that refine to new points; repeat a point
        // only when the intersection is genuinely multiple there
        let mut refined: Vec<[C64; 4]> = Vec::new();
        for (score, y) in &scored {
            if refined.len() == cluster.len() {
                break;
            }
            if *score > 1e-4 && !refined.is_empty() {
                break;
            }
            let Some(z) = refine(&forms, *y) else { continue };
            let dup = points.iter().chain(refined.iter()).any(|w| proj_dist_c(w, &z) < 1e-7);
            if !dup {
                refined.push(z);
            }
        }
        while refined.len() < cluster.len() {
            let best = scored.first().and_then(|(_, y)| refine(&forms, *y));
            refined.push(best.ok_or_else(|| numerical("Newton refinement of an intersection point failed"))?);
        }
        points.extend(refined);
    }
    Ok((amax, points))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parametrization_lies_on_normal_forms() {
        for kind in [QuadricKind::Ellipsoid, QuadricKind::Hyperboloid, QuadricKind::Cone] {
            let p = Param::new(kind, ROTATIONS[0]);
            let n = MultiForm::from_symmetric(&kind.normal_form());
            for t in [0.3, -1.2, 2.5] {
                let (y0, y1) = p.affine(c64(t, 0.4 * t));
                for b in [c64(0.2, 0.1), c64(-3.0, 1.0)] {
                    let y = [y0[0] + b * y1[0], y0[1] + b * y1[1], y0[2] + b * y1[2], y0[3] + b * y1[3]];
                    assert!(n.eval(&y).norm() < 1e-12 * max_abs(&y).powi(2));
                }
            }
        }
    }
}
