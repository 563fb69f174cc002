//! Construction of plane and quadric pencils.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::solve::intersect;
use super::{im_after_normalizing, Divisor, DivisorPoint, Pencil, PencilKind};
use crate::algebra::form::monomials;
use crate::algebra::linalg::{mat4_mul_cvec, null_space, proj_dist_c, rank, Matrix};
use crate::algebra::{c64, MultiForm, UniPoly, C64};
use crate::curve::SpaceSextic;
use crate::error::{invalid, Error, Result};
use crate::quadric::{Quadric, RealLine};

/// Base locus requested for a pencil of planes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum PlaneBase {
    Line {
        line: RealLine,
    },
    PointPair {
        p: [f64; 4],
        q: [f64; 4],
    },
    /// A non-real curve point together with its conjugate.
    ConjugatePair {
        p: DivisorPoint,
    },
}

const ON_CURVE_TOL: f64 = 1e-7;

fn scaled_abs(f: &MultiForm, x: &[f64; 4]) -> f64 {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    f.eval(x).abs() / (f.max_abs() * n.powi(f.degree as i32))
}

fn check_on_curve(c: &SpaceSextic, x: &[f64; 4]) -> Result<()> {
    let q = c.quadric.form();
    if scaled_abs(&q, x) > ON_CURVE_TOL || scaled_abs(&c.cubic, x) > ON_CURVE_TOL {
        return Err(invalid(format!("point {x:?} is not on the curve")));
    }
    Ok(())
}

fn check_on_curve_c(c: &SpaceSextic, z: &[C64; 4]) -> Result<()> {
    let s = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let q = c.quadric.form();
    let rq = q.eval(z).norm() / (q.max_abs() * s * s);
    let rk = c.cubic.eval(z).norm() / (c.cubic.max_abs() * s * s * s);
    if rq > ON_CURVE_TOL || rk > ON_CURVE_TOL {
        return Err(invalid("point is not on the curve"));
    }
    Ok(())
}

/// Whether a real line lies on the quadric.
pub(crate) fn line_in_quadric(q: &Quadric, line: &RealLine) -> bool {
    let f = q.form();
    (0..5).all(|k| scaled_abs(&f, &line.point(0.37 + 0.61 * k as f64)) < 1e-9)
}

/// Points of C on a line: roots of K along the line when it lies on X,
/// otherwise the points of L ∩ X where K vanishes.
fn line_base(c: &SpaceSextic, line: &RealLine) -> Result<Vec<DivisorPoint>> {
    let gamma: [UniPoly<f64>; 4] = [0, 1, 2, 3].map(|i| UniPoly::new(vec![line.p[i], line.q[i]]));
    let point = |t: C64| [0, 1, 2, 3].map(|i| c64(line.p[i], 0.0) + t * line.q[i]);
    let mut out = Vec::new();
    let on_x = line_in_quadric(&c.quadric, line);
    let roots =
        if on_x { c.cubic.compose_poly(&gamma).roots()? } else { c.quadric.form().compose_poly(&gamma).roots()? };
    for t in roots {
        let z = point(t);
        if on_x || check_on_curve_c(c, &z).is_ok() {
            out.push(DivisorPoint::complex(&z));
        }
    }
    // a root at t = ∞ is the point q itself
    let deg = if on_x { 3 } else { 2 };
    if out.len() < deg && (on_x || check_on_curve(c, &line.q).is_ok()) && out.len() + 1 == deg {
        out.push(DivisorPoint::real(line.q));
    }
    Ok(out)
}

/// Pencil of planes through a real line, a pair of real curve points or a
/// conjugate pair of curve points.
pub fn plane_pencil(c: &SpaceSextic, base: &PlaneBase) -> Result<Pencil> {
    let (line, base_points) = match base {
        PlaneBase::Line { line } => (line.clone(), line_base(c, line)?),
        PlaneBase::PointPair { p, q } => {
            check_on_curve(c, p)?;
            check_on_curve(c, q)?;
            if crate::algebra::linalg::proj_dist(p, q) < 1e-9 {
                return Err(invalid("base points coincide"));
            }
            let line = RealLine::new(*p, *q);
            if line_in_quadric(&c.quadric, &line) {
                return Err(Error::Incidence("the line through the base points lies on the quadric".into()));
            }
            (line, vec![DivisorPoint::real(*p), DivisorPoint::real(*q)])
        }
        PlaneBase::ConjugatePair { p } => {
            let z = p.coords();
            check_on_curve_c(c, &z)?;
            if im_after_normalizing(&z) < 1e-6 {
                return Err(invalid("conjugate-pair base needs a non-real point"));
            }
            // the real line through z and z̄ is spanned by Re z and Im z after
            // rotating the phase so both are independent
            let j = (0..4).max_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm())).unwrap_or(0);
            let w = z.map(|v| v / z[j]);
            let line = RealLine::new(w.map(|v| v.re), w.map(|v| v.im));
            if line_in_quadric(&c.quadric, &line) {
                return Err(Error::Incidence("the line through the conjugate pair lies on the quadric".into()));
            }
            let conj = DivisorPoint::complex(&z.map(|v| v.conj()));
            (line, vec![*p, conj])
        }
    };
    let [a, b] = line.equations();
    let degree =
        6usize.checked_sub(base_points.len()).ok_or_else(|| invalid("base divisor exceeds the curve degree"))?;
    Ok(Pencil {
        kind: PencilKind::PlanePencil,
        s0: MultiForm::linear(a),
        s1: MultiForm::linear(b),
        base: Divisor { points: base_points },
        degree,
    })
}

fn quad_row(y: &[f64; 4]) -> Vec<f64> {
    monomials(2).iter().map(|e| (0..4).map(|i| y[i].powi(e[i] as i32)).product()).collect()
}

fn quad_row_c(y: &[C64; 4]) -> Vec<C64> {
    monomials(2).iter().map(|e| (0..4).fold(c64(1.0, 0.0), |acc, i| acc * y[i].powi(e[i] as i32))).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Removes from `v` its components along the orthonormalized `basis`.
fn orthogonalize(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut out = v.to_vec();
    for b in basis {
        let s = dot(&out, b);
        for (o, bi) in out.iter_mut().zip(b) {
            *o -= s * bi;
        }
    }
    out
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = dot(&v, &v).sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// Pencil of quadric sections with base the residual R = S₀·C − P of five
/// real points P. `s0` (original coordinates) must vanish on P; when absent
/// a quadric through P independent of X is picked.
pub fn quadric_pencil_through(c: &SpaceSextic, p: &[[f64; 4]; 5], s0: Option<&MultiForm>) -> Result<Pencil> {
    let q = &c.quadric;
    for x in p {
        check_on_curve(c, x)?;
    }
    for i in 0..5 {
        for j in i + 1..5 {
            if crate::algebra::linalg::proj_dist(&p[i], &p[j]) < 1e-7 {
                return Err(invalid("points of P must be distinct"));
            }
            if line_in_quadric(q, &RealLine::new(p[i], p[j])) {
                return Err(Error::Incidence(format!(
                    "a line of the quadric passes through p{} and p{}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let (n, k) = c.normalized_equations();
    let ys: Vec<[f64; 4]> = p.iter().map(|x| q.to_normalized(x)).collect();
    let n_vec = unit(n.coeffs.clone());
    let s0n = match s0 {
        Some(s) => {
            if s.degree != 2 {
                return Err(invalid("S0 must be a quadric form"));
            }
            for x in p {
                if scaled_abs(s, x) > ON_CURVE_TOL {
                    return Err(invalid("S0 does not vanish on P"));
                }
            }
            s.compose_linear(&q.inverse).normalized()
        }
        None => {
            let m = Matrix::from_rows(&ys.iter().map(quad_row).collect::<Vec<_>>());
            let ns = null_space(&m, 1e-10);
            let best = ns
                .iter()
                .map(|v| orthogonalize(v, core::slice::from_ref(&n_vec)))
                .max_by(|a, b| dot(a, a).total_cmp(&dot(b, b)))
                .ok_or_else(|| Error::RankDeficient("no quadric through P".into()))?;
            MultiForm::new(2, best)?.normalized()
        }
    };
    let all = intersect(q.kind, &n, &k, &s0n)?;
    residual_pencil(c, &ys, &s0n, all)
}

/// Pencil with base R = S₀·C − P, given S₀ in normalized coordinates, the
/// normalized points of P and the complete intersection S₀·C (12 points).
pub(crate) fn residual_pencil(
    c: &SpaceSextic,
    ys: &[[f64; 4]],
    s0n: &MultiForm,
    mut all: Vec<[C64; 4]>,
) -> Result<Pencil> {
    let q = &c.quadric;
    let n = MultiForm::from_symmetric(&q.kind.normal_form());
    let n_vec = unit(n.coeffs.clone());
    let s0_perp = orthogonalize(&s0n.coeffs, core::slice::from_ref(&n_vec));
    if dot(&s0_perp, &s0_perp).sqrt() < 1e-8 {
        return Err(invalid("S0 restricts to zero on the curve"));
    }
    for y in ys {
        let yc = y.map(|v| c64(v, 0.0));
        let (i, d) = all
            .iter()
            .enumerate()
            .map(|(i, z)| (i, proj_dist_c(z, &yc)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::RankDeficient("empty intersection".into()))?;
        if d > 1e-6 {
            return Err(Error::RankDeficient("a point of P is missing from S0·C; retry with jittered P".into()));
        }
        all.remove(i);
    }
    if all.len() != 12 - ys.len() {
        return Err(Error::RankDeficient("residual divisor has the wrong degree".into()));
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for z in &all {
        let r = quad_row_c(z);
        rows.push(r.iter().map(|v| v.re).collect());
        if im_after_normalizing(z) > 1e-9 {
            rows.push(r.iter().map(|v| v.im).collect());
        }
    }
    let m = Matrix::from_rows(&rows);
    if rank(&m, 1e-8) != all.len() {
        return Err(Error::RankDeficient("R imposes dependent conditions on quadrics; retry with jittered P".into()));
    }
    let ns = null_space(&m, 1e-8);
    // spanned by Q, S0 and one more quadric
    if ns.len() != 3 {
        return Err(Error::RankDeficient(format!("quadrics through R form a space of dimension {}", ns.len())));
    }
    let s0_unit = unit(s0_perp);
    let basis = [n_vec, s0_unit];
    let s1n = ns
        .iter()
        .map(|v| orthogonalize(v, &basis))
        .max_by(|a, b| dot(a, a).total_cmp(&dot(b, b)))
        .ok_or_else(|| Error::RankDeficient("no second quadric through R".into()))?;
    let s1n = MultiForm::new(2, unit(s1n))?;
    let base = Divisor { points: all.iter().map(|z| DivisorPoint::complex(&mat4_mul_cvec(&q.inverse, z))).collect() };
    Ok(Pencil {
        kind: PencilKind::QuadricPencil,
        s0: s0n.compose_linear(&q.normalizer).normalized(),
        s1: s1n.compose_linear(&q.normalizer).normalized(),
        base,
        degree: ys.len(),
    })
}
