//! Space sextics: a quadric X cut by a cubic K, the six model recipes, and
//! smoothness/irreducibility checks.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::algebra::form::MultiForm;
use crate::algebra::linalg::{normalize4, solve, Matrix};
use crate::error::{invalid, Error, Result};
use crate::quadric::{HomologyClass, Quadric, QuadricKind};

/// How a model curve was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: QuadricKind,
    pub r: usize,
    pub l: usize,
    pub epsilon: f64,
}

/// The curve X ∩ {K = 0} of degree 6 in projective 3-space.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSextic {
    pub quadric: Quadric,
    pub cubic: MultiForm,
    pub provenance: Option<Provenance>,
}

impl SpaceSextic {
    pub fn new(quadric: Quadric, cubic: MultiForm, provenance: Option<Provenance>) -> Result<Self> {
        if cubic.degree != 3 {
            return Err(invalid("the second equation must be a cubic form"));
        }
        if cubic.max_abs() == 0.0 {
            return Err(invalid("zero cubic"));
        }
        Ok(SpaceSextic { quadric, cubic, provenance })
    }

    /// The cubic in normalized coordinates, scaled to unit max coefficient.
    pub fn normalized_cubic(&self) -> MultiForm {
        self.cubic.compose_linear(&self.quadric.inverse).normalized()
    }

    /// Equations (N, K) in normalized coordinates.
    pub fn normalized_equations(&self) -> (MultiForm, MultiForm) {
        (MultiForm::from_symmetric(&self.quadric.kind.normal_form()), self.normalized_cubic())
    }
}

/// A model construction: K = base − ε·G with fixed coefficients in
/// normalized coordinates (the quadric is in normal form).
#[derive(Debug, Clone, PartialEq)]
pub struct Recipe {
    pub kind: QuadricKind,
    pub r: usize,
    pub l: usize,
    pub base: MultiForm,
    pub perturbation: MultiForm,
    pub default_epsilon: f64,
    /// What the recipe uses as c₂ (documented numbering convention).
    pub c2_rule: &'static str,
}

/// The six non-maximal rows for which models are built.
pub const MODEL_ROWS: [(QuadricKind, usize, usize); 6] = [
    (QuadricKind::Ellipsoid, 3, 3),
    (QuadricKind::Cone, 3, 0),
    (QuadricKind::Cone, 3, 2),
    (QuadricKind::Hyperboloid, 1, 0),
    (QuadricKind::Hyperboloid, 3, 0),
    (QuadricKind::Hyperboloid, 3, 2),
];

fn cubic(terms: &[([u8; 4], f64)]) -> MultiForm {
    let mons = crate::algebra::form::monomials(3);
    let mut f = MultiForm::zero(3);
    for (e, c) in terms {
        let k = mons.iter().position(|m| m == e).expect("cubic monomial");
        f.coeffs[k] += c;
    }
    f
}

fn planes(ls: &[[f64; 4]]) -> MultiForm {
    MultiForm::product_of_linear(ls).expect("three planes")
}

/// Plane times a quadric.
fn plane_times(l: [f64; 4], s: &MultiForm) -> MultiForm {
    MultiForm::linear(l).mul(s).expect("degree 3")
}

/// The recipe for a model row. Coordinates are x = y0, y = y1, z = y2,
/// w = y3 in the normal form of the quadric.
pub fn recipe(kind: QuadricKind, r: usize, l: usize) -> Result<Recipe> {
    use QuadricKind::*;
    let g_lat = cubic(&[([0, 0, 0, 3], 1.0), ([1, 1, 0, 1], 0.3), ([3, 0, 0, 0], 0.2)]);
    let rec = match (kind, r, l) {
        (Ellipsoid, 3, 3) => Recipe {
            kind,
            r,
            l,
            // three parallel latitudes z = 0.5, 0, −0.5
            base: planes(&[[0.0, 0.0, 1.0, -0.5], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 1.0, 0.5]]),
            perturbation: g_lat,
            default_epsilon: 0.02,
            c2_rule: "the middle latitude (c1 on top, c3 at the bottom)",
        },
        (Hyperboloid, 3, 0) => Recipe {
            kind,
            r,
            l,
            // horizontal sections z = 0.6, 0, −0.6, each of class a+b
            base: planes(&[[0.0, 0.0, 1.0, -0.6], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 1.0, 0.6]]),
            perturbation: g_lat,
            default_epsilon: 0.02,
            c2_rule: "the middle horizontal section",
        },
        (Hyperboloid, 1, 0) => Recipe {
            kind,
            r,
            l,
            // (z − w/2)(z + w/2)(x − 0.3w): two horizontal and one vertical section
            base: planes(&[[0.0, 0.0, 1.0, -0.5], [0.0, 0.0, 1.0, 0.5], [1.0, 0.0, 0.0, -0.3]]),
            perturbation: cubic(&[([1, 1, 1, 0], 1.0)]),
            default_epsilon: 0.05,
            c2_rule: "single component",
        },
        (Hyperboloid, 3, 2) => {
            // thin cylinder around the line through the origin with direction
            // (1, 0, k); it pierces X near (±1.25, 0, ±0.75)
            let k = 0.6;
            let rho = 0.15;
            let n = 1.0 + k * k;
            let cyl = MultiForm::from_symmetric(&[
                [1.0 - 1.0 / n, 0.0, -k / n, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [-k / n, 0.0, 1.0 - k * k / n, 0.0],
                [0.0, 0.0, 0.0, -rho * rho],
            ]);
            Recipe {
                kind,
                r,
                l,
                base: plane_times([0.0, 0.0, 1.0, 0.0], &cyl),
                perturbation: cubic(&[([0, 0, 0, 3], 1.0), ([1, 1, 0, 1], 0.4), ([0, 3, 0, 0], 0.2)]),
                default_epsilon: 0.004,
                c2_rule: "the waist section z = 0 (the ovals come from the cylinder)",
            }
        }
        (Cone, 3, 0) => Recipe {
            kind,
            r,
            l,
            // sections w = c z + s x, i.e. graphs v = c + s cos u in the chart slope
            base: planes(&[[-0.3, 0.0, -0.8, 1.0], [0.25, 0.0, 0.0, 1.0], [-0.2, 0.0, 0.8, 1.0]]),
            perturbation: cubic(&[([0, 0, 3, 0], 1.0), ([1, 1, 1, 0], 0.2), ([0, 3, 0, 0], 0.1)]),
            default_epsilon: 0.02,
            c2_rule: "the middle winding section",
        },
        (Cone, 3, 2) => {
            // plane z = w and a thin cylinder around the vertical line x = 0.3w, y = 0
            let rho = 0.1;
            let cyl = MultiForm::from_symmetric(&[
                [1.0, 0.0, 0.0, -0.3],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 0.0],
                [-0.3, 0.0, 0.0, 0.09 - rho * rho],
            ]);
            Recipe {
                kind,
                r,
                l,
                base: plane_times([0.0, 0.0, 1.0, -1.0], &cyl),
                perturbation: cubic(&[([0, 0, 0, 3], 1.0), ([1, 1, 1, 0], 0.5), ([0, 3, 0, 0], 0.3)]),
                default_epsilon: 0.002,
                c2_rule: "the plane section z = w (the ovals come from the cylinder)",
            }
        }
        _ => {
            return Err(invalid(format!(
                "no model for ({}, r={r}, l={l}); supported rows are the six non-maximal ones",
                kind.name()
            )))
        }
    };
    Ok(rec)
}

impl Recipe {
    pub fn cubic(&self, epsilon: f64) -> MultiForm {
        self.base.axpy(-epsilon, &self.perturbation).expect("same degree")
    }

    pub fn sextic(&self, epsilon: f64) -> SpaceSextic {
        SpaceSextic {
            quadric: Quadric::normal(self.kind),
            cubic: self.cubic(epsilon),
            provenance: Some(Provenance { kind: self.kind, r: self.r, l: self.l, epsilon }),
        }
    }
}

/// Record of a passed smoothness search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessCertificate {
    pub grid: usize,
    pub tol: f64,
    pub seeds: usize,
    /// Smallest singularity residual reached from any seed.
    pub min_residual: f64,
}

/// Singularity residual system in normalized coordinates: unknowns (y, λ),
/// equations N, K, ∇K − λ∇N and |y|² − 1.
fn singular_system(n: &MultiForm, k: &MultiForm, x: &[f64; 5]) -> [f64; 7] {
    let y = [x[0], x[1], x[2], x[3]];
    let gn = n.gradient(&y);
    let gk = k.gradient(&y);
    [
        n.eval(&y),
        k.eval(&y),
        gk[0] - x[4] * gn[0],
        gk[1] - x[4] * gn[1],
        gk[2] - x[4] * gn[2],
        gk[3] - x[4] * gn[3],
        y.iter().map(|a| a * a).sum::<f64>() - 1.0,
    ]
}

fn norm7(v: &[f64; 7]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Gauss–Newton on the singularity system from a seed; returns the final
/// point and residual.
fn singular_newton(n: &MultiForm, k: &MultiForm, y0: [f64; 4]) -> ([f64; 4], f64) {
    let y0 = normalize4(&y0);
    let gn = n.gradient(&y0);
    let gk = k.gradient(&y0);
    let nn: f64 = gn.iter().map(|a| a * a).sum();
    let lam = if nn > 0.0 { (0..4).map(|i| gn[i] * gk[i]).sum::<f64>() / nn } else { 0.0 };
    let mut x = [y0[0], y0[1], y0[2], y0[3], lam];
    let mut f = singular_system(n, k, &x);
    let mut res = norm7(&f);
    for _ in 0..40 {
        let h = 1e-7;
        let mut jac = Matrix::zeros(7, 5);
        for j in 0..5 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let fp = singular_system(n, k, &xp);
            let fm = singular_system(n, k, &xm);
            for i in 0..7 {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        // normal equations with a little damping
        let jt = jac.transpose();
        let mut a = jt.mul(&jac);
        for i in 0..5 {
            a[(i, i)] += 1e-12;
        }
        let b: Vec<f64> = jt.mul_vec(&f).iter().map(|v| -v).collect();
        let Ok(dx) = solve(&a, &b) else { break };
        let mut xn = x;
        for i in 0..5 {
            xn[i] += dx[i];
        }
        let fnew = singular_system(n, k, &xn);
        let rn = norm7(&fnew);
        if rn >= res {
            break;
        }
        x = xn;
        f = fnew;
        res = rn;
        if res < 1e-14 {
            break;
        }
    }
    ([x[0], x[1], x[2], x[3]], res)
}

/// Seeds: sign changes of K along edges of a chart grid.
pub(crate) fn chart_sign_change_seeds(quadric: &Quadric, k: &MultiForm, grid: usize) -> Vec<[f64; 4]> {
    let chart = quadric.chart();
    let (v0, v1) = chart.v_range();
    let margin = if chart.v_periodic() { 0.0 } else { 1e-3 };
    let nu = 2 * grid;
    let nv = grid;
    let uu = |i: usize| TAU * i as f64 / nu as f64;
    let vv = |j: usize| v0 + margin + (v1 - v0 - 2.0 * margin) * j as f64 / nv as f64;
    let mut vals = Vec::with_capacity((nu + 1) * (nv + 1));
    for i in 0..=nu {
        for j in 0..=nv {
            vals.push(k.eval(&chart.map(uu(i), vv(j))));
        }
    }
    let at = |i: usize, j: usize| vals[i * (nv + 1) + j];
    let mut seeds = Vec::new();
    for i in 0..=nu {
        for j in 0..=nv {
            let a = at(i, j);
            if i < nu {
                let b = at(i + 1, j);
                if a * b < 0.0 {
                    let t = a / (a - b);
                    seeds.push(chart.map(uu(i) + t * (uu(i + 1) - uu(i)), vv(j)));
                }
            }
            if j < nv {
                let b = at(i, j + 1);
                if a * b < 0.0 {
                    let t = a / (a - b);
                    seeds.push(chart.map(uu(i), vv(j) + t * (vv(j + 1) - vv(j))));
                }
            }
        }
    }
    seeds
}

/// Searches for real singular points of C by Newton refinement from chart
/// grid seeds. A point with singularity residual below `tol` is reported as
/// an error carrying its (original) coordinates. Also rejects a cubic that
/// vanishes on the whole quadric.
pub fn validate_smoothness(c: &SpaceSextic, grid: usize, tol: f64) -> Result<SmoothnessCertificate> {
    let (n, k) = c.normalized_equations();
    let chart = c.quadric.chart();
    let (v0, v1) = chart.v_range();
    let mut kmax: f64 = 0.0;
    for i in 0..24 {
        for j in 1..24 {
            let y = chart.map(TAU * i as f64 / 24.0, v0 + (v1 - v0) * j as f64 / 24.0);
            kmax = kmax.max(k.eval(&normalize4(&y)).abs());
        }
    }
    if kmax < 1e-12 {
        return Err(Error::Reducible("the cubic vanishes on the quadric (C is not a curve)".into()));
    }
    let seeds = chart_sign_change_seeds(&c.quadric, &k, grid);
    let mut min_res = f64::INFINITY;
    for s in &seeds {
        let (y, res) = singular_newton(&n, &k, *s);
        min_res = min_res.min(res);
        if res < tol {
            return Err(Error::Singular { point: c.quadric.from_normalized(&y) });
        }
    }
    Ok(SmoothnessCertificate { grid, tol, seeds: seeds.len(), min_residual: min_res })
}

/// Total class of ℝC expected for a model row, where l counts ovals. The
/// hyperboloid rows are also found labelled (3,3), (3,1) and (1,1), with the
/// second index counting non-oval components; both labellings give
/// (3,0) → 3a+3b, (3,2) → a+b and (1,0) → 3a+b.
pub fn expected_total_class(kind: QuadricKind, r: usize, l: usize) -> Result<HomologyClass> {
    use QuadricKind::*;
    let (a, b) = match (kind, r, l) {
        (Ellipsoid, 3, 3) => (0, 0),
        (Cone, 3, 0) => (3, 0),
        (Cone, 3, 2) => (1, 0),
        (Hyperboloid, 1, 0) => (3, 1),
        (Hyperboloid, 3, 0) => (3, 3),
        (Hyperboloid, 3, 2) => (1, 1),
        _ => return Err(invalid(format!("no model row {} {r}/{l}", kind.name()))),
    };
    Ok(HomologyClass::new(kind, a, b))
}

/// The recipe model of a row at perturbation ε, checked for smoothness and
/// for the expected numbers of components and ovals.
pub fn model_sextic(kind: QuadricKind, r: usize, l: usize, epsilon: f64) -> Result<SpaceSextic> {
    let rec = recipe(kind, r, l)?;
    if epsilon == 0.0 {
        return Err(invalid("ε = 0 gives the singular union of the base sections"));
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(invalid(format!("ε must be positive, got {epsilon}")));
    }
    let c = rec.sextic(epsilon);
    validate_smoothness(&c, 64, 1e-9)?;
    let locus = crate::topology::trace_real_locus(&c, &crate::topology::TraceParams::default())?;
    if (locus.r, locus.l) != (r, l) {
        return Err(invalid(format!(
            "ε = {epsilon} is too large: the curve has {} components and {} ovals instead of {r} and {l}",
            locus.r, locus.l
        )));
    }
    Ok(c)
}
