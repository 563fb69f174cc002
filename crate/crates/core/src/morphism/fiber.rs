//! Fibers of pencils, separation certificates, interlacing and speciality.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::solve::intersect;
use super::{im_after_normalizing, real_part_normalized, DegreeVector, Divisor, Pencil};
use crate::algebra::linalg::{mat4_mul_cvec, normalize4, null_space, proj_dist, proj_dist_c, rank, Matrix};
use crate::algebra::C64;
use crate::curve::SpaceSextic;
use crate::error::{invalid, numerical, Error, Result};
use crate::quadric::wrap_pi;
use crate::topology::RealLocus;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyParams {
    pub n_samples: usize,
    /// Imaginary-part threshold for real points (largest coordinate 1).
    pub tol_im: f64,
}

impl Default for CertifyParams {
    fn default() -> Self {
        CertifyParams { n_samples: 200, tol_im: 1e-7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberPoint {
    /// Original coordinates, scaled so the largest coordinate is 1.
    pub re: [f64; 4],
    pub im: [f64; 4],
    pub real: bool,
    pub component: Option<usize>,
    pub arc: Option<f64>,
}

/// Fiber over [cos θ : sin θ].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fiber {
    pub theta: f64,
    pub points: Vec<FiberPoint>,
    pub all_real: bool,
    /// Largest |Im| among points classified real.
    pub max_im_real: f64,
    /// Smallest |Im| among non-real points (infinite if none).
    #[serde(with = "crate::inf_as_null")]
    pub min_im_pair: f64,
}

impl Fiber {
    pub fn real_points(&self) -> impl Iterator<Item = &FiberPoint> {
        self.points.iter().filter(|p| p.real)
    }

    /// Number of real points on each of `r` components.
    pub fn counts(&self, r: usize) -> Vec<u32> {
        let mut out = vec![0; r];
        for p in self.real_points() {
            if let Some(c) = p.component {
                out[c] += 1;
            }
        }
        out
    }

    pub fn real_coords(&self) -> Vec<[f64; 4]> {
        self.real_points().map(|p| p.re).collect()
    }
}

/// Sample parameters θₖ = π(k + ½)/n, spread uniformly over the real
/// projective line.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| PI * (k as f64 + 0.5) / n as f64).collect()
}

fn base_normalized(c: &SpaceSextic, base: &Divisor) -> Vec<([C64; 4], u32)> {
    base.points.iter().map(|p| (mat4_mul_cvec(&c.quadric.normalizer, &p.coords()), p.mult)).collect()
}

/// Fiber of the pencil over [cos θ : sin θ]. Real points are located on
/// `locus` when given.
pub fn fiber_at(c: &SpaceSextic, f: &Pencil, locus: Option<&RealLocus>, theta: f64, tol_im: f64) -> Result<Fiber> {
    let (n, k) = c.normalized_equations();
    let m = f.member(theta).compose_linear(&c.quadric.inverse).normalized();
    let mut pts = intersect(c.quadric.kind, &n, &k, &m)?;
    for (b, mult) in base_normalized(c, &f.base) {
        for _ in 0..mult {
            let (i, d) = pts
                .iter()
                .enumerate()
                .map(|(i, z)| (i, proj_dist_c(z, &b)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .ok_or_else(|| numerical("empty intersection"))?;
            if d > 1e-6 {
                return Err(numerical(format!("base point not found in the member at θ = {theta}")));
            }
            pts.remove(i);
        }
    }
    if pts.len() != f.degree {
        return Err(numerical(format!("fiber has {} points, expected {}", pts.len(), f.degree)));
    }
    let mut points = Vec::with_capacity(pts.len());
    let mut max_im_real: f64 = 0.0;
    let mut min_im_pair = f64::INFINITY;
    for z in &pts {
        let im = im_after_normalizing(z);
        if im >= tol_im && im < 10.0 * tol_im {
            return Err(Error::Ambiguous(format!("fiber point at θ = {theta} has |Im| = {im:e}; increase precision")));
        }
        let x = mat4_mul_cvec(&c.quadric.inverse, z);
        let j = (0..4).max_by(|&a, &b| x[a].norm().total_cmp(&x[b].norm())).unwrap_or(0);
        let xs = x.map(|v| v / x[j]);
        if im < tol_im {
            max_im_real = max_im_real.max(im);
            let (component, arc) = match locus {
                Some(l) => {
                    let pos = l.locate_normalized(&normalize4(&real_part_normalized(z)));
                    if pos.distance > 3.0 * l.params.step {
                        return Err(numerical("real fiber point far from the traced locus"));
                    }
                    (Some(pos.component), Some(pos.arc))
                }
                None => (None, None),
            };
            points.push(FiberPoint { re: xs.map(|v| v.re), im: [0.0; 4], real: true, component, arc });
        } else {
            min_im_pair = min_im_pair.min(im);
            points.push(FiberPoint {
                re: xs.map(|v| v.re),
                im: xs.map(|v| v.im),
                real: false,
                component: None,
                arc: None,
            });
        }
    }
    let all_real = points.iter().all(|p| p.real);
    Ok(Fiber { theta, points, all_real, max_im_real, min_im_pair })
}

/// Signed covering degree of the pencil on each traced loop, from the
/// winding of 2·atan2(S₁, S₀) along the loop's traversal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindingData {
    pub winding: Vec<i32>,
    /// Largest jump of the doubled angle between consecutive samples.
    pub max_jump: f64,
    /// Whether the angle is monotone along every loop.
    pub monotone: bool,
}

pub fn fiber_winding(c: &SpaceSextic, f: &Pencil, locus: &RealLocus) -> WindingData {
    let s0 = f.s0.compose_linear(&c.quadric.inverse);
    let s1 = f.s1.compose_linear(&c.quadric.inverse);
    let scale = s0.max_abs().max(s1.max_abs());
    // samples on the base locus carry no angle and are skipped
    let angle = |y: &[f64; 4]| {
        let (a, b) = (s0.eval(y), s1.eval(y));
        (a.abs().max(b.abs()) > 1e-9 * scale).then(|| 2.0 * b.atan2(a))
    };
    let mut winding = Vec::with_capacity(locus.loops.len());
    let mut max_jump: f64 = 0.0;
    let mut monotone = true;
    for lp in &locus.loops {
        let angles: Vec<f64> = lp.samples.iter().filter_map(angle).collect();
        let m = angles.len();
        let mut total = 0.0;
        let mut signs = [0usize; 2];
        for i in 0..m {
            let d = wrap_pi(angles[(i + 1) % m] - angles[i]);
            max_jump = max_jump.max(d.abs());
            signs[(d < 0.0) as usize] += 1;
            total += d;
        }
        if signs[0] > 0 && signs[1] > 0 {
            monotone = false;
        }
        winding.push((total / TAU).round() as i32);
    }
    WindingData { winding, max_jump, monotone }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatingCertificate {
    pub degree_vector: DegreeVector,
    pub n_samples: usize,
    pub max_im_real: f64,
    /// Smallest projective distance between two points of one fiber.
    pub min_separation: f64,
    pub winding: Vec<i32>,
    pub monotone: bool,
}

/// Certifies that `f` is separating by dense fiber sampling: every sampled
/// fiber must be all-real with the same per-component counts, and the
/// covering degrees from the winding of f along ℝC must agree with those
/// counts. This is a numerical certificate, not a proof.
pub fn separating_certificate(
    c: &SpaceSextic,
    f: &Pencil,
    locus: &RealLocus,
    params: &CertifyParams,
) -> Result<SeparatingCertificate> {
    if params.n_samples == 0 {
        return Err(invalid("n_samples must be positive"));
    }
    let w = fiber_winding(c, f, locus);
    let mut counts: Option<Vec<u32>> = None;
    let mut max_im_real: f64 = 0.0;
    let mut min_sep = f64::INFINITY;
    for theta in theta_grid(params.n_samples) {
        let fib = fiber_at(c, f, Some(locus), theta, params.tol_im)?;
        if !fib.all_real {
            return Err(Error::NotSeparating { witness: theta });
        }
        max_im_real = max_im_real.max(fib.max_im_real);
        let pts = fib.real_coords();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                min_sep = min_sep.min(proj_dist(&pts[i], &pts[j]));
            }
        }
        let cnt = fib.counts(locus.r);
        match &counts {
            None => counts = Some(cnt),
            Some(prev) if *prev != cnt => {
                return Err(Error::Ambiguous(format!("per-component counts change at θ = {theta}")));
            }
            _ => {}
        }
    }
    let counts = counts.unwrap_or_default();
    let wabs: Vec<u32> = w.winding.iter().map(|d| d.unsigned_abs()).collect();
    if wabs != counts {
        return Err(Error::Ambiguous(format!("fiber counts {counts:?} disagree with winding {:?}", w.winding)));
    }
    Ok(SeparatingCertificate {
        degree_vector: DegreeVector(counts),
        n_samples: params.n_samples,
        max_im_real,
        min_separation: min_sep,
        winding: w.winding,
        monotone: w.monotone,
    })
}

/// Whether two disjoint all-real fibers interlace on every component.
pub fn interlacing_check(p: &Fiber, q: &Fiber, locus: &RealLocus) -> Result<bool> {
    if !p.all_real || !q.all_real {
        return Err(invalid("interlacing needs all-real fibers"));
    }
    let marks = |fib: &Fiber| -> Result<Vec<(usize, f64)>> {
        fib.real_points()
            .map(|pt| match (pt.component, pt.arc) {
                (Some(c), Some(a)) => Ok((c, a)),
                _ => Err(invalid("fiber points lack locus positions")),
            })
            .collect()
    };
    let loops: Vec<(usize, f64)> = locus.loops.iter().map(|lp| (lp.component, lp.length)).collect();
    interlace(&marks(p)?, &marks(q)?, &loops)
}

/// Interlacing of two point sets given as (component, arc) pairs on loops
/// given as (component, length) pairs.
pub(crate) fn interlace(p: &[(usize, f64)], q: &[(usize, f64)], loops: &[(usize, f64)]) -> Result<bool> {
    for &(component, length) in loops {
        let mut marks: Vec<(f64, u8)> = Vec::new();
        for (tag, pts) in [(0u8, p), (1u8, q)] {
            marks.extend(pts.iter().filter(|m| m.0 == component).map(|m| (m.1, tag)));
        }
        marks.sort_by(|a, b| a.0.total_cmp(&b.0));
        for i in 0..marks.len() {
            let (a, b) = (marks[i], marks[(i + 1) % marks.len()]);
            let gap = if b.0 >= a.0 { b.0 - a.0 } else { b.0 - a.0 + length };
            if marks.len() > 1 && a.1 != b.1 && gap.min(length - gap) < 1e-9 * length {
                return Err(invalid("fibers share a point"));
            }
        }
        let np = marks.iter().filter(|m| m.1 == 0).count();
        if np != marks.len() - np {
            return Ok(false);
        }
        if (0..marks.len()).any(|i| marks[i].1 == marks[(i + 1) % marks.len()].1) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialityData {
    pub special: bool,
    pub rank: usize,
    /// A plane through all points when special.
    pub plane: Option<[f64; 4]>,
}

/// A divisor on the canonical sextic is special iff some plane contains all
/// of its points, i.e. its coordinate matrix has rank at most 3.
pub fn is_special_divisor(d: &Divisor) -> Result<SpecialityData> {
    if d.degree() > 6 {
        return Err(invalid("speciality test supports degree at most 6"));
    }
    let mut rows = Vec::new();
    for p in &d.points {
        let z = p.coords();
        let j = (0..4).max_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm())).unwrap_or(0);
        let w = z.map(|v| v / z[j]);
        rows.push(w.iter().map(|v| v.re).collect::<Vec<_>>());
        if im_after_normalizing(&z) > 1e-9 {
            rows.push(w.iter().map(|v| v.im).collect());
        }
    }
    if rows.is_empty() {
        return Ok(SpecialityData { special: true, rank: 0, plane: None });
    }
    let m = Matrix::from_rows(&rows);
    let r = rank(&m, 1e-8);
    let plane = (r <= 3).then(|| {
        let ns = null_space(&m, 1e-8);
        [ns[0][0], ns[0][1], ns[0][2], ns[0][3]]
    });
    Ok(SpecialityData { special: r <= 3, rank: r, plane })
}
