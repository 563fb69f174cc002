//! Search for separating quadric pencils. A plane D is tilted about a line
//! ℓ ⊂ D through a real point p of D ∩ C into D′; five distinct real points
//! P of (D ∪ D′) ∩ C leave a residual R = (D·D′)·C − P of degree 7, and the
//! quadrics through R cut out the pencil |P| of degree 5.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use super::sections::{section_points, SectionPoint, SectionPoints};
use super::{Method, Model, Realization, RealizeParams};
use crate::algebra::linalg::{cross4, normalize4, proj_dist};
use crate::algebra::MultiForm;
use crate::error::Result;
use crate::morphism::{
    fiber_at, fiber_winding, is_special_divisor, residual_pencil, separating_certificate, DegreeVector, Divisor,
};
use crate::quadric::plane_basis;

/// Search configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricSearch {
    /// Candidate planes D in normalized coordinates.
    pub planes: Vec<[f64; 4]>,
    /// Directions of the tilt axis ℓ, as angles in the plane D ∩ p⊥, used
    /// when the real section is not a single conic.
    pub axis_angles: Vec<f64>,
}

impl Default for QuadricSearch {
    fn default() -> Self {
        let q = core::f64::consts::FRAC_PI_4;
        QuadricSearch { planes: Vec::new(), axis_angles: alloc::vec![0.0, q, 2.0 * q, 3.0 * q] }
    }
}

/// Five-element subsets of 0..n, those containing 0 first.
fn subsets5(n: usize) -> Vec<[usize; 5]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for e in d + 1..n {
                        out.push([a, b, c, d, e]);
                    }
                }
            }
        }
    }
    out
}

/// Directions v ⊂ D, orthogonal to p, of candidate tilt axes through p.
/// On a conic section the axis runs from p to the middle of each arc
/// between consecutive real points of D ∩ C, so every order of crossings
/// of D′ with ℝD is tried; otherwise fixed angles are used.
fn axis_directions(d: &[f64; 4], p: &[f64; 4], sec: &SectionPoints, angles: &[f64]) -> Result<Vec<[f64; 4]>> {
    let orth = |q: &[f64; 4]| {
        let s: f64 = (0..4).map(|k| q[k] * p[k]).sum();
        let v = [0, 1, 2, 3].map(|k| q[k] - s * p[k]);
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (n > 1e-6).then(|| v.map(|x| x / n))
    };
    if let Some(conic) = &sec.conic {
        let n = sec.real.len();
        let mut out = Vec::new();
        for k in 0..n {
            let (Some(a), Some(b)) = (sec.real[k].along, sec.real[(k + 1) % n].along) else { continue };
            let gap = if b > a { b - a } else { b - a + 1.0 };
            let mid = (a + 0.5 * gap).fract();
            let q = conic[((mid * conic.len() as f64) as usize) % conic.len()];
            if let Some(v) = orth(&q) {
                out.push(v);
            }
        }
        if !out.is_empty() {
            return Ok(out);
        }
    }
    let basis = plane_basis(d)?;
    let mut dirs: Vec<[f64; 4]> = Vec::with_capacity(2);
    for b in basis {
        let mut v = b;
        for w in &dirs {
            let s: f64 = (0..4).map(|k| v[k] * w[k]).sum();
            for k in 0..4 {
                v[k] -= s * w[k];
            }
        }
        if let Some(v) = orth(&v) {
            if dirs.len() < 2 && dirs.iter().all(|w| (0..4).map(|k| v[k] * w[k]).sum::<f64>().abs() < 1e-9) {
                dirs.push(v);
            }
        }
    }
    Ok(angles
        .iter()
        .map(|phi| {
            let (s, c) = phi.sin_cos();
            [0, 1, 2, 3].map(|k| c * dirs[0][k] + s * dirs[1][k])
        })
        .collect())
}

/// The tilted plane D′ = D + δE, with E ⊥ D containing the line through p
/// in direction v.
fn tilted(d: &[f64; 4], p: &[f64; 4], v: &[f64; 4], delta: f64) -> [f64; 4] {
    let dn = normalize4(d);
    let e = normalize4(&cross4(p, v, &dn));
    normalize4(&[0, 1, 2, 3].map(|k| dn[k] + delta * e[k]))
}

fn others<'a>(sec: &'a SectionPoints, p: &[f64; 4]) -> Vec<&'a SectionPoint> {
    sec.real.iter().filter(|s| proj_dist(&s.y, p) > 1e-6).collect()
}

/// Runs the search until every target is realized or the candidates are
/// exhausted. Returns one realization per target found, in target order.
pub fn quadric_search(
    m: &Model,
    search: &QuadricSearch,
    targets: &[DegreeVector],
    params: &RealizeParams,
) -> Result<Vec<Realization>> {
    let c = &m.curve;
    let mut found: Vec<Option<Realization>> = alloc::vec![None; targets.len()];
    for d in &search.planes {
        let Ok(sec) = section_points(m, d) else { continue };
        for pj in &sec.real {
            let dirs = axis_directions(d, &pj.y, &sec, &search.axis_angles)?;
            for delta in params.tilts.iter().flat_map(|t| [*t, -*t]) {
                for v in &dirs {
                    let d2 = tilted(d, &pj.y, v, delta);
                    let Ok(sec2) = section_points(m, &d2) else { continue };
                    let s0n = MultiForm::linear(*d).mul(&MultiForm::linear(d2))?.normalized();
                    let mut all = sec.all.clone();
                    all.extend_from_slice(&sec2.all);
                    // real points of (D ∪ D′) ∩ C, the shared point once
                    let mut pool: Vec<&SectionPoint> = alloc::vec![pj];
                    pool.extend(others(&sec, &pj.y));
                    pool.extend(others(&sec2, &pj.y));
                    for idx in subsets5(pool.len()) {
                        let chosen = idx.map(|i| pool[i]);
                        let ys: Vec<[f64; 4]> = chosen.iter().map(|s| s.y).collect();
                        let Ok(pencil) = residual_pencil(c, &ys, &s0n, all.clone()) else { continue };
                        let w = fiber_winding(c, &pencil, &m.locus);
                        if !w.monotone {
                            continue;
                        }
                        let dv = DegreeVector(w.winding.iter().map(|x| x.unsigned_abs()).collect());
                        if dv.total() != 5 {
                            continue;
                        }
                        let Some(t) = targets.iter().position(|x| *x == dv) else { continue };
                        if found[t].is_some() {
                            continue;
                        }
                        let Ok(cert) = separating_certificate(c, &pencil, &m.locus, &params.certify) else {
                            continue;
                        };
                        if cert.degree_vector != dv {
                            continue;
                        }
                        let fib = fiber_at(c, &pencil, Some(&m.locus), 0.37, params.certify.tol_im)?;
                        let speciality = is_special_divisor(&Divisor::from_real(&fib.real_coords()))?;
                        let placement = chosen.iter().map(|s| s.component).collect();
                        found[t] = Some(Realization {
                            method: Method::QuadricPencil { plane: *d, placement },
                            description: format!(
                                "quadrics through the residual of five points on a plane pair, degree vector {dv}"
                            ),
                            pencil,
                            certificate: cert,
                            speciality,
                        });
                        if found.iter().all(Option::is_some) {
                            return Ok(found.into_iter().flatten().collect());
                        }
                    }
                }
            }
        }
    }
    Ok(found.into_iter().flatten().collect())
}
