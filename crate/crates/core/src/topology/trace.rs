//! Predictor–corrector tracing of ℝC on the unit sphere of normalized
//! coordinates.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::algebra::form::MultiForm;
use crate::algebra::linalg::{cross4, dot4, norm4, normalize4, proj_dist, solve, Matrix};
use crate::curve::{chart_sign_change_seeds, SpaceSextic};
use crate::error::{numerical, Error, Result};
use crate::quadric::{loop_class, HomologyClass, Quadric, QuadricKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceParams {
    /// Nominal step on the unit sphere.
    pub step: f64,
    /// Corrector tolerance on (N, K) with unit-normalized coefficients.
    pub tol: f64,
    /// Seed grid resolution along the second chart coordinate (the first
    /// uses twice as many cells).
    pub seed_grid: usize,
    pub max_steps: usize,
}

impl Default for TraceParams {
    fn default() -> Self {
        TraceParams { step: 0.01, tol: 1e-11, seed_grid: 160, max_steps: 200_000 }
    }
}

/// One traced component of ℝC.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracedLoop {
    /// Unit samples in normalized coordinates; consecutive samples have
    /// positive inner product (a continuous lift to the sphere).
    pub samples: Vec<[f64; 4]>,
    /// Chart coordinates of each sample.
    pub chart: Vec<(f64, f64)>,
    /// Cumulative arc length at each sample; `length` closes the loop.
    pub arc: Vec<f64>,
    pub length: f64,
    pub class: HomologyClass,
    pub oval: bool,
    /// Whether the lift closes on the sphere (false: the loop is not
    /// null-homologous in the projective space).
    pub lift_closes: bool,
    pub component: usize,
    /// Mean of the numbering height function.
    pub height: f64,
}

/// Real locus: traced loops numbered c₁, c₂, … by decreasing height.
#[derive(Debug, Clone, PartialEq)]
pub struct RealLocus {
    pub quadric: Quadric,
    pub loops: Vec<TracedLoop>,
    pub r: usize,
    pub l: usize,
    pub params: TraceParams,
}

/// Where a point sits on the locus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusPosition {
    pub component: usize,
    /// Arc-length position in [0, length).
    pub arc: f64,
    /// Distance to the nearest polyline point.
    pub distance: f64,
    /// Index of the segment start.
    pub segment: usize,
}

/// Height used to number components: the affine z coordinate seen as an
/// angle (ellipsoid, hyperboloid) or the cone's slice angle.
fn height(kind: QuadricKind, y: &[f64; 4]) -> f64 {
    match kind {
        QuadricKind::Ellipsoid | QuadricKind::Hyperboloid => (y[2] / y[3]).atan(),
        QuadricKind::Cone => (y[3] / y[2]).atan(),
    }
}

struct Tracer<'a> {
    n: &'a MultiForm,
    k: &'a MultiForm,
    tol: f64,
}

impl Tracer<'_> {
    fn residual(&self, y: &[f64; 4]) -> (f64, f64) {
        (self.n.eval(y), self.k.eval(y))
    }

    /// Gauss–Newton projection onto {N = K = 0} ∩ S³.
    fn correct(&self, y0: &[f64; 4], max_iter: usize) -> Option<[f64; 4]> {
        let mut y = normalize4(y0);
        for _ in 0..max_iter {
            let (fn_, fk) = self.residual(&y);
            if fn_.abs() < self.tol && fk.abs() < self.tol {
                return Some(y);
            }
            let gn = self.n.gradient(&y);
            let gk = self.k.gradient(&y);
            let rows = [gn, gk, y];
            let mut a = Matrix::zeros(3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    a[(i, j)] = dot4(&rows[i], &rows[j]);
                }
            }
            let z = solve(&a, &[-fn_, -fk, 0.0]).ok()?;
            let mut yn = y;
            for (i, row) in rows.iter().enumerate() {
                for c in 0..4 {
                    yn[c] += z[i] * row[c];
                }
            }
            y = normalize4(&yn);
        }
        let (fn_, fk) = self.residual(&y);
        (fn_.abs() < self.tol && fk.abs() < self.tol).then_some(y)
    }

    fn tangent(&self, y: &[f64; 4]) -> Option<[f64; 4]> {
        let t = cross4(&self.n.gradient(y), &self.k.gradient(y), y);
        let nt = norm4(&t);
        (nt > 1e-12).then(|| normalize4(&t))
    }

    fn trace(&self, seed: [f64; 4], step: f64, max_steps: usize) -> Result<(Vec<[f64; 4]>, bool)> {
        let y0 = seed;
        let mut t = self.tangent(&y0).ok_or_else(|| numerical("singular point on the seed"))?;
        let mut samples = alloc::vec![y0];
        let mut y = y0;
        let mut h = step;
        let mut travelled = 0.0;
        for _ in 0..max_steps {
            let mut pred = [0.0; 4];
            for i in 0..4 {
                pred[i] = y[i] + h * t[i];
            }
            let accepted = self.correct(&pred, 8).and_then(|yc| {
                let tc = self.tangent(&yc)?;
                let tc = if dot4(&tc, &t) < 0.0 { tc.map(|x| -x) } else { tc };
                let d = norm4(&[yc[0] - y[0], yc[1] - y[1], yc[2] - y[2], yc[3] - y[3]]);
                (dot4(&tc, &t) > 0.95 && d < 1.6 * h && d > 0.3 * h).then_some((yc, tc, d))
            });
            let Some((yc, tc, d)) = accepted else {
                h *= 0.5;
                if h < step * 1e-4 {
                    return Err(numerical(format!("corrector diverged while tracing from seed {seed:?}")));
                }
                continue;
            };
            travelled += d;
            // closure against ±y0
            for sgn in [1.0, -1.0] {
                let gap = [sgn * y0[0] - yc[0], sgn * y0[1] - yc[1], sgn * y0[2] - yc[2], sgn * y0[3] - yc[3]];
                if travelled > 4.0 * step && norm4(&gap) < 1.1 * step && dot4(&gap, &tc) > -0.25 * step {
                    if norm4(&gap) > 0.3 * step {
                        samples.push(yc);
                    }
                    return Ok((samples, sgn > 0.0));
                }
            }
            samples.push(yc);
            y = yc;
            t = tc;
            if h < step {
                h = (h * 1.5).min(step);
            }
        }
        Err(numerical(format!("loop did not close within {max_steps} steps (seed {seed:?})")))
    }
}

fn build_loop(quadric: &Quadric, samples: Vec<[f64; 4]>, lift_closes: bool) -> Result<TracedLoop> {
    let chart = quadric.chart();
    let uv: Vec<(f64, f64)> = samples.iter().map(|y| chart.inverse(y)).collect();
    let class = loop_class(&uv, quadric.kind)?;
    let mut arc = Vec::with_capacity(samples.len());
    let mut s = 0.0;
    for k in 0..samples.len() {
        arc.push(s);
        let a = &samples[k];
        let b = &samples[(k + 1) % samples.len()];
        s += chord(a, b);
    }
    let h = samples.iter().map(|y| height(quadric.kind, y)).sum::<f64>() / samples.len() as f64;
    Ok(TracedLoop {
        samples,
        chart: uv,
        arc,
        length: s,
        oval: class.is_zero(),
        class,
        lift_closes,
        component: 0,
        height: h,
    })
}

/// Traces all components of ℝC. Seeds come from sign changes of K along a
/// chart grid; every seed near an already traced loop is skipped.
pub fn trace_real_locus(c: &SpaceSextic, params: &TraceParams) -> Result<RealLocus> {
    if params.step <= 0.0 || params.step > 0.2 {
        return Err(Error::InvalidInput("trace step must lie in (0, 0.2]".into()));
    }
    let (n, k) = c.normalized_equations();
    let tracer = Tracer { n: &n, k: &k, tol: params.tol };
    let seeds = chart_sign_change_seeds(&c.quadric, &k, params.seed_grid);
    let mut loops: Vec<TracedLoop> = Vec::new();
    for s in seeds {
        let Some(y) = tracer.correct(&s, 30) else { continue };
        let near = loops.iter().any(|lp| lp.samples.iter().any(|x| proj_dist(x, &y) < 2.0 * params.step));
        if near {
            continue;
        }
        let (samples, closes) = tracer.trace(y, params.step, params.max_steps)?;
        loops.push(build_loop(&c.quadric, samples, closes)?);
    }
    if loops.is_empty() {
        return Ok(RealLocus { quadric: c.quadric.clone(), loops, r: 0, l: 0, params: *params });
    }
    loops.sort_by(|a, b| b.height.total_cmp(&a.height));
    for (i, lp) in loops.iter_mut().enumerate() {
        lp.component = i;
    }
    let r = loops.len();
    let l = loops.iter().filter(|lp| lp.oval).count();
    Ok(RealLocus { quadric: c.quadric.clone(), loops, r, l, params: *params })
}

impl RealLocus {
    /// Sum of the loop classes with each loop taken in its unsigned
    /// representative.
    pub fn total_class(&self) -> HomologyClass {
        self.loops.iter().fold(HomologyClass::new(self.quadric.kind, 0, 0), |acc, lp| acc.add(&lp.class.unsigned()))
    }

    /// Nearest position on the traced locus of a point given in original
    /// coordinates.
    pub fn locate(&self, p: &[f64; 4]) -> LocusPosition {
        let y = normalize4(&self.quadric.to_normalized(p));
        self.locate_normalized(&y)
    }

    pub fn locate_normalized(&self, y: &[f64; 4]) -> LocusPosition {
        let mut best = LocusPosition { component: 0, arc: 0.0, distance: f64::INFINITY, segment: 0 };
        for lp in &self.loops {
            let m = lp.samples.len();
            for i in 0..m {
                let a = lp.samples[i];
                let b = lp.samples[(i + 1) % m];
                // orient y to the lift of a
                let ys = if dot4(y, &a) < 0.0 { y.map(|x| -x) } else { *y };
                let b = if dot4(&b, &a) < 0.0 { b.map(|x| -x) } else { b };
                let ab = [b[0] - a[0], b[1] - a[1], b[2] - a[2], b[3] - a[3]];
                let ay = [ys[0] - a[0], ys[1] - a[1], ys[2] - a[2], ys[3] - a[3]];
                let l2 = dot4(&ab, &ab);
                let t = if l2 > 0.0 { (dot4(&ay, &ab) / l2).clamp(0.0, 1.0) } else { 0.0 };
                let d = norm4(&[ay[0] - t * ab[0], ay[1] - t * ab[1], ay[2] - t * ab[2], ay[3] - t * ab[3]]);
                if d < best.distance {
                    let seg_len = chord(&a, &b);
                    best = LocusPosition {
                        component: lp.component,
                        arc: lp.arc[i] + t * seg_len,
                        distance: d,
                        segment: i,
                    };
                }
            }
        }
        best
    }

    /// Point of the polyline of component `c` at arc position `s`
    /// (normalized coordinates, not rescaled to the sphere).
    pub fn point_at(&self, c: usize, s: f64) -> [f64; 4] {
        let lp = &self.loops[c];
        let s = s.rem_euclid_len(lp.length);
        let i = match lp.arc.binary_search_by(|a| a.total_cmp(&s)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let m = lp.samples.len();
        let a = lp.samples[i];
        let b = lp.samples[(i + 1) % m];
        let b = if dot4(&a, &b) < 0.0 { b.map(|x| -x) } else { b };
        let seg = if i + 1 < m { lp.arc[i + 1] - lp.arc[i] } else { lp.length - lp.arc[i] };
        let t = if seg > 0.0 { (s - lp.arc[i]) / seg } else { 0.0 };
        [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2]), a[3] + t * (b[3] - a[3])]
    }

    /// Unit tangent (traversal direction) at a sample.
    pub fn tangent_at(&self, c: usize, i: usize) -> [f64; 4] {
        let lp = &self.loops[c];
        let m = lp.samples.len();
        let a = lp.samples[(i + m - 1) % m];
        let b = lp.samples[(i + 1) % m];
        let a = if dot4(&a, &lp.samples[i]) < 0.0 { a.map(|x| -x) } else { a };
        let b = if dot4(&b, &lp.samples[i]) < 0.0 { b.map(|x| -x) } else { b };
        normalize4(&[b[0] - a[0], b[1] - a[1], b[2] - a[2], b[3] - a[3]])
    }

    /// Maximal |N|, |K| over all samples (normalized equations).
    pub fn max_residual(&self, c: &SpaceSextic) -> f64 {
        let (n, k) = c.normalized_equations();
        self.loops
            .iter()
            .flat_map(|lp| lp.samples.iter())
            .map(|y| n.eval(y).abs().max(k.eval(y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Chord length between two samples on the same lift.
fn chord(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    let sg = if dot4(a, b) < 0.0 { -1.0 } else { 1.0 };
    norm4(&[b[0] * sg - a[0], b[1] * sg - a[1], b[2] * sg - a[2], b[3] * sg - a[3]])
}

trait RemLen {
    fn rem_euclid_len(self, len: f64) -> f64;
}

impl RemLen for f64 {
    fn rem_euclid_len(self, len: f64) -> f64 {
        let r = self - len * (self / len).floor();
        if r >= len {
            0.0
        } else {
            r
        }
    }
}

/// Rejects loci containing a planar component (a conic or a line of C),
/// which would make C reducible.
pub fn check_no_planar_component(locus: &RealLocus) -> Result<()> {
    for lp in &locus.loops {
        let step = (lp.samples.len() / 40).max(1);
        let rows: Vec<Vec<f64>> = lp.samples.iter().step_by(step).map(|y| y.to_vec()).collect();
        let m = Matrix::from_rows(&rows);
        if crate::algebra::linalg::rank(&m, 1e-7) <= 3 {
            return Err(Error::Reducible(format!("component c{} lies in a plane", lp.component + 1)));
        }
    }
    Ok(())
}
