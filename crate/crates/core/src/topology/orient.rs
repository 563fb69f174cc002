//! Orientations of ℝC: D-orientations from chess-board colorings, complex
//! orientations from separating morphisms, and the comparison of the two on
//! a fiber.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::coloring::{Coloring, PlaneSection};
use super::trace::{RealLocus, TracedLoop};
use crate::curve::SpaceSextic;
use crate::error::{invalid, Error, Result};
use crate::morphism::{fiber_winding, Pencil, SeparatingCertificate};
use crate::quadric::wrap_pi;

/// A crossing of a loop with ℝD at an arc position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub arc: f64,
    /// Crossings with ℝD₁ reverse the D-orientation, those with ℝD₀ do not.
    pub flips: bool,
}

/// Signs of one loop relative to its stored traversal: `signs[j]` holds on
/// the arc from `crossings[j]` to the next crossing (cyclically). Without
/// crossings the single sign covers the loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopOrientation {
    pub length: f64,
    pub crossings: Vec<Crossing>,
    pub signs: Vec<i8>,
}

impl LoopOrientation {
    fn sign_at(&self, s: f64) -> i8 {
        let k = self.crossings.len();
        if k == 0 {
            return self.signs[0];
        }
        let s = s - self.length * (s / self.length).floor();
        match self.crossings.iter().rposition(|c| c.arc <= s) {
            Some(j) => self.signs[j],
            None => self.signs[k - 1],
        }
    }

    /// Arc distance from s to the nearest crossing.
    fn crossing_distance(&self, s: f64) -> f64 {
        self.crossings
            .iter()
            .map(|c| {
                let d = (c.arc - s).abs() % self.length;
                d.min(self.length - d)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// An orientation of ℝC (or of ℝC ∖ ℝD), defined up to reversing all
/// components at once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationAssignment {
    pub loops: Vec<LoopOrientation>,
}

impl OrientationAssignment {
    /// Sign at an arc position of a component.
    pub fn sign_at(&self, component: usize, arc: f64) -> Result<i8> {
        self.loops.get(component).map(|l| l.sign_at(arc)).ok_or_else(|| invalid(format!("no component {component}")))
    }

    /// Sign at the start of each loop.
    pub fn loop_signs(&self) -> Vec<i8> {
        self.loops.iter().map(|l| l.sign_at(0.0)).collect()
    }

    pub fn flipped(&self) -> Self {
        let loops = self
            .loops
            .iter()
            .map(|l| LoopOrientation { signs: l.signs.iter().map(|s| -s).collect(), ..l.clone() })
            .collect();
        OrientationAssignment { loops }
    }

    /// The representative with sign +1 at the start of the first component.
    pub fn anchored(&self) -> Self {
        if self.loops.first().is_some_and(|l| l.sign_at(0.0) < 0) {
            self.flipped()
        } else {
            self.clone()
        }
    }

    /// Equality up to one global flip, compared at `n` points per loop away
    /// from crossings.
    pub fn agrees_up_to_flip(&self, other: &Self, n: usize) -> bool {
        if self.loops.len() != other.loops.len() {
            return false;
        }
        let mut same = true;
        let mut opposite = true;
        for (a, b) in self.loops.iter().zip(&other.loops) {
            for k in 0..n {
                let s = a.length * (k as f64 + 0.5) / n as f64;
                let tol = 1e-6 * a.length;
                if a.crossing_distance(s) < tol || b.crossing_distance(s) < tol {
                    continue;
                }
                let p = a.sign_at(s) * b.sign_at(s);
                same &= p > 0;
                opposite &= p < 0;
            }
        }
        same || opposite
    }
}

/// Crossings of a loop with ℝD, in arc order.
fn crossings(lp: &TracedLoop, d: &PlaneSection, step: f64) -> Result<Vec<Crossing>> {
    let m = lp.samples.len();
    let seg = |i: usize| if i + 1 < m { lp.arc[i + 1] - lp.arc[i] } else { lp.length - lp.arc[i] };
    let mut out = Vec::new();
    if let Some(line) = &d.d0 {
        let dist: Vec<f64> = lp.samples.iter().map(|y| line.distance(y)).collect();
        for i in 0..m {
            let (a, b, c) = (dist[(i + m - 1) % m], dist[i], dist[(i + 1) % m]);
            // a transversal pass is V-shaped, a near miss is flat at the bottom
            if b <= a && b < c && b < 2.0 * step && b - 0.5 * (a - c).abs() < 0.25 * step {
                out.push(Crossing { arc: lp.arc[i], flips: false });
            }
        }
        return Ok(out);
    }
    // λ on the lift; the closing segment may change the representative
    let lam: Vec<f64> = lp.samples.iter().map(|y| d.value(y)).collect();
    let closing = if crate::algebra::linalg::dot4(&lp.samples[m - 1], &lp.samples[0]) < 0.0 { -1.0 } else { 1.0 };
    let mut idx = Vec::new();
    for i in 0..m {
        let a = lam[i];
        let b = if i + 1 < m { lam[i + 1] } else { closing * lam[0] };
        if (a < 0.0) != (b < 0.0) {
            let t = a / (a - b);
            idx.push(i);
            out.push(Crossing { arc: lp.arc[i] + t * seg(i), flips: true });
        } else {
            // a touching minimum of |λ| without a sign change
            let prev = if i > 0 { lam[i - 1] } else { closing * lam[m - 1] };
            if (prev < 0.0) == (a < 0.0) && a.abs() <= prev.abs() && a.abs() < b.abs() && a.abs() < 0.25 * step {
                return Err(Error::Tangency(format!("c{} touches ℝD near arc {:.4}", lp.component + 1, lp.arc[i])));
            }
        }
    }
    for w in 0..idx.len() {
        if idx.len() > 1 {
            let gap = (idx[(w + 1) % idx.len()] + m - idx[w]) % m;
            if gap < 3 {
                return Err(Error::Tangency(format!(
                    "two crossings of c{} with ℝD within the sampling resolution",
                    lp.component + 1
                )));
            }
        }
    }
    Ok(out)
}

/// The D-orientation of ℝC ∖ ℝD: the boundary orientation of the regions
/// of color `true` in `coloring`, which must color the complement of
/// ℝC ∪ ℝD₁. Signs are read from the color on the left of the traversal
/// (in chart orientation) and made constant on each arc by majority.
pub fn d_orientation(locus: &RealLocus, d: &PlaneSection, coloring: &Coloring) -> Result<OrientationAssignment> {
    if coloring.kind != locus.quadric.kind {
        return Err(invalid("coloring and locus live on different quadrics"));
    }
    let (hu, hv) = coloring.cell_size();
    let periodic_v = coloring.kind == crate::quadric::QuadricKind::Hyperboloid;
    let mut loops = Vec::with_capacity(locus.loops.len());
    for lp in &locus.loops {
        let m = lp.samples.len();
        let cr = crossings(lp, d, locus.params.step)?;
        let local: Vec<i8> = (0..m)
            .map(|i| {
                let (u0, v0) = lp.chart[(i + m - 1) % m];
                let (u1, v1) = lp.chart[(i + 1) % m];
                let du = wrap_pi(u1 - u0) / hu;
                let dv = if periodic_v { wrap_pi(v1 - v0) } else { v1 - v0 } / hv;
                let n = (du * du + dv * dv).sqrt().max(1e-300);
                let (u, v) = lp.chart[i];
                let probe = (u - 2.5 * dv / n * hu, v + 2.5 * du / n * hv);
                if coloring.color_at(probe.0, probe.1) {
                    1
                } else {
                    -1
                }
            })
            .collect();
        let k = cr.len().max(1);
        let mut votes = alloc::vec![(0usize, 0usize); k];
        let lo = LoopOrientation { length: lp.length, crossings: cr.clone(), signs: alloc::vec![0; k] };
        for i in 0..m {
            let j = if cr.is_empty() { 0 } else { cr.iter().rposition(|c| c.arc <= lp.arc[i]).unwrap_or(k - 1) };
            if lo.crossing_distance(lp.arc[i]) < 4.0 * locus.params.step {
                continue;
            }
            if local[i] > 0 {
                votes[j].0 += 1;
            } else {
                votes[j].1 += 1;
            }
        }
        let mut signs = Vec::with_capacity(k);
        for (j, (p, n)) in votes.iter().enumerate() {
            if p + n == 0 {
                return Err(Error::Tangency(format!("arc {j} of c{} is below the resolution", lp.component + 1)));
            }
            if 4 * p.min(n) > p + n {
                return Err(Error::Ambiguous(format!(
                    "coloring too coarse along c{}: {p} positive and {n} negative samples on one arc",
                    lp.component + 1
                )));
            }
            signs.push(if p > n { 1 } else { -1 });
        }
        if !cr.is_empty() {
            for j in 0..k {
                let flip = signs[j] != signs[(j + 1) % k];
                if flip != cr[(j + 1) % k].flips {
                    return Err(Error::Ambiguous(format!(
                        "sign change on c{} disagrees with the crossing type",
                        lp.component + 1
                    )));
                }
            }
        }
        loops.push(LoopOrientation { length: lp.length, crossings: cr, signs });
    }
    Ok(OrientationAssignment { loops })
}

/// The complex orientation induced by a certified separating pencil: each
/// component is oriented so that the map covers the standard orientation
/// of ℝP¹. Anchored at the first component.
pub fn complex_orientation(
    c: &SpaceSextic,
    f: &Pencil,
    locus: &RealLocus,
    cert: &SeparatingCertificate,
) -> Result<OrientationAssignment> {
    let w = fiber_winding(c, f, locus);
    if w.winding != cert.winding || !w.monotone || w.winding.iter().any(|&x| x == 0) {
        return Err(invalid("the pencil does not carry a matching separating certificate"));
    }
    let loops = locus
        .loops
        .iter()
        .zip(&w.winding)
        .map(|(lp, &k)| LoopOrientation {
            length: lp.length,
            crossings: Vec::new(),
            signs: alloc::vec![if k > 0 { 1 } else { -1 }],
        })
        .collect();
    Ok(OrientationAssignment { loops }.anchored())
}

/// A point of a fiber on the locus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    pub component: usize,
    pub arc: f64,
    /// Whether the point is declared to lie on D.
    pub on_d: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionVerdict {
    /// The two orientations agree at every point of P ∖ D up to a global
    /// flip; this is the configuration that cannot occur for a fiber of a
    /// separating morphism.
    Consistent,
    /// They disagree somewhere on P ∖ D.
    ObstructedOk,
    /// P ∖ D is empty.
    Vacuous,
}

/// Compares a D-orientation and a complex orientation on the points of P
/// off D. Points closer than `tol` (arc length) to a crossing with ℝD must
/// be declared on D.
pub fn obstruction_check(
    p: &[LocusPoint],
    d_or: &OrientationAssignment,
    c_or: &OrientationAssignment,
    tol: f64,
) -> Result<ObstructionVerdict> {
    let mut products = Vec::new();
    for q in p.iter().filter(|q| !q.on_d) {
        let lo = d_or.loops.get(q.component).ok_or_else(|| invalid(format!("no component {}", q.component)))?;
        if lo.crossing_distance(q.arc) < tol {
            return Err(Error::Incidence(format!(
                "a point of c{} at arc {:.6} lies on ℝD but is not declared in D",
                q.component + 1,
                q.arc
            )));
        }
        products.push(d_or.sign_at(q.component, q.arc)? * c_or.sign_at(q.component, q.arc)?);
    }
    if products.is_empty() {
        return Ok(ObstructionVerdict::Vacuous);
    }
    if products.iter().all(|&x| x == products[0]) {
        Ok(ObstructionVerdict::Consistent)
    } else {
        Ok(ObstructionVerdict::ObstructedOk)
    }
}
