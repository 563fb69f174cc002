//! Per-row realization plans: which degree vectors to realize and by which
//! construction, with the candidate planes each construction starts from.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::search::{quadric_search, QuadricSearch};
use super::sections::section_points;
use super::{Method, Model, Realization, RealizeParams};
use crate::algebra::linalg::normalize4;
use crate::error::{Error, Result};
use crate::morphism::{
    fiber_at, fiber_winding, is_special_divisor, plane_pencil, separating_certificate, DegreeVector, Divisor,
    DivisorPoint, PlaneBase,
};
use crate::quadric::{QuadricKind, RealLine, Rulings};

/// The construction used for one planned degree vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    GeneratorPencil,
    RulingProjection,
    PointPair,
    SectionPair,
    ConjugatePair,
    QuadricPencil,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowPlan {
    pub kind: QuadricKind,
    pub r: usize,
    pub l: usize,
    pub targets: Vec<(DegreeVector, Construction)>,
    /// Planes (normalized coordinates) tried first by the plane-based
    /// constructions.
    pub planes: Vec<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowOutcome {
    pub realized: Vec<Realization>,
    pub missing: Vec<DegreeVector>,
}

fn dv(v: &[u32]) -> DegreeVector {
    DegreeVector(v.to_vec())
}

fn quintics3(all_six: bool) -> Vec<(DegreeVector, Construction)> {
    let mut v: Vec<&[u32]> = vec![&[1, 3, 1], &[1, 2, 2], &[2, 2, 1]];
    if all_six {
        v.extend_from_slice(&[&[2, 1, 2], &[3, 1, 1], &[1, 1, 3]]);
    }
    v.into_iter().map(|x| (dv(x), Construction::QuadricPencil)).collect()
}

/// The generators realized for a non-maximal row.
pub fn row_plan(kind: QuadricKind, r: usize, l: usize) -> Result<RowPlan> {
    use Construction::*;
    use QuadricKind::*;
    let (mut targets, planes): (Vec<(DegreeVector, Construction)>, Vec<[f64; 4]>) = match (kind, r, l) {
        (Ellipsoid, 3, 3) => (vec![(dv(&[1, 2, 1]), PointPair)], vec![[0.0, 1.0, 0.0, 0.0]]),
        (Cone, 3, 0) => {
            (vec![(dv(&[1, 1, 1]), GeneratorPencil), (dv(&[1, 2, 1]), PointPair)], vec![[-3.0, 0.0, 0.0, 1.0]])
        }
        (Cone, 3, 2) => (
            vec![(dv(&[1, 2, 1]), PointPair)],
            vec![[1.0, 0.5, 0.0, -0.3], [1.0, -0.5, 0.0, -0.3], [1.0, 1.0, 0.0, -0.3]],
        ),
        (Hyperboloid, 1, 0) => {
            (vec![(dv(&[3]), RulingProjection), (dv(&[4]), ConjugatePair), (dv(&[5]), QuadricPencil)], Vec::new())
        }
        (Hyperboloid, 3, 0) => (
            vec![
                (dv(&[1, 1, 1]), RulingProjection),
                (dv(&[2, 1, 1]), SectionPair),
                (dv(&[1, 2, 1]), SectionPair),
                (dv(&[1, 1, 2]), SectionPair),
            ],
            (0..6)
                .map(|k| {
                    let (s, c) = (core::f64::consts::PI * k as f64 / 6.0).sin_cos();
                    [c, s, 0.0, 0.0]
                })
                .collect(),
        ),
        (Hyperboloid, 3, 2) => (vec![(dv(&[1, 2, 1]), PointPair)], vec![[0.0, 1.0, 0.0, 0.0], [-0.6, 0.0, 1.0, 0.0]]),
        _ => return Err(Error::InvalidInput(format!("no realization plan for {} {r}/{l}", kind.name()))),
    };
    if r == 3 {
        targets.extend(quintics3(kind == Hyperboloid && l == 0));
    }
    Ok(RowPlan { kind, r, l, targets, planes })
}

/// Deterministic spread of planes over the sphere of coefficients.
fn plane_grid(n: usize) -> Vec<[f64; 4]> {
    let tau = core::f64::consts::TAU;
    let (a1, a2, a3) = (0.754_877_666_246_692_7, 0.569_840_290_998_053_3, 0.438_796_146_217_510_4);
    (1..=n)
        .map(|k| {
            let k = k as f64;
            let (u, v, w) = ((k * a1).fract(), (k * a2).fract(), (k * a3).fract());
            let (s1, s2) = (u.sqrt(), (1.0 - u).sqrt());
            let (t1, t2) = (tau * v, tau * w);
            [s1 * t1.cos(), s1 * t1.sin(), s2 * t2.cos(), s2 * t2.sin()]
        })
        .collect()
}

const FRACS: [f64; 5] = [0.05, 0.25, 0.45, 0.65, 0.85];

struct Collector<'a> {
    model: &'a Model,
    params: &'a RealizeParams,
    want: Vec<DegreeVector>,
    found: Vec<Realization>,
}

impl Collector<'_> {
    fn done(&self) -> bool {
        self.want.is_empty()
    }

    /// Certifies a plane pencil and keeps it when it realizes a wanted vector.
    fn try_plane(&mut self, base: PlaneBase, method: Method, what: &str) {
        let c = &self.model.curve;
        let Ok(pencil) = plane_pencil(c, &base) else { return };
        if pencil.degree == 0 {
            return;
        }
        // the winding must already show a covering of the wanted degree
        let w = fiber_winding(c, &pencil, &self.model.locus);
        let wabs = DegreeVector(w.winding.iter().map(|x| x.unsigned_abs()).collect());
        if !w.monotone || wabs.total() as usize != pencil.degree || !self.want.contains(&wabs) {
            return;
        }
        let Ok(cert) = separating_certificate(c, &pencil, &self.model.locus, &self.params.certify) else { return };
        let Some(i) = self.want.iter().position(|w| *w == cert.degree_vector) else { return };
        let Ok(fib) = fiber_at(c, &pencil, Some(&self.model.locus), 0.37, self.params.certify.tol_im) else { return };
        let Ok(speciality) = is_special_divisor(&Divisor::from_real(&fib.real_coords())) else { return };
        let d = self.want.remove(i);
        self.found.push(Realization {
            method,
            description: format!("{what}, degree vector {d}"),
            pencil,
            certificate: cert,
            speciality,
        });
    }

    fn generator(&mut self) {
        let m = self.model;
        let apex = m.curve.quadric.from_normalized(&[0.0, 0.0, 0.0, 1.0]);
        for comp in 0..m.locus.r {
            for f in FRACS {
                if self.done() {
                    return;
                }
                let line = RealLine::new(apex, m.sample(comp, f));
                self.try_plane(PlaneBase::Line { line }, Method::GeneratorPencil, "planes through a generator");
            }
        }
    }

    fn ruling(&mut self) {
        let m = self.model;
        for comp in 0..m.locus.r {
            for f in FRACS {
                let Ok(Rulings::Lines(lines)) = m.curve.quadric.rulings(&m.sample(comp, f)) else { continue };
                for line in lines {
                    if self.done() {
                        return;
                    }
                    self.try_plane(PlaneBase::Line { line }, Method::RulingProjection, "planes through a ruling line");
                }
            }
        }
    }

    fn point_pair(&mut self) {
        let m = self.model;
        let r = m.locus.r;
        // pairs on distinct components first, outermost components first
        let mut comps: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
        comps.sort_by_key(|&(i, j)| core::cmp::Reverse(j - i));
        comps.extend((0..r).map(|i| (i, i)));
        for (i, j) in comps {
            for fi in FRACS {
                for fj in FRACS {
                    if self.done() {
                        return;
                    }
                    if i == j && fi >= fj {
                        continue;
                    }
                    let (p, q) = (m.sample(i, fi), m.sample(j, fj + 0.013));
                    self.try_plane(
                        PlaneBase::PointPair { p, q },
                        Method::PointPair { components: [i, j] },
                        "planes through two real points",
                    );
                }
            }
        }
    }

    fn section_pair(&mut self, planes: &[[f64; 4]]) {
        let m = self.model;
        for d in planes {
            let Ok(sec) = section_points(m, d) else { continue };
            let n = sec.real.len();
            if n < 2 || sec.real.iter().any(|s| s.along.is_none()) {
                continue;
            }
            for k in 0..n {
                if self.done() {
                    return;
                }
                let (a, b) = (&sec.real[k], &sec.real[(k + 1) % n]);
                let q = &m.curve.quadric;
                self.try_plane(
                    PlaneBase::PointPair { p: q.from_normalized(&a.y), q: q.from_normalized(&b.y) },
                    Method::SectionPair { plane: *d, components: [a.component, b.component] },
                    "planes through consecutive points of a plane section",
                );
            }
        }
    }

    fn conjugate_pair(&mut self, planes: &[[f64; 4]]) {
        let m = self.model;
        for d in planes {
            let Ok(sec) = section_points(m, d) else { continue };
            for z in &sec.complex {
                if self.done() {
                    return;
                }
                // one point of each conjugate pair
                if z.iter().map(|c| c.im).sum::<f64>() < 0.0 {
                    continue;
                }
                let x = crate::algebra::linalg::mat4_mul_cvec(&m.curve.quadric.inverse, z);
                self.try_plane(
                    PlaneBase::ConjugatePair { p: DivisorPoint::complex(&x) },
                    Method::ConjugatePair { plane: *d },
                    "planes through a conjugate pair",
                );
            }
        }
    }
}

/// Candidate planes for the hyperboloid with one real component: sections
/// close to the tangent plane at a point of a ruling line that meets ℝC
/// once, where a conjugate pair of intersection points appears.
fn near_tangent_planes(m: &Model) -> Vec<[f64; 4]> {
    let mut out = Vec::new();
    let chart = m.curve.quadric.chart();
    let n_form = m.curve.quadric.kind.normal_diagonal();
    for k in 0..24 {
        let u = core::f64::consts::TAU * k as f64 / 24.0;
        for v in [-0.8, -0.3, 0.2, 0.7] {
            let o = chart.map(u, v);
            let t = normalize4(&[0, 1, 2, 3].map(|i| n_form[i] * o[i]));
            for e in plane_grid(6) {
                for delta in [0.05, 0.15] {
                    out.push(normalize4(&[0, 1, 2, 3].map(|i| t[i] + delta * e[i])));
                }
            }
        }
    }
    out
}

/// Realizes every planned generator of the model's row. Targets sharing a
/// construction are searched for together.
pub fn realize_row(m: &Model, params: &RealizeParams) -> Result<RowOutcome> {
    let plan = row_plan(m.kind(), m.locus.r, m.locus.l)?;
    let mut hows: Vec<Construction> = Vec::new();
    for (_, how) in &plan.targets {
        if !hows.contains(how) {
            hows.push(*how);
        }
    }
    let mut found = Vec::new();
    for how in hows {
        let targets: Vec<DegreeVector> =
            plan.targets.iter().filter(|(_, h)| *h == how).map(|(t, _)| t.clone()).collect();
        found.extend(realize_with(m, &plan, &targets, how, params)?);
    }
    // report in plan order
    let mut realized = Vec::new();
    let mut missing = Vec::new();
    for (t, _) in &plan.targets {
        match found.iter().position(|x: &Realization| x.degree_vector() == t) {
            Some(i) => realized.push(found.swap_remove(i)),
            None => missing.push(t.clone()),
        }
    }
    Ok(RowOutcome { realized, missing })
}

fn realize_with(
    m: &Model,
    plan: &RowPlan,
    targets: &[DegreeVector],
    how: Construction,
    params: &RealizeParams,
) -> Result<Vec<Realization>> {
    let mut planes = plan.planes.clone();
    planes.extend(plane_grid(64));
    let mut col = Collector { model: m, params, want: targets.to_vec(), found: Vec::new() };
    match how {
        Construction::GeneratorPencil => col.generator(),
        Construction::RulingProjection => col.ruling(),
        Construction::PointPair => col.point_pair(),
        Construction::SectionPair => col.section_pair(&planes),
        Construction::ConjugatePair => {
            col.conjugate_pair(&planes);
            if !col.done() {
                col.conjugate_pair(&near_tangent_planes(m));
            }
        }
        Construction::QuadricPencil => {
            let search = QuadricSearch { planes, ..QuadricSearch::default() };
            col.found = quadric_search(m, &search, targets, params)?;
        }
    }
    Ok(col.found)
}

fn realize_one(
    m: &Model,
    plan: &RowPlan,
    target: &DegreeVector,
    how: Construction,
    params: &RealizeParams,
) -> Result<Realization> {
    realize_with(m, plan, core::slice::from_ref(target), how, params)?
        .pop()
        .ok_or_else(|| Error::NotRealized(format!("{target} by {how:?}")))
}

/// Realizes one degree vector, using the row's planned construction when
/// there is one and otherwise the construction matching its total degree.
pub fn realize_target(m: &Model, target: &DegreeVector, params: &RealizeParams) -> Result<Realization> {
    if target.0.len() != m.locus.r {
        return Err(Error::InvalidInput(format!("degree vector {target} has the wrong length for r = {}", m.locus.r)));
    }
    let plan = row_plan(m.kind(), m.locus.r, m.locus.l)?;
    if let Some((_, how)) = plan.targets.iter().find(|(t, _)| t == target) {
        return realize_one(m, &plan, target, *how, params);
    }
    let hows: &[Construction] = match target.total() {
        3 => &[Construction::GeneratorPencil, Construction::RulingProjection],
        4 => &[Construction::PointPair, Construction::SectionPair, Construction::ConjugatePair],
        5 => &[Construction::QuadricPencil],
        t => {
            let msg: String = format!("total degree {t} is outside the constructions (3, 4 or 5)");
            return Err(Error::InvalidInput(msg));
        }
    };
    for &how in hows {
        let applicable = match how {
            Construction::GeneratorPencil => m.kind() == QuadricKind::Cone,
            Construction::RulingProjection => m.kind() == QuadricKind::Hyperboloid,
            _ => true,
        };
        if !applicable {
            continue;
        }
        match realize_one(m, &plan, target, how, params) {
            Err(Error::NotRealized(_)) => continue,
            other => return other,
        }
    }
    Err(Error::NotRealized(format!("{target}")))
}
