//! Plane sections of the model: intersection points with C and the
//! homology class of the real section.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::Model;
use crate::algebra::linalg::normalize4;
use crate::algebra::{MultiForm, C64};
use crate::error::{Error, Result};
use crate::morphism::{im_after_normalizing, intersect, real_part_normalized};
use crate::quadric::{loop_class, HomologyClass};

/// Plane coefficients in normalized coordinates → original coordinates.
pub fn plane_from_normalized(m: &Model, a: &[f64; 4]) -> [f64; 4] {
    let t = &m.curve.quadric.normalizer;
    let mut out = [0.0; 4];
    for j in 0..4 {
        out[j] = (0..4).map(|i| a[i] * t[i][j]).sum();
    }
    out
}

pub fn plane_to_normalized(m: &Model, a: &[f64; 4]) -> [f64; 4] {
    let t = &m.curve.quadric.inverse;
    let mut out = [0.0; 4];
    for j in 0..4 {
        out[j] = (0..4).map(|i| a[i] * t[i][j]).sum();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionPoint {
    /// Unit vector in normalized coordinates.
    pub y: [f64; 4],
    pub component: usize,
    pub arc: f64,
    /// Position along the real section, in [0, 1), when the section is a
    /// single conic.
    pub along: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionPoints {
    pub real: Vec<SectionPoint>,
    /// Non-real points in normalized coordinates.
    pub complex: Vec<[C64; 4]>,
    /// All six points in normalized coordinates.
    pub all: Vec<[C64; 4]>,
    /// The real section as a closed polyline of unit vectors (normalized
    /// coordinates) when it is a single conic; `along` indexes into it.
    pub conic: Option<Vec<[f64; 4]>>,
}

/// Points of D ∩ C for a plane given in normalized coordinates, real ones
/// located on the traced locus and ordered along ℝD.
pub fn section_points(m: &Model, plane: &[f64; 4]) -> Result<SectionPoints> {
    let (n, k) = m.curve.normalized_equations();
    let all = intersect(m.kind(), &n, &k, &MultiForm::linear(*plane))?;
    let poly = m.curve.quadric.plane_section(&plane_from_normalized(m, plane), 720)?;
    let conic: Option<Vec<[f64; 4]>> =
        (poly.len() == 1).then(|| poly[0].iter().map(|x| normalize4(&m.curve.quadric.to_normalized(x))).collect());
    let mut real = Vec::new();
    let mut complex = Vec::new();
    for z in &all {
        if im_after_normalizing(z) < 1e-7 {
            let y = normalize4(&real_part_normalized(z));
            let pos = m.locus.locate_normalized(&y);
            if pos.distance > 3.0 * m.locus.params.step {
                return Err(Error::Ambiguous("section point far from the traced locus".into()));
            }
            let along = conic.as_ref().map(|c| {
                let (i, _) = c
                    .iter()
                    .enumerate()
                    .map(|(i, x)| (i, crate::algebra::linalg::proj_dist(x, &y)))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap_or((0, 0.0));
                i as f64 / c.len() as f64
            });
            real.push(SectionPoint { y, component: pos.component, arc: pos.arc, along });
        } else {
            complex.push(*z);
        }
    }
    real.sort_by(|a, b| a.along.unwrap_or(0.0).total_cmp(&b.along.unwrap_or(0.0)));
    Ok(SectionPoints { real, complex, all, conic })
}

/// Homology class of a plane section (normalized coefficients) when it is
/// a single real conic.
pub fn section_class(m: &Model, plane: &[f64; 4]) -> Result<Option<HomologyClass>> {
    let poly = m.curve.quadric.plane_section(&plane_from_normalized(m, plane), 720)?;
    if poly.len() != 1 {
        return Ok(None);
    }
    let chart = m.curve.quadric.chart();
    let uv: Vec<(f64, f64)> =
        poly[0].iter().map(|x| chart.inverse(&normalize4(&m.curve.quadric.to_normalized(x)))).collect();
    Ok(Some(loop_class(&uv, m.kind())?))
}
