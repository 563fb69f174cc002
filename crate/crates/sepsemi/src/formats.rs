//! JSON documents: quadrics, curves, real loci.

use serde::{Deserialize, Serialize};

use sepsemi_core::algebra::form::MONOMIAL_ORDER;
use sepsemi_core::algebra::MultiForm;
use sepsemi_core::curve::{Provenance, SpaceSextic};
use sepsemi_core::quadric::{classify_quadric, HomologyClass, Quadric, QuadricKind};
use sepsemi_core::topology::RealLocus;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadricJson {
    /// Row-major symmetric matrix.
    pub matrix: [[f64; 4]; 4],
}

impl QuadricJson {
    pub fn classify(&self) -> Result<Quadric> {
        Ok(classify_quadric(&self.matrix)?)
    }
}

/// Output of `classify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedJson {
    pub matrix: [[f64; 4]; 4],
    pub kind: QuadricKind,
    pub normalizer: [[f64; 4]; 4],
    pub normalizer_residual: f64,
}

impl From<&Quadric> for ClassifiedJson {
    fn from(q: &Quadric) -> Self {
        ClassifiedJson {
            matrix: q.matrix,
            kind: q.kind,
            normalizer: q.normalizer,
            normalizer_residual: q.normalizer_residual(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicJson {
    pub coeffs: Vec<f64>,
    pub order: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveJson {
    pub surface: QuadricJson,
    pub cubic: CubicJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl From<&SpaceSextic> for CurveJson {
    fn from(c: &SpaceSextic) -> Self {
        CurveJson {
            surface: QuadricJson { matrix: c.quadric.matrix },
            cubic: CubicJson { coeffs: c.cubic.coeffs.clone(), order: MONOMIAL_ORDER.to_string() },
            provenance: c.provenance.clone(),
        }
    }
}

impl CurveJson {
    pub fn to_curve(&self) -> Result<SpaceSextic> {
        if self.cubic.order != MONOMIAL_ORDER {
            return Err(CliError::Input(format!("unsupported monomial order {:?}", self.cubic.order)));
        }
        let q = self.surface.classify()?;
        let k = MultiForm::new(3, self.cubic.coeffs.clone())?;
        Ok(SpaceSextic::new(q, k, self.provenance.clone())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopJson {
    pub component: usize,
    pub class: HomologyClass,
    pub oval: bool,
    pub length: f64,
    /// Samples in original coordinates.
    pub samples: Vec<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusJson {
    pub r: usize,
    pub l: usize,
    pub total_class: HomologyClass,
    pub loops: Vec<LoopJson>,
}

impl LocusJson {
    /// Every `stride`-th sample of each loop.
    pub fn new(locus: &RealLocus, stride: usize) -> Self {
        let stride = stride.max(1);
        let loops = locus
            .loops
            .iter()
            .map(|lp| LoopJson {
                component: lp.component,
                class: lp.class,
                oval: lp.oval,
                length: lp.length,
                samples: lp.samples.iter().step_by(stride).map(|y| locus.quadric.from_normalized(y)).collect(),
            })
            .collect();
        LocusJson { r: locus.r, l: locus.l, total_class: locus.total_class(), loops }
    }
}

/// Compact topology summary used in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySummary {
    pub r: usize,
    pub l: usize,
    pub classes: Vec<HomologyClass>,
    pub ovals: Vec<bool>,
    pub total_class: HomologyClass,
}

impl From<&RealLocus> for TopologySummary {
    fn from(locus: &RealLocus) -> Self {
        TopologySummary {
            r: locus.r,
            l: locus.l,
            classes: locus.loops.iter().map(|lp| lp.class).collect(),
            ovals: locus.loops.iter().map(|lp| lp.oval).collect(),
            total_class: locus.total_class(),
        }
    }
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let s = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&s)?)
}
