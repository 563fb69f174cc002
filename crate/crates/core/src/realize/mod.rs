//! Realizations of degree vectors on the model sextics: plane pencils
//! through lines, point pairs and conjugate pairs, and quadric pencils
//! through residual divisors of plane-pair sections.

mod plans;
mod search;
mod sections;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::curve::{recipe, SpaceSextic};
use crate::error::Result;
use crate::morphism::{CertifyParams, DegreeVector, Pencil, SeparatingCertificate, SpecialityData};
use crate::quadric::QuadricKind;
use crate::topology::{trace_real_locus, RealLocus, TraceParams};

pub use plans::{realize_row, realize_target, row_plan, Construction, RowOutcome, RowPlan};
pub use search::{quadric_search, QuadricSearch};
pub use sections::{
    plane_from_normalized, plane_to_normalized, section_class, section_points, SectionPoint, SectionPoints,
};

/// A curve with its traced real locus.
#[derive(Debug, Clone)]
pub struct Model {
    pub curve: SpaceSextic,
    pub locus: RealLocus,
}

impl Model {
    pub fn new(curve: SpaceSextic, trace: &TraceParams) -> Result<Self> {
        let locus = trace_real_locus(&curve, trace)?;
        Ok(Model { curve, locus })
    }

    /// The recipe model of a row at its default ε.
    pub fn from_row(kind: QuadricKind, r: usize, l: usize, trace: &TraceParams) -> Result<Self> {
        let rec = recipe(kind, r, l)?;
        Self::new(rec.sextic(rec.default_epsilon), trace)
    }

    pub fn kind(&self) -> QuadricKind {
        self.curve.quadric.kind
    }

    /// A point of component `comp` (original coordinates) at the fraction
    /// `frac` of its samples.
    pub fn sample(&self, comp: usize, frac: f64) -> [f64; 4] {
        let lp = &self.locus.loops[comp];
        let n = lp.samples.len();
        let i = ((n as f64) * frac.rem_euclid_unit()) as usize % n;
        self.curve.quadric.from_normalized(&lp.samples[i])
    }
}

trait UnitFrac {
    fn rem_euclid_unit(self) -> f64;
}

impl UnitFrac for f64 {
    fn rem_euclid_unit(self) -> f64 {
        #[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
        use num_traits::Float;
        self - self.floor()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealizeParams {
    pub certify: CertifyParams,
    /// Tilts δ of the second plane D′ = D ± δE in the quadric-pencil
    /// search, tried in order.
    pub tilts: [f64; 2],
}

impl Default for RealizeParams {
    fn default() -> Self {
        RealizeParams { certify: CertifyParams::default(), tilts: [0.2, 0.05] }
    }
}

/// How a morphism was constructed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Method {
    /// Pencil of planes through a generator of the cone.
    GeneratorPencil,
    /// Pencil of planes through a line of one ruling of the hyperboloid.
    RulingProjection,
    /// Pencil of planes through two real curve points.
    PointPair { components: [usize; 2] },
    /// Pencil of planes through two consecutive real points of a plane
    /// section D ∩ C (plane in normalized coordinates).
    SectionPair { plane: [f64; 4], components: [usize; 2] },
    /// Pencil of planes through a conjugate pair of points of D ∩ C.
    ConjugatePair { plane: [f64; 4] },
    /// Pencil of quadrics through the residual of five points on D ∪ D′.
    QuadricPencil { plane: [f64; 4], placement: Vec<usize> },
}

/// A certified separating morphism with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub method: Method,
    pub description: String,
    pub pencil: Pencil,
    pub certificate: SeparatingCertificate,
    /// Speciality of a sampled fiber; non-special fibers generate the cone
    /// d + ℕ₀ʳ.
    pub speciality: SpecialityData,
}

impl Realization {
    pub fn degree_vector(&self) -> &DegreeVector {
        &self.certificate.degree_vector
    }

    pub fn nonspecial(&self) -> bool {
        !self.speciality.special
    }
}
