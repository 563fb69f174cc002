//! Separating morphisms: pencils of planes and quadrics on space sextics,
//! their fibers, degree vectors and certificates.

mod fiber;
mod pencil;
mod solve;

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::algebra::{c64, MultiForm, C64};

pub(crate) use fiber::interlace;
pub use fiber::{
    fiber_at, fiber_winding, interlacing_check, is_special_divisor, separating_certificate, theta_grid, CertifyParams,
    Fiber, FiberPoint, SeparatingCertificate, SpecialityData, WindingData,
};
pub(crate) use pencil::residual_pencil;
pub use pencil::{plane_pencil, quadric_pencil_through, PlaneBase};
pub(crate) use solve::intersect;

/// A curve point (original coordinates) with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivisorPoint {
    pub re: [f64; 4],
    pub im: [f64; 4],
    pub mult: u32,
}

impl DivisorPoint {
    pub fn real(p: [f64; 4]) -> Self {
        DivisorPoint { re: p, im: [0.0; 4], mult: 1 }
    }

    pub fn complex(z: &[C64; 4]) -> Self {
        DivisorPoint { re: z.map(|c| c.re), im: z.map(|c| c.im), mult: 1 }
    }

    pub fn coords(&self) -> [C64; 4] {
        [0, 1, 2, 3].map(|i| c64(self.re[i], self.im[i]))
    }

    /// Real up to a complex scale, within `tol` after normalizing the largest
    /// coordinate to 1.
    pub fn is_real(&self, tol: f64) -> bool {
        im_after_normalizing(&self.coords()) < tol
    }
}

/// Largest |Im| of a projective point once its largest coordinate is 1.
pub fn im_after_normalizing(z: &[C64; 4]) -> f64 {
    let j = (0..4).max_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm())).unwrap_or(0);
    if z[j].norm() == 0.0 {
        return 0.0;
    }
    z.iter().map(|c| (*c / z[j]).im.abs()).fold(0.0, f64::max)
}

/// Real representative of a projective point whose imaginary part is
/// negligible.
pub fn real_part_normalized(z: &[C64; 4]) -> [f64; 4] {
    let j = (0..4).max_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm())).unwrap_or(0);
    z.map(|c| (c / z[j]).re)
}

/// Effective divisor as a list of points with multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Divisor {
    pub points: Vec<DivisorPoint>,
}

impl Divisor {
    pub fn from_real(points: &[[f64; 4]]) -> Self {
        Divisor { points: points.iter().map(|p| DivisorPoint::real(*p)).collect() }
    }

    pub fn degree(&self) -> usize {
        self.points.iter().map(|p| p.mult as usize).sum()
    }

    /// Every non-real point has its conjugate in the list.
    pub fn is_conj_invariant(&self, tol: f64) -> bool {
        self.points.iter().all(|p| {
            if p.is_real(tol) {
                return true;
            }
            let c = p.coords().map(|z| z.conj());
            self.points
                .iter()
                .any(|q| q.mult == p.mult && crate::algebra::linalg::proj_dist_c(&q.coords(), &c) < tol.sqrt())
        })
    }
}

/// Per-component covering degrees (d₁, …, d_r).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreeVector(pub Vec<u32>);

impl DegreeVector {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl core::fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PencilKind {
    PlanePencil,
    QuadricPencil,
}

/// The map p ↦ [S₀(p) : S₁(p)] on a space sextic, forms in original
/// coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pencil {
    pub kind: PencilKind,
    #[serde(rename = "S0")]
    pub s0: MultiForm,
    #[serde(rename = "S1")]
    pub s1: MultiForm,
    pub base: Divisor,
    pub degree: usize,
}

impl Pencil {
    /// Member sin θ·S₀ − cos θ·S₁, whose zeros off the base form the fiber
    /// over [cos θ : sin θ].
    pub fn member(&self, theta: f64) -> MultiForm {
        let (s, c) = theta.sin_cos();
        self.s0.scale(s).axpy(-c, &self.s1).expect("pencil forms share a degree")
    }

    /// Reparametrizes by an invertible real 2×2 matrix acting on (S₀, S₁).
    pub fn mobius(&self, m: [[f64; 2]; 2]) -> Self {
        let s0 = self.s0.scale(m[0][0]).axpy(m[0][1], &self.s1).expect("same degree");
        let s1 = self.s0.scale(m[1][0]).axpy(m[1][1], &self.s1).expect("same degree");
        Pencil { s0, s1, ..self.clone() }
    }
}

#[cfg(test)]
mod tests;
