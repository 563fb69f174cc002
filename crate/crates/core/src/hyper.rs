//! Hyperelliptic curves y² = F(x) with F positive on ℝ: the hyperelliptic
//! projection, pencils attached to alternating divisors, their fibers,
//! certificates and orientations.
//!
//! Positions on ℝC. Every branch is traversed with x increasing and
//! parametrized by s = 2·atan(x) + π. For odd g the branches y > 0 and y < 0
//! are the components 0 and 1, each of length 2π. For even g ℝC is a single
//! loop of length 4π: the branch y > 0 on (0, 2π), the branch y < 0 on
//! (2π, 4π), glued through the points at infinity ∞₊ (s = 2π) and ∞₋ (s = 0).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::algebra::linalg::{rank, solve, Matrix};
use crate::algebra::poly::partition_roots;
use crate::algebra::UniPoly;
use crate::error::{invalid, Error, Result};
use crate::morphism::{interlace, CertifyParams, DegreeVector};
use crate::topology::{Crossing, LoopOrientation, OrientationAssignment};

/// The curve y² = F(x), deg F = 2g + 2, F > 0 on ℝ and square-free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HyperJson", into = "HyperJson")]
pub struct HyperellipticCurve {
    pub genus: u32,
    pub f: UniPoly,
}

#[derive(Serialize, Deserialize)]
struct HyperJson {
    genus: u32,
    #[serde(rename = "F")]
    f: Vec<f64>,
}

impl TryFrom<HyperJson> for HyperellipticCurve {
    type Error = Error;

    fn try_from(j: HyperJson) -> Result<Self> {
        HyperellipticCurve::new(j.genus, UniPoly::new(j.f))
    }
}

impl From<HyperellipticCurve> for HyperJson {
    fn from(h: HyperellipticCurve) -> Self {
        HyperJson { genus: h.genus, f: h.f.coeffs }
    }
}

impl HyperellipticCurve {
    pub fn new(genus: u32, f: UniPoly) -> Result<Self> {
        if genus == 0 {
            return Err(invalid("genus must be at least 1"));
        }
        let n = 2 * genus as usize + 2;
        if f.degree() != Some(n) {
            return Err(invalid(format!("F must have degree {n}, got {:?}", f.degree())));
        }
        if f.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(invalid("F has non-finite coefficients"));
        }
        let roots = f.roots()?;
        let scale = 1.0 + roots.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if let Some(z) = roots.iter().find(|z| z.im.abs() < 1e-9 * scale) {
            return Err(invalid(format!("F has a real root near {:.6}", z.re)));
        }
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if (roots[i] - roots[j]).norm() < 1e-7 * scale {
                    return Err(invalid("F is not square-free"));
                }
            }
        }
        if f.coeffs[n] < 0.0 {
            return Err(invalid("F is negative on ℝ"));
        }
        Ok(HyperellipticCurve { genus, f })
    }

    pub fn is_odd(&self) -> bool {
        self.genus % 2 == 1
    }

    /// ⌊(g + 1)/2⌋
    pub fn m(&self) -> u32 {
        self.genus.div_ceil(2)
    }

    pub fn n_components(&self) -> usize {
        if self.is_odd() {
            2
        } else {
            1
        }
    }

    /// (component, length) for each loop of ℝC.
    pub fn loops(&self) -> Vec<(usize, f64)> {
        if self.is_odd() {
            vec![(0, TAU), (1, TAU)]
        } else {
            vec![(0, 2.0 * TAU)]
        }
    }

    /// √F(x) with the sign of the branch.
    pub fn y(&self, x: f64, upper: bool) -> f64 {
        let r = self.f.eval(x).sqrt();
        if upper {
            r
        } else {
            -r
        }
    }

    /// Position (component, arc) of a finite real point.
    pub fn position(&self, x: f64, y: f64) -> (usize, f64) {
        let s = 2.0 * x.atan() + PI;
        match (self.is_odd(), y > 0.0) {
            (true, true) => (0, s),
            (true, false) => (1, s),
            (false, true) => (0, s),
            (false, false) => (0, s + TAU),
        }
    }

    /// Position of ∞₊ (`upper`) or ∞₋.
    pub fn position_at_infinity(&self, upper: bool) -> (usize, f64) {
        match (self.is_odd(), upper) {
            (true, true) => (0, 0.0),
            (true, false) => (1, 0.0),
            (false, true) => (0, TAU),
            (false, false) => (0, 0.0),
        }
    }

    /// The finite point at a position; `None` at the points at infinity.
    pub fn point_at(&self, component: usize, arc: f64) -> Option<(f64, f64)> {
        let len = if self.is_odd() { TAU } else { 2.0 * TAU };
        let s = arc - len * (arc / len).floor();
        let (upper, s) = match (self.is_odd(), component) {
            (true, 0) => (true, s),
            (true, _) => (false, s),
            (false, _) if s < TAU => (true, s),
            (false, _) => (false, s - TAU),
        };
        let x = ((s - PI) / 2.0).tan();
        if !x.is_finite() || s <= 0.0 {
            return None;
        }
        Some((x, self.y(x, upper)))
    }

    /// Coefficient of x^{2g+2}.
    pub fn leading(&self) -> f64 {
        self.f.coeffs[2 * self.genus as usize + 2]
    }
}

/// Centered spread aᵢ = i − g/2.
pub fn default_spread(g: u32) -> Vec<f64> {
    (0..=g).map(|i| i as f64 - g as f64 / 2.0).collect()
}

/// F = ∏ᵢ (x − aᵢ)² + δ.
pub fn model_hyperelliptic(g: u32, spread: &[f64], delta: f64) -> Result<HyperellipticCurve> {
    if g == 0 {
        return Err(invalid("genus must be at least 1"));
    }
    if spread.len() != g as usize + 1 {
        return Err(invalid(format!("a spread of {} values is needed for genus {g}", g + 1)));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(invalid("δ must be positive"));
    }
    for i in 0..spread.len() {
        for j in i + 1..spread.len() {
            if (spread[i] - spread[j]).abs() < 1e-9 {
                return Err(invalid(format!("repeated spread value {}", spread[i])));
            }
        }
    }
    let p = UniPoly::from_roots(spread);
    HyperellipticCurve::new(g, p.mul(&p).add(&UniPoly::constant(delta)))
}

/// The rational function f = (a + b·y)/c on C. With b ≡ 0 it factors
/// through the hyperelliptic projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperMap {
    #[serde(with = "poly_coeffs")]
    pub a: UniPoly,
    #[serde(with = "poly_coeffs")]
    pub b: UniPoly,
    #[serde(with = "poly_coeffs")]
    pub c: UniPoly,
}

mod poly_coeffs {
    use alloc::vec::Vec;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::algebra::UniPoly;

    pub fn serialize<S: Serializer>(p: &UniPoly, s: S) -> Result<S::Ok, S::Error> {
        p.coeffs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<UniPoly, D::Error> {
        Ok(UniPoly::new(Vec::<f64>::deserialize(d)?))
    }
}

impl HyperMap {
    /// (x, y) ↦ x.
    pub fn projection() -> Self {
        HyperMap { a: UniPoly::new(vec![0.0, 1.0]), b: UniPoly::zero(), c: UniPoly::constant(1.0) }
    }

    pub fn factors_through_x(&self) -> bool {
        self.b.is_zero()
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        (self.a.eval(x) + self.b.eval(x) * y) / self.c.eval(x)
    }

    /// df/dx along C at a finite point.
    pub fn derivative(&self, h: &HyperellipticCurve, x: f64, y: f64) -> f64 {
        let (a, b, c) = (self.a.eval(x), self.b.eval(x), self.c.eval(x));
        let (da, db, dc) = (self.a.derivative().eval(x), self.b.derivative().eval(x), self.c.derivative().eval(x));
        let dy = h.f.derivative().eval(x) / (2.0 * y);
        ((da + db * y + b * dy) * c - (a + b * y) * dc) / (c * c)
    }

    /// Limits of f at ∞₊ and ∞₋ (infinite when f has a pole there).
    pub fn limits_at_infinity(&self, h: &HyperellipticCurve) -> [f64; 2] {
        let g1 = h.genus as usize + 1;
        let root = h.leading().sqrt();
        let dc = self.c.degree().unwrap_or(0);
        let lead = |p: &UniPoly, d: usize| if p.degree() == Some(d) { p.coeffs[d] } else { 0.0 };
        [1.0, -1.0].map(|sgn| {
            // numerator degree: max(deg a, deg b + g + 1)
            let da = self.a.degree().unwrap_or(0);
            let db = self.b.degree().map(|d| d + g1).unwrap_or(0);
            let dn = da.max(db);
            let top = lead(&self.a, dn)
                + if db == dn && !self.b.is_zero() { sgn * root * lead(&self.b, dn - g1) } else { 0.0 };
            if dn > dc && top != 0.0 {
                f64::INFINITY
            } else if dn == dc {
                top / self.c.coeffs[dc]
            } else {
                0.0
            }
        })
    }
}

/// A real point of a fiber, finite or at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperPoint {
    /// `None` for ∞₊ and ∞₋.
    pub xy: Option<(f64, f64)>,
    pub component: usize,
    pub arc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperFiber {
    pub t: f64,
    pub points: Vec<HyperPoint>,
    /// Number of non-real points.
    pub complex: usize,
    pub all_real: bool,
    pub max_im_real: f64,
    #[serde(with = "crate::inf_as_null")]
    pub min_im_pair: f64,
}

impl HyperFiber {
    pub fn counts(&self, r: usize) -> Vec<u32> {
        let mut out = vec![0; r];
        for p in &self.points {
            out[p.component] += 1;
        }
        out
    }

    fn marks(&self) -> Vec<(usize, f64)> {
        self.points.iter().map(|p| (p.component, p.arc)).collect()
    }
}

/// Remainder of (a² − b²F) modulo c, relative to the size of a² − b²F. It
/// vanishes exactly when the numerator of f vanishes on the conjugates of
/// the zeros of c, i.e. when the pole divisor of f is the zero set of c.
pub fn base_residual(h: &HyperellipticCurve, f: &HyperMap) -> Result<f64> {
    let n = f.a.mul(&f.a).sub(&f.b.mul(&f.b).mul(&h.f));
    let (_, r) = n.div_rem(&f.c)?;
    Ok(r.max_abs() / n.max_abs().max(f64::MIN_POSITIVE))
}

/// The polynomial whose roots are the x-coordinates of the fiber f = t, and
/// the degree it would have without points at infinity.
fn fiber_polynomial(h: &HyperellipticCurve, f: &HyperMap, t: f64) -> Result<(UniPoly, usize)> {
    let tc_a = f.c.scale(t).sub(&f.a);
    if f.factors_through_x() {
        let d = f.a.degree().unwrap_or(0).max(f.c.degree().unwrap_or(0));
        return Ok((tc_a, d));
    }
    // (tc − a)² − b²F = c·(t²c − 2ta + q) with a² − b²F = c·q + (remainder)
    let (q, _) = f.a.mul(&f.a).sub(&f.b.mul(&f.b).mul(&h.f)).div_rem(&f.c)?;
    let p = f.c.scale(t * t).sub(&f.a.scale(2.0 * t)).add(&q);
    let full = 2 * f
        .c
        .degree()
        .unwrap_or(0)
        .max(f.a.degree().unwrap_or(0))
        .max(f.b.degree().map(|d| d + h.genus as usize + 1).unwrap_or(0));
    Ok((p, full - f.c.degree().unwrap_or(0)))
}

/// The fiber f = t.
pub fn hyper_fiber_at(h: &HyperellipticCurve, f: &HyperMap, t: f64, tol_im: f64) -> Result<HyperFiber> {
    if !t.is_finite() {
        return Err(invalid("t must be finite"));
    }
    if f.c.is_zero() {
        return Err(invalid("the denominator of f vanishes identically"));
    }
    let (p, full) = fiber_polynomial(h, f, t)?;
    if p.is_zero() {
        return Err(invalid(format!("f is constant {t}")));
    }
    let roots = p.roots()?;
    let part = partition_roots(&roots, tol_im)?;
    let mut points = Vec::new();
    for &x in &part.real {
        if f.factors_through_x() {
            for upper in [true, false] {
                let y = h.y(x, upper);
                let (component, arc) = h.position(x, y);
                points.push(HyperPoint { xy: Some((x, y)), component, arc });
            }
            continue;
        }
        let u = t * f.c.eval(x) - f.a.eval(x);
        let b = f.b.eval(x);
        // y = (tc − a)/b = b·F/(tc − a): only the sign is taken from the quotient
        if u * b == 0.0 || !(u * b).is_finite() {
            return Err(Error::Ambiguous(format!("fiber point at x = {x:.6} has no determined branch")));
        }
        let y = h.y(x, u * b > 0.0);
        let (component, arc) = h.position(x, y);
        points.push(HyperPoint { xy: Some((x, y)), component, arc });
    }
    let finite_count = if f.factors_through_x() { 2 * roots.len() } else { roots.len() };
    let at_inf = if f.factors_through_x() { 2 * full } else { full }.saturating_sub(finite_count);
    if at_inf > 0 {
        let lim = f.limits_at_infinity(h);
        if f.factors_through_x() {
            for upper in [true, false] {
                let (component, arc) = h.position_at_infinity(upper);
                points.extend((0..at_inf / 2).map(|_| HyperPoint { xy: None, component, arc }));
            }
        } else {
            for _ in 0..at_inf {
                let upper = (lim[0] - t).abs() <= (lim[1] - t).abs();
                let (component, arc) = h.position_at_infinity(upper);
                points.push(HyperPoint { xy: None, component, arc });
            }
        }
    }
    let complex = 2 * part.pairs.len() * if f.factors_through_x() { 2 } else { 1 };
    Ok(HyperFiber {
        t,
        points,
        complex,
        all_real: complex == 0,
        max_im_real: part.max_im_real,
        min_im_pair: part.min_im_pair,
    })
}

/// Sample values tₖ = tan(π(k + ½)/n − π/2), spread uniformly over ℝP¹.
pub fn t_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| (PI * (k as f64 + 0.5) / n as f64 - PI / 2.0).tan()).collect()
}

/// A sampled certificate that f is a separating morphism: every sampled
/// fiber is real, with constant counts, and f is monotone along every
/// component with the recorded signs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperCertificate {
    pub degree_vector: DegreeVector,
    pub n_samples: usize,
    pub max_im_real: f64,
    #[serde(with = "crate::inf_as_null")]
    pub min_im_pair: f64,
    /// Sign of df/ds along the stored traversal of each component.
    pub signs: Vec<i8>,
}

/// Signs of df/ds at the finite points of a fiber, per component.
fn fiber_signs(h: &HyperellipticCurve, f: &HyperMap, fib: &HyperFiber, signs: &mut [i8]) -> Result<()> {
    for p in &fib.points {
        let Some((x, y)) = p.xy else { continue };
        let d = f.derivative(h, x, y);
        if !d.is_finite() || d == 0.0 {
            return Err(Error::NotSeparating { witness: fib.t });
        }
        let s = if d > 0.0 { 1 } else { -1 };
        match signs[p.component] {
            0 => signs[p.component] = s,
            old if old != s => return Err(Error::NotSeparating { witness: fib.t }),
            _ => {}
        }
    }
    Ok(())
}

pub fn hyper_certificate(h: &HyperellipticCurve, f: &HyperMap, params: &CertifyParams) -> Result<HyperCertificate> {
    if params.n_samples < 2 {
        return Err(invalid("at least two samples are needed"));
    }
    let r = h.n_components();
    let mut counts: Option<Vec<u32>> = None;
    let mut signs = vec![0i8; r];
    let (mut max_im_real, mut min_im_pair) = (0.0f64, f64::INFINITY);
    for t in t_grid(params.n_samples) {
        let fib = hyper_fiber_at(h, f, t, params.tol_im)?;
        if !fib.all_real {
            return Err(Error::NotSeparating { witness: t });
        }
        max_im_real = max_im_real.max(fib.max_im_real);
        min_im_pair = min_im_pair.min(fib.min_im_pair);
        let c = fib.counts(r);
        match &counts {
            None => counts = Some(c),
            Some(old) if *old != c => return Err(Error::NotSeparating { witness: t }),
            _ => {}
        }
        fiber_signs(h, f, &fib, &mut signs)?;
    }
    let counts = counts.unwrap_or_default();
    if counts.iter().any(|&c| c == 0) || signs.iter().any(|&s| s == 0) {
        return Err(Error::NotSeparating { witness: f64::NAN });
    }
    Ok(HyperCertificate {
        degree_vector: DegreeVector(counts),
        n_samples: params.n_samples,
        max_im_real,
        min_im_pair,
        signs,
    })
}

/// The complex orientation induced by a certified separating f: each
/// component oriented so that f covers ℝP¹ preserving orientation.
/// Anchored at the first component.
pub fn hyper_complex_orientation(
    h: &HyperellipticCurve,
    f: &HyperMap,
    cert: &HyperCertificate,
) -> Result<OrientationAssignment> {
    if cert.signs.len() != h.n_components() {
        return Err(invalid("the certificate belongs to another curve"));
    }
    // re-derive the signs from one fresh fiber
    let mut signs = vec![0i8; cert.signs.len()];
    fiber_signs(h, f, &hyper_fiber_at(h, f, 0.377, 1e-7)?, &mut signs)
        .map_err(|_| invalid("f does not carry a matching separating certificate"))?;
    if signs.iter().zip(&cert.signs).any(|(a, b)| *a != 0 && a != b) {
        return Err(invalid("f does not carry a matching separating certificate"));
    }
    let loops = h
        .loops()
        .into_iter()
        .zip(&cert.signs)
        .map(|((_, length), &s)| LoopOrientation { length, crossings: Vec::new(), signs: vec![s] })
        .collect();
    Ok(OrientationAssignment { loops }.anchored())
}

/// The D-orientation of the form ∏ⱼ(x − x̄ⱼ)²·dx/y, whose divisor is twice
/// the fibers over the x̄ⱼ (plus the fiber at infinity for even g).
pub fn hyper_d_orientation(h: &HyperellipticCurve, xbar: &[f64]) -> Result<OrientationAssignment> {
    for (i, x) in xbar.iter().enumerate() {
        if !x.is_finite() {
            return Err(invalid("fiber coordinates must be finite"));
        }
        if xbar[..i].iter().any(|y| (x - y).abs() < 1e-12) {
            return Err(invalid(format!("repeated fiber coordinate {x}")));
        }
    }
    let mut loops = Vec::new();
    for (component, length) in h.loops() {
        let mut crossings: Vec<Crossing> = Vec::new();
        for &x in xbar {
            let s = 2.0 * x.atan() + PI;
            crossings.push(Crossing { arc: s, flips: false });
            if !h.is_odd() {
                crossings.push(Crossing { arc: s + TAU, flips: false });
            }
        }
        if !h.is_odd() {
            crossings.push(Crossing { arc: 0.0, flips: true });
            crossings.push(Crossing { arc: TAU, flips: true });
        }
        crossings.sort_by(|a, b| a.arc.total_cmp(&b.arc));
        // dx > 0 along the traversal, so the sign is that of y
        let sign_on = |s: f64| -> i8 {
            let upper = if h.is_odd() { component == 0 } else { s < TAU };
            if upper {
                1
            } else {
                -1
            }
        };
        let signs = if crossings.is_empty() {
            vec![sign_on(PI)]
        } else {
            (0..crossings.len())
                .map(|j| {
                    let a = crossings[j].arc;
                    let b = if j + 1 < crossings.len() { crossings[j + 1].arc } else { crossings[0].arc + length };
                    sign_on(((a + b) / 2.0) % length)
                })
                .collect()
        };
        loops.push(LoopOrientation { length, crossings, signs });
    }
    Ok(OrientationAssignment { loops })
}

/// |Σⱼ q(xⱼ)/(yⱼ·f′(pⱼ))| over the fiber f = t, with the sum of the
/// absolute values of the terms as its natural scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbelResidual {
    pub residual: f64,
    pub scale: f64,
}

impl AbelResidual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.residual / self.scale
        }
    }
}

pub fn abel_sum_residual(h: &HyperellipticCurve, f: &HyperMap, t: f64, q: &UniPoly) -> Result<AbelResidual> {
    if q.degree().is_some_and(|d| d + 1 > h.genus as usize) {
        return Err(invalid("q must have degree at most g − 1"));
    }
    let fib = hyper_fiber_at(h, f, t, 1e-7)?;
    if !fib.all_real {
        return Err(invalid(format!("the fiber at t = {t} is not real")));
    }
    let (mut sum, mut scale) = (0.0, 0.0);
    for p in &fib.points {
        // the forms q dx/y, deg q ≤ g − 1, are regular at infinity
        let Some((x, y)) = p.xy else {
            return Err(invalid(format!("the fiber at t = {t} meets infinity")));
        };
        let d = f.derivative(h, x, y);
        if d.abs() < 1e-12 * (1.0 + t.abs()) {
            return Err(Error::Ambiguous(format!("critical fiber at t = {t}")));
        }
        let term = q.eval(x) / (y * d);
        sum += term;
        scale += term.abs();
    }
    Ok(AbelResidual { residual: sum.abs(), scale })
}

/// Whether two disjoint all-real fibers interlace on every component.
pub fn hyper_interlacing_check(h: &HyperellipticCurve, p: &HyperFiber, q: &HyperFiber) -> Result<bool> {
    if !p.all_real || !q.all_real {
        return Err(invalid("interlacing needs all-real fibers"));
    }
    interlace(&p.marks(), &q.marks(), &h.loops())
}

/// Speciality of an affine divisor with simple points: special iff some
/// form q(x)dx/y with deg q ≤ g − 1 vanishes on it, iff the matrix
/// (xᵢᵏ), k < g, has rank below g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperSpeciality {
    pub special: bool,
    pub rank: usize,
}

pub fn hyper_speciality(h: &HyperellipticCurve, points: &[(f64, f64)]) -> HyperSpeciality {
    let g = h.genus as usize;
    let rows: Vec<Vec<f64>> = points.iter().map(|&(x, _)| (0..g).map(|k| x.powi(k as i32)).collect()).collect();
    let r = if rows.is_empty() { 0 } else { rank(&Matrix::from_rows(&rows), 1e-9) };
    HyperSpeciality { special: r < g, rank: r }
}

/// Default alternating divisor: g + 1 points between consecutive spread
/// values and beyond, with sign(yᵢ) = (−1)ⁱ.
pub fn alternating_divisor(h: &HyperellipticCurve, xs: &[f64]) -> Result<Vec<(f64, f64)>> {
    if xs.len() != h.genus as usize + 1 {
        return Err(invalid(format!("an alternating divisor of genus {} has {} points", h.genus, h.genus + 1)));
    }
    Ok(xs.iter().enumerate().map(|(i, &x)| (x, h.y(x, i % 2 == 1))).collect())
}

/// A function f = (a + b·y)/c whose pole divisor is P = p₁ + … + pₙ,
/// n = g + 1, for points with x₁ < … < xₙ and alternating branches.
///
/// f lies in L(P) when c = ∏(x − xᵢ), deg b + g + 1 ≤ n and deg a ≤ n and
/// the numerator vanishes at the conjugates (xᵢ, −yᵢ). That leaves b
/// constant; we fix b = 1 and the xⁿ-coefficient of a to 0 (adding a
/// multiple of c only shifts f).
pub fn hyper_pencil_from_divisor(h: &HyperellipticCurve, points: &[(f64, f64)]) -> Result<HyperMap> {
    let n = h.genus as usize + 1;
    if points.len() != n {
        return Err(invalid(format!("the divisor must have g + 1 = {n} points, got {}", points.len())));
    }
    for w in points.windows(2) {
        if (w[1].0 - w[0].0).abs() < 1e-9 {
            return Err(Error::RankDeficient(format!("repeated x = {}", w[0].0)));
        }
        if w[1].0 < w[0].0 {
            return Err(invalid("points must be sorted by x"));
        }
        if (w[0].1 > 0.0) == (w[1].1 > 0.0) {
            return Err(invalid("consecutive points must lie on opposite branches"));
        }
    }
    for &(x, y) in points {
        let fx = h.f.eval(x);
        if (y * y - fx).abs() > 1e-9 * fx {
            return Err(invalid(format!("({x}, {y}) is not on the curve")));
        }
    }
    // unknowns: a₀..aₙ, b₀
    let dim = n + 2;
    let mut rows = Vec::with_capacity(dim);
    let mut rhs = Vec::with_capacity(dim);
    for &(x, y) in points {
        let mut row: Vec<f64> = (0..=n).map(|k| x.powi(k as i32)).collect();
        row.push(y);
        rows.push(row);
        rhs.push(0.0);
    }
    let mut lead = vec![0.0; dim];
    lead[n] = 1.0;
    rows.push(lead);
    rhs.push(0.0);
    let mut norm = vec![0.0; dim];
    norm[n + 1] = 1.0;
    rows.push(norm);
    rhs.push(1.0);
    let sol = solve(&Matrix::from_rows(&rows), &rhs)
        .map_err(|_| Error::RankDeficient(String::from("the divisor does not move in a pencil")))?;
    // the numerator is a + b·y with a = −(solution), so that it vanishes at (xᵢ, −yᵢ)
    let a = UniPoly::new(sol[..=n].iter().map(|v| -v).collect());
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let f = HyperMap { a, b: UniPoly::constant(1.0), c: UniPoly::from_roots(&xs) };
    let res = base_residual(h, &f)?;
    if res > 1e-8 {
        return Err(Error::RankDeficient(format!("base residual {res:.2e}")));
    }
    Ok(f)
}

/// A certified realization on a hyperelliptic curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperRealization {
    pub description: String,
    pub map: HyperMap,
    pub certificate: HyperCertificate,
    /// Speciality of the fiber at t = 0.
    pub speciality: HyperSpeciality,
}

impl HyperRealization {
    pub fn nonspecial(&self) -> bool {
        !self.speciality.special
    }
}

fn realization(
    h: &HyperellipticCurve,
    map: HyperMap,
    description: String,
    params: &CertifyParams,
) -> Result<HyperRealization> {
    let certificate = hyper_certificate(h, &map, params)?;
    let fib = hyper_fiber_at(h, &map, 0.0, params.tol_im)?;
    let pts: Vec<(f64, f64)> = fib.points.iter().filter_map(|p| p.xy).collect();
    if pts.len() != fib.points.len() {
        return Err(invalid("the fiber at t = 0 meets infinity"));
    }
    Ok(HyperRealization { description, map, certificate, speciality: hyper_speciality(h, &pts) })
}

/// The hyperelliptic projection, realizing 2 (even g) or (1, 1) (odd g).
pub fn realize_projection(h: &HyperellipticCurve, params: &CertifyParams) -> Result<HyperRealization> {
    realization(h, HyperMap::projection(), String::from("hyperelliptic projection"), params)
}

/// Default abscissae of the alternating divisor: one just right of each
/// spread value of the default model.
pub fn default_divisor_xs(g: u32) -> Vec<f64> {
    default_spread(g).into_iter().map(|a| a + 0.3).collect()
}

/// The pencil of an alternating (g + 1)-point divisor, realizing g + 1 (even
/// g) or (m, m) (odd g). Uncertified attempts are retried with the points
/// jittered by 10⁻³ up to five times.
pub fn realize_alternating(h: &HyperellipticCurve, xs: &[f64], params: &CertifyParams) -> Result<HyperRealization> {
    let mut last = None;
    for attempt in 0..6 {
        let jit: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| x + 1e-3 * attempt as f64 * if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let p = alternating_divisor(h, &jit)?;
        let out = hyper_pencil_from_divisor(h, &p)
            .and_then(|f| realization(h, f, format!("pencil of the alternating divisor over x = {:.3?}", jit), params));
        match out {
            Ok(r) => return Ok(r),
            Err(e @ (Error::RankDeficient(_) | Error::NotSeparating { .. } | Error::Ambiguous(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::NotRealized(String::from("alternating pencil"))))
}
