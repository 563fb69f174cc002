//! Mod-2 linking of a real line with a null-homologous loop in ℝP³.
//!
//! The loop lifts to a closed curve Γ̃ on S³ and the line to a great circle
//! L̃; the mod-2 linking number in ℝP³ equals lk(L̃, Γ̃) mod 2. The latter is
//! the parity of the crossings where L̃ passes over Γ̃ in a generic planar
//! diagram of their stereographic images.

use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use super::trace::TracedLoop;
use crate::algebra::linalg::{dot4, normalize4};
use crate::error::{invalid, Error, Result};
use crate::quadric::RealLine;

const LINE_SAMPLES: usize = 1024;

/// Candidate projection poles on S³.
fn poles() -> Vec<[f64; 4]> {
    // a fixed low-discrepancy set
    (0..48)
        .map(|k| {
            let k = k as f64 + 0.5;
            let a = TAU * (k * 0.618_033_988_75).fract();
            let b = TAU * (k * 0.754_877_666_2).fract();
            let t = (k / 48.0).sqrt();
            let (r1, r2) = ((1.0 - t * t).sqrt(), t);
            [r1 * a.cos(), r1 * a.sin(), r2 * b.cos(), r2 * b.sin()]
        })
        .collect()
}

/// Stereographic projection from `n` (unit) to the 3-space n⊥ with basis `e`.
fn stereo(x: &[f64; 4], n: &[f64; 4], e: &[[f64; 4]; 3]) -> [f64; 3] {
    let d = 1.0 - dot4(x, n);
    [dot4(x, &e[0]) / d, dot4(x, &e[1]) / d, dot4(x, &e[2]) / d]
}

fn complement_basis(n: &[f64; 4]) -> [[f64; 4]; 3] {
    let mut out: Vec<[f64; 4]> = Vec::with_capacity(3);
    for k in 0..4 {
        let mut v = [0.0; 4];
        v[k] = 1.0;
        for b in core::iter::once(n).chain(out.iter()) {
            let s = dot4(&v, b);
            for i in 0..4 {
                v[i] -= s * b[i];
            }
        }
        if dot4(&v, &v) > 1e-6 {
            out.push(normalize4(&v));
        }
        if out.len() == 3 {
            break;
        }
    }
    [out[0], out[1], out[2]]
}

/// Number of crossings (mod 2) where polygon `a` passes over polygon `b`
/// when viewed along the third axis of the rotated frame.
fn over_parity(a: &[[f64; 3]], b: &[[f64; 3]]) -> bool {
    // a fixed generic viewing frame
    let w = {
        let v = [0.2672, -0.5345, 0.8018];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let x = {
        let v = [1.0 - w[0] * w[0], -w[0] * w[1], -w[0] * w[2]];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let y = [w[1] * x[2] - w[2] * x[1], w[2] * x[0] - w[0] * x[2], w[0] * x[1] - w[1] * x[0]];
    let proj = |p: &[f64; 3]| {
        let d = |q: &[f64; 3]| p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
        (d(&x), d(&y), d(&w))
    };
    let pa: Vec<_> = a.iter().map(proj).collect();
    let pb: Vec<_> = b.iter().map(proj).collect();
    let mut parity = false;
    for i in 0..pa.len() {
        let (p0, p1) = (pa[i], pa[(i + 1) % pa.len()]);
        let (ax0, ax1) = (p0.0.min(p1.0), p0.0.max(p1.0));
        let (ay0, ay1) = (p0.1.min(p1.1), p0.1.max(p1.1));
        for j in 0..pb.len() {
            let (q0, q1) = (pb[j], pb[(j + 1) % pb.len()]);
            if q0.0.max(q1.0) < ax0 || q0.0.min(q1.0) > ax1 || q0.1.max(q1.1) < ay0 || q0.1.min(q1.1) > ay1 {
                continue;
            }
            let da = (p1.0 - p0.0, p1.1 - p0.1);
            let db = (q1.0 - q0.0, q1.1 - q0.1);
            let den = da.0 * db.1 - da.1 * db.0;
            if den == 0.0 {
                continue;
            }
            let wv = (q0.0 - p0.0, q0.1 - p0.1);
            let t = (wv.0 * db.1 - wv.1 * db.0) / den;
            let s = (wv.0 * da.1 - wv.1 * da.0) / den;
            if (0.0..1.0).contains(&t) && (0.0..1.0).contains(&s) {
                let za = p0.2 + t * (p1.2 - p0.2);
                let zb = q0.2 + s * (q1.2 - q0.2);
                if za > zb {
                    parity = !parity;
                }
            }
        }
    }
    parity
}

/// Whether the line (normalized coordinates) and the loop are linked
/// modulo 2 in ℝP³. The loop must lift to a closed curve on S³ and stay at
/// distance at least `tol` from the line.
pub fn is_linked(line: &RealLine, lp: &TracedLoop, tol: f64) -> Result<bool> {
    if !lp.lift_closes {
        return Err(invalid("the loop is not null-homologous in ℝP³"));
    }
    is_linked_polyline(line, &lp.samples, tol)
}

/// Same for a closed polyline given as a continuous lift to S³ (consecutive
/// samples with positive inner products, closing on itself).
pub fn is_linked_polyline(line: &RealLine, samples: &[[f64; 4]], tol: f64) -> Result<bool> {
    let m = samples.len();
    if m < 3 {
        return Err(invalid("a loop needs at least three samples"));
    }
    if (0..m).any(|i| dot4(&samples[i], &samples[(i + 1) % m]) <= 0.0) {
        return Err(invalid("the polyline is not a closed lift to the sphere"));
    }
    let gap = samples.iter().map(|y| line.distance(y)).fold(f64::INFINITY, f64::min);
    if gap < tol {
        return Err(Error::Incidence(alloc::format!("the line meets the loop (distance {gap:.2e})")));
    }
    let circle: Vec<[f64; 4]> = (0..LINE_SAMPLES).map(|k| line.point(TAU * k as f64 / LINE_SAMPLES as f64)).collect();
    // the pole farthest from both curves
    let clearance = |n: &[f64; 4]| {
        circle.iter().chain(samples).map(|x| 1.0 - dot4(&normalize4(x), n)).fold(f64::INFINITY, f64::min)
    };
    let n = poles()
        .into_iter()
        .max_by(|a, b| clearance(a).total_cmp(&clearance(b)))
        .ok_or_else(|| invalid("no projection pole"))?;
    let e = complement_basis(&n);
    let a: Vec<[f64; 3]> = circle.iter().map(|x| stereo(x, &n, &e)).collect();
    let b: Vec<[f64; 3]> = samples.iter().map(|x| stereo(&normalize4(x), &n, &e)).collect();
    Ok(over_parity(&a, &b))
}
