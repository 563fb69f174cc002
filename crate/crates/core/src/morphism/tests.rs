use super::*;
use crate::curve::recipe;
use crate::curve::SpaceSextic;
use crate::quadric::{QuadricKind, RealLine};
use crate::topology::{trace_real_locus, RealLocus, TraceParams};

fn model(kind: QuadricKind, r: usize, l: usize) -> (SpaceSextic, RealLocus) {
    let rec = recipe(kind, r, l).unwrap();
    let c = rec.sextic(rec.default_epsilon);
    let locus = trace_real_locus(&c, &TraceParams::default()).unwrap();
    (c, locus)
}

fn sample(c: &SpaceSextic, locus: &RealLocus, comp: usize, frac: f64) -> [f64; 4] {
    let lp = &locus.loops[comp];
    let i = ((lp.samples.len() as f64) * frac) as usize % lp.samples.len();
    c.quadric.from_normalized(&lp.samples[i])
}

#[test]
fn cone_generator_pencil() {
    let (c, locus) = model(QuadricKind::Cone, 3, 0);
    let apex = c.quadric.from_normalized(&[0.0, 0.0, 0.0, 1.0]);
    let p = sample(&c, &locus, 1, 0.3);
    let f = plane_pencil(&c, &PlaneBase::Line { line: RealLine::new(apex, p) }).unwrap();
    assert_eq!(f.degree, 3);
    let cert = separating_certificate(&c, &f, &locus, &CertifyParams::default()).unwrap();
    assert_eq!(cert.degree_vector, DegreeVector(alloc::vec![1, 1, 1]));
}

#[test]
fn ellipsoid_point_pencil() {
    let (c, locus) = model(QuadricKind::Ellipsoid, 3, 3);
    let p = sample(&c, &locus, 0, 0.1);
    let q = sample(&c, &locus, 2, 0.6);
    let f = plane_pencil(&c, &PlaneBase::PointPair { p, q }).unwrap();
    let cert = separating_certificate(&c, &f, &locus, &CertifyParams::default()).unwrap();
    assert_eq!(cert.degree_vector, DegreeVector(alloc::vec![1, 2, 1]));
    assert!(cert.max_im_real < 1e-6);
}

#[test]
fn hyperboloid_ruling_projection() {
    let (c, locus) = model(QuadricKind::Hyperboloid, 3, 0);
    let p = sample(&c, &locus, 0, 0.2);
    let crate::quadric::Rulings::Lines(lines) = c.quadric.rulings(&p).unwrap() else { panic!() };
    for line in lines {
        let f = plane_pencil(&c, &PlaneBase::Line { line }).unwrap();
        let cert = separating_certificate(&c, &f, &locus, &CertifyParams::default()).unwrap();
        assert_eq!(cert.degree_vector, DegreeVector(alloc::vec![1, 1, 1]));
    }
}
