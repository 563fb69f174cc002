use std::collections::BTreeSet;

use sepsemi_core::algebra::linalg::{det, normalize4, Matrix};
use sepsemi_core::morphism::{fiber_at, DegreeVector};
use sepsemi_core::quadric::QuadricKind;
use sepsemi_core::realize::*;
use sepsemi_core::semigroup::{closure_up_to_bound, compare_up_to_bound, table1_description, RealizationLedger};
use sepsemi_core::topology::TraceParams;
use sepsemi_core::Error;

fn model(kind: QuadricKind, r: usize, l: usize) -> Model {
    Model::from_row(kind, r, l, &TraceParams::default()).unwrap()
}

/// Largest 4×4 minor of the fiber points: nonzero iff the points span ℙ³,
/// i.e. iff no plane (canonical divisor) contains the fiber.
fn spanning_minor(points: &[[f64; 4]]) -> f64 {
    let n = points.len();
    let mut best: f64 = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let rows: Vec<Vec<f64>> = [a, b, c, d].iter().map(|&i| normalize4(&points[i]).to_vec()).collect();
                    best = best.max(det(&Matrix::from_rows(&rows)).abs());
                }
            }
        }
    }
    best
}

/// Independent re-check of a realization at fresh angles.
fn recheck(m: &Model, x: &Realization) {
    for theta in [0.123, 1.01, 2.2, 2.9] {
        let fib = fiber_at(&m.curve, &x.pencil, Some(&m.locus), theta, 1e-7).unwrap();
        assert!(fib.all_real, "{} at {theta}", x.degree_vector());
        assert_eq!(fib.counts(m.locus.r), x.degree_vector().0);
        let minor = spanning_minor(&fib.real_coords());
        if x.degree_vector().total() == 5 {
            assert_eq!(minor > 1e-6, x.nonspecial(), "{} minor {minor}", x.degree_vector());
        }
    }
}

fn ledger(out: &RowOutcome) -> RealizationLedger {
    let mut l = RealizationLedger::default();
    for x in &out.realized {
        l.push(x.degree_vector().0.clone(), x.description.clone(), x.nonspecial());
    }
    l
}

#[test]
fn hyperboloid_single_component_row() {
    let m = model(QuadricKind::Hyperboloid, 1, 0);
    let out = realize_row(&m, &RealizeParams::default()).unwrap();
    assert!(out.missing.is_empty(), "{:?}", out.missing);
    let got: Vec<u32> = out.realized.iter().map(|x| x.degree_vector().0[0]).collect();
    assert_eq!(got, vec![3, 4, 5]);
    for x in &out.realized {
        recheck(&m, x);
    }
    assert!(out.realized[2].nonspecial());
    let closure = closure_up_to_bound(&ledger(&out), 12).unwrap();
    let cmp = compare_up_to_bound(&table1_description(QuadricKind::Hyperboloid, 1, 0).unwrap(), &closure, 12).unwrap();
    assert!(cmp.agrees(), "{cmp:?}");
}

#[test]
fn ellipsoid_row_closure_matches_table() {
    let m = model(QuadricKind::Ellipsoid, 3, 3);
    let out = realize_row(&m, &RealizeParams::default()).unwrap();
    assert!(out.missing.is_empty(), "{:?}", out.missing);
    for x in &out.realized {
        recheck(&m, x);
        assert!(x.certificate.max_im_real < 1e-6);
    }
    let closure = closure_up_to_bound(&ledger(&out), 9).unwrap();
    let cmp = compare_up_to_bound(&table1_description(QuadricKind::Ellipsoid, 3, 3).unwrap(), &closure, 9).unwrap();
    assert!(cmp.agrees(), "{cmp:?}");
    assert!(closure.contains(&vec![1, 2, 1]) && !closure.contains(&vec![1, 1, 1]));
}

#[test]
fn generator_pencil_on_the_cone() {
    let m = model(QuadricKind::Cone, 3, 0);
    let x = realize_target(&m, &DegreeVector(vec![1, 1, 1]), &RealizeParams::default()).unwrap();
    assert!(matches!(x.method, Method::GeneratorPencil));
    recheck(&m, &x);
}

#[test]
fn bad_targets_are_rejected() {
    let m = model(QuadricKind::Hyperboloid, 1, 0);
    let p = RealizeParams::default();
    assert!(matches!(realize_target(&m, &DegreeVector(vec![1, 2]), &p), Err(Error::InvalidInput(_))));
    assert!(matches!(realize_target(&m, &DegreeVector(vec![7]), &p), Err(Error::InvalidInput(_))));
}

#[test]
fn row_plans_cover_every_row() {
    let rows = [
        (QuadricKind::Ellipsoid, 3, 3),
        (QuadricKind::Cone, 3, 0),
        (QuadricKind::Cone, 3, 2),
        (QuadricKind::Hyperboloid, 1, 0),
        (QuadricKind::Hyperboloid, 3, 0),
        (QuadricKind::Hyperboloid, 3, 2),
    ];
    for (kind, r, l) in rows {
        let plan = row_plan(kind, r, l).unwrap();
        let targets: BTreeSet<Vec<u32>> = plan.targets.iter().map(|(t, _)| t.0.clone()).collect();
        assert_eq!(targets.len(), plan.targets.len());
        assert!(targets.iter().all(|t| t.len() == r));
    }
    assert!(row_plan(QuadricKind::Ellipsoid, 5, 5).is_err());
}

#[test]
fn section_classes() {
    let m = model(QuadricKind::Hyperboloid, 3, 0);
    // horizontal planes cut circles of class a + b
    let c = section_class(&m, &[0.0, 0.0, 1.0, -0.3]).unwrap().unwrap();
    assert_eq!((c.a.abs(), c.b.abs()), (1, 1));
    let e = model(QuadricKind::Ellipsoid, 3, 3);
    let c = section_class(&e, &[0.0, 1.0, 0.0, 0.0]).unwrap().unwrap();
    assert!(c.is_zero());
    let sec = section_points(&e, &[0.0, 1.0, 0.0, 0.0]).unwrap();
    assert_eq!(sec.all.len(), 6);
    assert_eq!(sec.real.len() + sec.complex.len(), 6);
}
