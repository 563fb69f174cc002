use super::*;
use crate::curve::{recipe, MODEL_ROWS};
use crate::quadric::HomologyClass;

#[test]
fn models_have_expected_topology() {
    for (kind, r, l) in MODEL_ROWS {
        let rec = recipe(kind, r, l).unwrap();
        let c = rec.sextic(rec.default_epsilon);
        let locus = trace_real_locus(&c, &TraceParams::default()).unwrap();
        let classes: alloc::vec::Vec<HomologyClass> = locus.loops.iter().map(|lp| lp.class).collect();
        assert_eq!((locus.r, locus.l), (r, l), "{kind:?} {r} {l}: {classes:?}");
        assert!(locus.max_residual(&c) < 1e-9);
        check_no_planar_component(&locus).unwrap();
    }
}

#[test]
fn model_classes_and_numbering() {
    use crate::quadric::QuadricKind::*;
    for (kind, r, l) in MODEL_ROWS {
        let rec = recipe(kind, r, l).unwrap();
        let c = rec.sextic(rec.default_epsilon);
        let locus = trace_real_locus(&c, &TraceParams::default()).unwrap();
        let total = locus.total_class();
        let expect = match (kind, r, l) {
            (Hyperboloid, 3, 0) => (3, 3),
            (Hyperboloid, 3, 2) => (1, 1),
            (Hyperboloid, 1, 0) => (3, 1),
            (Cone, 3, 0) => (3, 0),
            (Cone, 3, 2) => (1, 0),
            _ => (0, 0),
        };
        assert_eq!((total.a, total.b), expect, "{kind:?} {r} {l}");
        assert!(locus.loops.windows(2).all(|w| w[0].height >= w[1].height));
        assert!(locus.loops.iter().all(|lp| lp.lift_closes));
        if r == 3 && l == 2 {
            assert!(!locus.loops[1].oval, "c2 must be the non-oval");
        }
    }
}

#[test]
fn locate_roundtrip() {
    let rec = recipe(crate::quadric::QuadricKind::Hyperboloid, 3, 0).unwrap();
    let c = rec.sextic(rec.default_epsilon);
    let locus = trace_real_locus(&c, &TraceParams::default()).unwrap();
    for comp in 0..3 {
        let len = locus.loops[comp].length;
        for k in 0..7 {
            let s = len * (k as f64 + 0.3) / 7.0;
            let y = locus.point_at(comp, s);
            let pos = locus.locate_normalized(&y);
            assert_eq!(pos.component, comp);
            assert!(pos.distance < 1e-9);
            let ds = (pos.arc - s).abs();
            assert!(ds.min(len - ds) < 1e-9);
        }
    }
}
