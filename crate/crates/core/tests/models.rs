use sepsemi_core::curve::{expected_total_class, model_sextic, recipe, MODEL_ROWS};
use sepsemi_core::quadric::QuadricKind;
use sepsemi_core::topology::{trace_real_locus, TraceParams};
use sepsemi_core::Error;

#[test]
fn default_models_have_the_expected_classes() {
    for (kind, r, l) in MODEL_ROWS {
        let eps = recipe(kind, r, l).unwrap().default_epsilon;
        let c = model_sextic(kind, r, l, eps).unwrap();
        let locus = trace_real_locus(&c, &TraceParams::default()).unwrap();
        assert_eq!((locus.r, locus.l), (r, l));
        let want = expected_total_class(kind, r, l).unwrap();
        assert_eq!(locus.total_class().unsigned(), want, "{} {r}/{l}", kind.name());
    }
}

#[test]
fn zero_perturbation_is_refused() {
    for (kind, r, l) in MODEL_ROWS {
        assert!(matches!(model_sextic(kind, r, l, 0.0), Err(Error::InvalidInput(_))));
        assert!(model_sextic(kind, r, l, -0.1).is_err());
        assert!(model_sextic(kind, r, l, f64::NAN).is_err());
    }
}

#[test]
fn large_perturbation_changes_the_topology() {
    for (kind, r, l) in MODEL_ROWS {
        if (kind, r) == (QuadricKind::Hyperboloid, 1) {
            // a single component survives any ε
            assert!(model_sextic(kind, r, l, 10.0).is_ok());
            continue;
        }
        match model_sextic(kind, r, l, 10.0) {
            Err(Error::InvalidInput(m)) => assert!(m.contains("too large"), "{m}"),
            other => panic!("{} {r}/{l}: {other:?}", kind.name()),
        }
    }
}

#[test]
fn unknown_rows_have_no_class() {
    assert!(expected_total_class(QuadricKind::Ellipsoid, 1, 1).is_err());
    assert!(model_sextic(QuadricKind::Cone, 2, 1, 0.01).is_err());
}
