use sepsemi::error::CliError;
use sepsemi::formats::*;
use sepsemi_core::curve::{model_sextic, recipe};
use sepsemi_core::hyper::{default_spread, model_hyperelliptic, HyperellipticCurve};
use sepsemi_core::quadric::QuadricKind;
use sepsemi_core::topology::{trace_real_locus, TraceParams};

fn quad(m: &[[f64; 4]; 4], p: &[f64; 4]) -> f64 {
    (0..4).map(|i| (0..4).map(|j| p[i] * m[i][j] * p[j]).sum::<f64>()).sum()
}

#[test]
fn quadric_documents_classify() {
    let q: QuadricJson = serde_json::from_str(r#"{"matrix": [[2,0,0,0],[0,3,0,0],[0,0,1,0],[0,0,0,-1]]}"#).unwrap();
    let c = ClassifiedJson::from(&q.classify().unwrap());
    assert_eq!(c.kind, QuadricKind::Ellipsoid);
    assert!(c.normalizer_residual < 1e-12);
    let back: ClassifiedJson = serde_json::from_str(&to_json(&c).unwrap()).unwrap();
    assert_eq!(back, c);
    let flat: QuadricJson = serde_json::from_str(r#"{"matrix": [[1,0,0,0],[0,1,0,0],[0,0,0,0],[0,0,0,0]]}"#).unwrap();
    assert!(flat.classify().is_err());
}

#[test]
fn curve_documents_round_trip() {
    let eps = recipe(QuadricKind::Cone, 3, 2).unwrap().default_epsilon;
    let c = model_sextic(QuadricKind::Cone, 3, 2, eps).unwrap();
    let doc = CurveJson::from(&c);
    assert_eq!(doc.cubic.order, "grlex x0<x1<x2<x3");
    assert_eq!(doc.cubic.coeffs.len(), 20);
    let text = to_json(&doc).unwrap();
    let back: CurveJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back, doc);
    let c2 = back.to_curve().unwrap();
    assert_eq!(c2.cubic, c.cubic);
    assert_eq!(c2.provenance, c.provenance);
    let l = trace_real_locus(&c2, &TraceParams::default()).unwrap();
    assert_eq!((l.r, l.l), (3, 2));
}

#[test]
fn foreign_monomial_orders_are_refused() {
    let eps = recipe(QuadricKind::Ellipsoid, 3, 3).unwrap().default_epsilon;
    let mut doc = CurveJson::from(&model_sextic(QuadricKind::Ellipsoid, 3, 3, eps).unwrap());
    doc.cubic.order = "lex x3<x2<x1<x0".into();
    assert!(matches!(doc.to_curve(), Err(CliError::Input(_))));
    doc.cubic.order = "grlex x0<x1<x2<x3".into();
    doc.cubic.coeffs.pop();
    assert!(doc.to_curve().is_err());
}

#[test]
fn locus_samples_lie_on_the_surface() {
    let eps = recipe(QuadricKind::Hyperboloid, 3, 0).unwrap().default_epsilon;
    let c = model_sextic(QuadricKind::Hyperboloid, 3, 0, eps).unwrap();
    let locus = trace_real_locus(&c, &TraceParams::default()).unwrap();
    let doc = LocusJson::new(&locus, 7);
    assert_eq!(doc.loops.len(), 3);
    assert_eq!(doc.total_class, locus.total_class());
    for lp in &doc.loops {
        assert!(lp.samples.len() > 10);
        for p in &lp.samples {
            let n: f64 = p.iter().map(|x| x * x).sum();
            // the surface equation in original coordinates, scale-free
            assert!(quad(&c.quadric.matrix, p).abs() < 1e-8 * n, "{p:?}");
            assert!(c.cubic.eval(p).abs() < 1e-6 * n.powf(1.5), "{p:?}");
        }
    }
    let summary = TopologySummary::from(&locus);
    assert_eq!(summary.ovals, vec![false; 3]);
}

#[test]
fn hyperelliptic_documents_round_trip() {
    let h = model_hyperelliptic(4, &default_spread(4), 0.05).unwrap();
    let text = to_json(&h).unwrap();
    assert!(text.contains("\"genus\": 4"));
    let back: HyperellipticCurve = serde_json::from_str(&text).unwrap();
    assert_eq!(back, h);
    // a polynomial with a real root is not a model
    let bad = r#"{"genus": 1, "F": [-1.0, 0.0, 0.0, 0.0, 1.0]}"#;
    assert!(serde_json::from_str::<HyperellipticCurve>(bad).is_err());
}
