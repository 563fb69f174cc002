use std::f64::consts::{PI, TAU};

use sepsemi_core::algebra::linalg::{dot4, proj_dist};
use sepsemi_core::quadric::{Chart, QuadricKind, RealLine};
use sepsemi_core::realize::{realize_target, section_class, section_points, Model, RealizeParams};
use sepsemi_core::topology::*;
use sepsemi_core::Error;

const RES: usize = 180;

fn opts(resolution: usize) -> ColoringOptions {
    ColoringOptions { resolution, apex_flip: false }
}

fn model(kind: QuadricKind, r: usize, l: usize) -> Model {
    Model::from_row(kind, r, l, &TraceParams::default()).unwrap()
}

fn loops(m: &Model) -> Vec<Vec<[f64; 4]>> {
    m.locus.loops.iter().map(|lp| lp.samples.clone()).collect()
}

fn halton(i: usize, b: usize) -> f64 {
    let (mut f, mut r, mut i) = (1.0, 0.0, i + 1);
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

/// Checks the coloring against the sign of a function that changes sign
/// exactly across the arcs, at chart points away from the arcs.
fn agrees_with_sign(col: &Coloring, arcs: &[Vec<[f64; 4]>], sign: impl Fn(&[f64; 4]) -> f64) -> usize {
    let chart = Chart::new(col.kind);
    let (v0, v1) = chart.v_range();
    let (_, hv) = col.cell_size();
    let (mut same, mut opposite, mut used) = (0, 0, 0);
    for i in 0..400 {
        let u = TAU * halton(i, 2);
        let v = v0 + (v1 - v0) * (0.02 + 0.96 * halton(i, 3));
        let y = chart.map(u, v);
        if arcs.iter().flatten().any(|a| proj_dist(a, &y) < 4.0 * hv) {
            continue;
        }
        used += 1;
        if col.color_at(u, v) == (sign(&y) > 0.0) {
            same += 1;
        } else {
            opposite += 1;
        }
    }
    assert!(same == 0 || opposite == 0, "coloring disagrees with the sign oracle: {same} / {opposite}");
    used
}

#[test]
fn ellipsoid_ovals_give_four_alternating_regions() {
    let m = model(QuadricKind::Ellipsoid, 3, 3);
    let arcs = loops(&m);
    let col = chessboard_coloring(QuadricKind::Ellipsoid, &arcs, &opts(RES)).unwrap();
    assert_eq!(col.n_regions(), 4);
    let (_, k) = m.curve.normalized_equations();
    // the plane at infinity misses the ellipsoid, so K·w has a sign
    let used = agrees_with_sign(&col, &arcs, |y| k.eval(y) * y[3]);
    assert!(used > 200);
}

fn plane_with_class(m: &Model, want: (i32, i32)) -> [f64; 4] {
    for i in 0..400 {
        let a =
            [2.0 * halton(i, 2) - 1.0, 2.0 * halton(i, 3) - 1.0, 2.0 * halton(i, 5) - 1.0, 2.0 * halton(i, 7) - 1.0];
        let Ok(Some(c)) = section_class(m, &a) else { continue };
        let Ok(sec) = section_points(m, &a) else { continue };
        if (c.a, c.b) == want || (c.a, c.b) == (-want.0, -want.1) {
            if sec.real.len() == 6 {
                return a;
            }
        }
    }
    panic!("no plane section of class {want:?} with six real points");
}

#[test]
fn hyperboloid_section_coloring_matches_quartic_sign() {
    let m = model(QuadricKind::Hyperboloid, 3, 0);
    let a = plane_with_class(&m, (1, -1));
    let d = PlaneSection::new(&m.curve.quadric, &a, 720).unwrap();
    assert_eq!(d.d1.len(), 1);
    let mut arcs = loops(&m);
    arcs.extend(d.d1.iter().cloned());
    let col = chessboard_coloring(QuadricKind::Hyperboloid, &arcs, &opts(RES)).unwrap();
    let (_, k) = m.curve.normalized_equations();
    let used = agrees_with_sign(&col, &arcs, |y| k.eval(y) * d.value(y));
    assert!(used > 100);

    let o = d_orientation(&m.locus, &d, &col).unwrap();
    let total: usize = o.loops.iter().map(|l| l.crossings.len()).sum();
    assert_eq!(total, 6);
    for l in &o.loops {
        assert!(l.crossings.iter().all(|c| c.flips));
        let k = l.signs.len();
        if !l.crossings.is_empty() {
            assert!((0..k).all(|j| l.signs[j] == -l.signs[(j + 1) % k]));
        }
    }
    let rev = d_orientation(&m.locus, &d, &col.reversed()).unwrap();
    assert_eq!(rev, o.flipped());
}

#[test]
fn single_ruling_line_is_not_colorable() {
    let chart = Chart::new(QuadricKind::Hyperboloid);
    let line: Vec<[f64; 4]> = (0..400).map(|k| chart.map(TAU * k as f64 / 400.0, 1.0)).collect();
    let err = chessboard_coloring(QuadricKind::Hyperboloid, &[line.clone()], &opts(RES)).unwrap_err();
    assert!(matches!(err, Error::NotColorable(_)), "{err:?}");
    // two parallel lines bound a band
    let other: Vec<[f64; 4]> = (0..400).map(|k| chart.map(TAU * k as f64 / 400.0, 2.5)).collect();
    let col = chessboard_coloring(QuadricKind::Hyperboloid, &[line, other], &opts(RES)).unwrap();
    assert_eq!(col.n_regions(), 2);
}

#[test]
fn double_generator_on_the_cone_never_flips() {
    let m = model(QuadricKind::Cone, 3, 2);
    let (_, k) = m.curve.normalized_equations();
    // real points of C on the generator through (cos t, sin t, 1, 0): sign
    // changes of K along the projective line
    let real_on_generator = |t: f64| {
        let g = RealLine::new([0.0, 0.0, 0.0, 1.0], [t.cos(), t.sin(), 1.0, 0.0]);
        let vals: Vec<f64> = (0..=4000).map(|i| k.eval(&g.point(PI * i as f64 / 4000.0))).collect();
        vals.windows(2).filter(|w| (w[0] < 0.0) != (w[1] < 0.0)).count()
    };
    let t = (0..64)
        .map(|i| TAU * i as f64 / 64.0)
        .find(|&t| real_on_generator(t) == 3)
        .expect("a generator with three real points");
    let expected = real_on_generator(t);
    // its tangent plane
    let plane = [t.cos(), t.sin(), -1.0, 0.0];
    let d = PlaneSection::new(&m.curve.quadric, &plane, 720).unwrap();
    let line = d.d0.expect("a tangent plane of the cone cuts a double line");
    assert!(line.distance(&[0.0, 0.0, 0.0, 1.0]) < 1e-9);
    assert!(d.d1.is_empty());
    assert!(chessboard_coloring(QuadricKind::Cone, &loops(&m), &opts(RES)).is_err());
    // K·λ changes sign through the apex, which lies on the tangent plane
    let col = d.coloring(&loops(&m), QuadricKind::Cone, RES).unwrap();
    agrees_with_sign(&col, &loops(&m), |y| k.eval(y) * d.value(y));
    let o = d_orientation(&m.locus, &d, &col).unwrap();
    let total: usize = o.loops.iter().map(|l| l.crossings.len()).sum();
    assert_eq!(total, expected);
    for l in &o.loops {
        assert!(l.crossings.iter().all(|c| !c.flips));
        assert!(l.signs.iter().all(|&s| s == l.signs[0]));
    }
}

#[test]
fn tangent_section_is_rejected() {
    let m = model(QuadricKind::Ellipsoid, 3, 3);
    // the plane through a curve point containing its tangent and the normal
    let lp = &m.locus.loops[0];
    let y = lp.samples[0];
    let t = m.locus.tangent_at(0, 0);
    let g = [y[0], y[1], y[2], -y[3]];
    let plane = sepsemi_core::algebra::linalg::cross4(&y, &t, &g);
    let d = PlaneSection::new(&m.curve.quadric, &plane, 720).unwrap();
    let mut arcs = loops(&m);
    arcs.extend(d.d1.iter().cloned());
    let col = chessboard_coloring(QuadricKind::Ellipsoid, &arcs, &opts(RES));
    let res = col.and_then(|c| d_orientation(&m.locus, &d, &c));
    assert!(matches!(res, Err(Error::Tangency(_)) | Err(Error::Ambiguous(_))), "{res:?}");
}

#[test]
fn complex_orientations_agree_up_to_flip() {
    let m = model(QuadricKind::Cone, 3, 0);
    let params = RealizeParams::default();
    let g = realize_target(&m, &sepsemi_core::morphism::DegreeVector(vec![1, 1, 1]), &params).unwrap();
    let p = realize_target(&m, &sepsemi_core::morphism::DegreeVector(vec![1, 2, 1]), &params).unwrap();
    let og = complex_orientation(&m.curve, &g.pencil, &m.locus, &g.certificate).unwrap();
    let op = complex_orientation(&m.curve, &p.pencil, &m.locus, &p.certificate).unwrap();
    assert!(og.agrees_up_to_flip(&op, 16));
    assert_eq!(og.loop_signs()[0], 1);
    // covering degree of each component equals the degree vector entry
    for (i, w) in g.certificate.winding.iter().enumerate() {
        assert_eq!(w.unsigned_abs(), g.degree_vector().0[i]);
    }
    // a certificate of another pencil is refused
    assert!(complex_orientation(&m.curve, &g.pencil, &m.locus, &p.certificate).is_err());
}

/// Rotation sense of a loop about the z-axis in the affine chart w = 1.
fn rotation(lp: &TracedLoop) -> f64 {
    let n = lp.samples.len();
    (0..n)
        .map(|i| {
            let a = lp.samples[i];
            let b = lp.samples[(i + 1) % n];
            let (ax, ay) = (a[0] / a[3], a[1] / a[3]);
            let (bx, by) = (b[0] / b[3], b[1] / b[3]);
            ax * by - ay * bx
        })
        .sum()
}

#[test]
fn ellipsoid_complex_orientation_pattern() {
    let m = model(QuadricKind::Ellipsoid, 3, 3);
    let f =
        realize_target(&m, &sepsemi_core::morphism::DegreeVector(vec![1, 2, 1]), &RealizeParams::default()).unwrap();
    let o = complex_orientation(&m.curve, &f.pencil, &m.locus, &f.certificate).unwrap();
    let s = o.loop_signs();
    // all three latitudes turn the same way about the axis
    let turn: Vec<f64> = m.locus.loops.iter().zip(&s).map(|(lp, &c)| rotation(lp) * c as f64).collect();
    assert!(turn.iter().all(|t| t * turn[0] > 0.0), "{turn:?}");
    // against the boundary orientation of the chess-board coloring of ℝX ∖ ℝC
    // (the plane at infinity misses ℝX) c2 is opposed to c1 and c3
    let d = PlaneSection::new(&m.curve.quadric, &[0.0, 0.0, 0.0, 1.0], 720).unwrap();
    assert!(d.d1.is_empty());
    let col = d.coloring(&loops(&m), QuadricKind::Ellipsoid, RES).unwrap();
    let b = d_orientation(&m.locus, &d, &col).unwrap().loop_signs();
    let rel: Vec<i8> = b.iter().zip(&s).map(|(x, y)| x * y).collect();
    assert!(rel[0] == rel[2] && rel[0] == -rel[1], "{rel:?}");
}

#[test]
fn fibers_of_separating_pencils_are_obstructed() {
    let m = model(QuadricKind::Ellipsoid, 3, 3);
    let f =
        realize_target(&m, &sepsemi_core::morphism::DegreeVector(vec![1, 2, 1]), &RealizeParams::default()).unwrap();
    let c_or = complex_orientation(&m.curve, &f.pencil, &m.locus, &f.certificate).unwrap();
    let mut checked = 0;
    for i in 0..12 {
        let a =
            [2.0 * halton(i, 2) - 1.0, 2.0 * halton(i, 3) - 1.0, 2.0 * halton(i, 5) - 1.0, 2.0 * halton(i, 7) - 1.0];
        let Ok(d) = PlaneSection::new(&m.curve.quadric, &a, 720) else { continue };
        let col = d.coloring(&loops(&m), QuadricKind::Ellipsoid, RES);
        let d_or = match col.and_then(|c| d_orientation(&m.locus, &d, &c)) {
            Ok(x) => x,
            Err(e) => {
                eprintln!("{a:?}: {e}");
                continue;
            }
        };
        for k in 0..8 {
            let theta = PI * (k as f64 + 0.3) / 8.0;
            let fib = sepsemi_core::morphism::fiber_at(&m.curve, &f.pencil, Some(&m.locus), theta, 1e-7).unwrap();
            let pts: Vec<LocusPoint> = fib
                .real_points()
                .map(|p| LocusPoint { component: p.component.unwrap(), arc: p.arc.unwrap(), on_d: false })
                .collect();
            match obstruction_check(&pts, &d_or, &c_or, 1e-3) {
                Ok(v) => {
                    assert_ne!(v, ObstructionVerdict::Consistent, "plane {a:?} at θ = {theta}");
                    checked += 1;
                }
                Err(Error::Incidence(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert!(checked > 40, "only {checked} fibers checked");
}

#[test]
fn obstruction_verdicts_on_synthetic_input() {
    let one = |sign: i8| OrientationAssignment {
        loops: vec![LoopOrientation { length: 1.0, crossings: vec![], signs: vec![sign] }],
    };
    let pts = [LocusPoint { component: 0, arc: 0.2, on_d: false }, LocusPoint { component: 0, arc: 0.7, on_d: false }];
    assert_eq!(obstruction_check(&pts, &one(1), &one(-1), 1e-3).unwrap(), ObstructionVerdict::Consistent);
    let on = pts.map(|p| LocusPoint { on_d: true, ..p });
    assert_eq!(obstruction_check(&on, &one(1), &one(1), 1e-3).unwrap(), ObstructionVerdict::Vacuous);
    let split = OrientationAssignment {
        loops: vec![LoopOrientation {
            length: 1.0,
            crossings: vec![Crossing { arc: 0.1, flips: true }, Crossing { arc: 0.5, flips: true }],
            signs: vec![1, -1],
        }],
    };
    assert_eq!(obstruction_check(&pts, &split, &one(1), 1e-3).unwrap(), ObstructionVerdict::ObstructedOk);
    let near = [LocusPoint { component: 0, arc: 0.1004, on_d: false }];
    assert!(matches!(obstruction_check(&near, &split, &one(1), 1e-3), Err(Error::Incidence(_))));
}

fn circle(center: [f64; 3], r: f64, normal_axis: usize) -> Vec<[f64; 4]> {
    (0..300)
        .map(|k| {
            let t = TAU * k as f64 / 300.0;
            let mut p = center;
            let (i, j) = ((normal_axis + 1) % 3, (normal_axis + 2) % 3);
            p[i] += r * t.cos();
            p[j] += r * t.sin();
            sepsemi_core::algebra::linalg::normalize4(&[p[0], p[1], p[2], 1.0])
        })
        .collect()
}

#[test]
fn linking_of_small_circles() {
    // the z-axis of affine space
    let line = RealLine::new([0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0]);
    let far = circle([3.0, 0.0, 0.0], 0.5, 2);
    assert!(!is_linked_polyline(&line, &far, 1e-6).unwrap());
    let around = circle([0.0, 0.0, 0.4], 0.5, 2);
    assert!(is_linked_polyline(&line, &around, 1e-6).unwrap());
    let beside = circle([0.6, 0.0, 0.0], 0.5, 1);
    assert!(!is_linked_polyline(&line, &beside, 1e-6).unwrap());
    let through = circle([0.5, 0.0, 0.0], 0.5, 2);
    assert!(matches!(is_linked_polyline(&line, &through, 1e-6), Err(Error::Incidence(_))));
    // jittered copies of the line
    for k in 0..5 {
        let e = 0.01 * (k as f64 + 1.0);
        let l2 = RealLine::new([e, -e, 0.0, 1.0], [e, 0.5 * e, 1.0, 0.0]);
        assert!(is_linked_polyline(&l2, &around, 1e-6).unwrap());
        assert!(!is_linked_polyline(&l2, &far, 1e-6).unwrap());
    }
}

#[test]
fn linking_matches_the_interlacing_criterion() {
    // Γ: a loop of class a + b on the hyperboloid; D: a section of class a − b
    // meeting Γ twice; L through two points of ℝD ∖ Γ is linked with Γ iff
    // the points lie on one arc of ℝD ∖ Γ.
    let chart = Chart::new(QuadricKind::Hyperboloid);
    let gamma: Vec<[f64; 4]> = (0..600)
        .map(|k| {
            let t = TAU * k as f64 / 600.0;
            chart.map(t, t + 0.3 + 0.2 * t.sin())
        })
        .collect();
    // continuous lift
    let mut lift = vec![gamma[0]];
    for y in &gamma[1..] {
        let prev = lift.last().unwrap();
        lift.push(if dot4(prev, y) < 0.0 { y.map(|x| -x) } else { *y });
    }
    let q = sepsemi_core::quadric::Quadric::normal(QuadricKind::Hyperboloid);
    let mut tested = 0;
    for i in 0..60 {
        let a = [halton(i, 2) - 0.5, halton(i, 3) - 0.5, 2.0 * halton(i, 5) - 1.0, 2.0 * halton(i, 7) - 1.0];
        let Ok(d) = PlaneSection::new(&q, &a, 2000) else { continue };
        if d.d1.len() != 1 {
            continue;
        }
        let conic = &d.d1[0];
        let uv: Vec<(f64, f64)> = conic.iter().map(|y| chart.inverse(y)).collect();
        let Ok(cls) = sepsemi_core::quadric::loop_class(&uv, QuadricKind::Hyperboloid) else { continue };
        if cls.a != -cls.b || cls.a.abs() != 1 {
            continue;
        }
        // crossings of ℝD with Γ = {v ≡ u + 0.3 + 0.2 sin u}: sign changes of
        // the wrapped offset that are not jumps across the opposite branch
        let n = conic.len();
        let h = |k: usize| {
            let (u, v) = uv[k];
            sepsemi_core::quadric::wrap_pi(v - u - 0.3 - 0.2 * u.sin())
        };
        let cross: Vec<usize> =
            (0..n).filter(|&k| (h(k) < 0.0) != (h((k + 1) % n) < 0.0) && h(k).abs() < 0.5).collect();
        if cross.len() != 2 {
            continue;
        }
        for (s, t) in [(0.15, 0.35), (0.15, 0.65), (0.4, 0.9), (0.05, 0.55)] {
            let (ks, kt) = ((s * n as f64) as usize, (t * n as f64) as usize);
            if cross.iter().any(|&c| c.abs_diff(ks) < 20 || c.abs_diff(kt) < 20) {
                continue;
            }
            let between = |k: usize| cross[0] < k && k <= cross[1];
            let same_arc = between(ks) == between(kt);
            let line = RealLine::new(conic[ks], conic[kt]);
            match is_linked_polyline(&line, &lift, 1e-6) {
                Ok(linked) => {
                    assert_eq!(linked, same_arc, "plane {a:?}, points {s} {t}");
                    tested += 1;
                }
                Err(Error::Incidence(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert!(tested >= 8, "only {tested} configurations tested");
}

#[test]
fn d_orientation_needs_a_matching_coloring() {
    let m = model(QuadricKind::Ellipsoid, 3, 3);
    let col = chessboard_coloring(QuadricKind::Hyperboloid, &[], &opts(16)).unwrap();
    let d = PlaneSection::new(&m.curve.quadric, &[0.0, 0.0, 1.0, 0.2], 720).unwrap();
    assert!(d_orientation(&m.locus, &d, &col).is_err());
}
