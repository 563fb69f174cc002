//! Verification reports and the two end-to-end pipelines.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use sepsemi_core::algebra::UniPoly;
use sepsemi_core::curve::{expected_total_class, model_sextic, recipe, Provenance, MODEL_ROWS};
use sepsemi_core::error::ErrorClass;
use sepsemi_core::hyper::{
    abel_sum_residual, default_divisor_xs, default_spread, hyper_complex_orientation, hyper_d_orientation,
    hyper_fiber_at, hyper_interlacing_check, model_hyperelliptic, realize_alternating, realize_projection,
    HyperRealization, HyperellipticCurve,
};
use sepsemi_core::morphism::{fiber_at, interlacing_check, theta_grid, CertifyParams, Fiber};
use sepsemi_core::quadric::QuadricKind;
use sepsemi_core::realize::{realize_row, Model, Realization, RealizeParams};
use sepsemi_core::semigroup::{
    closure_up_to_bound, compare_up_to_bound, table1_description, theorem2_description, Comparison, RealizationLedger,
    SemigroupDescription,
};
use sepsemi_core::topology::{
    complex_orientation, d_orientation, obstruction_check, LocusPoint, ObstructionVerdict, OrientationAssignment,
    PlaneSection, TraceParams,
};
use sepsemi_core::Error;

use crate::error::{exit, CliError, Result};
use crate::formats::TopologySummary;

/// Genera accepted by the hyperelliptic pipeline.
pub const HYPER_GENERA: std::ops::RangeInclusive<u32> = 1..=6;

/// Default perturbation δ of the hyperelliptic models.
pub const HYPER_DELTA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub seed: u64,
    /// Corrector tolerance of the tracer.
    pub tol: f64,
    pub step: f64,
    /// Sampled fibers per certificate.
    pub samples: usize,
    pub tol_im: f64,
    /// Model perturbation; the recipe default when absent.
    pub epsilon: Option<f64>,
    /// Admissible test sections per model for the obstruction check.
    pub planes: usize,
    pub resolution: usize,
}

impl Default for Params {
    fn default() -> Self {
        let t = TraceParams::default();
        let c = CertifyParams::default();
        Params {
            seed: 0,
            tol: t.tol,
            step: t.step,
            samples: c.n_samples,
            tol_im: c.tol_im,
            epsilon: None,
            planes: 10,
            resolution: 180,
        }
    }
}

impl Params {
    pub fn trace(&self) -> TraceParams {
        TraceParams { step: self.step, tol: self.tol, ..TraceParams::default() }
    }

    pub fn certify(&self) -> CertifyParams {
        CertifyParams { n_samples: self.samples, tol_im: self.tol_im }
    }

    pub fn realize(&self) -> RealizeParams {
        RealizeParams { certify: self.certify(), ..RealizeParams::default() }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Subject {
    Table { kind: QuadricKind, r: usize, l: usize },
    Hyperelliptic { genus: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Certified {
    Space(Realization),
    Hyperelliptic(HyperRealization),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerItem {
    pub vector: Vec<u32>,
    pub nonspecial: bool,
    pub certified: Certified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Number of individual assertions evaluated.
    pub checked: usize,
    pub detail: String,
    /// Named counts behind the verdict.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tallies: BTreeMap<String, usize>,
}

impl Check {
    fn new(name: &str, passed: bool, checked: usize, detail: String) -> Self {
        Check { name: name.to_string(), passed, checked, detail, tallies: BTreeMap::new() }
    }

    fn with(mut self, tallies: &[(&str, usize)]) -> Self {
        self.tallies.extend(tallies.iter().map(|(k, v)| (k.to_string(), *v)));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureClass {
    Input,
    Numerical,
    Verification,
}

impl From<ErrorClass> for FailureClass {
    fn from(c: ErrorClass) -> Self {
        match c {
            ErrorClass::Input => FailureClass::Input,
            ErrorClass::Numerical => FailureClass::Numerical,
            ErrorClass::Verification => FailureClass::Verification,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: String,
    pub class: FailureClass,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: Subject,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperelliptic: Option<HyperellipticCurve>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologySummary>,
    pub ledger: Vec<LedgerItem>,
    pub missing: Vec<Vec<u32>>,
    pub description: Option<SemigroupDescription>,
    pub bound: u32,
    pub comparison: Option<Comparison>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    pub failure: Option<Failure>,
    pub params: Params,
    /// Wall-clock time; left out unless requested so that reports stay
    /// byte-identical across runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl VerificationReport {
    fn new(subject: Subject, bound: u32, params: &Params) -> Self {
        VerificationReport {
            subject,
            provenance: None,
            hyperelliptic: None,
            topology: None,
            ledger: Vec::new(),
            missing: Vec::new(),
            description: None,
            bound,
            comparison: None,
            checks: Vec::new(),
            verdict: Verdict::Fail,
            failure: None,
            params: *params,
            runtime_ms: None,
        }
    }

    fn fail(mut self, stage: &str, e: Error) -> Self {
        self.failure = Some(Failure { stage: stage.to_string(), class: e.class().into(), message: e.to_string() });
        self.verdict = Verdict::Fail;
        self
    }

    fn finish(mut self) -> Self {
        let ok = self.failure.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.passed);
        self.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        match (&self.verdict, &self.failure) {
            (Verdict::Pass, _) => exit::PASS,
            (Verdict::Fail, Some(f)) if f.class == FailureClass::Input => exit::INPUT,
            (Verdict::Fail, Some(f)) if f.class == FailureClass::Numerical => exit::NUMERICAL,
            (Verdict::Fail, _) => exit::FAIL,
        }
    }
}

/// Sign of `x` as ±1.
fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else {
        -1
    }
}

macro_rules! stage {
    ($rep:ident, $name:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return Ok($rep.fail($name, e)),
        }
    };
}

/// Checks that the rows named by the user are non-maximal model rows.
pub fn check_table_row(kind: QuadricKind, r: usize, l: usize) -> Result<()> {
    if MODEL_ROWS.contains(&(kind, r, l)) {
        return Ok(());
    }
    if table1_description(kind, r, l).is_ok() {
        return Err(CliError::Input(format!("{} {r}/{l} is a maximal row and out of scope", kind.name())));
    }
    Err(CliError::Input(format!("no table row {} {r}/{l}", kind.name())))
}

/// Builds the model of a row with the perturbation of `params`.
pub fn build_model(kind: QuadricKind, r: usize, l: usize, params: &Params) -> sepsemi_core::Result<Model> {
    let eps = match params.epsilon {
        Some(e) => e,
        None => recipe(kind, r, l)?.default_epsilon,
    };
    Model::new(model_sextic(kind, r, l, eps)?, &params.trace())
}

/// Fibers at `n` fixed angles, shared by the interlacing and obstruction
/// checks.
fn sample_fibers(m: &Model, x: &Realization, n: usize, tol_im: f64) -> sepsemi_core::Result<Vec<Fiber>> {
    theta_grid(n).into_iter().map(|t| fiber_at(&m.curve, &x.pencil, Some(&m.locus), t, tol_im)).collect()
}

/// A random plane of normalized coordinates with uniform coefficients in
/// [−1, 1].
fn random_plane(rng: &mut ChaCha8Rng) -> [f64; 4] {
    [(); 4].map(|_| rng.random_range(-1.0..1.0))
}

/// D-orientation of the section by `plane`, or `None` if the section is
/// not admissible (tangent, not colorable, ambiguous).
fn section_orientation(m: &Model, plane: &[f64; 4], res: usize) -> Option<OrientationAssignment> {
    let d = PlaneSection::new(&m.curve.quadric, plane, 720).ok()?;
    let loops: Vec<Vec<[f64; 4]>> = m.locus.loops.iter().map(|lp| lp.samples.clone()).collect();
    let col = d.coloring(&loops, m.kind(), res).ok()?;
    d_orientation(&m.locus, &d, &col).ok()
}

pub fn run_verify_table(
    kind: QuadricKind,
    r: usize,
    l: usize,
    bound: u32,
    params: &Params,
) -> Result<VerificationReport> {
    check_table_row(kind, r, l)?;
    let mut rep = VerificationReport::new(Subject::Table { kind, r, l }, bound, params);
    let m = stage!(rep, "model", build_model(kind, r, l, params));
    rep.provenance = m.curve.provenance.clone();
    rep.topology = Some(TopologySummary::from(&m.locus));

    let want = stage!(rep, "model", expected_total_class(kind, r, l));
    let total = m.locus.total_class().unsigned();
    rep.checks.push(Check::new(
        "topology",
        (m.locus.r, m.locus.l) == (r, l) && total == want,
        1,
        format!(
            "r = {}, l = {}, total class ({}, {}), expected ({}, {})",
            m.locus.r, m.locus.l, total.a, total.b, want.a, want.b
        ),
    ));

    let out = stage!(rep, "realize", realize_row(&m, &params.realize()));
    let mut ledger = RealizationLedger::default();
    for x in &out.realized {
        ledger.push(x.degree_vector().0.clone(), x.description.clone(), x.nonspecial());
        rep.ledger.push(LedgerItem {
            vector: x.degree_vector().0.clone(),
            nonspecial: x.nonspecial(),
            certified: Certified::Space(x.clone()),
        });
    }
    rep.missing = out.missing.iter().map(|d| d.0.clone()).collect();
    rep.checks.push(Check::new(
        "realizations",
        out.missing.is_empty(),
        out.realized.len(),
        format!("{} certified, {} missing", out.realized.len(), out.missing.len()),
    ));

    let desc = stage!(rep, "closure", table1_description(kind, r, l));
    let closure = stage!(rep, "closure", closure_up_to_bound(&ledger, bound));
    let cmp = stage!(rep, "closure", compare_up_to_bound(&desc, &closure, bound));
    rep.checks.push(Check::new(
        "closure",
        cmp.agrees(),
        closure.len(),
        format!("{} vectors up to {bound}; {} missing, {} extra", closure.len(), cmp.missing.len(), cmp.extra.len()),
    ));
    rep.description = Some(desc);
    rep.comparison = Some(cmp);

    // interlacing of sampled fibers
    let mut fibers = Vec::new();
    for x in &out.realized {
        fibers.push(stage!(rep, "interlacing", sample_fibers(&m, x, 8, params.tol_im)));
    }
    let (mut pairs, mut bad) = (0, 0);
    for fs in &fibers {
        for i in 0..fs.len() {
            for j in i + 1..fs.len() {
                pairs += 1;
                if !stage!(rep, "interlacing", interlacing_check(&fs[i], &fs[j], &m.locus)) {
                    bad += 1;
                }
            }
        }
    }
    rep.checks.push(Check::new("interlacing", bad == 0, pairs, format!("{bad} of {pairs} fiber pairs fail")));

    // complex orientations
    let mut c_ors = Vec::new();
    for x in &out.realized {
        c_ors.push(stage!(rep, "orientation", complex_orientation(&m.curve, &x.pencil, &m.locus, &x.certificate)));
    }
    let disagree = c_ors.iter().skip(1).filter(|o| !o.agrees_up_to_flip(&c_ors[0], 16)).count();
    rep.checks.push(Check::new(
        "complex-orientation",
        disagree == 0,
        c_ors.len(),
        format!("{disagree} of {} morphisms disagree with the first up to a global flip", c_ors.len()),
    ));

    // obstruction on seeded random sections, plus tangent planes of the cone
    let mut rng = params.rng();
    let mut planes: Vec<[f64; 4]> = Vec::new();
    if kind == QuadricKind::Cone {
        planes.extend((0..2).map(|k| {
            let t = 0.37 + PI * k as f64;
            [t.cos(), t.sin(), -1.0, 0.0]
        }));
    }
    let (mut admissible, mut checked, mut consistent) = (0, 0, 0);
    let mut attempts = 0;
    while admissible < params.planes + planes.len() && attempts < 40 * params.planes.max(1) {
        let plane = if attempts < planes.len() { planes[attempts] } else { random_plane(&mut rng) };
        attempts += 1;
        let Some(d_or) = section_orientation(&m, &plane, params.resolution) else { continue };
        admissible += 1;
        for (fs, c_or) in fibers.iter().zip(&c_ors) {
            for fib in fs {
                let pts: Vec<LocusPoint> = fib
                    .real_points()
                    .filter_map(|p| Some(LocusPoint { component: p.component?, arc: p.arc?, on_d: false }))
                    .collect();
                match obstruction_check(&pts, &d_or, c_or, 1e-3) {
                    Ok(ObstructionVerdict::Consistent) => {
                        consistent += 1;
                        checked += 1;
                    }
                    Ok(_) => checked += 1,
                    Err(Error::Incidence(_)) => {}
                    Err(e) => return Ok(rep.fail("obstruction", e)),
                }
            }
        }
    }
    rep.checks.push(
        Check::new(
            "obstruction",
            consistent == 0 && admissible >= params.planes && checked > 0,
            checked,
            format!(
                "{admissible} admissible sections in {attempts} tries; {consistent} consistent of {checked} fibers"
            ),
        )
        .with(&[
            ("sections", admissible),
            ("attempts", attempts),
            ("morphisms", c_ors.len()),
            ("consistent", consistent),
        ]),
    );
    Ok(rep.finish())
}

/// Chart rule for the boundary orientation of the region y² < F, read just
/// to the left of the traversal.
fn chart_sign(h: &HyperellipticCurve, x: f64, y: f64) -> i8 {
    let probe = y + 1e-4 * (1.0 + y.abs());
    sign(h.f.eval(x) - probe * probe)
}

/// A value of the affine coordinate of ℝP¹ drawn from the Cauchy law.
fn random_t(rng: &mut ChaCha8Rng) -> f64 {
    (PI * (rng.random::<f64>() - 0.5)).tan()
}

pub fn run_verify_hyper(g: u32, bound: u32, params: &Params) -> Result<VerificationReport> {
    if !HYPER_GENERA.contains(&g) {
        return Err(CliError::Input(format!(
            "genus {g} is outside the supported range {}..={}",
            HYPER_GENERA.start(),
            HYPER_GENERA.end()
        )));
    }
    let mut rep = VerificationReport::new(Subject::Hyperelliptic { genus: g }, bound, params);
    let delta = params.epsilon.unwrap_or(HYPER_DELTA);
    let h = stage!(rep, "model", model_hyperelliptic(g, &default_spread(g), delta));
    rep.hyperelliptic = Some(h.clone());

    let cert = params.certify();
    let pr = stage!(rep, "realize", realize_projection(&h, &cert));
    let pe = stage!(rep, "realize", realize_alternating(&h, &default_divisor_xs(g), &cert));
    let m = g.div_ceil(2);
    let (want_pr, want_pe) = if g % 2 == 1 { (vec![1, 1], vec![m, m]) } else { (vec![2], vec![g + 1]) };
    let got = [pr.certificate.degree_vector.0.clone(), pe.certificate.degree_vector.0.clone()];
    rep.checks.push(Check::new(
        "realizations",
        got[0] == want_pr && got[1] == want_pe,
        2,
        format!("projection {:?}, alternating pencil {:?}", got[0], got[1]),
    ));
    let mut ledger = RealizationLedger::default();
    for x in [&pr, &pe] {
        let v = x.certificate.degree_vector.0.clone();
        ledger.push(v.clone(), x.description.clone(), x.nonspecial());
        rep.ledger.push(LedgerItem {
            vector: v,
            nonspecial: x.nonspecial(),
            certified: Certified::Hyperelliptic(x.clone()),
        });
    }

    let desc = stage!(rep, "closure", theorem2_description(g));
    let closure = stage!(rep, "closure", closure_up_to_bound(&ledger, bound));
    let cmp = stage!(rep, "closure", compare_up_to_bound(&desc, &closure, bound));
    rep.checks.push(Check::new(
        "closure",
        cmp.agrees(),
        closure.len(),
        format!("{} vectors up to {bound}; {} missing, {} extra", closure.len(), cmp.missing.len(), cmp.extra.len()),
    ));
    rep.description = Some(desc);
    rep.comparison = Some(cmp);

    // Abel sums of the holomorphic forms x^d dx/y over random fibers
    let mut rng = params.rng();
    let ts: Vec<f64> = (0..20).map(|_| random_t(&mut rng)).collect();
    let (mut checked, mut skipped, mut worst) = (0, 0, 0.0f64);
    for x in [&pr, &pe] {
        for &t in &ts {
            for d in 0..g as usize {
                let mut c = vec![0.0; d + 1];
                c[d] = 1.0;
                match abel_sum_residual(&h, &x.map, t, &UniPoly::new(c)) {
                    Ok(a) => {
                        checked += 1;
                        worst = worst.max(a.relative());
                    }
                    Err(Error::Ambiguous(_)) | Err(Error::InvalidInput(_)) => skipped += 1,
                    Err(e) => return Ok(rep.fail("abel", e)),
                }
            }
        }
    }
    rep.checks.push(Check::new(
        "abel",
        worst < 1e-6 && checked > 0,
        checked,
        format!("worst relative residual {worst:.3e}; {skipped} sums skipped"),
    ));

    // interlacing of every pair of sampled fibers
    let (mut pairs, mut bad) = (0, 0);
    for x in [&pr, &pe] {
        let mut fibers = Vec::new();
        for &t in &ts {
            fibers.push(stage!(rep, "interlacing", hyper_fiber_at(&h, &x.map, t, params.tol_im)));
        }
        for i in 0..fibers.len() {
            for j in i + 1..fibers.len() {
                pairs += 1;
                if !stage!(rep, "interlacing", hyper_interlacing_check(&h, &fibers[i], &fibers[j])) {
                    bad += 1;
                }
            }
        }
    }
    rep.checks.push(Check::new("interlacing", bad == 0, pairs, format!("{bad} of {pairs} fiber pairs fail")));

    // complex orientations of the two morphisms
    let a = stage!(rep, "orientation", hyper_complex_orientation(&h, &pr.map, &pr.certificate));
    let b = stage!(rep, "orientation", hyper_complex_orientation(&h, &pe.map, &pe.certificate));
    let agree = a.agrees_up_to_flip(&b, 64);
    rep.checks.push(Check::new(
        "complex-orientation",
        agree,
        2,
        format!("the two complex orientations {} up to a global flip", if agree { "agree" } else { "differ" }),
    ));

    // D-orientation of a section by random double fibers against the chart
    let mut xbar: Vec<f64> = (0..m.saturating_sub(1).max(1)).map(|_| 2.0 * random_t(&mut rng)).collect();
    xbar.sort_by(f64::total_cmp);
    let d_or = stage!(rep, "d-orientation", hyper_d_orientation(&h, &xbar));
    let mut products = Vec::new();
    for _ in 0..50 {
        let x = random_t(&mut rng);
        let y = h.y(x, rng.random::<bool>());
        let (c, s) = h.position(x, y);
        products.push(stage!(rep, "d-orientation", d_or.sign_at(c, s)) * chart_sign(&h, x, y));
    }
    let same = products.iter().all(|&p| p == products[0]);
    rep.checks.push(Check::new(
        "d-orientation",
        same,
        products.len(),
        format!("double fibers over x = {xbar:.4?}; chart coloring {}", if same { "matches" } else { "differs" }),
    ));
    Ok(rep.finish())
}
