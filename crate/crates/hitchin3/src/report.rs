//! Batch jobs and bit-stable reports.
//!
//! A job document is a single JSON object or an array of them. Each job
//! names a surface, supplies the coefficient function `f` or the pair
//! `(q2, q3)` as term lists `[exponent, coefficient-expression]`, and may
//! request extra identity verification and feasible-region sampling. The
//! emitted report is deterministic: the same job and seed produce
//! byte-identical output, with rationals rendered exactly (decimal
//! approximations appear only in clearly non-normative `approx` fields).

use num::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElem, Rational};
use crate::filtered::{
    check_good, check_perfect, check_stable, degrees, sample_region_point,
    verify_special_construction, FeasibleRegion, FilteredSpec, Route, Verdict, WeightAssignment,
};
use crate::laurent::LaurentPoly;
use crate::parse::parse_coeff;
use crate::spectral::{
    build_theta_matrix, differentials_from_f, discriminant, elementary_symmetric,
    global_degree_sum, pairing, sections_frame, verify_jordan_frame, HiggsInput, SurfaceKind,
};
use crate::verify::{IdentityCheck, VerificationLog};

/// `[exponent, coefficient-expression]`.
pub type TermSpec = (i64, String);

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobOptions {
    #[serde(default)]
    pub verify_identities: bool,
    #[serde(default)]
    pub region_samples: u32,
    #[serde(default)]
    pub seed: u64,
}

/// One analysis job.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    /// `"affine_line"` or `"punctured_line"`.
    pub surface: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<TermSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q2: Option<Vec<TermSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q3: Option<Vec<TermSpec>>,
    #[serde(default)]
    pub options: JobOptions,
}

/// A job document: one job or an array of jobs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JobDocument {
    Single(JobSpec),
    Array(Vec<JobSpec>),
}

impl JobDocument {
    pub fn jobs(self) -> Vec<JobSpec> {
        match self {
            JobDocument::Single(job) => vec![job],
            JobDocument::Array(jobs) => jobs,
        }
    }

    pub fn is_single(&self) -> bool {
        matches!(self, JobDocument::Single(_))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub artifact: String,
    pub version: String,
    pub seed: u64,
    pub input: JobSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub sheets: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda1_coefficient: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda2_coefficient: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PunctureBound {
    pub puncture: String,
    pub max_d2: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionReport {
    pub d2_upper_bounds: Vec<PunctureBound>,
    pub sum_two_d2_greater_than: String,
    /// Present for a single puncture: the half-open interval in `d2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<String>,
    pub display: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightReport {
    pub puncture: String,
    pub d2: String,
    pub d3: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreesReport {
    pub e1: String,
    pub e2: String,
    pub e3: String,
    pub e4: String,
    /// Non-normative decimal rendering, 12 significant digits.
    pub approx: DegreesApprox,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreesApprox {
    pub e1: String,
    pub e2: String,
    pub e3: String,
    pub e4: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictReport {
    pub exists: String,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_weights: Option<Vec<WeightReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees_at_canonical: Option<DegreesReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub provenance: Provenance,
    pub classification: ClassificationReport,
    pub verdict: VerdictReport,
    pub verification: Vec<CheckReport>,
}

impl Report {
    pub fn exists_yes(&self) -> bool {
        self.verdict.exists != "no"
    }

    /// Serialize with a trailing newline; byte-identical for identical
    /// job + seed.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

/// Render a report array deterministically.
pub fn reports_to_json(reports: &[Report]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("report serialization");
    s.push('\n');
    s
}

fn parse_terms(kind: &str, terms: &[TermSpec]) -> Result<LaurentPoly> {
    let mut parsed = Vec::with_capacity(terms.len());
    for (exponent, expr) in terms {
        let coeff = parse_coeff(expr).map_err(|e| match e {
            Error::Parse {
                offset,
                expected,
                found,
            } => Error::Parse {
                offset,
                expected: format!("{expected} (in {kind} coefficient at z^{exponent})"),
                found,
            },
            other => other,
        })?;
        parsed.push((*exponent, coeff));
    }
    Ok(LaurentPoly::from_terms(parsed))
}

fn surface_from_name(name: &str) -> Result<SurfaceKind> {
    match name {
        "affine_line" => Ok(SurfaceKind::AffineLine),
        "punctured_line" => Ok(SurfaceKind::PuncturedLine),
        other => Err(Error::InvalidInput(format!(
            "unknown surface {other:?}; expected \"affine_line\" or \"punctured_line\""
        ))),
    }
}

fn higgs_input(spec: &JobSpec) -> Result<HiggsInput> {
    let surface = surface_from_name(&spec.surface)?;
    match (&spec.f, &spec.q2, &spec.q3) {
        (Some(f), None, None) => HiggsInput::from_f(surface, parse_terms("f", f)?),
        (None, Some(q2), Some(q3)) => HiggsInput::from_differentials(
            surface,
            parse_terms("q2", q2)?,
            parse_terms("q3", q3)?,
        ),
        _ => Err(Error::InvalidInput(
            "a job supplies exactly one of `f` or the pair `q2` + `q3`".into(),
        )),
    }
}

fn approx12(r: &Rational) -> String {
    format!("{:.11e}", r.to_f64().unwrap_or(f64::NAN))
}

fn region_report(region: &FeasibleRegion) -> RegionReport {
    RegionReport {
        d2_upper_bounds: region
            .puncture_labels
            .iter()
            .zip(&region.d2_upper)
            .map(|(label, bound)| PunctureBound {
                puncture: label.clone(),
                max_d2: bound.to_string(),
            })
            .collect(),
        sum_two_d2_greater_than: region.sum_two_d2_lower_strict.to_string(),
        interval: region.interval().map(|(lo, hi)| format!("({lo}, {hi}]")),
        display: region.to_string(),
    }
}

fn weights_report(labels: &[String], w: &WeightAssignment) -> Vec<WeightReport> {
    labels
        .iter()
        .zip(&w.weights)
        .map(|(label, pw)| WeightReport {
            puncture: label.clone(),
            d2: pw.d2.to_string(),
            d3: pw.d3.to_string(),
        })
        .collect()
}

fn check_reports(log: &VerificationLog) -> Vec<CheckReport> {
    log.checks
        .iter()
        .map(|c: &IdentityCheck| CheckReport {
            name: c.name.clone(),
            status: if c.passed { "pass" } else { "fail" }.to_string(),
            residual: c.residual.clone(),
            detail: c.detail.clone(),
        })
        .collect()
}

/// Run one job: classify, decide, optionally verify the identity suites and
/// sample the feasible region. Identity failures other than the logged
/// alternate-coefficient discrepancy are internal errors.
pub fn run_job(spec: &JobSpec) -> Result<Report> {
    let input = higgs_input(spec)?;
    let verdict = crate::filtered::full_verdict(&input)?;
    let mut log = verdict.log.clone();

    if spec.options.verify_identities {
        log.extend(identity_suites(&verdict)?);
    }
    if spec.options.region_samples > 0 {
        if let Some(region) = &verdict.region {
            log.extend(sample_region(
                region,
                &verdict,
                spec.options.region_samples,
                spec.options.seed,
            )?);
        }
    }

    Ok(assemble_report(spec, &verdict, log))
}

fn assemble_report(spec: &JobSpec, verdict: &Verdict, log: VerificationLog) -> Report {
    let classification = ClassificationReport {
        sheets: verdict.sheets,
        f: verdict.classification.f.as_ref().map(|f| f.to_string()),
        lambda1_coefficient: verdict
            .classification
            .lambda1_coeff
            .as_ref()
            .map(|p| p.to_string()),
        lambda2_coefficient: verdict
            .classification
            .lambda2_coeff
            .as_ref()
            .map(|p| p.to_string()),
    };

    let degrees_at_canonical = match (&verdict.region, &verdict.canonical_weights) {
        (Some(region), Some(w)) => {
            let spec_f = verdict
                .classification
                .f
                .as_ref()
                .expect("region comes with a coefficient function");
            let fspec = FilteredSpec::from_coefficient(spec_f, verdict.surface)
                .expect("region comes from a valid filtered spec");
            let d = degrees(&fspec, w);
            let _ = region;
            Some(DegreesReport {
                e1: d.e1.to_string(),
                e2: d.e2.to_string(),
                e3: d.e3.to_string(),
                e4: d.e4.to_string(),
                approx: DegreesApprox {
                    e1: approx12(&d.e1),
                    e2: approx12(&d.e2),
                    e3: approx12(&d.e3),
                    e4: approx12(&d.e4),
                },
            })
        }
        _ => None,
    };

    let verdict_report = VerdictReport {
        exists: verdict.exists.name().to_string(),
        reason: verdict.reason.name().to_string(),
        route: verdict.route.as_ref().map(Route::tag),
        region: verdict.region.as_ref().map(region_report),
        canonical_weights: verdict.region.as_ref().and_then(|r| {
            verdict
                .canonical_weights
                .as_ref()
                .map(|w| weights_report(&r.puncture_labels, w))
        }),
        degrees_at_canonical,
    };

    Report {
        provenance: Provenance {
            artifact: "hitchin3".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: spec.options.seed,
            input: spec.clone(),
        },
        classification,
        verdict: verdict_report,
        verification: check_reports(&log),
    }
}

/// The optional identity suites: Jordan frame, pairing values,
/// characteristic-polynomial symmetric functions, discriminant vanishing,
/// global 1-form degree, and (for monomial punctured-line inputs with
/// exponent in {±1, ±2}) the explicit construction suite.
fn identity_suites(verdict: &Verdict) -> Result<VerificationLog> {
    let mut log = VerificationLog::new();
    if verdict.sheets != 2 {
        log.pass_with_detail(
            "identity_suites_skipped",
            format!("{}-sheeted covering has no two-sheet frame", verdict.sheets),
        );
        return Ok(log);
    }
    let f = verdict.classification.f.as_ref().expect("two sheets carry f");

    log.extend(verify_jordan_frame(f)?);

    let (q2, q3) = differentials_from_f(f);
    let disc = discriminant(&q2, &q3);
    if !log.check("discriminant_vanishes", disc.is_zero(), || disc.to_string()) {
        return Err(Error::IdentityViolated("discriminant_vanishes".into()));
    }

    let m = build_theta_matrix(&q2, &q3);
    let (e1, e2, e3) = elementary_symmetric(&m);
    let sym_ok = e1.is_zero() && e2 == q2.scale(&FieldElem::from_int(-2)) && e3 == q3;
    if !log.check("char_poly_symmetric_functions", sym_ok, || {
        format!("e1 = {e1}, e2 = {e2}, e3 = {e3}")
    }) {
        return Err(Error::IdentityViolated("char_poly_symmetric_functions".into()));
    }

    let [s1, s2, s3] = sections_frame(f);
    let c22 = pairing(&s2, &s2);
    let c23_expected = f.scale(&(&FieldElem::from_int(-3) * &FieldElem::two_pow_third(-1)));
    let c23_residual = &pairing(&s2, &s3) - &c23_expected;
    let c11_expected = f
        .pow(2)
        .scale(&(&FieldElem::from_int(18) * &FieldElem::two_pow_third(-5)));
    let c11_residual = &pairing(&s1, &s1) - &c11_expected;
    for (name, residual) in [
        ("pairing_s2_s2_zero", c22),
        ("pairing_s2_s3_value", c23_residual),
        ("pairing_s1_s1_value", c11_residual),
    ] {
        if !log.check(name, residual.is_zero(), || residual.to_string()) {
            return Err(Error::IdentityViolated(name.into()));
        }
    }

    let sum = global_degree_sum(f, verdict.surface)?;
    if !log.check("global_degree_sum", sum == -2, || format!("sum = {sum}")) {
        return Err(Error::IdentityViolated("global_degree_sum".into()));
    }

    if verdict.surface == SurfaceKind::PuncturedLine {
        if let Some(Route::SpecialConstruction(b) | Route::SymmetryDerived(b)) = &verdict.route {
            let (_, a) = f.as_monomial().expect("construction routes are monomial");
            log.extend(verify_special_construction(*b, a)?);
        }
    }
    Ok(log)
}

fn sample_region(
    region: &FeasibleRegion,
    verdict: &Verdict,
    samples: u32,
    seed: u64,
) -> Result<VerificationLog> {
    let f = verdict.classification.f.as_ref().expect("region carries f");
    let fspec = FilteredSpec::from_coefficient(f, verdict.surface)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = VerificationLog::new();
    for k in 1..=samples {
        let point = sample_region_point(region, &fspec, &mut rng);
        let good = check_good(&fspec, &point);
        let perfect = check_perfect(&fspec, &point);
        let stable = check_stable(&fspec, &point)?;
        let name = format!("region_sample_{k:02}");
        let ok = good.holds && perfect.holds && stable && region.contains(&fspec, &point);
        let rendered = point
            .weights
            .iter()
            .zip(&region.puncture_labels)
            .map(|(pw, label)| format!("{label}: d2 = {}, d3 = {}", pw.d2, pw.d3))
            .collect::<Vec<_>>()
            .join("; ");
        if !log.check(&name, ok, || rendered.clone()) {
            return Err(Error::IdentityViolated(name));
        }
        log.checks.last_mut().unwrap().detail = Some(rendered);
    }
    Ok(log)
}

/// The built-in identity suite: a fixed deterministic corpus covering the
/// field, cube roots, frames, pairings, verdict tables, constructions and
/// the parser. Returns the full log; callers decide how to surface it.
pub fn selfcheck() -> VerificationLog {
    let mut log = VerificationLog::new();

    selfcheck_field(&mut log);
    selfcheck_spectral(&mut log);
    selfcheck_verdicts(&mut log);
    selfcheck_constructions(&mut log);
    selfcheck_parser(&mut log);

    log
}

fn selfcheck_field(log: &mut VerificationLog) {
    let alpha = FieldElem::alpha();
    log.check("field_defining_relation", {
        &(&alpha * &alpha) * &alpha == FieldElem::from_int(2)
    }, || "a^3 != 2".into());
    let ok = (-9..=9).all(|k1: i64| {
        (-9..=9).all(|k2: i64| {
            &FieldElem::two_pow_third(k1) * &FieldElem::two_pow_third(k2)
                == FieldElem::two_pow_third(k1 + k2)
        })
    });
    log.check("field_two_pow_third_additive", ok, || {
        "2^(k1/3) * 2^(k2/3) != 2^((k1+k2)/3)".into()
    });
    let inv_ok = alpha.inv().map(|inv| &alpha * &inv == FieldElem::one()).unwrap_or(false);
    log.check("field_inverse", inv_ok, || "a * a^-1 != 1".into());
    log.check(
        "field_cbrt_examples",
        FieldElem::from_int(8).cbrt() == Some(FieldElem::from_int(2))
            && FieldElem::from_int(2).cbrt() == Some(alpha.clone())
            && alpha.cbrt().is_none(),
        || "cube root examples".into(),
    );
}

fn selfcheck_spectral(log: &mut VerificationLog) {
    let z = LaurentPoly::var();
    let samples = [
        LaurentPoly::one(),
        z.clone(),
        z.pow(2),
        &z.pow(2) + &z,
        &z.pow(3) + &LaurentPoly::constant(FieldElem::from_int(2)),
        &z.pow(2) + &LaurentPoly::constant(FieldElem::i()),
    ];
    for (k, f) in samples.iter().enumerate() {
        let jordan_ok = verify_jordan_frame(f).map(|l| l.all_passed()).unwrap_or(false);
        log.check(&format!("jordan_frame_sample_{k}"), jordan_ok, || {
            format!("f = {f}")
        });
        let (q2, q3) = differentials_from_f(f);
        log.check(
            &format!("discriminant_sample_{k}"),
            discriminant(&q2, &q3).is_zero(),
            || format!("f = {f}"),
        );
        let o = crate::spectral::orthogonalize(f).ok();
        let iso_ok = o
            .as_ref()
            .map(|o| o.solved.isotropic && !o.alternate.isotropic)
            .unwrap_or(false);
        log.check(&format!("isotropy_sample_{k}"), iso_ok, || format!("f = {f}"));
    }
    for surface in [SurfaceKind::AffineLine, SurfaceKind::PuncturedLine] {
        let f = &z.pow(3) + &z;
        let ok = global_degree_sum(&f, surface) == Ok(-2);
        log.check(
            &format!("global_degree_sum_{}", surface.name()),
            ok,
            || format!("surface {surface}"),
        );
    }
}

fn selfcheck_verdicts(log: &mut VerificationLog) {
    let z = LaurentPoly::var;
    let one = LaurentPoly::one;
    // Affine line: No for deg <= 1, Yes with the expected interval above.
    let affine: [(LaurentPoly, bool); 5] = [
        (one(), false),
        (z(), false),
        (&z() + &one(), false),
        (z().pow(2), true),
        (z().pow(3), true),
    ];
    for (k, (f, expect_yes)) in affine.iter().enumerate() {
        let input = HiggsInput::from_f(SurfaceKind::AffineLine, f.clone()).unwrap();
        let verdict = crate::filtered::full_verdict(&input);
        let ok = verdict
            .map(|v| v.exists.is_yes() == *expect_yes)
            .unwrap_or(false);
        log.check(&format!("affine_verdict_{k}"), ok, || format!("f = {f}"));
    }
    let punctured: [(LaurentPoly, bool); 5] = [
        (one(), false),
        (z(), true),
        (LaurentPoly::monomial(-2, FieldElem::one()), true),
        (z().pow(4), true),
        (&z() - &one(), true),
    ];
    for (k, (f, expect_yes)) in punctured.iter().enumerate() {
        let input = HiggsInput::from_f(SurfaceKind::PuncturedLine, f.clone()).unwrap();
        let verdict = crate::filtered::full_verdict(&input);
        let ok = verdict
            .map(|v| v.exists.is_yes() == *expect_yes)
            .unwrap_or(false);
        log.check(&format!("punctured_verdict_{k}"), ok, || format!("f = {f}"));
    }
}

fn selfcheck_constructions(log: &mut VerificationLog) {
    let coeffs = [
        FieldElem::one(),
        FieldElem::i(),
        &FieldElem::from_int(2) + &FieldElem::i(),
    ];
    for b in [1u8, 2u8] {
        for (k, a) in coeffs.iter().enumerate() {
            let ok = verify_special_construction(b, a)
                .map(|l| l.all_passed())
                .unwrap_or(false);
            log.check(&format!("special_construction_b{b}_a{k}"), ok, || {
                format!("b = {b}, a = {a}")
            });
        }
    }
}

fn selfcheck_parser(log: &mut VerificationLog) {
    let cases = [
        ("3/4*c2", &FieldElem::from_int(3) * &FieldElem::two_pow_third(-5)),
        ("i^2", FieldElem::from_int(-1)),
        ("c2^3", FieldElem::from_int(2)),
        ("c2^-1", FieldElem::two_pow_third(-1)),
    ];
    for (expr, expected) in cases {
        let ok = parse_coeff(expr).map(|v| v == expected).unwrap_or(false);
        log.check(&format!("parse {expr}"), ok, || expr.to_string());
    }
    let samples = [
        FieldElem::two_pow_third(-5),
        &FieldElem::i() + &FieldElem::alpha(),
    ];
    for (k, e) in samples.iter().enumerate() {
        let ok = parse_coeff(&e.to_string()).map(|v| &v == e).unwrap_or(false);
        log.check(&format!("render_reparse_{k}"), ok, || e.to_string());
    }
}
