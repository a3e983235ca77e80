//! Feasibility decision vs. an exhaustive quarter-integer scan, soundness of
//! the returned region, and verdict consistency over the two surfaces.

use hitchin3::field::rat;
use hitchin3::filtered::{sample_region_point, PunctureSpec};
use hitchin3::{
    check_good, check_perfect, check_stable, decide_feasible, degrees, full_verdict,
    verify_special_construction, Error, Existence, FieldElem, FilteredSpec, HiggsInput,
    LaurentPoly, PunctureWeights, Rational, SurfaceKind, WeightAssignment,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent oracle: exhaustive scan of quarter-integer weights in
/// [-10, 10] per coordinate. Perfectness is a per-puncture equation, so
/// off-diagonal `(d2, d3)` pairs fail the conjunction outright and the
/// enumeration only walks the pairs satisfying it; this is an evaluation
/// order, not a change of semantics.
fn quarter_grid_has_passing_assignment(spec: &FilteredSpec) -> bool {
    let lo = rat(-10, 1);
    let hi = rat(10, 1);
    let mut per_puncture: Vec<Vec<PunctureWeights>> = Vec::new();
    for p in &spec.punctures {
        let mut pairs = Vec::new();
        for k in -40i64..=40 {
            let d2 = rat(k, 4);
            let d3 = rat(-p.ord_omega, 1) - &d2;
            if d3 >= lo && d3 <= hi {
                pairs.push(PunctureWeights { d2, d3 });
            }
        }
        per_puncture.push(pairs);
    }
    let mut assignment: Vec<PunctureWeights> = Vec::with_capacity(per_puncture.len());
    scan(spec, &per_puncture, &mut assignment)
}

fn scan(
    spec: &FilteredSpec,
    per_puncture: &[Vec<PunctureWeights>],
    assignment: &mut Vec<PunctureWeights>,
) -> bool {
    if assignment.len() == per_puncture.len() {
        let w = WeightAssignment::new(assignment.clone());
        return check_good(spec, &w).holds
            && check_perfect(spec, &w).holds
            && check_stable(spec, &w).unwrap_or(false);
    }
    let depth = assignment.len();
    for pw in &per_puncture[depth] {
        assignment.push(pw.clone());
        if scan(spec, per_puncture, assignment) {
            assignment.pop();
            return true;
        }
        assignment.pop();
    }
    false
}

fn random_spec(rng: &mut ChaCha8Rng) -> FilteredSpec {
    let z = rng.gen_range(0u64..=6);
    let punctures = (0..rng.gen_range(1usize..=2))
        .map(|k| PunctureSpec {
            label: format!("p{k}"),
            ord_omega: rng.gen_range(-8i64..=2),
        })
        .collect();
    FilteredSpec::new(rng.gen_range(0u32..=1), punctures, z)
}

#[test]
fn feasibility_agrees_with_quarter_grid_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51ec7ca1);
    let mut feasible_seen = 0;
    let mut infeasible_seen = 0;
    for _ in 0..30 {
        let spec = random_spec(&mut rng);
        let decision = decide_feasible(&spec);
        let scan_found = quarter_grid_has_passing_assignment(&spec);
        match decision {
            Ok(Some(region)) => {
                feasible_seen += 1;
                assert!(scan_found, "scan missed a feasible spec {spec:?}");
                assert!(region.contains(&spec, &region.canonical));
            }
            Ok(None) => {
                infeasible_seen += 1;
                assert!(!scan_found, "scan found a point for infeasible {spec:?}");
            }
            Err(Error::HypothesisViolated(_)) => {
                assert_eq!(spec.interior_zero_total, 0);
                assert!(!scan_found, "scan passed outside the Z >= 1 hypothesis");
            }
            Err(other) => panic!("unexpected error {other}"),
        }
    }
    assert!(feasible_seen >= 5, "corpus too lopsided: {feasible_seen} feasible");
    assert!(infeasible_seen >= 2, "corpus too lopsided: {infeasible_seen} infeasible");
}

#[test]
fn region_soundness_inside_and_outside() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    let mut checked = 0;
    while checked < 25 {
        let spec = random_spec(&mut rng);
        if spec.interior_zero_total == 0 {
            continue;
        }
        let Some(region) = decide_feasible(&spec).unwrap() else {
            continue;
        };
        checked += 1;

        for _ in 0..20 {
            let w = sample_region_point(&region, &spec, &mut rng);
            assert!(region.contains(&spec, &w));
            assert!(check_good(&spec, &w).holds);
            assert!(check_perfect(&spec, &w).holds);
            assert!(check_stable(&spec, &w).unwrap());
        }

        // Perturbations leaving the region must fail at least one predicate.
        let passes = |w: &WeightAssignment| {
            check_good(&spec, w).holds
                && check_perfect(&spec, w).holds
                && check_stable(&spec, w).unwrap_or(false)
        };
        let quarter = rat(1, 4);
        for k in 0..spec.punctures.len() {
            // Above the goodness bound in d2, perfectness kept.
            let mut d2: Vec<Rational> = region.d2_upper.clone();
            d2[k] = &d2[k] + &quarter;
            let w = WeightAssignment::from_d2(&spec, &d2);
            assert!(!region.contains(&spec, &w));
            assert!(!passes(&w));

            // Broken perfectness at one puncture.
            let mut w = region.canonical.clone();
            w.weights[k].d3 = &w.weights[k].d3 + &quarter;
            assert!(!region.contains(&spec, &w));
            assert!(!passes(&w));
        }
        // Sum bound saturated (strictness violated).
        let n = spec.punctures.len() as i64;
        let share = &region.sum_two_d2_lower_strict / rat(2 * n, 1);
        let d2: Vec<Rational> = vec![share; spec.punctures.len()];
        let w = WeightAssignment::from_d2(&spec, &d2);
        assert!(!region.contains(&spec, &w));
        assert!(!passes(&w));
    }
}

#[test]
fn middle_degrees_agree_for_arbitrary_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xde9);
    for _ in 0..50 {
        let spec = random_spec(&mut rng);
        let weights = WeightAssignment::new(
            spec.punctures
                .iter()
                .map(|_| PunctureWeights {
                    d2: rat(rng.gen_range(-40i64..=40), 4),
                    d3: rat(rng.gen_range(-40i64..=40), 4),
                })
                .collect(),
        );
        let d = degrees(&spec, &weights);
        assert_eq!(d.e2, d.e4);
        assert_eq!(d.e1, d.e3);
    }
}

fn random_poly(rng: &mut ChaCha8Rng, deg: i64) -> LaurentPoly {
    let mut terms: Vec<(i64, FieldElem)> = vec![(deg, FieldElem::from_int(rng.gen_range(1i64..=5)))];
    for e in 0..deg {
        if rng.gen_bool(0.6) {
            terms.push((e, FieldElem::from_int(rng.gen_range(-5i64..=5))));
        }
    }
    LaurentPoly::from_terms(terms)
}

#[test]
fn affine_verdicts_match_degree_threshold() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xabcd);
    for deg in 0i64..=6 {
        // Monomials with several coefficients.
        for a in [FieldElem::one(), FieldElem::i(), &FieldElem::from_int(2) + &FieldElem::i()] {
            let f = LaurentPoly::monomial(deg, a);
            let input = HiggsInput::from_f(SurfaceKind::AffineLine, f.clone()).unwrap();
            let verdict = full_verdict(&input).unwrap();
            assert_eq!(verdict.exists.is_yes(), deg >= 2, "monomial f = {f}");
        }
        // Random polynomials of that degree.
        for _ in 0..4 {
            let f = random_poly(&mut rng, deg);
            let input = HiggsInput::from_f(SurfaceKind::AffineLine, f.clone()).unwrap();
            let verdict = full_verdict(&input).unwrap();
            assert_eq!(verdict.exists.is_yes(), deg >= 2, "random f = {f}");
        }
    }
}

#[test]
fn punctured_verdicts_match_nonconstancy() {
    let z = LaurentPoly::var;
    let one = LaurentPoly::one;
    let cases: [(LaurentPoly, bool); 9] = [
        (one(), false),
        (z(), true),
        (z().pow(2), true),
        (z().pow(3), true),
        (LaurentPoly::monomial(-1, FieldElem::one()), true),
        (LaurentPoly::monomial(-2, FieldElem::one()), true),
        (LaurentPoly::monomial(-3, FieldElem::one()), true),
        (&z() - &one(), true),
        (&z() + &LaurentPoly::monomial(-1, FieldElem::one()), true),
    ];
    for (f, expect_yes) in cases {
        let input = HiggsInput::from_f(SurfaceKind::PuncturedLine, f.clone()).unwrap();
        let verdict = full_verdict(&input).unwrap();
        assert_eq!(verdict.exists.is_yes(), expect_yes, "f = {f}");
        if expect_yes {
            assert_eq!(verdict.exists, Existence::Yes);
        }
    }
}

fn random_nonzero_coeff(rng: &mut ChaCha8Rng) -> FieldElem {
    loop {
        let re = rat(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=4));
        let im = rat(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=4));
        let a = &FieldElem::from_rational(re)
            + &(&FieldElem::from_rational(im) * &FieldElem::i());
        if !a.is_zero() {
            return a;
        }
    }
}

#[test]
fn special_constructions_verify_for_random_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x57ec);
    for b in [1u8, 2u8] {
        for _ in 0..10 {
            let a = random_nonzero_coeff(&mut rng);
            let log = verify_special_construction(b, &a).unwrap();
            assert!(log.all_passed(), "b = {b}, a = {a}");
        }
    }
}
