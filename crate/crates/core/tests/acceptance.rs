//! One line per acceptance criterion. Run with `--nocapture` to see them.

mod common;

use common::*;
use knotsurg::algebra::{det_laurent, second_derivative_at_one, LaurentPoly};
use knotsurg::census::{bundled_table, bundled_trivial_alexander, scan};
use knotsurg::codec::{parse_braid, parse_dt, parse_pd, realize_dt};
use knotsurg::hfk::hfk_for;
use knotsurg::invariants::{assemble, delta, CoherenceClass, KnotInvariants};
use knotsurg::obstructions::{brieskorn_filter, excludes, full_report, verify_torsion_bound, Conclusion, Orientation};
use knotsurg::plumbing::{classify_form, orientation_class, DefinitenessClass, OrientationClass, WeightedTree};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::test_runner::{Config, TestRunner};

struct Outcome {
    pass: bool,
    /// failing only where the stated expectation contradicts the definition it tests
    contradicted: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, contradicted: false, detail: detail.into() }
}

fn knot(name: &str, d: &knotsurg::diagram::PlanarDiagram, genus: Option<u32>) -> KnotInvariants {
    assemble(name, d, genus).unwrap()
}

fn dt(text: &str) -> knotsurg::diagram::PlanarDiagram {
    realize_dt(&parse_dt(text).unwrap()).unwrap()
}

fn torus(n: usize) -> knotsurg::diagram::PlanarDiagram {
    parse_braid(&format!("2: {}", vec!["1"; 2 * n + 1].join(" "))).unwrap().to_diagram().unwrap()
}

fn census() -> Outcome {
    let table = bundled_table();
    let all = scan(&table, |r| !r.alternating && r.crossings() <= 10);
    let modern = scan(&table, |r| !r.alternating && r.crossings() <= 10 && r.name != "10_161p");
    let (m1, t1) = (all.count(CoherenceClass::Mixed), all.total());
    let (m2, t2) = (modern.count(CoherenceClass::Mixed), modern.total());
    let clean = all.failures.is_empty() && all.results.iter().all(|r| r.warnings.is_empty());
    outcome(
        m1 == 34 && t1 == 54 && (m2 == 33 || m2 == 34) && t2 == 53 && clean,
        format!("mixed {m1}/{t1} with the duplicate row, {m2}/{t2} without"),
    )
}

fn torus_family() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=10usize {
        let inv = knot("T(2,2n+1)", &torus(n), None);
        let want: Vec<i64> = (0..n as i64).map(|i| delta(2 * n as i64, i)).collect();
        if inv.torsion.as_i64() != want || inv.signature.unsigned_abs() != 2 * n as u64 {
            bad.push(n);
        }
    }
    outcome(bad.is_empty(), format!("n = 1..10, mismatches at {bad:?}"))
}

fn alternating_bound() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for r in bundled_table().into_iter().filter(|r| r.alternating) {
        let inv = knot(&r.name, &dt(&r.dt), None);
        count += 1;
        if !verify_torsion_bound(&inv.torsion, inv.signature).is_empty() {
            bad.push(r.name);
        }
    }
    outcome(bad.is_empty() && count == 196, format!("{count} alternating knots, violations {bad:?}"))
}

fn named_knots() -> Outcome {
    let tre = knot("3_1", &dt("4 6 2"), None);
    let fig8 = knot("4_1", &dt("4 6 8 2"), None);
    let unknot = knot("0_1", &dt(""), None);
    let ok = tre.alexander.poly() == &LaurentPoly::from_coeffs(-1, &[1, -1, 1])
        && tre.torsion.as_i64() == vec![1]
        && fig8.alexander.poly() == &LaurentPoly::from_coeffs(-1, &[-1, 3, -1])
        && fig8.torsion.as_i64() == vec![-1]
        && fig8.signature == 0
        && unknot.alexander.poly() == &LaurentPoly::one()
        && unknot.torsion.values.iter().all(|t| t == &BigInt::from(0));
    outcome(ok, format!("3_1: {}, 4_1: {} (σ {}), unknot: {}", tre.alexander, fig8.alexander, fig8.signature, unknot.alexander))
}

fn casson_identity() -> Outcome {
    let mut n = 0;
    let mut bad = Vec::new();
    let table = bundled_table();
    let diagrams = table
        .iter()
        .map(|r| (r.name.clone(), dt(&r.dt)))
        .chain(bundled_trivial_alexander().into_iter().map(|r| (r.name, parse_pd(&r.pd).unwrap().to_diagram().unwrap())));
    for (name, d) in diagrams {
        let inv = knot(&name, &d, None);
        n += 1;
        if inv.torsion.total() * BigInt::from(2) != second_derivative_at_one(inv.alexander.poly()) {
            bad.push(name);
        }
    }
    outcome(bad.is_empty(), format!("{n} knots, failures {bad:?}"))
}

/// Known Seifert fibered surgeries: the orientation is the sign of q·Σt.
fn soundness() -> Outcome {
    let mut anchors: Vec<(String, KnotInvariants, Vec<i64>)> = vec![
        ("trefoil".into(), knot("3_1", &dt("4 6 2"), None), vec![-1, 1]),
        ("figure-eight".into(), knot("4_1", &dt("4 6 8 2"), None), vec![1]),
    ];
    for n in 2..=10 {
        anchors.push((format!("T(2,{})", 2 * n + 1), knot("torus", &torus(n), None), vec![1]));
    }
    let mut problems = Vec::new();
    for (name, inv, qs) in &anchors {
        let table = hfk_for(inv).unwrap();
        let report = full_report(inv, Some(&table));
        for &q in qs {
            let casson = inv.torsion.total() * BigInt::from(q);
            let o = if casson.is_positive() { Orientation::Positive } else { Orientation::Negative };
            if excludes(report.summary, q, o) {
                problems.push(format!("{name} at 1/{q}"));
            }
        }
    }
    let filters: Vec<(String, Option<i64>, Vec<i64>)> =
        anchors.iter().map(|(n, inv, _)| { let f = brieskorn_filter(inv); (n.clone(), f.sigma_235, f.sigma_237) }).collect();
    let expected: Vec<(String, Option<i64>, Vec<i64>)> = anchors
        .iter()
        .map(|(n, _, _)| match n.as_str() {
            "trefoil" => (n.clone(), Some(-1), vec![-1]),
            "figure-eight" => (n.clone(), None, vec![1]),
            _ => (n.clone(), None, vec![]),
        })
        .collect();
    if filters != expected {
        problems.push(format!("brieskorn filter {filters:?}"));
    }
    outcome(problems.is_empty(), format!("{} anchors, problems {problems:?}", anchors.len()))
}

fn kinoshita_terasaka() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for r in bundled_trivial_alexander().into_iter().filter(|r| r.name.starts_with("KT_")) {
        let d = parse_pd(&r.pd).unwrap().to_diagram().unwrap();
        let inv = knot(&r.name, &d, Some(r.genus));
        let report = full_report(&inv, None);
        ok &= inv.alexander.poly() == &LaurentPoly::one() && report.summary == Conclusion::NoSfSurgery;
        lines.push(format!("{} (g {}): {}", r.name, r.genus, report.summary));
    }
    outcome(ok && lines.len() == 4, lines.join(", "))
}

/// The expected bad-point counts for the E8 tree (0) and the single
/// weight-0 vertex (1) disagree with the bad-point rule m(v) > −d(v): the
/// trivalent E8 vertex has −2 > −3, and 0 > 0 fails. The rule wins; those
/// two counts are reported as failing.
fn plumbing() -> Outcome {
    let e8 = WeightedTree::e8();
    let star = WeightedTree::star(-1, &[vec![-2], vec![-3], vec![-7]]);
    let zero = WeightedTree::new(&[(0, 0)], &[]).unwrap();
    let (ce, cs, cz) = (classify_form(&e8), classify_form(&star), classify_form(&zero));
    let classes = ce.class == DefinitenessClass::NegativeDefinite
        && orientation_class(&e8) == OrientationClass::PositiveSeifert
        && cs.class == DefinitenessClass::NegativeDefinite
        && cs.bad_point_count == 1
        && cz.class == DefinitenessClass::NegativeSemiDefinite;
    let counts = ce.bad_point_count == 0 && cz.bad_point_count == 1;
    // what the rule itself gives
    let by_rule = ce.bad_point_count == 1 && e8.bad_points() == vec![0] && cz.bad_point_count == 0;
    let mut o = outcome(
        classes && counts,
        format!(
            "classes {}; bad points E8 {} (expected 0), star {}, zero vertex {} (expected 1){}",
            if classes { "as expected" } else { "WRONG" },
            ce.bad_point_count,
            cs.bad_point_count,
            cz.bad_point_count,
            if counts { "" } else { "; expected counts contradict m(v) > -d(v)" }
        ),
    );
    o.contradicted = classes && !counts && by_rule;
    o
}

fn run<S: proptest::strategy::Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), String>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner
        .run(&s, |v| f(v).map_err(proptest::test_runner::TestCaseError::fail))
        .map_err(|e| e.to_string())
}

fn property_suites() -> Outcome {
    let det = run(1000, strategies::laurent_matrix(), |m| {
        if det_laurent(&m) == cofactor_det(&m) { Ok(()) } else { Err(format!("{m:?}")) }
    });
    let sig = run(500, strategies::symmetric_and_unimodular(), |(s, ops)| congruence_holds(&s, &ops));
    let trees = run(500, strategies::tree_and_vertex(), |(t, v)| moves_hold(&t, v));
    let ok = det.is_ok() && sig.is_ok() && trees.is_ok();
    let show = |r: &Result<(), String>| r.as_ref().map_or_else(|e| e.clone(), |_| "ok".to_string());
    outcome(ok, format!("determinants {}, congruence {}, tree moves {}", show(&det), show(&sig), show(&trees)))
}

fn presentations() -> Outcome {
    let from_dt = knot("3_1", &dt("4 6 2"), None);
    let from_braid = knot("3_1", &parse_braid("2: 1 1 1").unwrap().to_diagram().unwrap(), None);
    let from_pd = knot("3_1", &parse_pd("X[0,4,1,3] X[2,0,3,5] X[4,2,5,1]").unwrap().to_diagram().unwrap(), None);
    let from_gauss = knot("3_1", &knotsurg::codec::parse_gauss("O1+ U2+ O3+ U1+ O2+ U3+").unwrap().to_diagram().unwrap(), None);
    let ok = from_dt == from_braid && from_dt == from_pd && from_dt == from_gauss;
    outcome(ok, format!("Δ {}, σ {}, torsion {:?}", from_dt.alexander, from_dt.signature, from_dt.torsion.as_i64()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("census of non-alternating knots", census),
        ("torus knot torsion family", torus_family),
        ("alternating torsion bound", alternating_bound),
        ("named knot invariants", named_knots),
        ("torsion sum identity", casson_identity),
        ("soundness anchors", soundness),
        ("trivial Alexander, genus defect", kinoshita_terasaka),
        ("plumbing classification", plumbing),
        ("property suites", property_suites),
        ("presentation independence", presentations),
    ];
    let mut unexpected = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        let id = k + 1;
        println!("criterion {id:>2} {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass && !o.contradicted {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "failing criteria {unexpected:?}");
}
