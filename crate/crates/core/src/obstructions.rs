//! Obstructions to Seifert fibered `1/q` surgeries.
//!
//! One-sided conclusions are phrased for `q > 0`: a Seifert fibered homology
//! sphere is positively oriented when its Casson invariant is positive. For
//! `q < 0` use `S³_{1/q}(K) = −S³_{−1/q}(K̄)`; every rule here only sees
//! mirror-invariant data, so the excluded orientation simply flips (see
//! [`excludes`]).

use std::fmt;

use serde::Serialize;

use crate::algebra::LaurentPoly;
use crate::hfk::{top_group_parity, HfkTable, Parity};
use crate::invariants::{delta, CoherenceClass, KnotInvariants, TorsionProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    TorsionSign,
    AlternatingParity,
    AlternatingTorsionBound,
    GenusDefect,
    HfkTopOdd,
    HfkTopEven,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::TorsionSign => "torsion-sign",
            Rule::AlternatingParity => "alternating-parity",
            Rule::AlternatingTorsionBound => "alternating-torsion-bound",
            Rule::GenusDefect => "genus-defect",
            Rule::HfkTopOdd => "hfk-top-odd",
            Rule::HfkTopEven => "hfk-top-even",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            Rule::TorsionSign => {
                "if S^3_{1/q}(K) is Seifert fibered, the nonzero torsion coefficients t_i(K) share one sign, \
                 the sign of the Casson invariant q*sum t_i"
            }
            Rule::AlternatingParity => {
                "alternating K with g + sigma/2 odd and sigma != 0 has no Seifert fibered 1/q surgery"
            }
            Rule::AlternatingTorsionBound => {
                "alternating K satisfies (-1)^(i + sigma/2) (t_i(K) - delta(sigma, i)) <= 0 (self-check)"
            }
            Rule::GenusDefect => {
                "deg Delta < g: no positively oriented Seifert fibered 1/q surgery for q >= 0; \
                 none at all when g > 1"
            }
            Rule::HfkTopOdd => {
                "positively oriented Seifert fibered 1/q surgery (q > 0) forces HFK(K, g) to vanish in odd degrees"
            }
            Rule::HfkTopEven => {
                "negatively oriented Seifert fibered 1/q surgery (q > 0) with g > 1 forces HFK(K, g) \
                 to vanish in even degrees"
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Applicability {
    Applied,
    HypothesesNotMet,
    InsufficientData,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    NoConclusion,
    NoPositivelyOrientedSf,
    NoNegativelyOrientedSf,
    NoSfSurgery,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conclusion::NoConclusion => "no-conclusion",
            Conclusion::NoPositivelyOrientedSf => "no-positively-oriented-SF-1/q",
            Conclusion::NoNegativelyOrientedSf => "no-negatively-oriented-SF-1/q",
            Conclusion::NoSfSurgery => "no-SF-1/q-surgery",
        })
    }
}

impl fmt::Display for Applicability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Applicability::Applied => "applied",
            Applicability::HypothesesNotMet => "hypotheses-not-met",
            Applicability::InsufficientData => "insufficient-data",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub rule: Rule,
    pub applicability: Applicability,
    pub conclusion: Conclusion,
    pub citation: &'static str,
    pub witness: String,
}

impl Verdict {
    fn new(rule: Rule, applicability: Applicability, conclusion: Conclusion, witness: String) -> Self {
        debug_assert!(conclusion == Conclusion::NoConclusion || applicability == Applicability::Applied);
        Verdict { rule, applicability, conclusion, citation: rule.citation(), witness }
    }

    fn not_met(rule: Rule, witness: String) -> Self {
        Self::new(rule, Applicability::HypothesesNotMet, Conclusion::NoConclusion, witness)
    }

    fn no_data(rule: Rule, witness: &str) -> Self {
        Self::new(rule, Applicability::InsufficientData, Conclusion::NoConclusion, witness.to_string())
    }
}

/// Meet of conclusions: both one-sided exclusions together exclude everything.
pub fn meet(conclusions: impl IntoIterator<Item = Conclusion>) -> Conclusion {
    let (mut pos, mut neg) = (false, false);
    for c in conclusions {
        match c {
            Conclusion::NoSfSurgery => return Conclusion::NoSfSurgery,
            Conclusion::NoPositivelyOrientedSf => pos = true,
            Conclusion::NoNegativelyOrientedSf => neg = true,
            Conclusion::NoConclusion => {}
        }
    }
    match (pos, neg) {
        (true, true) => Conclusion::NoSfSurgery,
        (true, false) => Conclusion::NoPositivelyOrientedSf,
        (false, true) => Conclusion::NoNegativelyOrientedSf,
        (false, false) => Conclusion::NoConclusion,
    }
}

pub fn torsion_sign_rule(t: &TorsionProfile) -> Verdict {
    let s = crate::invariants::sign_coherence(t);
    let w = format!("t = {:?}, class {}", t.as_i64(), s.class);
    match s.class {
        CoherenceClass::Mixed => Verdict::new(Rule::TorsionSign, Applicability::Applied, Conclusion::NoSfSurgery, w),
        CoherenceClass::NonNegative => {
            Verdict::new(Rule::TorsionSign, Applicability::Applied, Conclusion::NoNegativelyOrientedSf, w)
        }
        CoherenceClass::NonPositive => {
            Verdict::new(Rule::TorsionSign, Applicability::Applied, Conclusion::NoPositivelyOrientedSf, w)
        }
        CoherenceClass::AllZero => Verdict::not_met(Rule::TorsionSign, w),
    }
}

pub fn alternating_parity_rule(inv: &KnotInvariants) -> Verdict {
    if !inv.alternating {
        return Verdict::not_met(Rule::AlternatingParity, "diagram not alternating".into());
    }
    let Some(g) = inv.genus else {
        return Verdict::no_data(Rule::AlternatingParity, "genus unknown");
    };
    let s = inv.signature;
    let w = format!("g = {g}, sigma = {s}");
    if s != 0 && (g as i64 + s / 2).rem_euclid(2) == 1 {
        Verdict::new(Rule::AlternatingParity, Applicability::Applied, Conclusion::NoSfSurgery, w)
    } else {
        Verdict::not_met(Rule::AlternatingParity, w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub i: i64,
    pub t: i64,
    pub delta: i64,
}

/// Indices `i >= 0` where `(-1)^(i + σ/2) (t_i - δ(σ, i)) > 0`. Empty for
/// every alternating knot; anything else is a bug upstream.
pub fn verify_torsion_bound(t: &TorsionProfile, sigma: i64) -> Vec<BoundViolation> {
    let top = (t.values.len() as i64).max(sigma.abs() / 2 + 1);
    let mut out = Vec::new();
    for i in 0..top {
        let ti = i64::try_from(t.t(i)).expect("torsion coefficient fits in i64");
        let d = delta(sigma, i);
        let sign = if (i + sigma / 2).rem_euclid(2) == 0 { 1 } else { -1 };
        if sign * (ti - d) > 0 {
            out.push(BoundViolation { i, t: ti, delta: d });
        }
    }
    out
}

pub fn torsion_bound_check(inv: &KnotInvariants) -> Verdict {
    if !inv.alternating {
        return Verdict::not_met(Rule::AlternatingTorsionBound, "diagram not alternating".into());
    }
    let v = verify_torsion_bound(&inv.torsion, inv.signature);
    let w = if v.is_empty() { "no violations".to_string() } else { format!("violations at {:?}", v) };
    Verdict::new(Rule::AlternatingTorsionBound, Applicability::Applied, Conclusion::NoConclusion, w)
}

pub fn genus_defect_rule(deg: u32, genus: Option<u32>) -> Verdict {
    let Some(g) = genus else {
        return Verdict::no_data(Rule::GenusDefect, "genus unknown");
    };
    let w = format!("deg Delta = {deg}, g = {g}");
    if deg >= g {
        Verdict::not_met(Rule::GenusDefect, w)
    } else if g > 1 {
        Verdict::new(Rule::GenusDefect, Applicability::Applied, Conclusion::NoSfSurgery, w)
    } else {
        Verdict::new(Rule::GenusDefect, Applicability::Applied, Conclusion::NoPositivelyOrientedSf, w)
    }
}

/// The two parity statements about the top knot Floer group. `genus` is the
/// known genus, if any; a table whose top grading disagrees with it is
/// reported as insufficient data.
pub fn hfk_parity_rules(table: Option<&HfkTable>, genus: Option<u32>) -> [Verdict; 2] {
    let parity = table.map(top_group_parity);
    let p = match (parity, genus) {
        (Some(Ok(p)), Some(g)) if p.genus == g as i64 => p,
        (Some(Ok(p)), None) => p,
        (Some(Ok(p)), Some(g)) => {
            let w = format!("table top grading {} differs from genus {g}", p.genus);
            return [Verdict::no_data(Rule::HfkTopOdd, &w), Verdict::no_data(Rule::HfkTopEven, &w)];
        }
        (Some(Err(e)), _) => {
            let w = e.to_string();
            return [Verdict::no_data(Rule::HfkTopOdd, &w), Verdict::no_data(Rule::HfkTopEven, &w)];
        }
        (None, _) => {
            return [Verdict::no_data(Rule::HfkTopOdd, "no table"), Verdict::no_data(Rule::HfkTopEven, "no table")];
        }
    };
    let w = format!("top group at i = {} has {} parity", p.genus, if p.parity == Parity::Odd { "odd" } else { "even" });
    let odd = if p.parity == Parity::Odd {
        Verdict::new(Rule::HfkTopOdd, Applicability::Applied, Conclusion::NoPositivelyOrientedSf, w.clone())
    } else {
        Verdict::not_met(Rule::HfkTopOdd, w.clone())
    };
    let even = if p.parity == Parity::Even && p.genus > 1 {
        Verdict::new(Rule::HfkTopEven, Applicability::Applied, Conclusion::NoNegativelyOrientedSf, w)
    } else {
        Verdict::not_met(Rule::HfkTopEven, w)
    };
    [odd, even]
}

/// Which Brieskorn spheres the knot could produce by surgery, and at which
/// slopes. Only the trefoil polynomial with genus one can give Σ(2,3,5)
/// (slope −1); Σ(2,3,7) needs genus one and either the trefoil polynomial
/// (slope −1) or the figure-eight polynomial (slope +1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrieskornFilter {
    pub sigma_235: Option<i64>,
    pub sigma_237: Vec<i64>,
    /// the polynomial matched but the genus is unknown
    pub needs_genus: bool,
}

pub fn brieskorn_filter(inv: &KnotInvariants) -> BrieskornFilter {
    let trefoil = LaurentPoly::from_coeffs(-1, &[1, -1, 1]);
    let fig8 = LaurentPoly::from_coeffs(-1, &[-1, 3, -1]);
    let p = inv.alexander.poly();
    let matched = *p == trefoil || *p == fig8;
    let genus_one = inv.genus == Some(1);
    let mut f = BrieskornFilter { sigma_235: None, sigma_237: Vec::new(), needs_genus: matched && inv.genus.is_none() };
    if genus_one && *p == trefoil {
        f.sigma_235 = Some(-1);
        f.sigma_237.push(-1);
    }
    if genus_one && *p == fig8 {
        f.sigma_237.push(1);
    }
    f
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub knot: String,
    pub verdicts: Vec<Verdict>,
    pub summary: Conclusion,
    pub brieskorn: BrieskornFilter,
}

impl ObstructionReport {
    pub fn verdict(&self, rule: Rule) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.rule == rule)
    }

    pub fn torsion_bound_violated(&self) -> bool {
        self.verdict(Rule::AlternatingTorsionBound)
            .map_or(false, |v| v.applicability == Applicability::Applied && v.witness != "no violations")
    }
}

/// Runs every rule that has data. Verdict order is fixed; the HFK parity
/// rules are added only when a table is supplied.
pub fn full_report(inv: &KnotInvariants, table: Option<&HfkTable>) -> ObstructionReport {
    let mut verdicts = vec![
        torsion_sign_rule(&inv.torsion),
        alternating_parity_rule(inv),
        torsion_bound_check(inv),
        genus_defect_rule(inv.alexander.degree(), inv.genus),
    ];
    if table.is_some() {
        verdicts.extend(hfk_parity_rules(table, inv.genus));
    }
    let summary = meet(verdicts.iter().map(|v| v.conclusion));
    ObstructionReport { knot: inv.name.clone(), verdicts, summary, brieskorn: brieskorn_filter(inv) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Positive,
    Negative,
}

/// Whether the report rules out `S³_{1/q}(K)` being a Seifert fibered space
/// with the given orientation.
pub fn excludes(summary: Conclusion, q: i64, o: Orientation) -> bool {
    let o = if q > 0 {
        o
    } else if o == Orientation::Positive {
        Orientation::Negative
    } else {
        Orientation::Positive
    };
    match summary {
        Conclusion::NoSfSurgery => true,
        Conclusion::NoPositivelyOrientedSf => o == Orientation::Positive,
        Conclusion::NoNegativelyOrientedSf => o == Orientation::Negative,
        Conclusion::NoConclusion => false,
    }
}
