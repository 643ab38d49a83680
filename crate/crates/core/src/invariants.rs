//! Alexander polynomial, signature, torsion coefficients and the Casson
//! surgery value.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{det_laurent, symmetric_signature, AlgebraError, LaurentPoly};
use crate::diagram::{DiagramError, PlanarDiagram, SeifertData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("det(V - V^T) = {0}, expected a unit")]
    NotUnimodular(BigInt),
    #[error("genus {genus} is inconsistent: {reason}")]
    GenusInconsistent { genus: u32, reason: String },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

/// Symmetric Alexander polynomial normalized so that `Δ(1) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlexanderPolynomial {
    poly: LaurentPoly,
}

impl AlexanderPolynomial {
    /// Normalizes `p` by a unit `±T^k`. Fails unless the result is symmetric
    /// with value 1 at `T = 1`.
    pub fn normalize(p: &LaurentPoly) -> Option<Self> {
        let (lo, hi) = (p.min_exp()?, p.max_exp()?);
        if (lo + hi) % 2 != 0 {
            return None;
        }
        let mut q = p.shift(-(lo + hi) / 2);
        if q.eval_at_one().is_negative() {
            q = -&q;
        }
        (q.is_symmetric() && q.eval_at_one().is_one()).then_some(AlexanderPolynomial { poly: q })
    }

    /// Symmetric polynomial from its coefficients `a_0, a_1, ...`.
    pub fn from_symmetric(coeffs: &[i64]) -> Option<Self> {
        let mut p = LaurentPoly::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p = &p + &LaurentPoly::monomial(c, i as i64);
            if i > 0 {
                p = &p + &LaurentPoly::monomial(c, -(i as i64));
            }
        }
        Self::normalize(&p)
    }

    pub fn unknot() -> Self {
        AlexanderPolynomial { poly: LaurentPoly::one() }
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.poly.max_exp().unwrap_or(0) as u32
    }

    /// `a_i`
    pub fn coeff(&self, i: i64) -> BigInt {
        self.poly.coeff(i)
    }
}

impl fmt::Display for AlexanderPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

pub fn alexander(sd: &SeifertData) -> Result<AlexanderPolynomial, InvariantError> {
    let v = &sd.matrix;
    let b = v.dim();
    let unit = v.sub(&v.transpose()).det();
    if unit.magnitude() != &One::one() {
        return Err(InvariantError::NotUnimodular(unit));
    }
    let m: Vec<Vec<LaurentPoly>> = (0..b)
        .map(|i| {
            (0..b)
                .map(|j| &LaurentPoly::constant(v.get(i, j).clone()) - &LaurentPoly::monomial(v.get(j, i).clone(), 1))
                .collect()
        })
        .collect();
    let d = det_laurent(&m);
    AlexanderPolynomial::normalize(&d).ok_or_else(|| InvariantError::Internal(format!("det(V - T V^T) = {d} is not a symmetric unit multiple")))
}

/// `sig(V + V^T)`
pub fn signature(sd: &SeifertData) -> Result<i64, InvariantError> {
    let v = &sd.matrix;
    Ok(symmetric_signature(&v.add(&v.transpose()))?)
}

/// Torsion coefficients `t_i = sum_{j >= 1} j a_{|i| + j}`, stored for
/// `0 <= i < deg`; all others vanish.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorsionProfile {
    pub values: Vec<BigInt>,
    pub alexander_degree: u32,
}

impl TorsionProfile {
    pub fn t(&self, i: i64) -> BigInt {
        self.values.get(i.unsigned_abs() as usize).cloned().unwrap_or_default()
    }

    /// `sum over all integers i of t_i`
    pub fn total(&self) -> BigInt {
        let mut s = BigInt::zero();
        for (i, t) in self.values.iter().enumerate() {
            s += if i == 0 { t.clone() } else { t * 2 };
        }
        s
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.values.iter().map(|v| i64::try_from(v).expect("torsion coefficient fits in i64")).collect()
    }
}

pub fn torsion_profile(a: &AlexanderPolynomial) -> TorsionProfile {
    let g = a.degree() as i64;
    let values = (0..g)
        .map(|i| (1..=g - i).map(|j| a.coeff(i + j) * BigInt::from(j)).sum())
        .collect();
    TorsionProfile { values, alexander_degree: g as u32 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoherenceClass {
    AllZero,
    NonNegative,
    NonPositive,
    Mixed,
}

impl fmt::Display for CoherenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoherenceClass::AllZero => "all-zero",
            CoherenceClass::NonNegative => "non-negative",
            CoherenceClass::NonPositive => "non-positive",
            CoherenceClass::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignCoherence {
    pub class: CoherenceClass,
    /// first index with a positive value
    pub positive_at: Option<usize>,
    /// first index with a negative value
    pub negative_at: Option<usize>,
}

pub fn sign_coherence(t: &TorsionProfile) -> SignCoherence {
    let positive_at = t.values.iter().position(|v| v.is_positive());
    let negative_at = t.values.iter().position(|v| v.is_negative());
    let class = match (positive_at, negative_at) {
        (None, None) => CoherenceClass::AllZero,
        (Some(_), None) => CoherenceClass::NonNegative,
        (None, Some(_)) => CoherenceClass::NonPositive,
        (Some(_), Some(_)) => CoherenceClass::Mixed,
    };
    SignCoherence { class, positive_at, negative_at }
}

/// `max(0, ceil((|m| - 2|i|) / 4))`, the torsion coefficients of `T(2, |m| + 1)`.
pub fn delta(m: i64, i: i64) -> i64 {
    let num = m.abs() - 2 * i.abs();
    if num <= 0 {
        0
    } else {
        (num + 3) / 4
    }
}

/// Casson invariant of `1/q` surgery: `q * sum_i t_i`.
pub fn casson_surgery(q: i64, t: &TorsionProfile) -> BigInt {
    t.total() * BigInt::from(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenusSource {
    ComputedAlternating,
    UserSupplied,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KnotInvariants {
    pub name: String,
    pub alexander: AlexanderPolynomial,
    pub signature: i64,
    pub torsion: TorsionProfile,
    pub alternating: bool,
    pub genus: Option<u32>,
    pub genus_source: GenusSource,
    pub crossings: usize,
    pub seifert_circles: usize,
}

impl KnotInvariants {
    pub fn coherence(&self) -> SignCoherence {
        sign_coherence(&self.torsion)
    }
}

/// Runs diagram → Seifert form → invariants. Alternating diagrams get
/// `genus = deg Δ`; otherwise the genus is whatever the caller supplies.
pub fn assemble(name: &str, d: &PlanarDiagram, user_genus: Option<u32>) -> Result<KnotInvariants, InvariantError> {
    let sd = d.seifert_matrix()?;
    let alexander = alexander(&sd)?;
    let signature = signature(&sd)?;
    let torsion = torsion_profile(&alexander);
    let alternating = d.is_alternating();
    let deg = alexander.degree();
    let (genus, genus_source) = if alternating {
        if let Some(g) = user_genus.filter(|&g| g != deg) {
            return Err(InvariantError::GenusInconsistent {
                genus: g,
                reason: format!("alternating diagram forces genus {deg}"),
            });
        }
        (Some(deg), GenusSource::ComputedAlternating)
    } else if let Some(g) = user_genus {
        if g < deg {
            return Err(InvariantError::GenusInconsistent { genus: g, reason: format!("below deg Δ = {deg}") });
        }
        if signature.unsigned_abs() > 2 * g as u64 {
            return Err(InvariantError::GenusInconsistent { genus: g, reason: format!("|σ| = {} exceeds 2g", signature.abs()) });
        }
        (Some(g), GenusSource::UserSupplied)
    } else {
        (None, GenusSource::Unknown)
    };
    Ok(KnotInvariants {
        name: name.to_string(),
        alexander,
        signature,
        torsion,
        alternating,
        genus,
        genus_source,
        crossings: d.crossing_count(),
        seifert_circles: sd.seifert_circle_count,
    })
}
