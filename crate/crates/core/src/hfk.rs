//! Knot Floer homology tables. Alternating knots are thin: the table is
//! determined by Δ and σ. Other knots can only bring their own table.
//!
//! Text format: one row `i m rank` per nonzero group, where `m` is the
//! homological grading written as an integer or as `k/2`. Blank lines and
//! lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::LaurentPoly;
use crate::invariants::{AlexanderPolynomial, KnotInvariants};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HfkError {
    #[error("knot is not certified alternating")]
    NotAlternating,
    #[error("signature {0} is odd")]
    OddSignature(i64),
    #[error("top group sits in both homological parities")]
    MixedParity,
    #[error("homological grading is half-integral")]
    HalfIntegerGrading,
    #[error("table is empty")]
    Empty,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Ranks keyed by (Alexander grading, twice the homological grading).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HfkTable {
    pub ranks: BTreeMap<(i64, i64), u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TopGroupParity {
    pub genus: i64,
    pub parity: Parity,
}

impl HfkTable {
    pub fn insert(&mut self, i: i64, m2: i64, rank: u64) {
        if rank > 0 {
            *self.ranks.entry((i, m2)).or_default() += rank;
        }
    }

    pub fn rank(&self, i: i64, m2: i64) -> u64 {
        self.ranks.get(&(i, m2)).copied().unwrap_or(0)
    }

    /// Every group lies on one line `m = i + c`.
    pub fn is_thin(&self) -> bool {
        let mut c = self.ranks.keys().map(|&(i, m2)| m2 - 2 * i);
        match c.next() {
            None => true,
            Some(first) => c.all(|x| x == first),
        }
    }

    pub fn parse(text: &str) -> Result<Self, HfkError> {
        let mut t = HfkTable::default();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| HfkError::Parse { line: k + 1, msg: msg.to_string() };
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(err("expected `i m rank`"));
            }
            let i: i64 = f[0].parse().map_err(|_| err("bad Alexander grading"))?;
            let m2 = match f[1].split_once('/') {
                Some((num, "2")) => num.parse::<i64>().map_err(|_| err("bad grading"))?,
                Some(_) => return Err(err("grading denominators must be 2")),
                None => 2 * f[1].parse::<i64>().map_err(|_| err("bad grading"))?,
            };
            let r: u64 = f[2].parse().map_err(|_| err("bad rank"))?;
            t.insert(i, m2, r);
        }
        Ok(t)
    }
}

impl fmt::Display for HfkTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(i, m2), r) in self.ranks.iter().rev() {
            if m2 % 2 == 0 {
                writeln!(f, "{i} {} {r}", m2 / 2)?;
            } else {
                writeln!(f, "{i} {m2}/2 {r}")?;
            }
        }
        Ok(())
    }
}

/// Thin table: rank `|a_i|` at `(i, i - σ/2)`.
pub fn hfk_alternating(a: &AlexanderPolynomial, sigma: i64) -> Result<HfkTable, HfkError> {
    if sigma % 2 != 0 {
        return Err(HfkError::OddSignature(sigma));
    }
    let mut t = HfkTable::default();
    for (i, c) in a.poly().terms() {
        let r = u64::try_from(c.abs()).expect("coefficient fits in u64");
        t.insert(i, 2 * i - sigma, r);
    }
    Ok(t)
}

pub fn hfk_for(inv: &KnotInvariants) -> Result<HfkTable, HfkError> {
    if !inv.alternating {
        return Err(HfkError::NotAlternating);
    }
    hfk_alternating(&inv.alexander, inv.signature)
}

pub fn euler_characteristic(h: &HfkTable) -> Result<LaurentPoly, HfkError> {
    let mut p = LaurentPoly::zero();
    for (&(i, m2), &r) in &h.ranks {
        if m2 % 2 != 0 {
            return Err(HfkError::HalfIntegerGrading);
        }
        let sign: i64 = if (m2 / 2) % 2 == 0 { 1 } else { -1 };
        p = &p + &LaurentPoly::monomial(sign * r as i64, i);
    }
    Ok(p)
}

pub fn genus_from_table(h: &HfkTable) -> Option<i64> {
    h.ranks.keys().map(|&(i, _)| i).max()
}

pub fn top_group_parity(h: &HfkTable) -> Result<TopGroupParity, HfkError> {
    let g = genus_from_table(h).ok_or(HfkError::Empty)?;
    let mut parities = Vec::new();
    for (&(i, m2), _) in &h.ranks {
        if i != g {
            continue;
        }
        if m2 % 2 != 0 {
            return Err(HfkError::HalfIntegerGrading);
        }
        let p = if (m2 / 2).rem_euclid(2) == 0 { Parity::Even } else { Parity::Odd };
        if !parities.contains(&p) {
            parities.push(p);
        }
    }
    match parities.as_slice() {
        [p] => Ok(TopGroupParity { genus: g, parity: *p }),
        _ => Err(HfkError::MixedParity),
    }
}
