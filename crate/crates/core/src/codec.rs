//! Text presentations of knots and their conversion to [`PlanarDiagram`].
//!
//! Grammars:
//!
//! * DT: signed even integers separated by spaces and/or commas, optionally
//!   wrapped in `[ ]`. The empty string is the unknot.
//! * Gauss: tokens `O<id><sign>` / `U<id><sign>`, e.g. `O1+ U2+ O3+ U1+ O2+ U3+`.
//!   The sign is the crossing's handedness (`+`, `-` or `−`).
//! * PD: tuples `X[a,b,c,d]`, counterclockwise from the incoming under-arc,
//!   labels consecutive along the orientation (any starting value).
//!   `[[a,b,c,d],...]` is also accepted.
//! * Braid: `s: w1 w2 ...` with `s` strands; letter `k` is the positive
//!   generator between strands `k` and `k + 1`. Without a `s:` prefix the
//!   strand count is one more than the largest generator.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::diagram::{DiagramError, PlanarDiagram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("cannot read token {0:?}")]
    BadToken(String),
    #[error("odd label {0} in DT code")]
    OddLabel(i64),
    #[error("label {0} repeated in DT code")]
    DuplicateLabel(i64),
    #[error("DT labels are not exactly 2, 4, ..., 2n")]
    RangeGap,
    #[error("DT code has no planar realization")]
    Unrealizable,
    #[error("crossing {0} must appear exactly twice, once over and once under")]
    GaussPassages(u64),
    #[error("crossing {0} has inconsistent handedness")]
    GaussHandedness(u64),
    #[error("PD labels must be consecutive integers, each used twice")]
    PdLabels,
    #[error("braid needs at least one strand, and |letter| < strand count")]
    BraidRange,
    #[error("closure has more than one component")]
    NotAKnot,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

fn integers(text: &str) -> Result<Vec<i64>, CodecError> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.replace('−', "-").parse::<i64>().map_err(|_| CodecError::BadToken(t.to_string())))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DtCode {
    pub labels: Vec<i64>,
}

impl DtCode {
    pub fn new(labels: Vec<i64>) -> Result<Self, CodecError> {
        let n = labels.len() as i64;
        let mut seen = vec![false; labels.len()];
        for &v in &labels {
            if v % 2 != 0 {
                return Err(CodecError::OddLabel(v));
            }
        }
        for &v in &labels {
            let a = v.checked_abs().ok_or(CodecError::RangeGap)?;
            if a < 2 || a > 2 * n {
                return Err(CodecError::RangeGap);
            }
            let k = (a / 2 - 1) as usize;
            if std::mem::replace(&mut seen[k], true) {
                return Err(CodecError::DuplicateLabel(v));
            }
        }
        Ok(DtCode { labels })
    }
}

impl fmt::Display for DtCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn parse_dt(text: &str) -> Result<DtCode, CodecError> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    DtCode::new(integers(t)?)
}

/// Realizes a DT code.
///
/// Passage `k` (1-based) sits at the end of arc `k - 1`, so the recomputed
/// [`PlanarDiagram::dt_code`] equals the input. The flip at each crossing is
/// decided by two-colouring the interlacement graph; a colouring conflict or a
/// wrong face count means the code is not planar. Each connected piece of the
/// interlacement graph is then reflected, if needed, so that its
/// lowest-numbered crossing is positive. Codes such as `4 8 6 2`, whose
/// interlacement graph splits, are realized piece by piece.
pub fn realize_dt(code: &DtCode) -> Result<PlanarDiagram, CodecError> {
    let n = code.labels.len();
    if n == 0 {
        return Ok(PlanarDiagram::unknot());
    }
    let m = 2 * n;
    // passages (p, q), p < q, 1-based; over flag for p
    let mut pairs = Vec::with_capacity(n);
    for (i, &v) in code.labels.iter().enumerate() {
        let odd = 2 * i + 1;
        let even = v.unsigned_abs() as usize;
        let odd_over = v > 0;
        let (p, q, p_over) = if odd < even { (odd, even, odd_over) } else { (even, odd, !odd_over) };
        pairs.push((p, q, p_over));
    }
    let interlaced = |a: usize, b: usize| {
        let (pa, qa, _) = pairs[a];
        let (pb, qb, _) = pairs[b];
        (pa < pb && pb < qa) != (pa < qb && qb < qa)
    };
    let nbrs: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a != b && interlaced(a, b)).collect()).collect();
    let mut colour: Vec<Option<bool>> = vec![None; n];
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    for r in 0..n {
        if colour[r].is_some() {
            continue;
        }
        colour[r] = Some(false);
        let mut stack = vec![r];
        let mut piece = vec![r];
        while let Some(a) = stack.pop() {
            for b in 0..n {
                if !nbrs[a][b] {
                    continue;
                }
                let common = (0..n).filter(|&c| nbrs[a][c] && nbrs[b][c]).count();
                let want = colour[a].unwrap() ^ (common % 2 == 0);
                match colour[b] {
                    None => {
                        colour[b] = Some(want);
                        stack.push(b);
                        piece.push(b);
                    }
                    Some(c) if c != want => return Err(CodecError::Unrealizable),
                    _ => {}
                }
            }
        }
        pieces.push(piece);
    }
    let mut flip: Vec<bool> = (0..n).map(|a| colour[a].unwrap() ^ (pairs[a].0 % 2 == 1)).collect();
    let sign = |a: usize, flip: &[bool]| if flip[a] != pairs[a].2 { 1i8 } else { -1 };
    for piece in &pieces {
        let first = *piece.iter().min().unwrap();
        if sign(first, &flip) < 0 {
            for &a in piece {
                flip[a] = !flip[a];
            }
        }
    }
    let inn = |k: usize| (k + m - 1) % m;
    let out = |k: usize| k % m;
    let mut tuples = Vec::with_capacity(n);
    for &(p, q, p_over) in &pairs {
        let f = flip[tuples.len()];
        let (x, y) = if f { (out(q), inn(q)) } else { (inn(q), out(q)) };
        let rot = [inn(p), x, out(p), y];
        let t = if p_over {
            let s = if f { 3 } else { 1 };
            [rot[s], rot[(s + 1) % 4], rot[(s + 2) % 4], rot[(s + 3) % 4]]
        } else {
            rot
        };
        tuples.push(t);
    }
    let signs: Vec<i8> = (0..n).map(|a| sign(a, &flip)).collect();
    match PlanarDiagram::from_pd(&tuples, Some(&signs)) {
        Ok(d) => Ok(d),
        Err(DiagramError::NotPlanar { .. }) => Err(CodecError::Unrealizable),
        Err(e) => Err(CodecError::Diagram(e)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussEntry {
    pub crossing: u64,
    pub over: bool,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussCode {
    pub entries: Vec<GaussEntry>,
}

impl GaussCode {
    pub fn new(entries: Vec<GaussEntry>) -> Result<Self, CodecError> {
        let mut by_id: BTreeMap<u64, Vec<GaussEntry>> = BTreeMap::new();
        for e in &entries {
            by_id.entry(e.crossing).or_default().push(*e);
        }
        for (id, es) in &by_id {
            if es.len() != 2 || es[0].over == es[1].over {
                return Err(CodecError::GaussPassages(*id));
            }
            if es[0].sign != es[1].sign {
                return Err(CodecError::GaussHandedness(*id));
            }
        }
        Ok(GaussCode { entries })
    }

    pub fn to_diagram(&self) -> Result<PlanarDiagram, CodecError> {
        let m = self.entries.len();
        if m == 0 {
            return Ok(PlanarDiagram::unknot());
        }
        // passage p: in-arc p - 1, out-arc p
        let mut ids: Vec<u64> = self.entries.iter().map(|e| e.crossing).collect();
        ids.sort();
        ids.dedup();
        let index: BTreeMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut under = vec![0usize; ids.len()];
        let mut over = vec![0usize; ids.len()];
        let mut signs = vec![0i8; ids.len()];
        for (p, e) in self.entries.iter().enumerate() {
            let x = index[&e.crossing];
            if e.over {
                over[x] = p;
            } else {
                under[x] = p;
            }
            signs[x] = e.sign;
        }
        let tuples: Vec<[usize; 4]> = (0..ids.len())
            .map(|x| {
                let (ui, uo) = ((under[x] + m - 1) % m, under[x]);
                let (oi, oo) = ((over[x] + m - 1) % m, over[x]);
                if signs[x] > 0 {
                    [ui, oo, uo, oi]
                } else {
                    [ui, oi, uo, oo]
                }
            })
            .collect();
        Ok(PlanarDiagram::from_pd(&tuples, Some(&signs))?)
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| format!("{}{}{}", if e.over { 'O' } else { 'U' }, e.crossing, if e.sign > 0 { '+' } else { '-' }))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn parse_gauss(text: &str) -> Result<GaussCode, CodecError> {
    let mut entries = Vec::new();
    for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let bad = || CodecError::BadToken(tok.to_string());
        let mut chars = tok.chars();
        let over = match chars.next() {
            Some('O') | Some('o') => true,
            Some('U') | Some('u') => false,
            _ => return Err(bad()),
        };
        let rest: String = chars.collect();
        let (num, sign) = match rest.chars().last() {
            Some('+') => (&rest[..rest.len() - 1], 1),
            Some('-') => (&rest[..rest.len() - 1], -1),
            Some('−') => (&rest[..rest.len() - '−'.len_utf8()], -1),
            _ => return Err(bad()),
        };
        let crossing = num.parse::<u64>().map_err(|_| bad())?;
        entries.push(GaussEntry { crossing, over, sign });
    }
    GaussCode::new(entries)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdNotation {
    pub crossings: Vec<[i64; 4]>,
}

impl PdNotation {
    pub fn new(crossings: Vec<[i64; 4]>) -> Result<Self, CodecError> {
        let mut count: BTreeMap<i64, usize> = BTreeMap::new();
        for t in &crossings {
            for &a in t {
                *count.entry(a).or_default() += 1;
            }
        }
        let m = 2 * crossings.len() as i64;
        let ok = count.values().all(|&c| c == 2)
            && count.len() as i64 == m
            && count.keys().next().zip(count.keys().next_back()).map_or(true, |(lo, hi)| hi - lo == m - 1);
        if !ok {
            return Err(CodecError::PdLabels);
        }
        Ok(PdNotation { crossings })
    }

    pub fn to_diagram(&self) -> Result<PlanarDiagram, CodecError> {
        let lo = self.crossings.iter().flatten().copied().min().unwrap_or(0);
        let tuples: Vec<[usize; 4]> = self.crossings.iter().map(|t| t.map(|a| (a - lo) as usize)).collect();
        Ok(PlanarDiagram::from_pd(&tuples, None)?)
    }
}

impl fmt::Display for PdNotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.crossings.iter().map(|t| format!("X[{},{},{},{}]", t[0], t[1], t[2], t[3])).collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn parse_pd(text: &str) -> Result<PdNotation, CodecError> {
    let body = text.trim();
    let body = body.strip_prefix("PD").unwrap_or(body);
    let cleaned: String = body.chars().map(|c| if c == 'X' || c == 'x' { ' ' } else { c }).collect();
    let mut tuples = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in cleaned.chars() {
        match c {
            '[' | '(' => {
                depth += 1;
                cur.clear();
            }
            ']' | ')' => {
                depth -= 1;
                if !cur.trim().is_empty() {
                    let v = integers(&cur)?;
                    let t: [i64; 4] = v.try_into().map_err(|_| CodecError::BadToken(cur.trim().to_string()))?;
                    tuples.push(t);
                }
                cur.clear();
            }
            _ if depth > 0 => cur.push(c),
            c if c.is_whitespace() || c == ',' => {}
            c => return Err(CodecError::BadToken(c.to_string())),
        }
    }
    PdNotation::new(tuples)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i64>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i64>) -> Result<Self, CodecError> {
        if strands == 0 || letters.iter().any(|&l| l == 0 || l.unsigned_abs() as usize >= strands) {
            return Err(CodecError::BraidRange);
        }
        Ok(BraidWord { strands, letters })
    }

    /// Strand permutation of the braid: top position to bottom position.
    pub fn permutation(&self) -> Vec<usize> {
        (0..self.strands)
            .map(|start| {
                let mut p = start;
                for &l in &self.letters {
                    let k = l.unsigned_abs() as usize;
                    if p + 1 == k {
                        p = k;
                    } else if p == k {
                        p = k - 1;
                    }
                }
                p
            })
            .collect()
    }

    pub fn closure_is_knot(&self) -> bool {
        let perm = self.permutation();
        let mut p = perm[0];
        let mut len = 1;
        while p != 0 {
            p = perm[p];
            len += 1;
        }
        len == self.strands
    }

    /// Gauss code of the closure. At a positive letter the strand coming
    /// from the right passes over, making the crossing positive.
    pub fn to_gauss(&self) -> Result<GaussCode, CodecError> {
        if !self.closure_is_knot() {
            return Err(CodecError::NotAKnot);
        }
        let mut entries = Vec::new();
        let mut p = 0;
        for _ in 0..self.strands {
            for (t, &l) in self.letters.iter().enumerate() {
                let k = l.unsigned_abs() as usize;
                let from_left = p + 1 == k;
                if !from_left && p != k {
                    continue;
                }
                let sign = if l > 0 { 1 } else { -1 };
                // positive: right strand over; negative: left strand over
                let over = if l > 0 { !from_left } else { from_left };
                entries.push(GaussEntry { crossing: t as u64 + 1, over, sign });
                p = if from_left { k } else { k - 1 };
            }
        }
        GaussCode::new(entries)
    }

    pub fn to_diagram(&self) -> Result<PlanarDiagram, CodecError> {
        self.to_gauss()?.to_diagram()
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|v| v.to_string()).collect();
        write!(f, "{}: {}", self.strands, parts.join(" "))
    }
}

pub fn parse_braid(text: &str) -> Result<BraidWord, CodecError> {
    let (strands, word) = match text.split_once(':') {
        Some((s, w)) => {
            let s = s.trim();
            // "s,n:" carries the word length as a courtesy; it is checked
            let (s, len) = match s.split_once(',') {
                Some((a, b)) => (a.trim(), Some(b.trim())),
                None => (s, None),
            };
            let strands = s.parse::<usize>().map_err(|_| CodecError::BadToken(s.to_string()))?;
            let letters = integers(w)?;
            if let Some(len) = len {
                let n = len.parse::<usize>().map_err(|_| CodecError::BadToken(len.to_string()))?;
                if n != letters.len() {
                    return Err(CodecError::BadToken(len.to_string()));
                }
            }
            (strands, letters)
        }
        None => {
            let letters = integers(text)?;
            let s = letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0) + 1;
            (s, letters)
        }
    };
    BraidWord::new(strands, word)
}

/// Any supported presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Dt(DtCode),
    Gauss(GaussCode),
    Pd(PdNotation),
    Braid(BraidWord),
}

impl Presentation {
    pub fn to_diagram(&self) -> Result<PlanarDiagram, CodecError> {
        match self {
            Presentation::Dt(c) => realize_dt(c),
            Presentation::Gauss(g) => g.to_diagram(),
            Presentation::Pd(p) => p.to_diagram(),
            Presentation::Braid(b) => b.to_diagram(),
        }
    }
}

pub fn to_diagram(p: &Presentation) -> Result<PlanarDiagram, CodecError> {
    p.to_diagram()
}
