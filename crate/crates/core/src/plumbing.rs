//! Weighted plumbing forests and their intersection forms.
//!
//! Text format, one item per line, `#` starts a comment:
//!
//! ```text
//! v <id> <weight>
//! e <id> <id>
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{inertia, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlumbingError {
    #[error("unknown vertex {0}")]
    UnknownVertex(u64),
    #[error("vertex {0} declared twice")]
    DuplicateVertex(u64),
    #[error("edge {0}-{1} is a loop or repeated")]
    BadEdge(u64, u64),
    #[error("graph has a cycle through edge {0}-{1}")]
    Cycle(u64, u64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedTree {
    weights: BTreeMap<u64, i64>,
    edges: BTreeSet<(u64, u64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DefinitenessClass {
    NegativeDefinite,
    NegativeSemiDefinite,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FormClass {
    pub class: DefinitenessClass,
    pub bad_point_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OrientationClass {
    PositiveSeifert,
    NotCertified,
}

impl WeightedTree {
    pub fn new(vertices: &[(u64, i64)], edges: &[(u64, u64)]) -> Result<Self, PlumbingError> {
        let mut t = WeightedTree::default();
        for &(v, w) in vertices {
            if t.weights.insert(v, w).is_some() {
                return Err(PlumbingError::DuplicateVertex(v));
            }
        }
        let mut parent: BTreeMap<u64, u64> = t.weights.keys().map(|&v| (v, v)).collect();
        fn find(p: &mut BTreeMap<u64, u64>, mut a: u64) -> u64 {
            while p[&a] != a {
                let up = p[&p[&a]];
                p.insert(a, up);
                a = up;
            }
            a
        }
        for &(a, b) in edges {
            for v in [a, b] {
                if !t.weights.contains_key(&v) {
                    return Err(PlumbingError::UnknownVertex(v));
                }
            }
            let key = (a.min(b), a.max(b));
            if a == b || !t.edges.insert(key) {
                return Err(PlumbingError::BadEdge(a, b));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(PlumbingError::Cycle(a, b));
            }
            parent.insert(ra, rb);
        }
        Ok(t)
    }

    /// A star: `center` weight joined to one chain per leg. Vertex 0 is the
    /// center; legs are numbered outward.
    pub fn star(center: i64, legs: &[Vec<i64>]) -> Self {
        let mut vs = vec![(0, center)];
        let mut es = Vec::new();
        let mut next = 1u64;
        for leg in legs {
            let mut prev = 0;
            for &w in leg {
                vs.push((next, w));
                es.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Self::new(&vs, &es).expect("stars are trees")
    }

    /// The E8 tree with all weights −2.
    pub fn e8() -> Self {
        Self::star(-2, &[vec![-2], vec![-2, -2], vec![-2, -2, -2, -2]])
    }

    pub fn vertices(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.weights.iter().map(|(&v, &w)| (v, w))
    }

    pub fn edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.edges.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, v: u64) -> Option<i64> {
        self.weights.get(&v).copied()
    }

    pub fn degree(&self, v: u64) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn bad_points(&self) -> Vec<u64> {
        self.vertices().filter(|&(v, w)| w > -(self.degree(v) as i64)).map(|(v, _)| v).collect()
    }

    /// Γ − v
    pub fn delete_vertex(&self, v: u64) -> Result<Self, PlumbingError> {
        if !self.weights.contains_key(&v) {
            return Err(PlumbingError::UnknownVertex(v));
        }
        let mut t = self.clone();
        t.weights.remove(&v);
        t.edges.retain(|&(a, b)| a != v && b != v);
        Ok(t)
    }

    /// Γ₋₁(v): weight of `v` lowered by one.
    pub fn decrement_weight(&self, v: u64) -> Result<Self, PlumbingError> {
        let mut t = self.clone();
        *t.weights.get_mut(&v).ok_or(PlumbingError::UnknownVertex(v))? -= 1;
        Ok(t)
    }

    pub fn parse(text: &str) -> Result<Self, PlumbingError> {
        let mut vs = Vec::new();
        let mut es = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| PlumbingError::Parse { line: k + 1, msg: msg.to_string() };
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(err("expected `v <id> <weight>` or `e <id> <id>`"));
            }
            let id = |s: &str| s.parse::<u64>().map_err(|_| err("bad vertex id"));
            match f[0] {
                "v" => vs.push((id(f[1])?, f[2].parse::<i64>().map_err(|_| err("bad weight"))?)),
                "e" => es.push((id(f[1])?, id(f[2])?)),
                _ => return Err(err("line must start with `v` or `e`")),
            }
        }
        Self::new(&vs, &es)
    }
}

impl fmt::Display for WeightedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, w) in self.vertices() {
            writeln!(f, "v {v} {w}")?;
        }
        for (a, b) in self.edges() {
            writeln!(f, "e {a} {b}")?;
        }
        Ok(())
    }
}

/// Weights on the diagonal, 1 for each edge; rows in increasing id order.
pub fn intersection_form(t: &WeightedTree) -> IntMatrix {
    let idx: BTreeMap<u64, usize> = t.weights.keys().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut q = IntMatrix::zeros(t.len());
    for (v, w) in t.vertices() {
        q.set(idx[&v], idx[&v], BigInt::from(w));
    }
    for (a, b) in t.edges() {
        q.set(idx[&a], idx[&b], BigInt::from(1));
        q.set(idx[&b], idx[&a], BigInt::from(1));
    }
    q
}

pub fn classify_form(t: &WeightedTree) -> FormClass {
    let i = inertia(&intersection_form(t)).expect("intersection forms are symmetric");
    let class = if i.positive > 0 {
        DefinitenessClass::Other
    } else if i.zero == 0 {
        DefinitenessClass::NegativeDefinite
    } else {
        DefinitenessClass::NegativeSemiDefinite
    };
    FormClass { class, bad_point_count: t.bad_points().len() }
}

pub fn orientation_class(t: &WeightedTree) -> OrientationClass {
    match classify_form(t).class {
        DefinitenessClass::Other => OrientationClass::NotCertified,
        _ => OrientationClass::PositiveSeifert,
    }
}
