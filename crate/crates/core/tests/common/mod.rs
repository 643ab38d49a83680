//! Independent reference computations shared by the integration tests.
//! None of these go through the Seifert matrix or the library's own
//! determinant and inertia routines.
#![allow(dead_code)]

use std::collections::BTreeMap;

use knotsurg::algebra::LaurentPoly;
use knotsurg::codec::DtCode;
use knotsurg::diagram::PlanarDiagram;
use knotsurg::invariants::AlexanderPolynomial;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rational_det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            let f = &a[r][c] / &piv;
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let d = &f * &a[c][k];
                a[r][k] -= d;
            }
        }
    }
    det
}

pub fn eval_laurent(p: &LaurentPoly, t: &BigRational) -> BigRational {
    let mut s = BigRational::zero();
    for (e, c) in p.terms() {
        let pw = if e >= 0 { num_traits::pow(t.clone(), e as usize) } else { num_traits::pow(t.recip(), (-e) as usize) };
        s += BigRational::from_integer(c.clone()) * pw;
    }
    s
}

/// Alexander matrix of the Wirtinger presentation (over-arcs as generators,
/// one relation per crossing), abelianized Fox derivatives, evaluated at `t`.
/// Rows of negative crossings are multiplied by `t` so entries stay
/// polynomial. Returns the first minor.
pub fn fox_minor_at(d: &PlanarDiagram, t: &BigRational) -> BigRational {
    let n = d.crossing_count();
    let m = d.arc_count();
    let mut class: Vec<usize> = (0..m).collect();
    fn root(c: &mut [usize], mut a: usize) -> usize {
        while c[a] != a {
            c[a] = c[c[a]];
            a = c[a];
        }
        a
    }
    for c in d.crossings() {
        let (a, b) = (root(&mut class, c.over_in()), root(&mut class, c.over_out()));
        class[a] = b;
    }
    let mut gens = BTreeMap::new();
    for a in 0..m {
        let r = root(&mut class, a);
        let k = gens.len();
        gens.entry(r).or_insert(k);
    }
    assert_eq!(gens.len(), n, "one over-arc per crossing");
    let mut rows = vec![vec![BigRational::zero(); n]; n];
    for (i, c) in d.crossings().iter().enumerate() {
        let x = gens[&root(&mut class, c.over_in())];
        let a = gens[&root(&mut class, c.under_in())];
        let b = gens[&root(&mut class, c.under_out())];
        let (cx, ca, cb) = if c.sign > 0 {
            (q(1) - t, t.clone(), q(-1))
        } else {
            (t - q(1), q(1), -t.clone())
        };
        rows[i][x] += cx;
        rows[i][a] += ca;
        rows[i][b] += cb;
    }
    rows.pop();
    for r in &mut rows {
        r.pop();
    }
    rational_det(rows)
}

/// Checks `fox(t) = ±t^e Δ(t)` with one sign and exponent at enough points
/// to pin a polynomial of the possible degree.
pub fn fox_agrees(d: &PlanarDiagram, a: &AlexanderPolynomial) -> bool {
    let n = d.crossing_count() as i64;
    if n == 0 {
        return a.poly() == &LaurentPoly::one();
    }
    let mut unit: Option<(bool, i64)> = None;
    for tv in 2..=(2 * n + 6) {
        let t = q(tv);
        let f = fox_minor_at(d, &t);
        let g = eval_laurent(a.poly(), &t);
        if f.is_zero() || g.is_zero() {
            if f.is_zero() != g.is_zero() {
                return false;
            }
            continue;
        }
        let ratio = f / g;
        let neg = ratio.is_negative();
        let mut r = ratio.abs();
        let mut e = 0i64;
        while r > q(1) && (&r / &t).is_integer() {
            r /= &t;
            e += 1;
        }
        while r < q(1) && (&r * &t) <= q(1) {
            r *= &t;
            e -= 1;
        }
        if r != q(1) {
            return false;
        }
        match unit {
            None => unit = Some((neg, e)),
            Some(u) if u != (neg, e) => return false,
            _ => {}
        }
    }
    unit.is_some()
}

/// Number of cycles of the oriented smoothing, by following arcs.
pub fn smoothing_cycles(d: &PlanarDiagram) -> usize {
    let m = d.arc_count();
    if m == 0 {
        return 1;
    }
    let mut next = vec![usize::MAX; m];
    for c in d.crossings() {
        next[c.under_in()] = c.over_out();
        next[c.over_in()] = c.under_out();
    }
    let mut seen = vec![false; m];
    let mut cycles = 0;
    for s in 0..m {
        if seen[s] {
            continue;
        }
        cycles += 1;
        let mut a = s;
        while !seen[a] {
            seen[a] = true;
            a = next[a];
        }
    }
    cycles
}

pub fn eigen_signature(m: &DMatrix<f64>) -> (i64, usize) {
    if m.nrows() == 0 {
        return (0, 0);
    }
    let e = m.clone().symmetric_eigen();
    let pos = e.eigenvalues.iter().filter(|&&x| x > 1e-7).count() as i64;
    let neg = e.eigenvalues.iter().filter(|&&x| x < -1e-7).count() as i64;
    (pos - neg, m.nrows() - (pos + neg) as usize)
}

/// Checkerboard signature formula: σ = sign(G) − μ, where G is the Goeritz
/// form on the unshaded regions and μ sums the incidence signs of the
/// crossings whose oriented smoothing joins the shaded corners. Returns the
/// value for both choices of shading.
pub fn checkerboard_signatures(d: &PlanarDiagram) -> [i64; 2] {
    let n = d.crossing_count();
    if n == 0 {
        return [0, 0];
    }
    let pd = d.pd_tuples();
    // corner q of crossing x lies between slots q and q+1
    let mut ends: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (x, t) in pd.iter().enumerate() {
        for (s, &a) in t.iter().enumerate() {
            ends.entry(a).or_default().push((x, s));
        }
    }
    let mut face_of = BTreeMap::new();
    let mut faces = 0usize;
    for x in 0..n {
        for s in 0..4 {
            if face_of.contains_key(&(x, s)) {
                continue;
            }
            let mut dart = (x, s);
            while !face_of.contains_key(&dart) {
                face_of.insert(dart, faces);
                let e = &ends[&pd[dart.0][dart.1]];
                let o = if e[0] == dart { e[1] } else { e[0] };
                dart = (o.0, (o.1 + 1) % 4);
            }
            faces += 1;
        }
    }
    assert_eq!(faces, n + 2);
    // dart (x, s) bounds corner s - 1
    let corner_face = |x: usize, c: usize| face_of[&(x, (c + 1) % 4)];
    // two-colour the faces: faces across an edge differ
    let mut colour = vec![None; faces];
    colour[0] = Some(false);
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..n {
            for c in 0..4 {
                let (f, g) = (corner_face(x, c), corner_face(x, (c + 1) % 4));
                match (colour[f], colour[g]) {
                    (Some(a), None) => {
                        colour[g] = Some(!a);
                        changed = true;
                    }
                    (None, Some(b)) => {
                        colour[f] = Some(!b);
                        changed = true;
                    }
                    (Some(a), Some(b)) => assert_ne!(a, b, "faces across an edge share a colour"),
                    _ => {}
                }
            }
        }
    }
    let mut out = [0i64; 2];
    for (k, shade) in [true, false].into_iter().enumerate() {
        let white: Vec<usize> = (0..faces).filter(|&f| colour[f] != Some(shade)).collect();
        let idx: BTreeMap<usize, usize> = white.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let w = white.len();
        let mut g = DMatrix::<f64>::zeros(w, w);
        let mut mu = 0i64;
        for (x, c) in d.crossings().iter().enumerate() {
            let shaded_odd = colour[corner_face(x, 1)] == Some(shade);
            // rotating the over strand anticlockwise sweeps corners 1 and 3
            let eta: i64 = if shaded_odd { 1 } else { -1 };
            let smoothing_joins_odd = c.sign > 0;
            if smoothing_joins_odd == shaded_odd {
                mu += eta;
            }
            let (wa, wb) = if shaded_odd { (corner_face(x, 0), corner_face(x, 2)) } else { (corner_face(x, 1), corner_face(x, 3)) };
            if wa != wb {
                let (i, j) = (idx[&wa], idx[&wb]);
                g[(i, j)] -= eta as f64;
                g[(j, i)] -= eta as f64;
                g[(i, i)] += eta as f64;
                g[(j, j)] += eta as f64;
            }
        }
        let reduced = g.view((0, 0), (w - 1, w - 1)).into_owned();
        out[k] = eigen_signature(&reduced).0 - mu;
    }
    out
}

/// Plain Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut acc = LaurentPoly::zero();
    for j in 0..n {
        let minor: Vec<Vec<LaurentPoly>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = &m[0][j] * &cofactor_det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Exact integer determinant by fraction-free elimination on i128.
pub fn int_det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

fn principal(q: &[Vec<i64>], keep: &[usize]) -> Vec<Vec<i128>> {
    keep.iter().map(|&i| keep.iter().map(|&j| q[i][j] as i128).collect()).collect()
}

/// Negative definite iff the leading minors of −Q are all positive;
/// negative semidefinite iff every principal minor of −Q is non-negative.
/// Returns 0 = definite, 1 = semidefinite, 2 = neither.
pub fn minor_class(q: &[Vec<i64>]) -> u8 {
    let n = q.len();
    let neg: Vec<Vec<i64>> = q.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
    if (1..=n).all(|k| int_det(principal(&neg, &(0..k).collect::<Vec<_>>())) > 0) {
        return 0;
    }
    for mask in 1u32..(1 << n) {
        let keep: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if int_det(principal(&neg, &keep)) < 0 {
            return 2;
        }
    }
    1
}

/// Whether some choice of local rotations makes the DT code planar,
/// by exhausting all of them. Passage `k` runs from arc `k - 1` to arc `k`.
pub fn dt_planar_by_search(code: &DtCode) -> bool {
    let n = code.labels.len();
    if n == 0 {
        return true;
    }
    let m = 2 * n;
    let inn = |k: usize| (k + m - 1) % m;
    let out = |k: usize| k % m;
    let base: Vec<(usize, usize)> = code
        .labels
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let (odd, even) = (2 * i + 1, v.unsigned_abs() as usize);
            if v > 0 {
                (even, odd)
            } else {
                (odd, even)
            }
        })
        .collect();
    (0u32..(1 << n)).any(|mask| {
        let tuples: Vec<[usize; 4]> = base
            .iter()
            .enumerate()
            .map(|(i, &(u, o))| {
                if mask >> i & 1 == 1 {
                    [inn(u), inn(o), out(u), out(o)]
                } else {
                    [inn(u), out(o), out(u), inn(o)]
                }
            })
            .collect();
        PlanarDiagram::from_pd(&tuples, None).is_ok()
    })
}

pub fn to_dmatrix(rows: &[Vec<BigInt>]) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j].to_string().parse::<f64>().unwrap())
}

pub mod strategies {
    use knotsurg::algebra::LaurentPoly;
    use knotsurg::plumbing::WeightedTree;
    use proptest::prelude::*;

    pub fn laurent() -> impl Strategy<Value = LaurentPoly> {
        (-2i64..=1, proptest::collection::vec(-3i64..=3, 0..3)).prop_map(|(lo, c)| LaurentPoly::from_coeffs(lo, &c))
    }

    /// Square matrices of dimension ≤ 4 with small Laurent entries.
    pub fn laurent_matrix() -> impl Strategy<Value = Vec<Vec<LaurentPoly>>> {
        (0usize..=4, proptest::collection::vec(laurent(), 16))
            .prop_map(|(n, e)| (0..n).map(|i| e[i * n..(i + 1) * n].to_vec()).collect())
    }

    /// A symmetric matrix and a list of elementary column operations
    /// `(from, to, factor)` building a unimodular change of basis.
    pub fn symmetric_and_unimodular() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<(usize, usize, i64)>)> {
        (1usize..=5).prop_flat_map(|n| {
            (
                proptest::collection::vec(-4i64..=4, n * n).prop_map(move |v| {
                    (0..n).map(|i| (0..n).map(|j| v[i.min(j) * n + i.max(j)]).collect()).collect()
                }),
                proptest::collection::vec((0..n, 0..n, -2i64..=2), 0..8),
            )
        })
    }

    pub fn weighted_tree() -> impl Strategy<Value = WeightedTree> {
        (1usize..=9)
            .prop_flat_map(|n| {
                (
                    proptest::collection::vec(-9i64..=3, n),
                    proptest::collection::vec((any::<prop::sample::Index>(), any::<bool>()), n.saturating_sub(1)),
                )
            })
            .prop_map(|(w, parents)| {
                let vs: Vec<(u64, i64)> = w.iter().enumerate().map(|(i, &x)| (i as u64, x)).collect();
                // most vertices hang off an earlier one; a few start new components
                let es: Vec<(u64, u64)> = parents
                    .iter()
                    .enumerate()
                    .filter(|(_, (_, keep))| *keep || w.len() < 4)
                    .map(|(i, (p, _))| (p.index(i + 1) as u64, i as u64 + 1))
                    .collect();
                WeightedTree::new(&vs, &es).unwrap()
            })
    }

    pub fn tree_and_vertex() -> impl Strategy<Value = (WeightedTree, u64)> {
        weighted_tree().prop_flat_map(|t| {
            let n = t.len() as u64;
            (Just(t), 0..n)
        })
    }
}

pub fn form_rows(t: &knotsurg::plumbing::WeightedTree) -> Vec<Vec<i64>> {
    knotsurg::plumbing::intersection_form(t)
        .rows()
        .iter()
        .map(|r| r.iter().map(|v| i64::try_from(v).unwrap()).collect())
        .collect()
}

pub fn class_code(c: knotsurg::plumbing::DefinitenessClass) -> u8 {
    use knotsurg::plumbing::DefinitenessClass::*;
    match c {
        NegativeDefinite => 0,
        NegativeSemiDefinite => 1,
        Other => 2,
    }
}

/// Inertia of PᵀSP equals that of S, and both match the eigenvalue count.
pub fn congruence_holds(s: &[Vec<i64>], ops: &[(usize, usize, i64)]) -> Result<(), String> {
    use knotsurg::algebra::{inertia, IntMatrix};
    let n = s.len();
    let sm = IntMatrix::from_rows(s).unwrap();
    let mut p = IntMatrix::identity(n);
    for &(from, to, k) in ops {
        if from == to {
            continue;
        }
        for r in 0..n {
            let v = p.get(r, to) + p.get(r, from) * BigInt::from(k);
            p.set(r, to, v);
        }
    }
    let moved = p.transpose().mul(&sm).mul(&p);
    let a = inertia(&sm).map_err(|e| e.to_string())?;
    let b = inertia(&moved).map_err(|e| e.to_string())?;
    let eig = eigen_signature(&DMatrix::from_fn(n, n, |i, j| s[i][j] as f64));
    if a == b && (a.signature(), a.zero) == eig {
        Ok(())
    } else {
        Err(format!("{s:?}: {a:?} vs {b:?} vs eigenvalues {eig:?}"))
    }
}

/// Decrement and deletion behave as the definitions say, checked against
/// the minor oracle.
pub fn moves_hold(t: &knotsurg::plumbing::WeightedTree, v: u64) -> Result<(), String> {
    use knotsurg::plumbing::classify_form;
    let orig = class_code(classify_form(t).class);
    if orig != minor_class(&form_rows(t)) {
        return Err(format!("classification differs from minors on\n{t}"));
    }
    let dec = t.decrement_weight(v).map_err(|e| e.to_string())?;
    let dc = class_code(classify_form(&dec).class);
    if dc != minor_class(&form_rows(&dec)) {
        return Err(format!("decrement classification differs from minors on\n{dec}"));
    }
    let (q0, q1) = (form_rows(t), form_rows(&dec));
    let k = t.vertices().position(|(u, _)| u == v).unwrap();
    for i in 0..q0.len() {
        for j in 0..q0.len() {
            let bump = if i == k && j == k { 1 } else { 0 };
            if q0[i][j] - q1[i][j] != bump {
                return Err("decrement changed more than one diagonal entry".into());
            }
        }
    }
    if orig != 2 && dc > orig {
        return Err(format!("decrement worsened class {orig} -> {dc}\n{t}"));
    }
    let (b0, b1) = (t.bad_points(), dec.bad_points());
    if !b1.iter().all(|u| b0.contains(u)) {
        return Err("decrement created a bad point".into());
    }
    let del = t.delete_vertex(v).map_err(|e| e.to_string())?;
    let expect: Vec<u64> = t
        .vertices()
        .filter(|&(u, _)| u != v)
        .filter(|&(u, w)| {
            let d = t.edges().filter(|&(a, b)| (a == u && b != v) || (b == u && a != v)).count() as i64;
            w > -d
        })
        .map(|(u, _)| u)
        .collect();
    if del.bad_points() != expect {
        return Err("bad points after deletion not recomputed".into());
    }
    let delc = class_code(classify_form(&del).class);
    if !del.is_empty() && delc != minor_class(&form_rows(&del)) {
        return Err("deletion classification differs from minors".into());
    }
    if orig != 2 && delc > orig {
        return Err("deletion worsened the class".into());
    }
    Ok(())
}
