//! Oriented knot diagrams: Seifert circles, Seifert matrix, alternation.
//!
//! A diagram with `n` crossings has arcs `0..2n`; arc `k` is followed by arc
//! `k + 1 (mod 2n)`. Each crossing is a PD tuple `[a, b, c, d]` listed
//! counterclockwise starting at the incoming under-arc, so `c = a + 1`.
//! Slot 0 is the incoming under-arc, slot 2 the outgoing one; the over-strand
//! uses slots 1 and 3. A crossing is positive when the over-strand runs from
//! slot 3 to slot 1.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("arc {0} does not appear exactly twice")]
    LabelCount(usize),
    #[error("arc label {0} out of range")]
    LabelRange(usize),
    #[error("crossing {0} is not consistent with the arc orientation")]
    BadCrossing(usize),
    #[error("crossing {0}: stated sign disagrees with the arc orientation")]
    SignMismatch(usize),
    #[error("diagram is not planar ({faces} faces, expected {expected})")]
    NotPlanar { faces: usize, expected: usize },
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub labels: [usize; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn under_in(&self) -> usize {
        self.labels[0]
    }
    pub fn under_out(&self) -> usize {
        self.labels[2]
    }
    pub fn over_in(&self) -> usize {
        self.labels[self.over_in_slot()]
    }
    pub fn over_out(&self) -> usize {
        self.labels[(self.over_in_slot() + 2) % 4]
    }
    fn over_in_slot(&self) -> usize {
        if self.sign > 0 {
            3
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
    pub name: Option<String>,
}

/// Dart: leaving crossing `.0` through slot `.1`.
type Dart = (usize, usize);

impl PlanarDiagram {
    pub fn unknot() -> Self {
        PlanarDiagram { crossings: Vec::new(), name: None }
    }

    /// Validates PD tuples over arcs `0..2n`. Signs are read from the
    /// orientation; `signs` is only needed to disambiguate a one-crossing
    /// diagram, where both readings fit (default positive).
    pub fn from_pd(tuples: &[[usize; 4]], signs: Option<&[i8]>) -> Result<Self, DiagramError> {
        let n = tuples.len();
        let m = 2 * n;
        let mut count = vec![0usize; m];
        for t in tuples {
            for &a in t {
                if a >= m {
                    return Err(DiagramError::LabelRange(a));
                }
                count[a] += 1;
            }
        }
        if let Some(a) = count.iter().position(|&c| c != 2) {
            return Err(DiagramError::LabelCount(a));
        }
        let nxt = |a: usize| (a + 1) % m;
        let mut crossings = Vec::with_capacity(n);
        for (x, t) in tuples.iter().enumerate() {
            let [i, j, k, l] = *t;
            if k != nxt(i) {
                return Err(DiagramError::BadCrossing(x));
            }
            let pos = j == nxt(l);
            let neg = l == nxt(j);
            let given = signs.map(|s| s[x]);
            let sign = match (pos, neg, given) {
                (false, false, _) => return Err(DiagramError::BadCrossing(x)),
                // one crossing: the under strand entering at S forces the other end
                (true, true, g) => {
                    let forced = if l == i { -1 } else { 1 };
                    if g.is_some_and(|g| g.signum() != forced) {
                        return Err(DiagramError::SignMismatch(x));
                    }
                    forced
                }
                (true, false, Some(g)) if g < 0 => return Err(DiagramError::SignMismatch(x)),
                (false, true, Some(g)) if g > 0 => return Err(DiagramError::SignMismatch(x)),
                (true, false, _) => 1,
                (false, true, _) => -1,
            };
            crossings.push(Crossing { labels: *t, sign });
        }
        // every arc must enter exactly one crossing
        let mut entered = vec![false; m];
        for c in &crossings {
            for a in [c.under_in(), c.over_in()] {
                if std::mem::replace(&mut entered[a], true) {
                    return Err(DiagramError::LabelCount(a));
                }
            }
        }
        let d = PlanarDiagram { crossings, name: None };
        if n > 0 {
            let faces = d.faces().len();
            if faces != n + 2 {
                return Err(DiagramError::NotPlanar { faces, expected: n + 2 });
            }
        }
        Ok(d)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn pd_tuples(&self) -> Vec<[usize; 4]> {
        self.crossings.iter().map(|c| c.labels).collect()
    }

    pub fn signs(&self) -> Vec<i8> {
        self.crossings.iter().map(|c| c.sign).collect()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    /// Reflection in the projection plane: every crossing changes.
    pub fn mirror(&self) -> Self {
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let [i, j, k, l] = c.labels;
                let labels = if c.sign > 0 { [l, i, j, k] } else { [j, k, l, i] };
                Crossing { labels, sign: -c.sign }
            })
            .collect();
        PlanarDiagram { crossings, name: self.name.clone() }
    }

    /// For each arc, the crossing it enters and whether it passes over there.
    fn arc_ends(&self) -> Vec<(usize, bool)> {
        let mut ends = vec![(0, false); self.arc_count()];
        for (x, c) in self.crossings.iter().enumerate() {
            ends[c.under_in()] = (x, false);
            ends[c.over_in()] = (x, true);
        }
        ends
    }

    /// Over/under sequence of passages along the orientation, starting with
    /// the end of arc 0.
    pub fn passages(&self) -> Vec<(usize, bool)> {
        self.arc_ends()
    }

    pub fn is_alternating(&self) -> bool {
        let p = self.passages();
        let m = p.len();
        (0..m).all(|k| p[k].1 != p[(k + 1) % m].1)
    }

    /// DT code with passage `k + 1` at the end of arc `k`. `None` when some
    /// crossing is met twice at passages of equal parity (impossible for a
    /// knot diagram).
    pub fn dt_code(&self) -> Option<Vec<i64>> {
        let n = self.crossing_count();
        let mut seen: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
        for (a, (x, over)) in self.passages().into_iter().enumerate() {
            seen[x].push((a + 1, over));
        }
        let mut out = vec![0i64; n];
        for s in &seen {
            let (odd, even) = match (s[0].0 % 2, s[1].0 % 2) {
                (1, 0) => (s[0], s[1]),
                (0, 1) => (s[1], s[0]),
                _ => return None,
            };
            out[odd.0 / 2] = if even.1 { -(even.0 as i64) } else { even.0 as i64 };
        }
        Some(out)
    }

    fn half_edges(&self) -> HashMap<usize, [Dart; 2]> {
        let mut w: HashMap<usize, Vec<Dart>> = HashMap::new();
        for (x, c) in self.crossings.iter().enumerate() {
            for (s, &a) in c.labels.iter().enumerate() {
                w.entry(a).or_default().push((x, s));
            }
        }
        w.into_iter().map(|(a, v)| (a, [v[0], v[1]])).collect()
    }

    /// Faces of the projection as dart cycles. A dart `(x, s)` bounds the
    /// face occupying corner `s - 1` of crossing `x` (corner `q` lies between
    /// slots `q` and `q + 1`).
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let he = self.half_edges();
        let other = |d: Dart| {
            let h = he[&self.crossings[d.0].labels[d.1]];
            if h[0] == d {
                h[1]
            } else {
                h[0]
            }
        };
        let mut seen = BTreeSet::new();
        let mut faces = Vec::new();
        for x in 0..self.crossings.len() {
            for s in 0..4 {
                let mut d = (x, s);
                if seen.contains(&d) {
                    continue;
                }
                let mut f = Vec::new();
                while seen.insert(d) {
                    f.push(d);
                    let (x2, s2) = other(d);
                    d = (x2, (s2 + 1) % 4);
                }
                faces.push(f);
            }
        }
        faces
    }

    /// Seifert circles as cycles of arcs after oriented smoothing.
    pub fn seifert_cycles(&self) -> Vec<Vec<usize>> {
        let m = self.arc_count();
        if m == 0 {
            return vec![Vec::new()];
        }
        let mut succ = vec![0; m];
        for c in &self.crossings {
            succ[c.under_in()] = c.over_out();
            succ[c.over_in()] = c.under_out();
        }
        let mut seen = vec![false; m];
        let mut cycles = Vec::new();
        for e in 0..m {
            if seen[e] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut f = e;
            while !seen[f] {
                seen[f] = true;
                cyc.push(f);
                f = succ[f];
            }
            cycles.push(cyc);
        }
        cycles
    }

    pub fn seifert_circles(&self) -> usize {
        self.seifert_cycles().len()
    }

    pub fn seifert_matrix(&self) -> Result<SeifertData, DiagramError> {
        if self.crossings.is_empty() {
            return Ok(SeifertData { seifert_circle_count: 1, matrix: IntMatrix::zeros(0), basis: Vec::new() });
        }
        SeifertBuilder::new(self)?.build()
    }
}

/// Seifert form of the canonical surface together with its cycle basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertData {
    pub seifert_circle_count: usize,
    pub matrix: IntMatrix,
    /// Each basis cycle as steps `(from circle, crossing, to circle)`.
    pub basis: Vec<Vec<(usize, usize, usize)>>,
}

// Local frame at a crossing band: north along the circle, east/west across.
type Vec2 = (i64, i64);
const NORTH: Vec2 = (0, 1);
const EAST: Vec2 = (1, 0);
const WEST: Vec2 = (-1, 0);

fn cross(a: Vec2, b: Vec2) -> i64 {
    (a.0 * b.1 - a.1 * b.0).signum()
}

fn neg(v: Vec2) -> Vec2 {
    (-v.0, -v.1)
}

/// Circle `C` seen from `C`'s side of a crossing: `left` means the crossing's
/// left circle (the one whose side the band leaves from the west).
struct Band {
    left: usize,
    right: usize,
    sign: i8,
    gap_region: usize,
}

struct SeifertBuilder {
    bands: Vec<Band>,
    circles: usize,
    /// crossings met along each circle, in order
    sites: Vec<Vec<usize>>,
    site_index: Vec<HashMap<usize, i64>>,
    inner: Vec<usize>,
    ccw: Vec<bool>,
}

struct Curve {
    pieces: HashMap<usize, (usize, usize)>,
    trav: HashMap<usize, (usize, usize)>,
    /// across-band offset in tenths, per crossing
    u: HashMap<usize, i64>,
    /// inset from the circle (in quarters), per circle
    rho: HashMap<usize, i64>,
}

impl SeifertBuilder {
    fn new(d: &PlanarDiagram) -> Result<Self, DiagramError> {
        let cycles = d.seifert_cycles();
        let circles = cycles.len();
        let m = d.arc_count();
        let mut circ = vec![0usize; m];
        for (k, cyc) in cycles.iter().enumerate() {
            for &e in cyc {
                circ[e] = k;
            }
        }
        let faces = d.faces();
        let mut corner_face = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for &(x, s) in f {
                corner_face.insert((x, (s + 3) % 4), fi);
            }
        }
        let mut uf: Vec<usize> = (0..faces.len()).collect();
        fn find(uf: &mut [usize], mut a: usize) -> usize {
            while uf[a] != a {
                uf[a] = uf[uf[a]];
                a = uf[a];
            }
            a
        }
        // corners left open by the smoothing
        let gap = |c: &Crossing| if c.sign > 0 { (1, 3) } else { (0, 2) };
        for (x, c) in d.crossings.iter().enumerate() {
            let g = gap(c);
            let a = find(&mut uf, corner_face[&(x, g.0)]);
            let b = find(&mut uf, corner_face[&(x, g.1)]);
            uf[a] = b;
        }
        let mut left: Vec<Option<usize>> = vec![None; circles];
        let mut right: Vec<Option<usize>> = vec![None; circles];
        let mut bands = Vec::with_capacity(d.crossing_count());
        for (x, c) in d.crossings.iter().enumerate() {
            let (l, r, cut_l, cut_r) = if c.sign > 0 {
                (circ[c.under_out()], circ[c.over_out()], 2, 0)
            } else {
                (circ[c.over_out()], circ[c.under_out()], 3, 1)
            };
            if l == r {
                return Err(DiagramError::Internal(format!("crossing {x} joins a circle to itself")));
            }
            let g = find(&mut uf, corner_face[&(x, gap(c).0)]);
            let cl = find(&mut uf, corner_face[&(x, cut_l)]);
            let cr = find(&mut uf, corner_face[&(x, cut_r)]);
            for (circle, on_left, reg) in [(l, false, g), (l, true, cl), (r, true, g), (r, false, cr)] {
                let side = if on_left { &mut left } else { &mut right };
                match side[circle] {
                    Some(prev) if prev != reg => {
                        return Err(DiagramError::Internal("circle borders inconsistent regions".into()))
                    }
                    _ => side[circle] = Some(reg),
                }
            }
            bands.push(Band { left: l, right: r, sign: c.sign, gap_region: g });
        }
        let left: Vec<usize> = left.into_iter().map(|r| r.expect("every circle meets a crossing")).collect();
        let right: Vec<usize> = right.into_iter().map(|r| r.expect("every circle meets a crossing")).collect();

        // regions and circles form a tree; orient it away from the region of face 0
        let root = find(&mut uf, 0);
        let mut adj: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for c in 0..circles {
            adj.entry(left[c]).or_default().push((c, right[c]));
            adj.entry(right[c]).or_default().push((c, left[c]));
        }
        let mut inner = vec![usize::MAX; circles];
        let mut seen = BTreeSet::from([root]);
        let mut q = VecDeque::from([root]);
        while let Some(r) = q.pop_front() {
            for &(c, r2) in adj.get(&r).map(|v| v.as_slice()).unwrap_or(&[]) {
                if seen.insert(r2) {
                    inner[c] = r2;
                    q.push_back(r2);
                }
            }
        }
        if inner.contains(&usize::MAX) {
            return Err(DiagramError::Internal("region tree is disconnected".into()));
        }
        let ccw = (0..circles).map(|c| inner[c] == left[c]).collect();

        let ends = d.arc_ends();
        let sites: Vec<Vec<usize>> = cycles.iter().map(|cyc| cyc.iter().map(|&e| ends[e].0).collect()).collect();
        let site_index = sites
            .iter()
            .map(|s| s.iter().enumerate().map(|(i, &x)| (x, i as i64)).collect())
            .collect();
        Ok(SeifertBuilder { bands, circles, sites, site_index, inner, ccw })
    }

    fn build(&self) -> Result<SeifertData, DiagramError> {
        let basis = self.cycle_basis()?;
        let b = basis.len();
        let mut v = IntMatrix::zeros(b);
        for i in 0..b {
            for j in 0..b {
                v.set(i, j, BigInt::from(self.linking(&basis[i], &basis[j], i == j)?));
            }
        }
        Ok(SeifertData { seifert_circle_count: self.circles, matrix: v, basis })
    }

    /// One cycle per crossing outside a BFS spanning tree of the Seifert graph.
    fn cycle_basis(&self) -> Result<Vec<Vec<(usize, usize, usize)>>, DiagramError> {
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.circles];
        for (x, bd) in self.bands.iter().enumerate() {
            adj[bd.left].push((x, bd.right));
            adj[bd.right].push((x, bd.left));
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.circles];
        let mut reached = vec![false; self.circles];
        let mut in_tree = vec![false; self.bands.len()];
        reached[0] = true;
        let mut q = VecDeque::from([0]);
        while let Some(v) = q.pop_front() {
            let mut nb = adj[v].clone();
            nb.sort();
            for (x, w) in nb {
                if !reached[w] {
                    reached[w] = true;
                    parent[w] = Some((v, x));
                    in_tree[x] = true;
                    q.push_back(w);
                }
            }
        }
        if reached.contains(&false) {
            return Err(DiagramError::Internal("Seifert graph is disconnected".into()));
        }
        let to_root = |mut v: usize| {
            let mut p = vec![v];
            while let Some((u, _)) = parent[v] {
                p.push(u);
                v = u;
            }
            p
        };
        let mut out = Vec::new();
        for (x, bd) in self.bands.iter().enumerate() {
            if in_tree[x] {
                continue;
            }
            let (a, b) = (bd.left, bd.right);
            let pa: BTreeSet<usize> = to_root(a).into_iter().collect();
            let lca = *to_root(b).iter().find(|v| pa.contains(v)).expect("tree has a root");
            let mut seq = vec![(a, x, b)];
            let mut v = b;
            while v != lca {
                let (u, y) = parent[v].expect("below lca");
                seq.push((v, y, u));
                v = u;
            }
            let mut down = Vec::new();
            v = a;
            while v != lca {
                let (u, y) = parent[v].expect("below lca");
                down.push((u, y, v));
                v = u;
            }
            seq.extend(down.into_iter().rev());
            out.push(seq);
        }
        Ok(out)
    }

    fn curve(seq: &[(usize, usize, usize)]) -> Curve {
        let k = seq.len();
        let pieces = (0..k).map(|t| (seq[t].2, (seq[t].1, seq[(t + 1) % k].1))).collect();
        let trav = seq.iter().map(|&(a, x, b)| (x, (a, b))).collect();
        Curve { pieces, trav, u: HashMap::new(), rho: HashMap::new() }
    }

    /// Offset of a band endpoint along circle `c`, in tenths of a site.
    fn position(&self, c: usize, x: usize, u: i64) -> i64 {
        let side = if self.bands[x].left == c { u } else { -u };
        10 * self.site_index[c][&x] + side
    }

    /// Band direction at `x`, pointing from circle `c` into the band.
    fn into_band(&self, c: usize, x: usize) -> Vec2 {
        let bd = &self.bands[x];
        let child = bd.gap_region == self.inner[c];
        match (bd.left == c, child) {
            (true, true) | (false, false) => EAST,
            _ => WEST,
        }
    }

    /// lk(a, b⁺), where b⁺ is `b` pushed off the surface. Curve `b` is drawn
    /// at a shallower inset on every circle; on the diagonal it is a parallel
    /// copy instead.
    fn linking(
        &self,
        ca: &[(usize, usize, usize)],
        cb: &[(usize, usize, usize)],
        diagonal: bool,
    ) -> Result<i64, DiagramError> {
        let mut curves = [Self::curve(ca), Self::curve(cb)];
        let xs: Vec<usize> = curves[0].trav.keys().copied().collect();
        for x in xs {
            curves[0].u.insert(x, 0);
        }
        let cs: Vec<usize> = curves[0].pieces.keys().copied().collect();
        for c in cs {
            curves[0].rho.insert(c, 2);
        }
        if diagonal {
            let pieces: Vec<(usize, (usize, usize))> = curves[0].pieces.iter().map(|(&c, &p)| (c, p)).collect();
            for (c, (xi, xo)) in pieces {
                curves[1].rho.insert(c, 3);
                let on_left = |x: usize| self.bands[x].left == c;
                let uo = if on_left(xo) { 1 } else { -1 };
                let ui = if on_left(xi) { -1 } else { 1 };
                for (x, u) in [(xo, uo), (xi, ui)] {
                    if let Some(&prev) = curves[1].u.get(&x) {
                        if prev != u {
                            return Err(DiagramError::Internal("parallel copy is inconsistent".into()));
                        }
                    }
                    curves[1].u.insert(x, u);
                }
            }
        } else {
            let xs: Vec<usize> = curves[1].trav.keys().copied().collect();
            for x in xs {
                curves[1].u.insert(x, 1);
            }
            let cs: Vec<usize> = curves[1].pieces.keys().copied().collect();
            for c in cs {
                curves[1].rho.insert(c, 1);
            }
        }

        let in_range = |q: i64, a: i64, b: i64, m: i64| {
            let d = (q - a).rem_euclid(m);
            0 < d && d < (b - a).rem_euclid(m)
        };
        let mut total = 0i64;

        // spoke of one curve against the collar arc of the other, same circle
        for a in 0..2 {
            let b = 1 - a;
            for (&c, &(xi, xo)) in &curves[a].pieces {
                let Some(&(bxi, bxo)) = curves[b].pieces.get(&c) else { continue };
                if curves[b].rho[&c] >= curves[a].rho[&c] {
                    continue;
                }
                let m = 10 * self.sites[c].len() as i64;
                let lo = self.position(c, bxi, curves[b].u[&bxi]);
                let hi = self.position(c, bxo, curves[b].u[&bxo]);
                for (x, entering) in [(xi, true), (xo, false)] {
                    let q = self.position(c, x, curves[a].u[&x]);
                    if !in_range(q, lo, hi, m) {
                        continue;
                    }
                    if diagonal {
                        return Err(DiagramError::Internal("parallel copy meets the surface".into()));
                    }
                    let spoke = if entering { self.into_band(c, x) } else { neg(self.into_band(c, x)) };
                    let pushed_over = self.ccw[c];
                    total += if (a == 1) == pushed_over { cross(spoke, NORTH) } else { cross(NORTH, spoke) };
                }
            }
        }

        // a band traversal passing over the other curve's collar arc
        for a in 0..2 {
            let b = 1 - a;
            for (&x, &(from, _)) in &curves[a].trav {
                let bd = &self.bands[x];
                for c in [bd.left, bd.right] {
                    if bd.gap_region != self.inner[c] {
                        continue;
                    }
                    let Some(&(bxi, bxo)) = curves[b].pieces.get(&c) else { continue };
                    let m = 10 * self.sites[c].len() as i64;
                    let lo = self.position(c, bxi, curves[b].u[&bxi]);
                    let hi = self.position(c, bxo, curves[b].u[&bxo]);
                    let q = self.position(c, x, curves[a].u[&x]);
                    if in_range(q, lo, hi, m) {
                        let dir = if from == c { self.into_band(c, x) } else { neg(self.into_band(c, x)) };
                        total += cross(dir, NORTH);
                    }
                }
            }
        }

        // the half twist inside a shared band
        for (&x, &(f0, _)) in &curves[0].trav {
            let Some(&(f1, _)) = curves[1].trav.get(&x) else { continue };
            let (u0, u1) = (curves[0].u[&x], curves[1].u[&x]);
            if u0 == u1 {
                return Err(DiagramError::Internal("curves share a band position".into()));
            }
            let l = self.bands[x].left;
            let dir = |from: usize, u: i64| if from == l { (10, -2 * u) } else { (-10, 2 * u) };
            let (d0, d1) = (dir(f0, u0), dir(f1, u1));
            let over0 = if self.bands[x].sign > 0 { u0 < u1 } else { u0 > u1 };
            total += if over0 { cross(d0, d1) } else { cross(d1, d0) };
        }

        if total % 2 != 0 {
            return Err(DiagramError::Internal("odd crossing count between closed curves".into()));
        }
        Ok(total / 2)
    }
}
