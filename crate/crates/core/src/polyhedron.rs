//! Rational polyhedra in H- and V-representation.
//!
//! An [`HPoly`] is always stored canonically: equalities as the reduced
//! row-echelon basis of the affine hull, inequalities irredundant, reduced
//! modulo the equalities, scaled so the first nonzero coefficient is `±1`,
//! and sorted. Two canonical polyhedra are equal iff they are the same set.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use num_traits::{One, Signed, Zero};

use crate::exterior::{subsets, RForm};
use crate::linalg::{det, null_space, rank, rref, Subspace};
use crate::lp::{maximize, LpOutcome};
use crate::scalar::Rat;

/// Affine functional `x -> a·x + c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub a: Vec<Rat>,
    pub c: Rat,
}

impl Affine {
    pub fn new(a: Vec<Rat>, c: Rat) -> Self {
        Affine { a, c }
    }

    pub fn linear(a: Vec<Rat>) -> Self {
        Affine { a, c: Rat::zero() }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.a.iter().zip(x).fold(self.c.clone(), |acc, (a, b)| acc + a * b)
    }

    pub fn neg(&self) -> Self {
        Affine::new(self.a.iter().map(|x| -x).collect(), -&self.c)
    }

    pub fn sub(&self, o: &Affine) -> Self {
        Affine::new(self.a.iter().zip(&o.a).map(|(x, y)| x - y).collect(), &self.c - &o.c)
    }

    pub fn scale(&self, t: &Rat) -> Self {
        Affine::new(self.a.iter().map(|x| x * t).collect(), &self.c * t)
    }

    pub fn is_constant(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    /// Positive rescaling with first nonzero linear coefficient `±1`.
    pub fn normalized(&self) -> Self {
        match self.a.iter().find(|x| !x.is_zero()) {
            Some(f) => self.scale(&(Rat::one() / f.abs())),
            None => self.clone(),
        }
    }

    /// Rescaling (possibly by a negative number) with first nonzero linear
    /// coefficient `1`; identifies the hyperplane, not the halfspace.
    pub fn hyperplane_key(&self) -> Self {
        match self.a.iter().find(|x| !x.is_zero()) {
            Some(f) => self.scale(&(Rat::one() / f)),
            None => self.clone(),
        }
    }

    /// Replaces `x` by `x - t`, i.e. the functional of the translated set.
    pub fn translated(&self, t: &[Rat]) -> Self {
        let shift = self.a.iter().zip(t).fold(Rat::zero(), |acc, (a, b)| acc + a * b);
        Affine::new(self.a.clone(), &self.c - shift)
    }
}

fn reduce_mod(f: &Affine, eqs: &[Affine]) -> Affine {
    let mut g = f.clone();
    for e in eqs {
        let p = e.a.iter().position(|x| !x.is_zero()).expect("nonconstant equality");
        if !g.a[p].is_zero() {
            let t = g.a[p].clone();
            g = g.sub(&e.scale(&t));
        }
    }
    g
}

/// Rational polyhedron `{x : eqs = 0, ineqs >= 0}` in canonical form.
#[derive(Clone, Debug)]
pub struct HPoly {
    pub dim: usize,
    pub eqs: Vec<Affine>,
    pub ineqs: Vec<Affine>,
    pub empty: bool,
    point: Vec<Rat>,
}

impl PartialEq for HPoly {
    fn eq(&self, o: &Self) -> bool {
        self.dim == o.dim && self.empty == o.empty && self.eqs == o.eqs && self.ineqs == o.ineqs
    }
}

impl Eq for HPoly {}

impl Hash for HPoly {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.dim.hash(h);
        self.empty.hash(h);
        self.eqs.hash(h);
        self.ineqs.hash(h);
    }
}

impl PartialOrd for HPoly {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for HPoly {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.dim, self.empty, &self.eqs, &self.ineqs).cmp(&(o.dim, o.empty, &o.eqs, &o.ineqs))
    }
}

impl HPoly {
    pub fn empty(dim: usize) -> Self {
        HPoly {
            dim,
            eqs: Vec::new(),
            ineqs: Vec::new(),
            empty: true,
            point: Vec::new(),
        }
    }

    pub fn whole(dim: usize) -> Self {
        HPoly {
            dim,
            eqs: Vec::new(),
            ineqs: Vec::new(),
            empty: false,
            point: vec![Rat::zero(); dim],
        }
    }

    /// Canonical polyhedron cut out by `eqs = 0` and `ineqs >= 0`.
    pub fn new(dim: usize, eqs: Vec<Affine>, ineqs: Vec<Affine>) -> Self {
        let mut eqs = eqs;
        let mut ineqs = ineqs;
        let point;
        loop {
            let Some(e) = echelon_eqs(dim, &eqs) else {
                return HPoly::empty(dim);
            };
            eqs = e;
            let Some(red) = reduce_ineqs(&ineqs, &eqs) else {
                return HPoly::empty(dim);
            };
            ineqs = red;
            // maximize s subject to ineq_i >= s, s <= 1
            let lift = |f: &Affine, s: i64| {
                let mut a = f.a.clone();
                a.push(Rat::from_integer(s.into()));
                Affine::new(a, f.c.clone())
            };
            let leqs: Vec<Affine> = eqs.iter().map(|f| lift(f, 0)).collect();
            let mut lin: Vec<Affine> = ineqs.iter().map(|f| lift(f, -1)).collect();
            let mut cap = vec![Rat::zero(); dim];
            cap.push(-Rat::one());
            lin.push(Affine::new(cap, Rat::one()));
            let mut obj = vec![Rat::zero(); dim];
            obj.push(Rat::one());
            let (value, p) = match maximize(dim + 1, &leqs, &lin, &obj) {
                LpOutcome::Optimal { value, point } => (value, point),
                _ => return HPoly::empty(dim),
            };
            if value.is_negative() {
                return HPoly::empty(dim);
            }
            if value.is_positive() {
                point = p[..dim].to_vec();
                break;
            }
            // some inequalities are implicit equalities
            let mut slack = vec![false; ineqs.len()];
            let mark = |x: &[Rat], slack: &mut Vec<bool>| {
                for (i, f) in ineqs.iter().enumerate() {
                    if f.eval(x).is_positive() {
                        slack[i] = true;
                    }
                }
            };
            mark(&p[..dim], &mut slack);
            let mut implicit = Vec::new();
            for i in 0..ineqs.len() {
                if slack[i] {
                    continue;
                }
                match maximize(dim, &eqs, &ineqs, &ineqs[i].a) {
                    LpOutcome::Optimal { value, point } => {
                        if (&value + &ineqs[i].c).is_zero() {
                            implicit.push(i);
                        } else {
                            mark(&point, &mut slack);
                        }
                    }
                    LpOutcome::Unbounded(point) => {
                        slack[i] = true;
                        mark(&point, &mut slack);
                    }
                    LpOutcome::Infeasible => return HPoly::empty(dim),
                }
            }
            debug_assert!(!implicit.is_empty());
            for &i in &implicit {
                eqs.push(ineqs[i].clone());
            }
            let keep: Vec<Affine> = ineqs
                .iter()
                .enumerate()
                .filter(|(i, _)| !implicit.contains(i))
                .map(|(_, f)| f.clone())
                .collect();
            ineqs = keep;
        }
        // redundancy removal
        let mut i = 0;
        while i < ineqs.len() {
            let others: Vec<Affine> = ineqs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, f)| f.clone())
                .collect();
            let neg: Vec<Rat> = ineqs[i].a.iter().map(|x| -x).collect();
            let redundant = match maximize(dim, &eqs, &others, &neg) {
                LpOutcome::Optimal { value, .. } => !(&ineqs[i].c - &value).is_negative(),
                _ => false,
            };
            if redundant {
                ineqs.remove(i);
            } else {
                i += 1;
            }
        }
        ineqs.sort();
        HPoly {
            dim,
            eqs,
            ineqs,
            empty: false,
            point,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Dimension of the affine hull, `-1` when empty.
    pub fn affine_dim(&self) -> i64 {
        if self.empty {
            -1
        } else {
            (self.dim - self.eqs.len()) as i64
        }
    }

    /// A rational point of the relative interior.
    pub fn relint_point(&self) -> &[Rat] {
        &self.point
    }

    /// Canonical (reduced row-echelon) basis of the direction space.
    pub fn tangent_basis(&self) -> Vec<Vec<Rat>> {
        self.tangent_space().basis
    }

    pub fn tangent_space(&self) -> Subspace<Rat> {
        let rows: Vec<Vec<Rat>> = self.eqs.iter().map(|e| e.a.clone()).collect();
        Subspace::kernel(self.dim, &rows)
    }

    /// The affine hull as a polyhedron.
    pub fn affine_hull(&self) -> HPoly {
        if self.empty {
            return self.clone();
        }
        HPoly {
            dim: self.dim,
            eqs: self.eqs.clone(),
            ineqs: Vec::new(),
            empty: false,
            point: self.point.clone(),
        }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.empty
            && self.eqs.iter().all(|e| e.eval(x).is_zero())
            && self.ineqs.iter().all(|f| !f.eval(x).is_negative())
    }

    pub fn contains_in_relint(&self, x: &[Rat]) -> bool {
        !self.empty
            && self.eqs.iter().all(|e| e.eval(x).is_zero())
            && self.ineqs.iter().all(|f| f.eval(x).is_positive())
    }

    pub fn with(&self, eqs: &[Affine], ineqs: &[Affine]) -> HPoly {
        if self.empty {
            return self.clone();
        }
        let mut e = self.eqs.clone();
        e.extend(eqs.iter().cloned());
        let mut i = self.ineqs.clone();
        i.extend(ineqs.iter().cloned());
        HPoly::new(self.dim, e, i)
    }

    pub fn intersect(&self, o: &HPoly) -> HPoly {
        if o.empty {
            return o.clone();
        }
        self.with(&o.eqs, &o.ineqs)
    }

    /// Whether the intersection with `o` has points in both relative interiors.
    pub fn meets_relint(&self, o: &HPoly) -> bool {
        let p = self.intersect(o);
        if p.empty {
            return false;
        }
        let x = p.relint_point();
        self.contains_in_relint(x) && o.contains_in_relint(x)
    }

    /// Facets with the inequality that defines each.
    pub fn facets(&self) -> Vec<(HPoly, Affine)> {
        (0..self.ineqs.len())
            .map(|i| {
                let others: Vec<Affine> = self
                    .ineqs
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, f)| f.clone())
                    .collect();
                let mut eqs = self.eqs.clone();
                eqs.push(self.ineqs[i].clone());
                (HPoly::new(self.dim, eqs, others), self.ineqs[i].clone())
            })
            .collect()
    }

    /// All faces of the given dimension.
    pub fn faces(&self, m: i64) -> Vec<HPoly> {
        let d = self.affine_dim();
        if m > d || m < 0 {
            return Vec::new();
        }
        let mut level = vec![self.clone()];
        for _ in m..d {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for f in &level {
                for (g, _) in f.facets() {
                    if !g.empty && seen.insert(g.clone()) {
                        next.push(g);
                    }
                }
            }
            level = next;
        }
        level.sort();
        level
    }

    /// A vector of the direction space leaving the polyhedron through the
    /// facet defined by `f`.
    pub fn outward(&self, f: &Affine) -> Vec<Rat> {
        for b in self.tangent_basis() {
            let v: Rat = f.a.iter().zip(&b).map(|(x, y)| x * y).sum();
            if v.is_negative() {
                return b;
            }
            if v.is_positive() {
                return b.iter().map(|x| -x).collect();
            }
        }
        panic!("inequality constant on the affine hull")
    }

    /// Cone of directions `v` with `x + t v` in the polyhedron for small `t > 0`.
    pub fn tangent_cone(&self, x: &[Rat]) -> HPoly {
        let eqs: Vec<Affine> = self.eqs.iter().map(|e| Affine::linear(e.a.clone())).collect();
        let ineqs: Vec<Affine> = self
            .ineqs
            .iter()
            .filter(|f| f.eval(x).is_zero())
            .map(|f| Affine::linear(f.a.clone()))
            .collect();
        HPoly::new(self.dim, eqs, ineqs)
    }

    pub fn recession_cone(&self) -> HPoly {
        if self.empty {
            return self.clone();
        }
        let eqs: Vec<Affine> = self.eqs.iter().map(|e| Affine::linear(e.a.clone())).collect();
        let ineqs: Vec<Affine> = self.ineqs.iter().map(|f| Affine::linear(f.a.clone())).collect();
        HPoly::new(self.dim, eqs, ineqs)
    }

    pub fn is_bounded(&self) -> bool {
        self.empty || self.recession_cone().affine_dim() == 0
    }

    pub fn translate(&self, t: &[Rat]) -> HPoly {
        if self.empty {
            return self.clone();
        }
        let eqs: Vec<Affine> = self.eqs.iter().map(|e| e.translated(t)).collect();
        let mut ineqs: Vec<Affine> = self.ineqs.iter().map(|f| f.translated(t)).collect();
        ineqs.sort();
        let point = self.point.iter().zip(t).map(|(a, b)| a + b).collect();
        HPoly {
            dim: self.dim,
            eqs,
            ineqs,
            empty: false,
            point,
        }
    }

    /// Image under `x -> -x`.
    pub fn negate(&self) -> HPoly {
        if self.empty {
            return self.clone();
        }
        let flip = |f: &Affine| Affine::new(f.a.iter().map(|x| -x).collect(), f.c.clone());
        HPoly::new(
            self.dim,
            self.eqs.iter().map(flip).collect(),
            self.ineqs.iter().map(flip).collect(),
        )
    }

    /// Minimum and maximum of `f`; `None` marks unboundedness.
    pub fn range(&self, f: &Affine) -> (Option<Rat>, Option<Rat>) {
        let hi = match maximize(self.dim, &self.eqs, &self.ineqs, &f.a) {
            LpOutcome::Optimal { value, .. } => Some(value + &f.c),
            _ => None,
        };
        let neg: Vec<Rat> = f.a.iter().map(|x| -x).collect();
        let lo = match maximize(self.dim, &self.eqs, &self.ineqs, &neg) {
            LpOutcome::Optimal { value, .. } => Some(&f.c - value),
            _ => None,
        };
        (lo, hi)
    }

    /// Whether `f` takes both signs strictly on the polyhedron.
    pub fn is_cut_by(&self, f: &Affine) -> bool {
        let x = self.relint_point();
        let v = f.eval(x);
        let (lo, hi) = if v.is_positive() {
            (self.range(f).0, None)
        } else if v.is_negative() {
            (None, self.range(f).1)
        } else {
            // relint point on the hyperplane: cut iff nonconstant on the hull
            return self
                .tangent_basis()
                .iter()
                .any(|b| !f.a.iter().zip(b).map(|(x, y)| x * y).sum::<Rat>().is_zero());
        };
        match (lo, hi) {
            (Some(l), _) if v.is_positive() => l.is_negative(),
            (None, _) if v.is_positive() => true,
            (_, Some(h)) => h.is_positive(),
            _ => true,
        }
    }

    /// Vertices of a bounded polyhedron.
    pub fn vertices(&self) -> Vec<Vec<Rat>> {
        let mut v: Vec<Vec<Rat>> = self.faces(0).into_iter().map(|f| f.relint_point().to_vec()).collect();
        v.sort();
        v
    }
}

/// RREF of affine equalities; `None` if inconsistent.
fn echelon_eqs(dim: usize, eqs: &[Affine]) -> Option<Vec<Affine>> {
    if eqs.is_empty() {
        return Some(Vec::new());
    }
    let rows: Vec<Vec<Rat>> = eqs
        .iter()
        .map(|e| {
            let mut r = e.a.clone();
            r.push(e.c.clone());
            r
        })
        .collect();
    let (r, piv) = rref(rows);
    if piv.last() == Some(&dim) {
        return None;
    }
    Some(
        r.into_iter()
            .map(|mut row| {
                let c = row.pop().unwrap();
                Affine::new(row, c)
            })
            .collect(),
    )
}

/// Reduces, normalizes and deduplicates inequalities; `None` if a constant
/// inequality fails.
fn reduce_ineqs(ineqs: &[Affine], eqs: &[Affine]) -> Option<Vec<Affine>> {
    let mut best: HashMap<Vec<Rat>, Rat> = HashMap::new();
    for f in ineqs {
        let g = reduce_mod(f, eqs).normalized();
        if g.is_constant() {
            if g.c.is_negative() {
                return None;
            }
            continue;
        }
        best.entry(g.a.clone())
            .and_modify(|c| {
                if g.c < *c {
                    *c = g.c.clone()
                }
            })
            .or_insert(g.c);
    }
    let mut out: Vec<Affine> = best.into_iter().map(|(a, c)| Affine::new(a, c)).collect();
    out.sort();
    Some(out)
}

/// Affine hull of points: base point and RREF direction space.
pub fn affine_span(points: &[Vec<Rat>]) -> (Vec<Rat>, Subspace<Rat>) {
    let dim = points[0].len();
    let p0 = points[0].clone();
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&p0).map(|(a, b)| a - b).collect())
        .collect();
    (p0, Subspace::span(dim, &diffs))
}

pub fn affine_rank(points: &[Vec<Rat>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    affine_span(points).1.dim()
}

/// Indices of points that are not convex combinations of the others.
pub fn extreme_points(points: &[Vec<Rat>]) -> Vec<usize> {
    let mut uniq: Vec<usize> = Vec::new();
    for i in 0..points.len() {
        if !uniq.iter().any(|&j| points[j] == points[i]) {
            uniq.push(i);
        }
    }
    if uniq.len() <= 2 {
        return uniq;
    }
    let dim = points[0].len();
    uniq.iter()
        .copied()
        .filter(|&i| {
            let others: Vec<usize> = uniq.iter().copied().filter(|&j| j != i).collect();
            // lambda >= 0, sum lambda = 1, sum lambda q = p
            let m = others.len();
            let mut eqs = Vec::new();
            for d in 0..dim {
                let a: Vec<Rat> = others.iter().map(|&j| points[j][d].clone()).collect();
                eqs.push(Affine::new(a, -&points[i][d]));
            }
            eqs.push(Affine::new(vec![Rat::one(); m], -Rat::one()));
            let ineqs: Vec<Affine> = (0..m)
                .map(|j| {
                    let mut a = vec![Rat::zero(); m];
                    a[j] = Rat::one();
                    Affine::linear(a)
                })
                .collect();
            matches!(maximize(m, &eqs, &ineqs, &vec![Rat::zero(); m]), LpOutcome::Infeasible)
        })
        .collect()
}

/// Coordinates of points relative to the RREF basis of their affine hull.
fn hull_coords(points: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<Rat>, Subspace<Rat>) {
    let (p0, s) = affine_span(points);
    let coords = points
        .iter()
        .map(|p| {
            let d: Vec<Rat> = p.iter().zip(&p0).map(|(a, b)| a - b).collect();
            s.coords(&d)
        })
        .collect();
    (coords, p0, s)
}

/// Facets of a full-dimensional point configuration in `R^r`, as
/// inward functionals and the sets of points they contain.
fn facets_full(q: &[Vec<Rat>]) -> Vec<(Affine, BTreeSet<usize>)> {
    let r = q[0].len();
    let ext = extreme_points(q);
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::new();
    let mut out = Vec::new();
    if r == 0 {
        return out;
    }
    for s in subsets(ext.len(), r) {
        let base = &q[ext[s[0]]];
        let rows: Vec<Vec<Rat>> = s[1..]
            .iter()
            .map(|&i| q[ext[i]].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let ns = if rows.is_empty() {
            vec![vec![Rat::one()]]
        } else {
            null_space(&rows, r)
        };
        if ns.len() != 1 {
            continue;
        }
        let n = &ns[0];
        let c = -n.iter().zip(base).map(|(a, b)| a * b).sum::<Rat>();
        let f = Affine::new(n.clone(), c);
        let vals: Vec<Rat> = q.iter().map(|p| f.eval(p)).collect();
        let pos = vals.iter().any(|v| v.is_positive());
        let neg = vals.iter().any(|v| v.is_negative());
        if pos && neg {
            continue;
        }
        let on: BTreeSet<usize> = (0..q.len()).filter(|&i| vals[i].is_zero()).collect();
        if seen.insert(on.clone()) {
            let f = if neg { f.neg() } else { f };
            out.push((f.normalized(), on));
        }
    }
    out
}

/// Face lattice of `conv(points)`, indexed by dimension, faces as sets of
/// point indices (all points lying on the face).
pub fn face_lattice(points: &[Vec<Rat>]) -> Vec<Vec<BTreeSet<usize>>> {
    let (q, _, s) = hull_coords(points);
    let r = s.dim();
    let mut levels: Vec<Vec<BTreeSet<usize>>> = vec![Vec::new(); r + 1];
    levels[r].push((0..points.len()).collect());
    if r == 0 {
        return levels;
    }
    let facets: Vec<BTreeSet<usize>> = facets_full(&q).into_iter().map(|(_, s)| s).collect();
    levels[r - 1] = facets.clone();
    for j in (1..r).rev() {
        let mut seen: HashSet<BTreeSet<usize>> = HashSet::new();
        let mut next = Vec::new();
        for f in &levels[j] {
            for g in &facets {
                let s: BTreeSet<usize> = f.intersection(g).copied().collect();
                if s.is_empty() || seen.contains(&s) {
                    continue;
                }
                let pts: Vec<Vec<Rat>> = s.iter().map(|&i| points[i].clone()).collect();
                if affine_rank(&pts) == j - 1 {
                    seen.insert(s.clone());
                    next.push(s);
                }
            }
        }
        next.sort();
        levels[j - 1] = next;
    }
    levels
}

/// Pulling triangulation of `conv(points)` into simplices of full affine
/// dimension; each simplex lists point indices.
pub fn triangulate(points: &[Vec<Rat>]) -> Vec<Vec<usize>> {
    let lat = face_lattice(points);
    let r = lat.len() - 1;
    let mut memo: HashMap<BTreeSet<usize>, Vec<Vec<usize>>> = HashMap::new();
    fn rec(
        f: &BTreeSet<usize>,
        j: usize,
        lat: &[Vec<BTreeSet<usize>>],
        points: &[Vec<Rat>],
        memo: &mut HashMap<BTreeSet<usize>, Vec<Vec<usize>>>,
    ) -> Vec<Vec<usize>> {
        if let Some(t) = memo.get(f) {
            return t.clone();
        }
        let out = if j == 0 {
            vec![vec![*f.iter().next().unwrap()]]
        } else {
            // apex: the first extreme point of the face
            let apex = *lat[0].iter().find(|v| v.is_subset(f)).unwrap().iter().next().unwrap();
            let mut out = Vec::new();
            for g in lat[j - 1].iter().filter(|g| g.is_subset(f) && !g.contains(&apex)) {
                for mut s in rec(g, j - 1, lat, points, memo) {
                    s.insert(0, apex);
                    out.push(s);
                }
            }
            out
        };
        memo.insert(f.clone(), out.clone());
        out
    }
    let top = lat[r][0].clone();
    rec(&top, r, &lat, points, &mut memo)
}

fn factorial(m: usize) -> Rat {
    (1..=m).fold(Rat::one(), |acc, i| acc * Rat::from_integer(i.into()))
}

/// `|det(v1 - v0, ..., vm - v0)| / m!` in the given coordinates.
pub fn simplex_volume(verts: &[Vec<Rat>]) -> Rat {
    let m = verts.len() - 1;
    let rows: Vec<Vec<Rat>> = verts[1..]
        .iter()
        .map(|v| v.iter().zip(&verts[0]).map(|(a, b)| a - b).collect())
        .collect();
    det(&rows).abs() / factorial(m)
}

/// Euclidean `n`-volume of `conv(points)` in `R^n` (zero if not full-dimensional).
pub fn volume(points: &[Vec<Rat>]) -> Rat {
    if points.is_empty() || affine_rank(points) < points[0].len() {
        return Rat::zero();
    }
    relative_volume(points)
}

/// Volume of `conv(points)` measured in the coordinates of the RREF basis
/// of its affine hull.
pub fn relative_volume(points: &[Vec<Rat>]) -> Rat {
    let (q, _, s) = hull_coords(points);
    if s.dim() == 0 {
        return Rat::one();
    }
    triangulate(&q)
        .iter()
        .map(|t| simplex_volume(&t.iter().map(|&i| q[i].clone()).collect::<Vec<_>>()))
        .sum()
}

/// Convex hull of finitely many points plus the cone of finitely many rays.
#[derive(Clone, Debug, PartialEq)]
pub struct VPolytope {
    pub vertices: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Rat>>,
}

impl VPolytope {
    /// Bounded polytope; non-extreme points are dropped.
    pub fn new(points: Vec<Vec<Rat>>) -> Self {
        let ext = extreme_points(&points);
        let mut vertices: Vec<Vec<Rat>> = ext.into_iter().map(|i| points[i].clone()).collect();
        vertices.sort();
        VPolytope {
            vertices,
            rays: Vec::new(),
        }
    }

    pub fn with_rays(points: Vec<Vec<Rat>>, rays: Vec<Vec<Rat>>) -> Self {
        if rays.is_empty() {
            return VPolytope::new(points);
        }
        VPolytope { vertices: points, rays }
    }

    pub fn ambient(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    pub fn affine_dim(&self) -> usize {
        let mut pts = self.vertices.clone();
        for r in &self.rays {
            pts.push(self.vertices[0].iter().zip(r).map(|(a, b)| a + b).collect());
        }
        affine_rank(&pts)
    }

    /// H-representation via the homogenized cone.
    pub fn to_hpoly(&self) -> HPoly {
        let d = self.ambient();
        let mut gens: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .map(|v| {
                let mut g = vec![Rat::one()];
                g.extend(v.iter().cloned());
                g
            })
            .collect();
        for r in &self.rays {
            let mut g = vec![Rat::zero()];
            g.extend(r.iter().cloned());
            gens.push(g);
        }
        let span = Subspace::span(d + 1, &gens);
        let coords: Vec<Vec<Rat>> = gens.iter().map(|g| span.coords(g)).collect();
        let mut ineqs = Vec::new();
        let mut with_origin = coords.clone();
        with_origin.push(vec![Rat::zero(); span.dim()]);
        // facets of the cone = facets through the origin of conv(0, gens)
        // in span coordinates; other facets of that hull are ignored.
        for (f, _) in facets_full(&with_origin) {
            if !f.c.is_zero() {
                continue;
            }
            // functional on span coords -> functional on R^{d+1}
            let mut a = vec![Rat::zero(); d + 1];
            for (k, &p) in span.pivots.iter().enumerate() {
                a[p] = f.a[k].clone();
            }
            ineqs.push(Affine::new(a[1..].to_vec(), a[0].clone()));
        }
        let eqs: Vec<Affine> = span
            .annihilator()
            .into_iter()
            .map(|a| Affine::new(a[1..].to_vec(), a[0].clone()))
            .collect();
        HPoly::new(d, eqs, ineqs)
    }

    /// Faces of dimension `m` as vertex-index sets (bounded polytopes).
    pub fn face_sets(&self, m: usize) -> Vec<BTreeSet<usize>> {
        let lat = face_lattice(&self.vertices);
        lat.get(m).cloned().unwrap_or_default()
    }

    pub fn faces(&self, m: usize) -> Vec<VPolytope> {
        self.face_sets(m)
            .into_iter()
            .map(|s| VPolytope {
                vertices: s.iter().map(|&i| self.vertices[i].clone()).collect(),
                rays: Vec::new(),
            })
            .collect()
    }

    pub fn translate(&self, t: &[Rat]) -> VPolytope {
        VPolytope {
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect())
                .collect(),
            rays: self.rays.clone(),
        }
    }

    pub fn minkowski_sum(&self, o: &VPolytope) -> VPolytope {
        let mut pts = Vec::new();
        for a in &self.vertices {
            for b in &o.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        VPolytope::new(pts)
    }

    pub fn volume(&self) -> Rat {
        volume(&self.vertices)
    }
}

/// The fan of tangent cones, at a relative interior point of `theta`, of
/// the cells containing that point.
pub fn localization(cells: &[HPoly], theta: &HPoly) -> Vec<HPoly> {
    let e = theta.relint_point();
    let mut out: Vec<HPoly> = cells
        .iter()
        .filter(|c| c.contains(e))
        .map(|c| c.tangent_cone(e))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Volume multivector of a bounded face: the relative volume in the
/// coordinates of `orientation` times the wedge of its vectors. The
/// orientation must be a basis of the face's direction space.
pub fn volume_multivector(face: &[Vec<Rat>], orientation: &[Vec<Rat>]) -> RForm {
    let dim = face[0].len();
    let m = orientation.len();
    let (p0, _) = affine_span(face);
    // coordinates in the orientation basis
    let s = Subspace::span(dim, orientation);
    let ob: Vec<Vec<Rat>> = orientation.iter().map(|v| s.coords(v)).collect();
    let coords: Vec<Vec<Rat>> = face
        .iter()
        .map(|p| {
            let d: Vec<Rat> = p.iter().zip(&p0).map(|(a, b)| a - b).collect();
            let c = s.coords(&d);
            crate::linalg::solve(&transpose(&ob), &c, m).expect("face outside orientation span")
        })
        .collect();
    let vol = if m == 0 { Rat::one() } else { volume(&coords) };
    let mut p = RForm::scalar(dim, vol);
    for v in orientation {
        p = p.wedge(&RForm::from_vector(v));
    }
    p
}

pub fn transpose(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Rank of a set of vectors, re-exported for convenience.
pub fn vector_rank(v: &[Vec<Rat>]) -> usize {
    rank(v)
}
