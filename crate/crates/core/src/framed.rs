//! Framed polyhedral sets, the boundary operator, ETP validation and the
//! group of exponential tropical varieties.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Debug;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::current::TestForm;
use crate::error::{EtvError, Result};
use crate::exterior::{
    analyze_frame, complexify, eval_wedge_mixed, max_complex_subspace, quotient_basis, CForm, OrientationToken,
};
use crate::linalg::inverse;
use crate::polyhedron::{triangulate, Affine, HPoly};
use crate::scalar::{CRat, Rat};

/// Values that can sit on cells and be summed over a refinement.
pub trait FrameValue: Clone + PartialEq + Debug {
    fn plus(&self, o: &Self) -> Self;
    fn is_null(&self) -> bool;
}

impl FrameValue for Rat {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
}

impl FrameValue for CForm {
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
}

fn sign_vector(x: &[Rat], hyps: &[Affine]) -> Vec<i8> {
    hyps.iter()
        .map(|h| {
            let v = h.eval(x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Splits a cell by every hyperplane that cuts through it.
pub fn cut_by(cell: &HPoly, hyps: &[Affine]) -> Vec<HPoly> {
    let k = cell.affine_dim();
    let mut pieces = vec![cell.clone()];
    for h in hyps {
        let mut next = Vec::with_capacity(pieces.len() + 1);
        for p in pieces {
            let own = p.ineqs.iter().any(|f| f.hyperplane_key() == *h);
            if !own && p.is_cut_by(h) {
                for side in [h.clone(), h.neg()] {
                    let q = p.with(&[], &[side]);
                    if q.affine_dim() == k {
                        next.push(q);
                    }
                }
            } else {
                next.push(p);
            }
        }
        pieces = next;
    }
    pieces
}

/// Cells of both sets cut by the hyperplanes of the cells of the other set
/// they meet, together with the pairwise intersections of the supports.
pub fn common_refinement(x: &[HPoly], y: &[HPoly]) -> Vec<HPoly> {
    let keys = |c: &HPoly, other: &[HPoly]| -> Vec<Affine> {
        let set: BTreeSet<Affine> = other
            .iter()
            .filter(|o| !o.intersect(c).is_empty())
            .flat_map(|o| o.eqs.iter().chain(&o.ineqs).map(|h| h.hyperplane_key()))
            .filter(|h| !h.is_constant())
            .collect();
        set.into_iter().collect()
    };
    let mut out: BTreeSet<HPoly> = BTreeSet::new();
    for c in x {
        out.extend(cut_by(c, &keys(c, y)));
    }
    for c in y {
        out.extend(cut_by(c, &keys(c, x)));
    }
    for a in x {
        for b in y {
            let s = a.intersect(b);
            if !s.is_empty() {
                out.insert(s);
            }
        }
    }
    out.into_iter().collect()
}

/// Sums the values of overlapping `k`-cells and returns the canonical
/// representative: on each affine hull, the regions of the arrangement of
/// hyperplanes across which the value jumps, restricted to the support.
pub fn canonical_cells<T: FrameValue>(dim: usize, k: usize, cells: Vec<(HPoly, T)>) -> Vec<(HPoly, T)> {
    let mut groups: BTreeMap<Vec<Affine>, Vec<(HPoly, T)>> = BTreeMap::new();
    for (g, v) in cells {
        if g.affine_dim() != k as i64 || v.is_null() {
            continue;
        }
        groups.entry(g.eqs.clone()).or_default().push((g, v));
    }
    let mut out = Vec::new();
    for (eqs, group) in groups {
        let mut uniq: Vec<(HPoly, T)> = Vec::new();
        let mut pos: HashMap<HPoly, usize> = HashMap::new();
        for (g, v) in group {
            match pos.get(&g) {
                Some(&i) => uniq[i].1 = uniq[i].1.plus(&v),
                None => {
                    pos.insert(g.clone(), uniq.len());
                    uniq.push((g, v));
                }
            }
        }
        uniq.retain(|(_, v)| !v.is_null());
        if uniq.len() <= 1 {
            out.extend(uniq);
            continue;
        }
        let hyps: Vec<Affine> = uniq
            .iter()
            .flat_map(|(g, _)| g.ineqs.iter().map(|f| f.hyperplane_key()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<Affine, usize> = hyps.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect();
        let mut regions: BTreeMap<Vec<i8>, (HPoly, T)> = BTreeMap::new();
        for (g, v) in &uniq {
            for piece in cut_by(g, &hyps) {
                let sv = sign_vector(piece.relint_point(), &hyps);
                match regions.get_mut(&sv) {
                    Some(e) => e.1 = e.1.plus(v),
                    None => {
                        regions.insert(sv, (piece, v.clone()));
                    }
                }
            }
        }
        regions.retain(|_, (_, v)| !v.is_null());
        let mut essential: BTreeSet<usize> = BTreeSet::new();
        for (sv, (g, v)) in &regions {
            for f in &g.ineqs {
                let idx = index[&f.hyperplane_key()];
                let mut other = sv.clone();
                other[idx] = -other[idx];
                match regions.get(&other) {
                    Some((_, w)) if w == v => {}
                    _ => {
                        essential.insert(idx);
                    }
                }
            }
        }
        let ess: Vec<usize> = essential.into_iter().collect();
        let mut merged: BTreeMap<Vec<i8>, T> = BTreeMap::new();
        for (sv, (_, v)) in regions {
            let key: Vec<i8> = ess.iter().map(|&i| sv[i]).collect();
            merged.entry(key).or_insert(v);
        }
        for (key, v) in merged {
            let ineqs: Vec<Affine> = ess
                .iter()
                .zip(&key)
                .map(|(&i, &s)| if s > 0 { hyps[i].clone() } else { hyps[i].neg() })
                .collect();
            out.push((HPoly::new(dim, eqs.clone(), ineqs), v));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// A cell with its frame, stored relative to the canonical orientation of
/// the cell (the order of [`HPoly::tangent_basis`]).
#[derive(Clone, Debug, PartialEq)]
pub struct FramedCell {
    pub geom: HPoly,
    pub frame: CForm,
}

/// A `k`-dimensional polyhedral set in `C^n` with a chain of the given degree.
#[derive(Clone, Debug, PartialEq)]
pub struct FramedSet {
    pub n: usize,
    pub k: usize,
    pub degree: usize,
    pub cells: Vec<FramedCell>,
}

/// Outcome of [`FramedSet::is_etp`].
#[derive(Clone, Debug, PartialEq)]
pub struct EtpVerdict {
    pub ok: bool,
    pub witness: Option<String>,
}

impl FramedSet {
    pub fn new(n: usize, k: usize, degree: usize, cells: Vec<FramedCell>) -> Self {
        FramedSet { n, k, degree, cells }
    }

    /// A frame given relative to an arbitrary ordered basis of the tangent
    /// space, transported to the canonical orientation.
    pub fn cell_from_oriented(geom: HPoly, frame: CForm, basis: &[Vec<Rat>]) -> FramedCell {
        let canon = OrientationToken::new(geom.tangent_basis());
        let s = OrientationToken::new(basis.to_vec()).relative_sign(&canon);
        let frame = if s > 0 { frame } else { frame.neg() };
        FramedCell { geom, frame }
    }

    fn pairs(&self) -> Vec<(HPoly, CForm)> {
        self.cells.iter().map(|c| (c.geom.clone(), c.frame.clone())).collect()
    }

    /// Overlaps summed, zero frames dropped, canonical cell structure.
    pub fn canonicalize(&self) -> FramedSet {
        let cells = canonical_cells(2 * self.n, self.k, self.pairs())
            .into_iter()
            .map(|(geom, frame)| FramedCell { geom, frame })
            .collect();
        FramedSet::new(self.n, self.k, self.degree, cells)
    }

    pub fn support_is_empty(&self) -> bool {
        self.cells.iter().all(|c| c.frame.is_zero())
    }

    /// Boundary with the outward-first induced orientation.
    pub fn boundary(&self) -> FramedSet {
        if self.k == 0 {
            return FramedSet::new(self.n, 0, self.degree, Vec::new());
        }
        let mut facets = Vec::new();
        for c in self.canonicalize().cells {
            let b = OrientationToken::new(c.geom.tangent_basis());
            for (facet, f) in c.geom.facets() {
                let mut ind = vec![c.geom.outward(&f)];
                ind.extend(facet.tangent_basis());
                let s = b.relative_sign(&OrientationToken::new(ind));
                let frame = if s > 0 { c.frame.clone() } else { c.frame.neg() };
                facets.push((facet, frame));
            }
        }
        let cells = canonical_cells(2 * self.n, self.k - 1, facets)
            .into_iter()
            .map(|(geom, frame)| FramedCell { geom, frame })
            .collect();
        FramedSet::new(self.n, self.k - 1, self.degree, cells)
    }

    pub fn is_closed(&self) -> bool {
        self.boundary().support_is_empty()
    }

    /// Checks the reality and complex-vanishing conditions on every cell and
    /// closedness, reporting the first failure.
    pub fn is_etp(&self) -> Result<EtpVerdict> {
        if self.k < self.n {
            return Err(EtvError::Dimension(format!(
                "ETP needs k >= n, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        let fail = |w: String| {
            Ok(EtpVerdict {
                ok: false,
                witness: Some(w),
            })
        };
        if self.degree != 2 * self.n - self.k {
            return fail(format!(
                "frame degree {} differs from 2n - k = {}",
                self.degree,
                2 * self.n - self.k
            ));
        }
        for (i, c) in self.cells.iter().enumerate() {
            if c.geom.affine_dim() != self.k as i64 {
                return fail(format!("cell {i} has dimension {}", c.geom.affine_dim()));
            }
            let rep = analyze_frame(&c.frame, &c.geom.tangent_basis());
            if !rep.real {
                return fail(format!("cell {i}: restriction of the frame is not real"));
            }
            if !rep.kills_complex {
                return fail(format!(
                    "cell {i}: frame does not vanish on the maximal complex subspace"
                ));
            }
            if rep.degenerate && !rep.zero {
                return fail(format!("cell {i}: degenerate cell with nonzero frame"));
            }
        }
        let b = self.boundary();
        if let Some(c) = b.cells.iter().find(|c| !c.frame.is_zero()) {
            return fail(format!(
                "not closed: boundary frame {} on cell through {}",
                c.frame
                    .terms
                    .iter()
                    .map(|(i, v)| format!("({}) dz{i:?}", crate::scalar::fmt_crat(v)))
                    .collect::<Vec<_>>()
                    .join(" + "),
                crate::scalar::fmt_point(c.geom.relint_point())
            ));
        }
        Ok(EtpVerdict {
            ok: true,
            witness: None,
        })
    }
}

/// Positive unit frame of a nondegenerate tangent space: the complex form
/// restricting to the volume form of density one on the canonical quotient
/// basis and vanishing on the maximal complex subspace.
pub fn unit_frame(n: usize, basis: &[Vec<Rat>]) -> Option<CForm> {
    let k = basis.len();
    if k < n {
        return None;
    }
    let m = 2 * n - k;
    let cpart = max_complex_subspace(basis, 2 * n);
    let q = quotient_basis(basis, &cpart);
    if q.len() != m || cpart.complex_dim() + m != n {
        return None;
    }
    // complex basis of C^n: complex part first, then quotient representatives
    let cols: Vec<Vec<CRat>> = cpart.complex_basis.iter().chain(&q).map(|v| complexify(v)).collect();
    let mat: Vec<Vec<CRat>> = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let inv = inverse(&mat)?;
    let r = cpart.complex_dim();
    let mut psi = CForm::scalar(n, CRat::one());
    for row in inv.iter().skip(r) {
        psi = psi.wedge(&CForm::from_vector(row));
    }
    let mut full = cpart.real_basis();
    full.extend(q);
    let s = OrientationToken::new(basis.to_vec()).relative_sign(&OrientationToken::new(full));
    Some(if s > 0 { psi } else { psi.neg() })
}

/// A cell of an ETV with its weight relative to the unit frame.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedCell {
    pub geom: HPoly,
    pub weight: Rat,
}

/// Canonical representative of an exponential tropical variety: cells of
/// dimension `k` in `C^n` with nonzero weights (ETV dimension `k - n`).
#[derive(Clone, Debug, PartialEq)]
pub struct Etv {
    pub n: usize,
    pub k: usize,
    pub cells: Vec<WeightedCell>,
}

impl Etv {
    pub fn zero(n: usize, k: usize) -> Self {
        Etv {
            n,
            k,
            cells: Vec::new(),
        }
    }

    /// The whole space with frame `1`.
    pub fn full_space(n: usize) -> Self {
        Etv::from_weighted(n, 2 * n, vec![(HPoly::whole(2 * n), Rat::one())])
    }

    pub fn from_weighted(n: usize, k: usize, cells: Vec<(HPoly, Rat)>) -> Self {
        let cells = canonical_cells(2 * n, k, cells)
            .into_iter()
            .map(|(geom, weight)| WeightedCell { geom, weight })
            .collect();
        Etv { n, k, cells }
    }

    /// Validates the ETP conditions and converts frames to weights.
    pub fn from_framed(fs: &FramedSet) -> Result<Etv> {
        let v = fs.is_etp()?;
        if !v.ok {
            return Err(EtvError::NotEtp(v.witness.unwrap_or_default()));
        }
        Etv::from_framed_cells(fs)
    }

    /// Converts frames to weights checking the cell conditions only.
    pub fn from_framed_cells(fs: &FramedSet) -> Result<Etv> {
        let mut cells = Vec::new();
        for c in fs.canonicalize().cells {
            let rep = analyze_frame(&c.frame, &c.geom.tangent_basis());
            if !rep.real || !rep.kills_complex {
                return Err(EtvError::NotEtp(format!(
                    "frame conditions fail on cell through {}",
                    crate::scalar::fmt_point(c.geom.relint_point())
                )));
            }
            match rep.density {
                Some(d) => cells.push((c.geom, d)),
                None => {
                    return Err(EtvError::NotEtp(format!(
                        "degenerate cell with nonzero frame through {}",
                        crate::scalar::fmt_point(c.geom.relint_point())
                    )))
                }
            }
        }
        Ok(Etv::from_weighted(fs.n, fs.k, cells))
    }

    pub fn to_framed(&self) -> FramedSet {
        let cells = self
            .cells
            .iter()
            .map(|c| {
                let psi = unit_frame(self.n, &c.geom.tangent_basis()).expect("nondegenerate cell");
                FramedCell {
                    geom: c.geom.clone(),
                    frame: psi.scale(&CRat::real(c.weight.clone())),
                }
            })
            .collect();
        FramedSet::new(self.n, self.k, 2 * self.n - self.k, cells)
    }

    /// ETV dimension `k - n`.
    pub fn dimension(&self) -> i64 {
        self.k as i64 - self.n as i64
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    fn pairs(&self) -> Vec<(HPoly, Rat)> {
        self.cells.iter().map(|c| (c.geom.clone(), c.weight.clone())).collect()
    }

    pub fn add(&self, o: &Etv) -> Result<Etv> {
        if self.n != o.n || self.k != o.k {
            return Err(EtvError::Dimension(format!(
                "cannot add ETVs with (n, k) = ({}, {}) and ({}, {})",
                self.n, self.k, o.n, o.k
            )));
        }
        let mut cells = self.pairs();
        cells.extend(o.pairs());
        Ok(Etv::from_weighted(self.n, self.k, cells))
    }

    pub fn scale(&self, t: &Rat) -> Etv {
        if t.is_zero() {
            return Etv::zero(self.n, self.k);
        }
        Etv {
            n: self.n,
            k: self.k,
            cells: self
                .cells
                .iter()
                .map(|c| WeightedCell {
                    geom: c.geom.clone(),
                    weight: &c.weight * t,
                })
                .collect(),
        }
    }

    pub fn neg(&self) -> Etv {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, o: &Etv) -> Result<Etv> {
        self.add(&o.neg())
    }

    pub fn translate(&self, a: &[Rat]) -> Etv {
        let cells = self
            .cells
            .iter()
            .map(|c| (c.geom.translate(a), c.weight.clone()))
            .collect();
        Etv::from_weighted(self.n, self.k, cells)
    }

    /// Equal currents, decided by canonicalizing the difference.
    pub fn equivalent(&self, o: &Etv) -> bool {
        if self.n != o.n {
            return false;
        }
        if self.k != o.k {
            return self.is_zero() && o.is_zero();
        }
        self.sub(o).map(|d| d.is_zero()).unwrap_or(false)
    }

    pub fn cell_sign(&self, i: usize) -> i32 {
        crate::scalar::sign(&self.cells[i].weight)
    }

    pub fn is_positive(&self) -> bool {
        self.cells.iter().all(|c| !c.weight.is_negative())
    }

    /// `P = P+ - P-` with both parts positive; `P-` is a sum of whole affine
    /// hulls of negative cells with the least integer weights that suffice.
    pub fn split_positive(&self) -> (Etv, Etv) {
        let mut need: BTreeMap<Vec<Affine>, (HPoly, Rat)> = BTreeMap::new();
        for c in self.cells.iter().filter(|c| c.weight.is_negative()) {
            let w = -c.weight.clone();
            let e = need
                .entry(c.geom.eqs.clone())
                .or_insert_with(|| (c.geom.affine_hull(), Rat::zero()));
            if w > e.1 {
                e.1 = w;
            }
        }
        let minus: Vec<(HPoly, Rat)> = need
            .into_values()
            .map(|(h, w)| {
                let c = w.numer().div_ceil(w.denom());
                (h, Rat::from_integer(c))
            })
            .collect();
        let minus = Etv::from_weighted(self.n, self.k, minus);
        let plus = self.add(&minus).expect("same dimensions");
        (plus, minus)
    }

    /// Connected components under sharing a `(k-1)`-dimensional piece.
    pub fn irreducible_components(&self) -> Vec<Etv> {
        let m = self.cells.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        for i in 0..m {
            for j in i + 1..m {
                let s = self.cells[i].geom.intersect(&self.cells[j].geom);
                if s.affine_dim() == self.k as i64 - 1 {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        let mut comps: BTreeMap<usize, Vec<(HPoly, Rat)>> = BTreeMap::new();
        for i in 0..m {
            let r = find(&mut parent, i);
            comps
                .entry(r)
                .or_default()
                .push((self.cells[i].geom.clone(), self.cells[i].weight.clone()));
        }
        let mut out: Vec<Etv> = comps
            .into_values()
            .map(|c| Etv::from_weighted(self.n, self.k, c))
            .collect();
        out.sort_by(|a, b| a.cells[0].geom.cmp(&b.cells[0].geom));
        out
    }

    pub fn boundary(&self) -> FramedSet {
        self.to_framed().boundary()
    }

    /// `sum over cells of the integral of frame ∧ φ` over the part of each
    /// cell inside the window of `φ`.
    pub fn evaluate_current(&self, phi: &TestForm) -> Result<Rat> {
        let dim = 2 * self.n;
        if phi.dim != dim || phi.degree + 2 * self.n != 2 * self.k {
            return Err(EtvError::Dimension(format!(
                "test form of degree {} on R^{} cannot be paired with a {}-dimensional ETP in C^{}",
                phi.degree, phi.dim, self.k, self.n
            )));
        }
        let mut window = Vec::new();
        for (i, (lo, hi)) in phi.window.iter().enumerate() {
            let mut a = vec![Rat::zero(); dim];
            a[i] = Rat::one();
            window.push(Affine::new(a.clone(), -lo.clone()));
            a[i] = -Rat::one();
            window.push(Affine::new(a, hi.clone()));
        }
        let mut total = Rat::zero();
        let framed = self.to_framed();
        for c in &framed.cells {
            let region = c.geom.with(&[], &window);
            if region.affine_dim() != self.k as i64 {
                continue;
            }
            let basis = c.geom.tangent_basis();
            let coeffs: Vec<(Rat, &crate::current::Poly)> = phi
                .terms
                .iter()
                .map(|(idx, p)| {
                    let v = eval_wedge_mixed(&c.frame, &phi.basis_form(idx), &basis);
                    (v.re, p)
                })
                .collect();
            let verts = region.vertices();
            let space = c.geom.tangent_space();
            let v0 = verts[0].clone();
            let local: Vec<Vec<Rat>> = verts
                .iter()
                .map(|v| {
                    let d: Vec<Rat> = v.iter().zip(&v0).map(|(a, b)| a - b).collect();
                    space.coords(&d)
                })
                .collect();
            for simplex in triangulate(&local) {
                let base = &verts[simplex[0]];
                let dirs: Vec<Vec<Rat>> = simplex[1..]
                    .iter()
                    .map(|&i| verts[i].iter().zip(base).map(|(a, b)| a - b).collect())
                    .collect();
                let pts: Vec<Vec<Rat>> = simplex.iter().map(|&i| local[i].clone()).collect();
                let jac = crate::polyhedron::simplex_volume(&pts) * factorial(self.k);
                for (cj, p) in &coeffs {
                    if cj.is_zero() {
                        continue;
                    }
                    let g = p.substitute(base, &dirs);
                    total += &jac * cj * g.integrate_standard_simplex();
                }
            }
        }
        Ok(total)
    }
}

fn factorial(m: usize) -> Rat {
    (1..=m).fold(Rat::one(), |acc, i| acc * Rat::from_integer(i.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::current::Poly;
    use crate::scalar::{rat, ratio};

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn aff(a: &[i64], c: i64) -> Affine {
        Affine::new(v(a), rat(c))
    }

    /// {x1 = 0} in C^1 with frame -i dz (restriction dy).
    fn imaginary_axis() -> FramedSet {
        let geom = HPoly::new(2, vec![aff(&[1, 0], 0)], vec![]);
        let frame = CForm::blade(1, &[0], -CRat::i());
        FramedSet::new(1, 1, 1, vec![FramedCell { geom, frame }])
    }

    #[test]
    fn unit_frames_have_density_one() {
        let bases: Vec<Vec<Vec<Rat>>> = vec![
            vec![v(&[0, 1])],
            vec![v(&[1, 1])],
            vec![v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])],
            vec![v(&[0, 1, 0, 0]), v(&[0, 0, 0, 1])],
            vec![v(&[1, 0, 1, 0]), v(&[0, 1, 0, 1]), v(&[0, 0, 1, 2])],
        ];
        for b in bases {
            let n = b[0].len() / 2;
            let psi = unit_frame(n, &b).unwrap();
            let rep = analyze_frame(&psi, &b);
            assert!(rep.real && rep.kills_complex);
            assert_eq!(rep.density, Some(rat(1)));
        }
        assert!(unit_frame(2, &[v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0])]).is_none());
    }

    #[test]
    fn imaginary_axis_is_positive_etp() {
        let x = imaginary_axis();
        assert!(x.is_etp().unwrap().ok);
        let e = Etv::from_framed(&x).unwrap();
        assert_eq!(e.cells.len(), 1);
        assert_eq!(e.cells[0].weight, rat(1));
        assert!(e.is_positive() && !e.neg().is_positive());
        assert_eq!(e.to_framed().cells[0].frame, x.cells[0].frame);
    }

    #[test]
    fn etp_failures() {
        // i dx2 restricted to {y2 = 0} is imaginary
        let geom = HPoly::new(4, vec![aff(&[0, 0, 0, 1], 0)], vec![]);
        let frame = CForm::blade(2, &[1], CRat::i());
        let x = FramedSet::new(2, 3, 1, vec![FramedCell { geom, frame }]);
        let v = x.is_etp().unwrap();
        assert!(!v.ok && v.witness.unwrap().contains("not real"));
        // bounded segment is not closed
        let geom = HPoly::new(2, vec![aff(&[1, 0], 0)], vec![aff(&[0, 1], 0), aff(&[0, -1], 1)]);
        let x = FramedSet::new(
            1,
            1,
            1,
            vec![FramedCell {
                geom,
                frame: CForm::blade(1, &[0], -CRat::i()),
            }],
        );
        let v = x.is_etp().unwrap();
        assert!(!v.ok && v.witness.unwrap().contains("closed"));
        assert!(matches!(
            FramedSet::new(2, 1, 3, vec![]).is_etp(),
            Err(EtvError::Dimension(_))
        ));
    }

    #[test]
    fn boundary_of_segment() {
        let geom = HPoly::new(2, vec![aff(&[0, 1], 0)], vec![aff(&[1, 0], 0), aff(&[-1, 0], 1)]);
        let dy = CForm::blade(1, &[0], -CRat::i());
        let x = FramedSet::new(
            1,
            1,
            1,
            vec![FramedCell {
                geom,
                frame: dy.clone(),
            }],
        );
        let b = x.boundary();
        assert_eq!(b.cells.len(), 2);
        let at = |p: &[Rat]| b.cells.iter().find(|c| c.geom.contains(p)).unwrap().frame.clone();
        // outward at x = 1 is +e_x: induced orientation positive
        assert_eq!(at(&v(&[1, 0])), dy);
        assert_eq!(at(&v(&[0, 0])), dy.neg());
        assert!(b.boundary().support_is_empty());
    }

    #[test]
    fn canonicalize_merges_split_line() {
        let up = HPoly::new(2, vec![aff(&[1, 0], 0)], vec![aff(&[0, 1], 0)]);
        let down = HPoly::new(2, vec![aff(&[1, 0], 0)], vec![aff(&[0, -1], 0)]);
        let e = Etv::from_weighted(1, 1, vec![(up.clone(), rat(1)), (down.clone(), rat(1))]);
        assert_eq!(e.cells.len(), 1);
        assert_eq!(e.cells[0].geom.affine_dim(), 1);
        assert!(e.cells[0].geom.ineqs.is_empty());
        let z = Etv::from_weighted(1, 1, vec![(up.clone(), rat(0))]);
        assert!(z.is_zero());
        let c = Etv::from_weighted(1, 1, vec![(up.clone(), rat(2)), (down, rat(1))]);
        assert_eq!(c.cells.len(), 2);
        let again = Etv::from_weighted(1, 1, c.pairs());
        assert_eq!(again, c);
    }

    #[test]
    fn group_laws() {
        let line =
            |c: i64, w: i64| Etv::from_weighted(1, 1, vec![(HPoly::new(2, vec![aff(&[1, 0], c)], vec![]), rat(w))]);
        let p = line(0, 2);
        assert!(p.add(&p.neg()).unwrap().is_zero());
        assert_eq!(line(0, 2).add(&line(0, 3)).unwrap(), line(0, 5));
        let two = line(0, 1).add(&line(-1, 1)).unwrap();
        assert_eq!(two.cells.len(), 2);
        assert_eq!(two.irreducible_components().len(), 2);
        assert!(p.scale(&rat(0)).is_zero());
        assert_eq!(p.scale(&rat(1)), p);
        assert!(p.equivalent(&line(0, 2)) && !p.equivalent(&line(0, 4)));
        assert_eq!(p.translate(&v(&[3, 1])).translate(&v(&[-3, -1])), p);
    }

    #[test]
    fn split_positive_of_negative_ray_pair() {
        let e = Etv::from_weighted(
            1,
            1,
            vec![
                (
                    HPoly::new(2, vec![aff(&[1, 0], 0)], vec![aff(&[0, 1], 0)]),
                    ratio(-3, 2),
                ),
                (HPoly::new(2, vec![aff(&[1, 0], 0)], vec![aff(&[0, -1], 0)]), rat(1)),
            ],
        );
        let (p, m) = e.split_positive();
        assert!(p.is_positive() && m.is_positive());
        assert_eq!(m.cells[0].weight, rat(2));
        assert!(p.sub(&m).unwrap().equivalent(&e));
        let (p0, m0) = Etv::zero(1, 1).split_positive();
        assert!(p0.is_zero() && m0.is_zero());
    }

    #[test]
    fn current_of_imaginary_axis() {
        let e = Etv::from_framed(&imaginary_axis()).unwrap();
        let w = vec![(rat(-1), rat(1)), (rat(-1), rat(1))];
        let phi = TestForm::constant(2, w.clone(), rat(1));
        assert_eq!(e.evaluate_current(&phi).unwrap(), rat(2));
        let y2 = TestForm::new(2, 0, w.clone()).with_term(vec![], Poly::var(2, 1).mul(&Poly::var(2, 1)));
        assert_eq!(e.evaluate_current(&y2).unwrap(), ratio(2, 3));
        assert_eq!(Etv::zero(1, 1).evaluate_current(&phi).unwrap(), rat(0));
        let bad = TestForm::new(2, 1, w);
        assert!(e.evaluate_current(&bad).is_err());
    }
}
