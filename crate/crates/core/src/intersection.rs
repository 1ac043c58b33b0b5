//! Transversal and stable intersections, the product of ETVs and Bergman
//! fans.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{EtvError, Result};
use crate::exterior::analyze_frame;
use crate::framed::{cut_by, unit_frame, Etv, FramedCell, FramedSet};
use crate::polyhedron::{Affine, HPoly};
use crate::scalar::Rat;

/// Number of candidate shifts tried before giving up.
pub const DEFAULT_SHIFT_BUDGET: usize = 24;

/// Outcome of checking one pair of cells against a shift.
#[derive(Clone, Debug, PartialEq)]
pub struct PairCheck {
    pub a: usize,
    pub b: usize,
    pub intersects: bool,
    pub transversal: bool,
}

/// A shift `v` such that `X` and `v + Y` meet transversally, with the
/// evidence for every pair of cells.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftCertificate {
    pub shift: Vec<Rat>,
    /// Index of the accepted candidate.
    pub attempt: usize,
    pub pairs: Vec<PairCheck>,
}

/// The `j`-th candidate shift for a seed: zero first, then seeded integer
/// directions scaled by `2^-j`.
pub fn shift_candidate(seed: u64, dim: usize, j: usize) -> Vec<Rat> {
    if j == 0 {
        return vec![Rat::zero(); dim];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let eps = Rat::new(1.into(), num_bigint::BigInt::from(1u64 << j.min(62)));
    (0..dim)
        .map(|_| Rat::from_integer(rng.gen_range(-64i64..=64).into()) * &eps)
        .collect()
}

fn spans_full(a: &HPoly, b: &HPoly) -> bool {
    a.tangent_space().sum(&b.tangent_space()).dim() == a.dim
}

/// Empty intersection, or complementary tangent spaces with the pieces
/// meeting in dimension `d` through both relative interiors.
fn meets_generically(a: &HPoly, b: &HPoly, s: &HPoly, d: i64) -> bool {
    if s.is_empty() {
        return true;
    }
    let x = s.relint_point();
    spans_full(a, b) && s.affine_dim() == d && a.contains_in_relint(x) && b.contains_in_relint(x)
}

/// Checks every pair: intersecting pairs must have complementary tangent
/// spaces and meet in dimension `d` through both relative interiors.
pub fn check_shift(a: &[HPoly], b: &[HPoly], v: &[Rat], d: i64) -> (bool, Vec<PairCheck>) {
    let mut ok = true;
    let mut pairs = Vec::new();
    let shifted: Vec<HPoly> = b.iter().map(|c| c.translate(v)).collect();
    for (i, p) in a.iter().enumerate() {
        for (j, q) in shifted.iter().enumerate() {
            let s = p.intersect(q);
            let intersects = !s.is_empty();
            let transversal = meets_generically(p, q, &s, d);
            ok &= transversal;
            pairs.push(PairCheck {
                a: i,
                b: j,
                intersects,
                transversal,
            });
        }
    }
    (ok, pairs)
}

/// First certified candidate shift for the cell lists.
pub fn certify_shift(a: &[HPoly], b: &[HPoly], d: i64, seed: u64, budget: usize) -> Result<ShiftCertificate> {
    let dim = a.first().or(b.first()).map(|c| c.dim).unwrap_or(0);
    for j in 0..budget {
        let v = shift_candidate(seed, dim, j);
        let (ok, pairs) = check_shift(a, b, &v, d);
        if ok {
            return Ok(ShiftCertificate {
                shift: v,
                attempt: j,
                pairs,
            });
        }
    }
    Err(EtvError::ShiftBudget(budget))
}

fn geoms(x: &Etv) -> Vec<HPoly> {
    x.cells.iter().map(|c| c.geom.clone()).collect()
}

fn expected_dim(x: &Etv, y: &Etv) -> i64 {
    x.k as i64 + y.k as i64 - 2 * x.n as i64
}

/// A certified shift making `X` and `z + Y` transversal.
pub fn generic_shift(x: &Etv, y: &Etv, seed: u64) -> Result<ShiftCertificate> {
    certify_shift(&geoms(x), &geoms(y), expected_dim(x, y), seed, DEFAULT_SHIFT_BUDGET)
}

/// Whether every pair of meeting cells has tangent spaces spanning `R^{2n}`
/// and meets through both relative interiors.
pub fn transversal(x: &FramedSet, y: &FramedSet) -> bool {
    let d = x.k as i64 + y.k as i64 - 2 * x.n as i64;
    x.cells.iter().all(|a| {
        y.cells
            .iter()
            .all(|b| meets_generically(&a.geom, &b.geom, &a.geom.intersect(&b.geom), d))
    })
}

fn cell_sign(c: &FramedCell) -> Result<Option<i32>> {
    let rep = analyze_frame(&c.frame, &c.geom.tangent_basis());
    if rep.zero {
        return Ok(None);
    }
    match rep.sign() {
        Some(s) => Ok(Some(s)),
        None => Err(EtvError::NotEtp(format!(
            "frame conditions fail on cell through {}",
            crate::scalar::fmt_point(c.geom.relint_point())
        ))),
    }
}

/// `X ∩ Y` framed by `X_Δ ∧ Y_Λ`, oriented so that the product of two
/// frames of equal sign is positive.
pub fn transversal_intersection(x: &FramedSet, y: &FramedSet) -> Result<FramedSet> {
    if x.n != y.n {
        return Err(EtvError::Dimension("ambient dimensions differ".into()));
    }
    let n = x.n;
    if x.k + y.k < 2 * n {
        return Err(EtvError::Dimension(format!("dimensions {} + {} < {}", x.k, y.k, 2 * n)));
    }
    if !transversal(x, y) {
        return Err(EtvError::Invalid("polyhedral sets are not transversal".into()));
    }
    let d = x.k + y.k - 2 * n;
    let mut cells = Vec::new();
    for a in &x.cells {
        let Some(sa) = cell_sign(a)? else { continue };
        for b in &y.cells {
            let s = a.geom.intersect(&b.geom);
            if s.affine_dim() != d as i64 {
                continue;
            }
            let Some(sb) = cell_sign(b)? else { continue };
            let w = a.frame.wedge(&b.frame);
            let rep = analyze_frame(&w, &s.tangent_basis());
            if rep.zero {
                continue;
            }
            let Some(sw) = rep.sign() else {
                return Err(EtvError::NotEtp(format!(
                    "product frame fails the cell conditions at {}",
                    crate::scalar::fmt_point(s.relint_point())
                )));
            };
            let frame = if sa * sb * sw > 0 { w } else { w.neg() };
            cells.push(FramedCell { geom: s, frame });
        }
    }
    Ok(FramedSet::new(n, d, 2 * n - d, cells).canonicalize())
}

/// Product of ETVs represented transversally.
pub fn transversal_product(x: &Etv, y: &Etv) -> Result<Etv> {
    Etv::from_framed_cells(&transversal_intersection(&x.to_framed(), &y.to_framed())?)
}

/// A cell of the stable intersection with the top cells it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct StableSupportCell {
    pub theta: HPoly,
    pub parents: (usize, usize),
    pub weight: Rat,
}

struct LocalCone {
    cone: HPoly,
    weight: Rat,
}

fn local_fan(x: &Etv, e: &[Rat]) -> Vec<LocalCone> {
    x.cells
        .iter()
        .filter(|c| c.geom.contains(e))
        .map(|c| LocalCone {
            cone: c.geom.tangent_cone(e),
            weight: c.weight.clone(),
        })
        .collect()
}

/// Ratio `|ψ_K ∧ ψ_L| / ψ_V` on the intersection space `V`.
fn wedge_density(n: usize, k: &HPoly, l: &HPoly, v: &HPoly) -> Result<Rat> {
    let fk = unit_frame(n, &k.tangent_basis()).ok_or_else(|| degenerate(k))?;
    let fl = unit_frame(n, &l.tangent_basis()).ok_or_else(|| degenerate(l))?;
    let rep = analyze_frame(&fk.wedge(&fl), &v.tangent_basis());
    if rep.zero {
        return Ok(Rat::zero());
    }
    rep.density.map(|d| d.abs()).ok_or_else(|| {
        EtvError::NotEtp(format!(
            "intersection frame fails the cell conditions at {}",
            crate::scalar::fmt_point(v.relint_point())
        ))
    })
}

fn degenerate(c: &HPoly) -> EtvError {
    EtvError::NotEtp(format!(
        "degenerate cell through {}",
        crate::scalar::fmt_point(c.relint_point())
    ))
}

/// Frame at `e` of the stable intersection, by the fan displacement rule on
/// the localizations.
fn local_weight(x: &Etv, y: &Etv, e: &[Rat], d: i64, seed: u64) -> Result<Rat> {
    let kx = local_fan(x, e);
    let ky = local_fan(y, e);
    if kx.is_empty() || ky.is_empty() {
        return Ok(Rat::zero());
    }
    let a: Vec<HPoly> = kx.iter().map(|c| c.cone.clone()).collect();
    let b: Vec<HPoly> = ky.iter().map(|c| c.cone.clone()).collect();
    let cert = certify_shift(&a, &b, d, seed, DEFAULT_SHIFT_BUDGET)?;
    let mut total = Rat::zero();
    let mut space: Option<Vec<Affine>> = None;
    for p in cert.pairs.iter().filter(|p| p.intersects) {
        let (k, l) = (&kx[p.a], &ky[p.b]);
        let piece = k.cone.intersect(&l.cone.translate(&cert.shift));
        let lin = piece.affine_hull().translate(&neg(piece.relint_point())).eqs;
        match &space {
            None => space = Some(lin),
            Some(s) if *s != lin => {
                return Err(EtvError::Invalid(
                    "local intersection pieces are not parallel; inputs must be positive".into(),
                ))
            }
            _ => {}
        }
        total += &k.weight * &l.weight * wedge_density(x.n, &k.cone, &l.cone, &piece)?;
    }
    Ok(total)
}

fn neg(v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|x| -x).collect()
}

/// Cells of dimension `k + l - 2n` of the stable intersection, each with
/// the frame given by the localizations.
pub fn stable_support(x: &Etv, y: &Etv, seed: u64) -> Result<Vec<StableSupportCell>> {
    if x.n != y.n {
        return Err(EtvError::Dimension("ambient dimensions differ".into()));
    }
    let d = expected_dim(x, y);
    if d < 0 {
        return Ok(Vec::new());
    }
    let mut groups: BTreeMap<Vec<Affine>, Vec<(HPoly, usize, usize)>> = BTreeMap::new();
    for (i, a) in x.cells.iter().enumerate() {
        for (j, b) in y.cells.iter().enumerate() {
            let s = a.geom.intersect(&b.geom);
            if s.affine_dim() < d {
                continue;
            }
            for f in s.faces(d) {
                groups.entry(f.eqs.clone()).or_default().push((f, i, j));
            }
        }
    }
    let all: Vec<&HPoly> = x.cells.iter().chain(&y.cells).map(|c| &c.geom).collect();
    let mut out = Vec::new();
    for (_, cands) in groups {
        let mut hyps: BTreeSet<Affine> = BTreeSet::new();
        for (f, _, _) in &cands {
            hyps.extend(f.ineqs.iter().map(|h| h.hyperplane_key()));
            for c in all.iter().filter(|c| !c.intersect(f).is_empty()) {
                hyps.extend(c.ineqs.iter().chain(&c.eqs).map(|h| h.hyperplane_key()));
            }
        }
        let hyps: Vec<Affine> = hyps.into_iter().filter(|h| !h.is_constant()).collect();
        let mut seen: HashMap<HPoly, ()> = HashMap::new();
        for (f, i, j) in &cands {
            for piece in cut_by(f, &hyps) {
                if seen.insert(piece.clone(), ()).is_some() {
                    continue;
                }
                let w = local_weight(x, y, piece.relint_point(), d, seed)?;
                if !w.is_zero() {
                    out.push(StableSupportCell {
                        theta: piece,
                        parents: (*i, *j),
                        weight: w,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Stable intersection of positive ETVs.
pub fn stable_intersection(x: &Etv, y: &Etv, seed: u64) -> Result<Etv> {
    if !x.is_positive() || !y.is_positive() {
        return Err(EtvError::Invalid(
            "stable intersection needs positive inputs; use the product".into(),
        ));
    }
    let d = expected_dim(x, y);
    if d < x.n as i64 {
        return Ok(Etv::zero(x.n, d.max(0) as usize));
    }
    let cells = stable_support(x, y, seed)?
        .into_iter()
        .map(|c| (c.theta, c.weight))
        .collect();
    Ok(Etv::from_weighted(x.n, d as usize, cells))
}

/// Product of ETVs, extended bilinearly through positive splittings.
pub fn product(p: &Etv, q: &Etv, seed: u64) -> Result<Etv> {
    if p.n != q.n {
        return Err(EtvError::Dimension("ambient dimensions differ".into()));
    }
    let d = expected_dim(p, q);
    if d < p.n as i64 || p.is_zero() || q.is_zero() {
        return Ok(Etv::zero(p.n, d.max(0) as usize));
    }
    if p.is_positive() && q.is_positive() {
        return stable_intersection(p, q, seed);
    }
    let (p1, p2) = p.split_positive();
    let (q1, q2) = q.split_positive();
    let mut acc = Etv::zero(p.n, d as usize);
    for (a, b, s) in [(&p1, &q1, 1), (&p1, &q2, -1), (&p2, &q1, -1), (&p2, &q2, 1)] {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let t = stable_intersection(a, b, seed)?;
        acc = acc.add(&if s > 0 { t } else { t.neg() })?;
    }
    Ok(acc)
}

/// Recession fan: the `k`-dimensional recession cones carrying the summed
/// weights of the cells receding into them.
pub fn bergman_fan(p: &Etv) -> Etv {
    let cells = p
        .cells
        .iter()
        .filter_map(|c| {
            let r = c.geom.recession_cone();
            (r.affine_dim() == p.k as i64).then(|| (r, c.weight.clone()))
        })
        .collect();
    Etv::from_weighted(p.n, p.k, cells)
}

/// Whether every cell is a cone with apex at the origin.
pub fn is_homogeneous(p: &Etv) -> bool {
    p.cells
        .iter()
        .all(|c| c.geom.ineqs.iter().chain(&c.geom.eqs).all(|f| f.c.is_zero()))
}
