//! Piecewise linear functions, corner loci, the `D_c` operator and mixed
//! Monge-Ampère products.

use num_traits::{One, Signed, Zero};

use crate::error::{EtvError, Result};
use crate::exterior::{complexify, dc_complex, re_pairing_covector, CForm};
use crate::framed::{Etv, FramedCell, FramedSet};
use crate::intersection::product;
use crate::linalg::det;
use crate::polyhedron::{Affine, HPoly, VPolytope};
use crate::scalar::{CRat, Rat};

/// Sign of `d^c` used throughout: `d^c g(ξ) = dg(Jξ)`.
pub const DC_SIGN: i32 = 1;

/// `z -> Re <z, w> + c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineFunc {
    pub w: Vec<CRat>,
    pub c: Rat,
}

impl AffineFunc {
    pub fn new(w: Vec<CRat>, c: Rat) -> Self {
        AffineFunc { w, c }
    }

    pub fn zero(n: usize) -> Self {
        AffineFunc::new(vec![CRat::zero(); n], Rat::zero())
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// As an affine functional on `R^{2n}`.
    pub fn affine(&self) -> Affine {
        Affine::new(re_pairing_covector(&self.w), self.c.clone())
    }

    pub fn eval(&self, z: &[Rat]) -> Rat {
        self.affine().eval(z)
    }

    pub fn add(&self, o: &AffineFunc) -> AffineFunc {
        AffineFunc::new(self.w.iter().zip(&o.w).map(|(a, b)| a + b).collect(), &self.c + &o.c)
    }

    pub fn sub(&self, o: &AffineFunc) -> AffineFunc {
        AffineFunc::new(self.w.iter().zip(&o.w).map(|(a, b)| a - b).collect(), &self.c - &o.c)
    }
}

/// `max(plus) - max(minus)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PLFunction {
    pub n: usize,
    pub plus: Vec<AffineFunc>,
    pub minus: Vec<AffineFunc>,
}

fn dedup(mut v: Vec<AffineFunc>) -> Vec<AffineFunc> {
    let mut seen = std::collections::HashSet::new();
    v.retain(|f| seen.insert(f.clone()));
    v
}

impl PLFunction {
    pub fn new(n: usize, plus: Vec<AffineFunc>, minus: Vec<AffineFunc>) -> Result<Self> {
        if plus.is_empty() || minus.is_empty() {
            return Err(EtvError::Invalid("both piece lists must be nonempty".into()));
        }
        if plus.iter().chain(&minus).any(|f| f.n() != n) {
            return Err(EtvError::Dimension(format!("pieces must have {n} coordinates")));
        }
        Ok(PLFunction {
            n,
            plus: dedup(plus),
            minus: dedup(minus),
        })
    }

    /// `max(plus)`.
    pub fn convex(n: usize, plus: Vec<AffineFunc>) -> Result<Self> {
        PLFunction::new(n, plus, vec![AffineFunc::zero(n)])
    }

    pub fn eval(&self, z: &[Rat]) -> Rat {
        max_of(&self.plus, z) - max_of(&self.minus, z)
    }

    pub fn is_convex(&self) -> bool {
        self.minus.len() == 1
    }

    pub fn add(&self, o: &PLFunction) -> PLFunction {
        let sums = |a: &[AffineFunc], b: &[AffineFunc]| {
            let mut out = Vec::new();
            for f in a {
                for g in b {
                    out.push(f.add(g));
                }
            }
            dedup(out)
        };
        PLFunction {
            n: self.n,
            plus: sums(&self.plus, &o.plus),
            minus: sums(&self.minus, &o.minus),
        }
    }

    pub fn neg(&self) -> PLFunction {
        PLFunction {
            n: self.n,
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    /// `h + g` for affine `g`.
    pub fn add_affine(&self, g: &AffineFunc) -> PLFunction {
        PLFunction {
            n: self.n,
            plus: self.plus.iter().map(|f| f.add(g)).collect(),
            minus: self.minus.clone(),
        }
    }
}

fn max_of(fs: &[AffineFunc], z: &[Rat]) -> Rat {
    fs.iter().map(|f| f.eval(z)).max().unwrap()
}

/// Full-dimensional regions where each piece is the maximum.
pub fn max_regions(pieces: &[AffineFunc], dim: usize) -> Vec<(HPoly, usize)> {
    let aff: Vec<Affine> = pieces.iter().map(|f| f.affine()).collect();
    let mut out = Vec::new();
    for (i, fi) in aff.iter().enumerate() {
        let ineqs: Vec<Affine> = aff
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, fj)| fi.sub(fj))
            .collect();
        let r = HPoly::new(dim, Vec::new(), ineqs);
        if r.affine_dim() == dim as i64 {
            out.push((r, i));
        }
    }
    out
}

/// A full-dimensional cell with the pieces active on it.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearityCell {
    pub geom: HPoly,
    pub plus: usize,
    pub minus: usize,
}

/// Overlay of the maximum regions of both families.
pub fn linearity_complex(h: &PLFunction) -> Vec<LinearityCell> {
    let dim = 2 * h.n;
    let plus = max_regions(&h.plus, dim);
    let minus = max_regions(&h.minus, dim);
    let mut out = Vec::new();
    for (a, i) in &plus {
        for (b, j) in &minus {
            let s = a.intersect(b);
            if s.affine_dim() == dim as i64 {
                out.push(LinearityCell {
                    geom: s,
                    plus: *i,
                    minus: *j,
                });
            }
        }
    }
    out
}

/// Support function `z -> max Re <z, w>` over the vertices of `gamma`.
pub fn support_function(gamma: &VPolytope) -> Result<PLFunction> {
    if !gamma.is_bounded() || gamma.ambient() % 2 != 0 {
        return Err(EtvError::Invalid(
            "support functions need a bounded polytope in the complex dual space".into(),
        ));
    }
    let n = gamma.ambient() / 2;
    let plus = gamma
        .vertices
        .iter()
        .map(|v| AffineFunc::new(complexify(v), Rat::zero()))
        .collect();
    PLFunction::convex(n, plus)
}

/// Index of a piece that is maximal on the whole cell, if any.
fn active_piece(pieces: &[AffineFunc], cell: &HPoly) -> Option<usize> {
    let e = cell.relint_point();
    let best = max_of(pieces, e);
    let i = pieces.iter().position(|f| f.eval(e) == best)?;
    let fi = pieces[i].affine();
    let ok = pieces.iter().enumerate().all(|(j, fj)| {
        j == i
            || match cell.range(&fi.sub(&fj.affine())).0 {
                Some(lo) => !lo.is_negative(),
                None => false,
            }
    });
    ok.then_some(i)
}

/// Affine function agreeing with `h` on the cell.
pub fn affine_on(h: &PLFunction, cell: &HPoly) -> Option<AffineFunc> {
    let i = active_piece(&h.plus, cell)?;
    let j = active_piece(&h.minus, cell)?;
    Some(h.plus[i].sub(&h.minus[j]))
}

fn dc_on_cells(h: &PLFunction, n: usize, k: usize, cells: Vec<(HPoly, CForm)>, dc_sign: i32) -> Result<Etv> {
    if k == 0 {
        return Ok(Etv::zero(n, 0));
    }
    let mut y = Vec::with_capacity(cells.len());
    for (geom, frame) in cells {
        let g = affine_on(h, &geom).ok_or_else(|| {
            EtvError::Invalid(format!(
                "function is not affine on the cell through {}",
                crate::scalar::fmt_point(geom.relint_point())
            ))
        })?;
        let frame = dc_complex(&g.w, dc_sign).wedge(&frame);
        y.push(FramedCell { geom, frame });
    }
    let y = FramedSet::new(n, k, 2 * n - k + 1, y);
    Etv::from_framed_cells(&y.boundary())
}

/// `D_c(h X) = ∂(d^c G ∧ X)` for `h` affine on every cell of `X`.
pub fn dc_weighted(h: &PLFunction, x: &Etv) -> Result<Etv> {
    dc_weighted_signed(h, x, DC_SIGN)
}

/// [`dc_weighted`] with an explicit sign of `d^c`.
pub fn dc_weighted_signed(h: &PLFunction, x: &Etv, dc_sign: i32) -> Result<Etv> {
    check_n(h, x)?;
    let cells = x.to_framed().cells.into_iter().map(|c| (c.geom, c.frame)).collect();
    dc_on_cells(h, x.n, x.k, cells, dc_sign)
}

/// `D_c(h X)` after refining `X` by the linearity cells of `h`.
pub fn dc_refined(h: &PLFunction, x: &Etv) -> Result<Etv> {
    dc_refined_signed(h, x, DC_SIGN)
}

pub fn dc_refined_signed(h: &PLFunction, x: &Etv, dc_sign: i32) -> Result<Etv> {
    check_n(h, x)?;
    let regions = linearity_complex(h);
    let mut cells = Vec::new();
    for c in x.to_framed().cells {
        // a cell inside a wall between regions meets several of them fully
        let mut seen = std::collections::BTreeSet::new();
        for r in &regions {
            let s = c.geom.intersect(&r.geom);
            if s.affine_dim() == x.k as i64 && seen.insert(s.clone()) {
                cells.push((s, c.frame.clone()));
            }
        }
    }
    dc_on_cells(h, x.n, x.k, cells, dc_sign)
}

fn check_n(h: &PLFunction, x: &Etv) -> Result<()> {
    if h.n != x.n {
        return Err(EtvError::Dimension(format!(
            "function on C^{} applied to an ETV in C^{}",
            h.n, x.n
        )));
    }
    Ok(())
}

/// Corner locus `dd^c h`, an ETV of dimension `n - 1`.
pub fn corner_locus(h: &PLFunction) -> Result<Etv> {
    dc_refined(h, &Etv::full_space(h.n))
}

/// `dd^c h_1 ∧ ... ∧ dd^c h_k` as a product of corner loci.
pub fn mixed_ma(hs: &[PLFunction], seed: u64) -> Result<Etv> {
    let Some(first) = hs.first() else {
        return Err(EtvError::Invalid("no functions given".into()));
    };
    let n = first.n;
    if hs.iter().any(|h| h.n != n) {
        return Err(EtvError::Dimension("functions on different spaces".into()));
    }
    if hs.len() > n {
        return Ok(Etv::zero(n, 0));
    }
    let mut acc = corner_locus(first)?;
    for h in &hs[1..] {
        if acc.is_zero() {
            return Ok(Etv::zero(n, 2 * n - hs.len()));
        }
        acc = product(&acc, &corner_locus(h)?, seed)?;
    }
    Ok(acc)
}

/// A polytope of `R^n` placed in the real part of the dual space.
pub fn embed_real(body: &VPolytope) -> VPolytope {
    VPolytope::new(
        body.vertices
            .iter()
            .map(|v| v.iter().flat_map(|a| [a.clone(), Rat::zero()]).collect())
            .collect(),
    )
}

fn factorial(m: usize) -> Rat {
    (1..=m).fold(Rat::one(), |acc, i| acc * Rat::from_integer(i.into()))
}

/// Mixed volume of polytopes in the real dual space, read off the mass of
/// `dd^c h_{A_1} ∧ ... ∧ dd^c h_{A_n}` on `im C^n`. Bodies in `R^n` are
/// embedded first.
pub fn mixed_volume_via_ma(bodies: &[VPolytope], seed: u64) -> Result<Rat> {
    let n = bodies.len();
    let bodies: Vec<VPolytope> = bodies
        .iter()
        .map(|b| if b.ambient() == n { embed_real(b) } else { b.clone() })
        .collect();
    for b in &bodies {
        if b.ambient() != 2 * n
            || b.vertices
                .iter()
                .any(|v| v.iter().skip(1).step_by(2).any(|x| !x.is_zero()))
        {
            return Err(EtvError::Invalid(format!(
                "bodies must lie in the real part of the dual of C^{n}"
            )));
        }
    }
    let hs = bodies.iter().map(support_function).collect::<Result<Vec<_>>>()?;
    let p = mixed_ma(&hs, seed)?;
    let mut total = Rat::zero();
    for c in &p.cells {
        let tb = c.geom.tangent_basis();
        if tb.iter().any(|v| v.iter().step_by(2).any(|x| !x.is_zero())) {
            return Err(EtvError::Invalid(
                "top product is not supported on translates of im C^n".into(),
            ));
        }
        // Euclidean density of the unit frame against the y-coordinates
        let m: Vec<Vec<Rat>> = tb
            .iter()
            .map(|v| v.iter().skip(1).step_by(2).cloned().collect())
            .collect();
        total += &c.weight / det(&m).abs();
    }
    Ok(total / factorial(n))
}

/// `MV(A_1..A_n) = 1/n! sum_S (-1)^{n-|S|} Vol(sum_{i in S} A_i)`.
pub fn mixed_volume_oracle(bodies: &[VPolytope]) -> Rat {
    let n = bodies.len();
    let mut total = Rat::zero();
    for mask in 1u32..(1 << n) {
        let mut sum: Option<VPolytope> = None;
        for (i, b) in bodies.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum = Some(match sum {
                    None => b.clone(),
                    Some(s) => s.minkowski_sum(b),
                });
            }
        }
        let v = sum.unwrap().volume();
        if (n - mask.count_ones() as usize) % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    total / factorial(n)
}

/// Invariance under translations along `im C^n`.
pub fn is_r_generated(p: &Etv) -> bool {
    (0..p.n).all(|j| {
        let mut e = vec![Rat::zero(); 2 * p.n];
        e[2 * j + 1] = Rat::one();
        p.translate(&e).equivalent(p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual_fan::dual_fan_etp;
    use crate::scalar::{rat, ratio};

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn cv(xs: &[(i64, i64)]) -> Vec<CRat> {
        xs.iter().map(|&(a, b)| CRat::new(rat(a), rat(b))).collect()
    }

    /// `max(0, Re <z, w>)`
    fn ramp(w: &[(i64, i64)]) -> PLFunction {
        let n = w.len();
        PLFunction::convex(n, vec![AffineFunc::zero(n), AffineFunc::new(cv(w), rat(0))]).unwrap()
    }

    fn poly(pts: &[&[i64]]) -> VPolytope {
        VPolytope::new(pts.iter().map(|p| v(p)).collect())
    }

    #[test]
    fn linearity_complex_examples() {
        assert_eq!(linearity_complex(&ramp(&[(1, 0)])).len(), 2);
        let aff = PLFunction::convex(1, vec![AffineFunc::new(cv(&[(1, 0)]), rat(0))]).unwrap();
        assert_eq!(linearity_complex(&aff).len(), 1);
        let h = PLFunction::new(
            1,
            ramp(&[(1, 0)]).plus,
            vec![AffineFunc::zero(1), AffineFunc::new(cv(&[(0, -1)]), rat(0))],
        )
        .unwrap();
        assert_eq!(linearity_complex(&h).len(), 4);
    }

    #[test]
    fn corner_locus_of_ramp() {
        let c = corner_locus(&ramp(&[(1, 0)])).unwrap();
        assert_eq!(c.cells.len(), 1);
        assert_eq!(c.cells[0].weight, rat(1));
        assert!(c.cells[0].geom.contains(&v(&[0, 4])));
        let seg = dual_fan_etp(&poly(&[&[0, 0], &[1, 0]]), 1).unwrap().result;
        assert!(c.equivalent(&seg));
        let aff = PLFunction::convex(1, vec![AffineFunc::new(cv(&[(2, 1)]), rat(3))]).unwrap();
        assert!(corner_locus(&aff).unwrap().is_zero());
    }

    #[test]
    fn corner_locus_of_square_support() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let c = corner_locus(&support_function(&sq).unwrap()).unwrap();
        assert!(c.equivalent(&dual_fan_etp(&sq, 1).unwrap().result));
        assert!(c.is_positive());
    }

    #[test]
    fn dc_of_support_times_fan() {
        let g = poly(&[&[0, 0], &[1, 0]]);
        let h = support_function(&g).unwrap();
        let x2 = dual_fan_etp(&g, 2).unwrap().result;
        let x1 = dual_fan_etp(&g, 1).unwrap().result;
        assert!(dc_refined(&h, &x2).unwrap().equivalent(&x1));
        assert!(dc_refined_signed(&h, &x2, -1).unwrap().equivalent(&x1.neg()));
        // h is not affine on the whole plane
        assert!(dc_weighted(&h, &x2).is_err());
        let constant = PLFunction::convex(1, vec![AffineFunc::new(cv(&[(0, 0)]), rat(5))]).unwrap();
        assert!(dc_weighted(&constant, &x1).unwrap().is_zero());
        let lin = PLFunction::convex(1, vec![AffineFunc::new(cv(&[(1, 2)]), rat(5))]).unwrap();
        assert!(dc_weighted(&lin, &x1).unwrap().is_zero());
    }

    #[test]
    fn mixed_ma_examples() {
        let p = mixed_ma(&[ramp(&[(1, 0), (0, 0)]), ramp(&[(0, 0), (1, 0)])], 1).unwrap();
        assert_eq!(p.k, 2);
        assert_eq!(p.cells.len(), 1);
        assert_eq!(p.cells[0].weight, rat(1));
        let z = mixed_ma(&[ramp(&[(1, 0), (0, 0)]), ramp(&[(0, -1), (0, 0)])], 1).unwrap();
        assert!(z.is_zero());
        let aff = PLFunction::convex(2, vec![AffineFunc::new(cv(&[(1, 0), (0, 3)]), rat(0))]).unwrap();
        assert!(mixed_ma(&[ramp(&[(1, 0), (0, 0)]), aff], 1).unwrap().is_zero());
    }

    #[test]
    fn mixed_volumes() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let e1 = poly(&[&[0, 0], &[1, 0]]);
        let e2 = poly(&[&[0, 0], &[0, 1]]);
        assert_eq!(mixed_volume_oracle(&[sq.clone(), sq.clone()]), rat(1));
        assert_eq!(mixed_volume_oracle(&[e1.clone(), e2.clone()]), ratio(1, 2));
        assert_eq!(mixed_volume_oracle(&[e1.clone(), e1.clone()]), rat(0));
        let em = |b: &VPolytope| embed_real(b);
        assert_eq!(mixed_volume_via_ma(&[em(&sq), em(&sq)], 1).unwrap(), rat(1));
        assert_eq!(mixed_volume_via_ma(&[em(&e1), em(&e2)], 1).unwrap(), ratio(1, 2));
        assert_eq!(mixed_volume_via_ma(&[em(&e1), em(&e1)], 1).unwrap(), rat(0));
        let seg = poly(&[&[0], &[3]]);
        assert_eq!(mixed_volume_via_ma(&[em(&seg)], 1).unwrap(), rat(3));
        assert!(mixed_volume_via_ma(&[poly(&[&[0, 0], &[0, 1]])], 1).is_err());
    }

    #[test]
    fn r_generated() {
        assert!(is_r_generated(&corner_locus(&ramp(&[(1, 0)])).unwrap()));
        assert!(!is_r_generated(&corner_locus(&ramp(&[(0, -1)])).unwrap()));
        assert!(is_r_generated(&Etv::zero(1, 1)));
    }
}
