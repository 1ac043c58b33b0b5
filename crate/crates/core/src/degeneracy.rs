//! Degenerate families of vectors, the zero criterion for mixed
//! Monge-Ampère products and for mixed volumes.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{EtvError, Result};
use crate::exterior::{covector_to_complex, re_pairing_covector};
use crate::framed::Etv;
use crate::linalg::{rank, Subspace};
use crate::monge::{corner_locus, embed_real, linearity_complex, support_function, AffineFunc, PLFunction};
use crate::polyhedron::VPolytope;
use crate::scalar::{CRat, Rat};

/// Largest family handled by subset enumeration.
pub const MAX_ENUMERATION: usize = 12;

/// Finite sets `A_1..A_k` of vectors of `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFamily {
    pub n: usize,
    pub sets: Vec<Vec<Vec<CRat>>>,
}

/// `p` sets of the family lying in the `(p-1)`-dimensional span of `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracyWitness {
    pub p: usize,
    pub subset: Vec<usize>,
    pub h: Vec<Vec<CRat>>,
}

impl VectorFamily {
    pub fn new(n: usize, sets: Vec<Vec<Vec<CRat>>>) -> Result<Self> {
        if sets.iter().flatten().any(|v| v.len() != n) {
            return Err(EtvError::Dimension(format!("vectors must have {n} coordinates")));
        }
        Ok(VectorFamily { n, sets })
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    fn span_of(&self, idx: &[usize]) -> Subspace<CRat> {
        let vs: Vec<Vec<CRat>> = idx.iter().flat_map(|&i| self.sets[i].iter().cloned()).collect();
        Subspace::span(self.n, &vs)
    }
}

impl DegeneracyWitness {
    /// Every vector of every chosen set lies in `span(h)`, `h` is
    /// independent of size `p - 1`, and `1 <= p <= k`.
    pub fn validate(&self, f: &VectorFamily) -> bool {
        let distinct: BTreeSet<usize> = self.subset.iter().copied().collect();
        if self.p == 0
            || self.p > f.k()
            || self.subset.len() != self.p
            || distinct.len() != self.p
            || distinct.iter().any(|&i| i >= f.k())
            || self.h.len() + 1 != self.p
            || (!self.h.is_empty() && rank(&self.h) != self.h.len())
        {
            return false;
        }
        let hs = Subspace::span(f.n, &self.h);
        self.subset.iter().all(|&i| f.sets[i].iter().all(|v| hs.contains(v)))
    }
}

/// Representative of the complex line of a nonzero vector: first nonzero
/// coordinate scaled to one.
pub fn complex_line(v: &[CRat]) -> Vec<CRat> {
    match v.iter().find(|c| !c.is_zero()) {
        None => v.to_vec(),
        Some(c) => {
            let inv = CRat::one() / c.clone();
            v.iter().map(|x| x * &inv).collect()
        }
    }
}

/// Complex covectors `φ` with `Re <z, φ> = 0` on the tangent hyperplanes of
/// the cells, one per complex line.
pub fn hyperplane_equations(p: &Etv) -> Result<Vec<Vec<CRat>>> {
    if p.k + 1 != 2 * p.n {
        return Err(EtvError::Dimension(format!(
            "expected a hypersurface ({} cells), got {}-dimensional cells",
            2 * p.n - 1,
            p.k
        )));
    }
    let lines: BTreeSet<Vec<CRat>> = p
        .cells
        .iter()
        .map(|c| complex_line(&covector_to_complex(&c.geom.eqs[0].a)))
        .collect();
    Ok(lines.into_iter().collect())
}

/// Independent representatives for the given sets, by backtracking.
fn transversal_of(f: &VectorFamily, idx: &[usize]) -> Option<Vec<Vec<CRat>>> {
    fn rec(f: &VectorFamily, idx: &[usize], chosen: &mut Vec<Vec<CRat>>) -> bool {
        let Some((&i, rest)) = idx.split_first() else {
            return true;
        };
        for v in &f.sets[i] {
            chosen.push(v.clone());
            if rank(chosen) == chosen.len() && rec(f, rest, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    rec(f, idx, &mut chosen).then_some(chosen)
}

/// Some selection `a_i ∈ A_i` is linearly independent.
pub fn is_nondegenerate(f: &VectorFamily) -> bool {
    if f.k() > f.n {
        return false;
    }
    let all: Vec<usize> = (0..f.k()).collect();
    transversal_of(f, &all).is_some()
}

/// Witness of degeneracy following the constructive proof: a maximal
/// nondegenerate subfamily with independent representatives, an extra set
/// outside it, and repeated narrowing of the span of representatives.
pub fn degeneracy_witness(f: &VectorFamily) -> Result<DegeneracyWitness> {
    if f.k() == 0 {
        return Err(EtvError::Invalid("empty family".into()));
    }
    if f.k() <= f.n && is_nondegenerate(f) {
        return Err(EtvError::Invalid("family is nondegenerate".into()));
    }
    // maximal nondegenerate subfamily, greedily in index order
    let mut cbar: Vec<usize> = Vec::new();
    let mut reps: Vec<Vec<CRat>> = Vec::new();
    for i in 0..f.k() {
        let mut trial = cbar.clone();
        trial.push(i);
        if let Some(r) = transversal_of(f, &trial) {
            cbar = trial;
            reps = r;
        }
    }
    let extra = (0..f.k()).find(|i| !cbar.contains(i)).expect("family is degenerate");
    // positions in cbar whose sets lie in the span of their representatives
    let mut s: Vec<usize> = (0..cbar.len()).collect();
    loop {
        let q: Vec<Vec<CRat>> = s.iter().map(|&t| reps[t].clone()).collect();
        let qs = Subspace::span(f.n, &q);
        let next: Vec<usize> = s
            .iter()
            .copied()
            .filter(|&t| f.sets[cbar[t]].iter().all(|v| qs.contains(v)))
            .collect();
        if next.len() == s.len() {
            break;
        }
        s = next;
    }
    let mut subset: Vec<usize> = s.iter().map(|&t| cbar[t]).collect();
    subset.push(extra);
    let w = DegeneracyWitness {
        p: subset.len(),
        subset,
        h: s.iter().map(|&t| reps[t].clone()).collect(),
    };
    if !w.validate(f) {
        return Err(EtvError::Invalid(format!(
            "constructed witness failed validation: {w:?}"
        )));
    }
    Ok(w)
}

/// Smallest index set `I` with `dim span(∪ A_i) <= |I| - 1`, by enumeration.
pub fn witness_bruteforce(f: &VectorFamily) -> Result<Option<DegeneracyWitness>> {
    witness_bruteforce_capped(f, MAX_ENUMERATION)
}

/// [`witness_bruteforce`] refusing families with more than `cap` sets.
pub fn witness_bruteforce_capped(f: &VectorFamily, cap: usize) -> Result<Option<DegeneracyWitness>> {
    let k = f.k();
    if k > cap.min(24) {
        return Err(EtvError::ResourceCap(format!(
            "subset enumeration over {k} sets exceeds the cap of {cap}"
        )));
    }
    let mut masks: Vec<u32> = (1u32..(1 << k)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for m in masks {
        let idx: Vec<usize> = (0..k).filter(|i| m & (1 << i) != 0).collect();
        let span = f.span_of(&idx);
        if span.dim() < idx.len() {
            let mut h = Subspace::<CRat>::full(f.n).complete_basis(&span.basis);
            h.truncate(idx.len() - 1);
            return Ok(Some(DegeneracyWitness {
                p: idx.len(),
                subset: idx,
                h,
            }));
        }
    }
    Ok(None)
}

/// `H ⊂ C^n` (real basis in `R^{2n}`) and linear correctors `φ_i` with
/// `φ_i + h_i` invariant under translations by `H`, for the chosen functions.
#[derive(Clone, Debug, PartialEq)]
pub struct HDegeneracyCertificate {
    pub subset: Vec<usize>,
    pub h: Vec<Vec<Rat>>,
    pub correctors: Vec<AffineFunc>,
}

impl HDegeneracyCertificate {
    /// Checks the differentials of the pieces against `H` and the invariance
    /// at base points in every linearity cell.
    pub fn validate(&self, hs: &[PLFunction]) -> bool {
        let Some(first) = hs.first() else { return false };
        let n = first.n;
        if Subspace::span(2 * n, &self.h).dim() != self.h.len()
            || self.h.len() % 2 != 0
            || self.subset.len() + self.h.len() / 2 <= n
            || self.correctors.len() != self.subset.len()
        {
            return false;
        }
        for (&i, phi) in self.subset.iter().zip(&self.correctors) {
            let g = &hs[i];
            for cell in linearity_complex(g) {
                let e = cell.geom.relint_point();
                let base = g.eval(e) + phi.eval(e);
                for v in &self.h {
                    let moved: Vec<Rat> = e.iter().zip(v).map(|(a, b)| a + b).collect();
                    if g.eval(&moved) + phi.eval(&moved) != base {
                        return false;
                    }
                }
                let piece = g.plus[cell.plus].sub(&g.minus[cell.minus]).add(phi);
                let a = re_pairing_covector(&piece.w);
                if self
                    .h
                    .iter()
                    .any(|v| !a.iter().zip(v).map(|(x, y)| x * y).sum::<Rat>().is_zero())
                {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaZeroVerdict {
    pub zero: bool,
    pub family: VectorFamily,
    pub witness: Option<DegeneracyWitness>,
    pub certificate: Option<HDegeneracyCertificate>,
}

/// `dd^c h_1 ∧ ... ∧ dd^c h_k = 0` exactly when the hyperplane equations of
/// the corner loci form a degenerate family.
pub fn ma_zero_criterion(hs: &[PLFunction]) -> Result<MaZeroVerdict> {
    let Some(first) = hs.first() else {
        return Err(EtvError::Invalid("no functions given".into()));
    };
    let n = first.n;
    if hs.iter().any(|h| h.n != n) {
        return Err(EtvError::Dimension("functions on different spaces".into()));
    }
    if hs.iter().any(|h| !h.is_convex()) {
        return Err(EtvError::Invalid("the criterion needs convex functions".into()));
    }
    let sets = hs
        .iter()
        .map(|h| hyperplane_equations(&corner_locus(h)?))
        .collect::<Result<Vec<_>>>()?;
    let family = VectorFamily::new(n, sets)?;
    if is_nondegenerate(&family) {
        return Ok(MaZeroVerdict {
            zero: false,
            family,
            witness: None,
            certificate: None,
        });
    }
    let w = degeneracy_witness(&family)?;
    // H = common kernel of Re <., φ> and Re <., iφ> over φ in span(w.h)
    let mut functionals = Vec::new();
    for phi in &w.h {
        functionals.push(re_pairing_covector(phi));
        let iphi: Vec<CRat> = phi.iter().map(|c| c * &CRat::i()).collect();
        functionals.push(re_pairing_covector(&iphi));
    }
    let h = Subspace::kernel(2 * n, &functionals).basis;
    let correctors = w
        .subset
        .iter()
        .map(|&i| {
            let g = &hs[i];
            let cell = &linearity_complex(g)[0];
            let a = g.plus[cell.plus].sub(&g.minus[0]);
            AffineFunc::new(a.w.iter().map(|c| -c).collect(), Rat::zero())
        })
        .collect();
    let cert = HDegeneracyCertificate {
        subset: w.subset.clone(),
        h,
        correctors,
    };
    if !cert.validate(hs) {
        return Err(EtvError::Invalid(format!(
            "degeneracy certificate failed validation: {cert:?}"
        )));
    }
    Ok(MaZeroVerdict {
        zero: true,
        family,
        witness: Some(w),
        certificate: Some(cert),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MvZeroVerdict {
    pub zero: bool,
    pub subset: Vec<usize>,
    /// Basis of a `(p-1)`-dimensional subspace of `R^n` containing
    /// translates of the chosen bodies.
    pub subspace: Vec<Vec<Rat>>,
}

/// Mixed volume of polytopes in `R^n` vanishes exactly when some `p` of
/// them have translates in a common `(p-1)`-dimensional subspace.
pub fn mixed_volume_zero_criterion(bodies: &[VPolytope]) -> Result<MvZeroVerdict> {
    let n = bodies.len();
    if n == 0 || bodies.iter().any(|b| b.ambient() != n || !b.is_bounded()) {
        return Err(EtvError::Dimension(format!("expected {n} bounded polytopes in R^{n}")));
    }
    let hs = bodies
        .iter()
        .map(|b| support_function(&embed_real(b)))
        .collect::<Result<Vec<_>>>()?;
    let verdict = ma_zero_criterion(&hs)?;
    let Some(w) = verdict.witness else {
        return Ok(MvZeroVerdict {
            zero: false,
            subset: Vec::new(),
            subspace: Vec::new(),
        });
    };
    let subspace: Vec<Vec<Rat>> =
        w.h.iter()
            .map(|v| {
                if v.iter().any(|c| !c.im.is_zero()) {
                    Err(EtvError::Invalid("witness subspace is not real".into()))
                } else {
                    Ok(v.iter().map(|c| c.re.clone()).collect())
                }
            })
            .collect::<Result<_>>()?;
    let s = Subspace::span(n, &subspace);
    for &i in &w.subset {
        let b = &bodies[i];
        for v in &b.vertices {
            let d: Vec<Rat> = v.iter().zip(&b.vertices[0]).map(|(x, y)| x - y).collect();
            if !s.contains(&d) {
                return Err(EtvError::Invalid(format!("body {i} does not fit the witness subspace")));
            }
        }
    }
    Ok(MvZeroVerdict {
        zero: true,
        subset: w.subset,
        subspace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monge::mixed_volume_oracle;
    use crate::scalar::rat;

    fn e(n: usize, i: usize) -> Vec<CRat> {
        (0..n)
            .map(|j| if i == j { CRat::one() } else { CRat::zero() })
            .collect()
    }

    fn fam(n: usize, sets: &[&[usize]]) -> VectorFamily {
        VectorFamily::new(n, sets.iter().map(|s| s.iter().map(|&i| e(n, i)).collect()).collect()).unwrap()
    }

    #[test]
    fn nondegeneracy_examples() {
        assert!(is_nondegenerate(&fam(2, &[&[0], &[1]])));
        assert!(!is_nondegenerate(&fam(2, &[&[0], &[0]])));
        assert!(!is_nondegenerate(&fam(3, &[&[0, 1], &[0, 1], &[0, 1]])));
        assert!(!is_nondegenerate(&fam(1, &[&[0], &[0]])));
    }

    #[test]
    fn witnesses() {
        let f = fam(2, &[&[0], &[0]]);
        let w = degeneracy_witness(&f).unwrap();
        assert_eq!((w.p, w.subset.clone()), (2, vec![0, 1]));
        assert_eq!(Subspace::span(2, &w.h), Subspace::span(2, &[e(2, 0)]));
        let f = fam(3, &[&[0, 1], &[0, 1], &[0, 1]]);
        let w = degeneracy_witness(&f).unwrap();
        assert_eq!(w.p, 3);
        assert!(w.validate(&f));
        assert_eq!(witness_bruteforce(&f).unwrap().unwrap().p, 3);
        let f = fam(3, &[&[0], &[0, 1], &[0, 1]]);
        assert!(degeneracy_witness(&f).unwrap().validate(&f));
        assert_eq!(witness_bruteforce(&f).unwrap().unwrap().p, 3);
        assert!(degeneracy_witness(&fam(2, &[&[0], &[1]])).is_err());
        assert!(witness_bruteforce(&fam(2, &[&[0], &[1]])).unwrap().is_none());
    }

    #[test]
    fn hyperplane_equations_are_complex_lines() {
        let x = Etv::from_weighted(
            1,
            1,
            vec![(
                crate::polyhedron::HPoly::new(
                    2,
                    vec![crate::polyhedron::Affine::new(vec![rat(0), rat(1)], rat(0))],
                    vec![],
                ),
                rat(1),
            )],
        );
        assert_eq!(hyperplane_equations(&x).unwrap(), vec![e(1, 0)]);
        assert!(hyperplane_equations(&Etv::full_space(1)).is_err());
    }

    fn ramp(n: usize, w: Vec<CRat>) -> PLFunction {
        PLFunction::convex(n, vec![AffineFunc::zero(n), AffineFunc::new(w, rat(0))]).unwrap()
    }

    #[test]
    fn ma_criterion_examples() {
        let x1 = ramp(2, e(2, 0));
        let y1 = ramp(2, vec![-CRat::i(), CRat::zero()]);
        let x2 = ramp(2, e(2, 1));
        let v = ma_zero_criterion(&[x1.clone(), y1]).unwrap();
        assert!(v.zero);
        let cert = v.certificate.unwrap();
        // H is the z2 axis
        assert_eq!(Subspace::span(4, &cert.h).dim(), 2);
        assert!(cert.h.iter().all(|v| v[0].is_zero() && v[1].is_zero()));
        assert!(!ma_zero_criterion(&[x1.clone(), x2]).unwrap().zero);
        assert!(ma_zero_criterion(&[x1.clone(), x1]).unwrap().zero);
    }

    #[test]
    fn mv_criterion_examples() {
        let p = |pts: &[&[i64]]| VPolytope::new(pts.iter().map(|q| q.iter().map(|&x| rat(x)).collect()).collect());
        let s1 = p(&[&[0, 0], &[1, 1]]);
        let s2 = p(&[&[2, 0], &[3, 1]]);
        let v = mixed_volume_zero_criterion(&[s1.clone(), s2.clone()]).unwrap();
        assert!(v.zero && v.subset.len() == 2 && v.subspace.len() == 1);
        assert_eq!(mixed_volume_oracle(&[s1, s2]), rat(0));
        let sq = p(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert!(!mixed_volume_zero_criterion(&[sq.clone(), sq]).unwrap().zero);
        let tri = p(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let a = p(&[&[0, 0, 0], &[1, 2, 0]]);
        let b = p(&[&[1, 1, 1], &[3, 5, 1]]);
        let v = mixed_volume_zero_criterion(&[tri.clone(), a.clone(), b.clone()]).unwrap();
        assert!(v.zero && v.subset.len() == 2);
        assert_eq!(mixed_volume_oracle(&[tri, a, b]), rat(0));
    }
}
