//! Exterior algebra over `R^{2n}` and `C^n`, the complex structure, the ring
//! homomorphism from real to complex multivectors, and orientation bookkeeping.
//!
//! Real coordinates are ordered `(x1, y1, ..., xn, yn)` with `z_j = x_j + i y_j`.
//! The same layout `(a1, b1, ...)` with `w_j = a_j + i b_j` is used for the
//! dual space, paired through `Re <z, w> = sum_j x_j a_j - y_j b_j`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::linalg::{det, rank, Subspace};
use crate::scalar::{sign, CRat, Field, Rat};

/// Sparse alternating tensor: strictly increasing index tuples to coefficients.
/// Used both for forms and for multivectors.
#[derive(Clone, PartialEq, Debug)]
pub struct Ext<F: Field> {
    pub dim: usize,
    pub degree: usize,
    pub terms: BTreeMap<Vec<usize>, F>,
}

pub type RForm = Ext<Rat>;
pub type CForm = Ext<CRat>;

/// Sign of the permutation sorting `idx`, or `None` when an index repeats.
fn sort_sign(idx: &mut [usize]) -> Option<i32> {
    let mut s = 1;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                s = -s;
            } else if idx[j] == idx[j + 1] {
                return None;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(s)
}

impl<F: Field> Ext<F> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Ext {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The degree-0 element `c`.
    pub fn scalar(dim: usize, c: F) -> Self {
        let mut e = Ext::zero(dim, 0);
        e.insert(Vec::new(), c);
        e
    }

    /// Basis blade for an arbitrary index list (sign-normalized).
    pub fn blade(dim: usize, idx: &[usize], c: F) -> Self {
        let mut e = Ext::zero(dim, idx.len());
        let mut v = idx.to_vec();
        if let Some(s) = sort_sign(&mut v) {
            e.insert(v, if s > 0 { c } else { c.fneg() });
        }
        e
    }

    pub fn from_vector(v: &[F]) -> Self {
        let mut e = Ext::zero(v.len(), 1);
        for (i, c) in v.iter().enumerate() {
            e.insert(vec![i], c.clone());
        }
        e
    }

    fn insert(&mut self, key: Vec<usize>, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(old) => {
                let s = old.fadd(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.degree, o.degree);
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.insert(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&F::one().fneg()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Ext::zero(self.dim, self.degree);
        for (k, v) in &self.terms {
            out.insert(k.clone(), v.fmul(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().fneg())
    }

    /// Exterior product; exceeding the ambient dimension yields zero.
    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = Ext::zero(self.dim, self.degree + o.degree);
        if self.degree + o.degree > self.dim {
            return out;
        }
        for (ka, va) in &self.terms {
            for (kb, vb) in &o.terms {
                let mut idx: Vec<usize> = ka.iter().chain(kb).copied().collect();
                if let Some(s) = sort_sign(&mut idx) {
                    let c = va.fmul(vb);
                    out.insert(idx, if s > 0 { c } else { c.fneg() });
                }
            }
        }
        out
    }

    /// Evaluates a form on `degree` vectors given in the same coordinates.
    pub fn eval(&self, vectors: &[Vec<F>]) -> F {
        assert_eq!(vectors.len(), self.degree);
        let mut acc = F::zero();
        for (k, c) in &self.terms {
            let m: Vec<Vec<F>> = vectors
                .iter()
                .map(|v| k.iter().map(|&i| v[i].clone()).collect())
                .collect();
            acc = acc.fadd(&c.fmul(&det(&m)));
        }
        acc
    }
}

impl RForm {
    pub fn to_complex(&self) -> CForm {
        let mut out = CForm::zero(self.dim, self.degree);
        for (k, v) in &self.terms {
            out.insert(k.clone(), CRat::real(v.clone()));
        }
        out
    }
}

/// All `s`-element subsets of `0..k` in lexicographic order.
pub fn subsets(k: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            if k - i < s - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, k, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if s <= k {
        rec(0, k, s, &mut Vec::new(), &mut out);
    }
    out
}

/// Complex coordinates `z_j = x_j + i y_j` of a real vector.
pub fn complexify(v: &[Rat]) -> Vec<CRat> {
    v.chunks(2).map(|p| CRat::new(p[0].clone(), p[1].clone())).collect()
}

/// Real coordinates of a complex vector.
pub fn realify(z: &[CRat]) -> Vec<Rat> {
    z.iter().flat_map(|c| [c.re.clone(), c.im.clone()]).collect()
}

/// Multiplication by `i`: `(x, y) -> (-y, x)` on every complex pair.
pub fn apply_j(v: &[Rat]) -> Vec<Rat> {
    v.chunks(2).flat_map(|p| [-p[1].clone(), p[0].clone()]).collect()
}

/// Real covector of `z -> Re <z, w>`, i.e. `(a1, -b1, a2, -b2, ...)`.
pub fn re_pairing_covector(w: &[CRat]) -> Vec<Rat> {
    w.iter().flat_map(|c| [c.re.clone(), -c.im.clone()]).collect()
}

/// Inverse of [`re_pairing_covector`].
pub fn covector_to_complex(a: &[Rat]) -> Vec<CRat> {
    a.chunks(2).map(|p| CRat::new(p[0].clone(), -p[1].clone())).collect()
}

/// Bilinear pairing `<z, w> = sum z_j w_j` of a real vector with a complex covector.
pub fn pairing(z: &[Rat], w: &[CRat]) -> CRat {
    complexify(z)
        .iter()
        .zip(w)
        .fold(CRat::zero(), |acc, (a, b)| &acc + &(a * b))
}

/// Ring homomorphism from real multivectors on the dual space (coordinates
/// `(a_j, b_j)`) to complex multivectors: `e_{a_j} -> f_j`, `e_{b_j} -> i f_j`.
pub fn rho(m: &RForm) -> CForm {
    let n = m.dim / 2;
    let mut out = CForm::zero(n, m.degree);
    'terms: for (k, c) in &m.terms {
        let mut idx = Vec::with_capacity(k.len());
        let mut coeff = CRat::real(c.clone());
        for &i in k {
            let j = i / 2;
            if idx.last() == Some(&j) {
                continue 'terms;
            }
            idx.push(j);
            if i % 2 == 1 {
                coeff = &coeff * &CRat::i();
            }
        }
        out.insert(idx, coeff);
    }
    out
}

/// Real covector `xi -> dg(J xi)` of the affine function `Re <z, w> + c`.
pub fn dc_affine(w: &[CRat]) -> RForm {
    let cov: Vec<Rat> = w.iter().flat_map(|c| [-c.im.clone(), -c.re.clone()]).collect();
    RForm::from_vector(&cov)
}

/// Complex-linear covector whose real part is `sign * dc_affine(w)`; this is
/// `sign * i * w`.
pub fn dc_complex(w: &[CRat], dc_sign: i32) -> CForm {
    let f = if dc_sign >= 0 { CRat::i() } else { -CRat::i() };
    let v: Vec<CRat> = w.iter().map(|c| c * &f).collect();
    CForm::from_vector(&v)
}

/// Values of a complex form on all `degree`-subsets of real vectors, keyed by
/// subset; i.e. the pullback to the span of `basis` in basis coordinates.
pub fn restrict(form: &CForm, basis: &[Vec<Rat>]) -> (CForm, bool) {
    let zs: Vec<Vec<CRat>> = basis.iter().map(|b| complexify(b)).collect();
    let mut out = CForm::zero(basis.len(), form.degree);
    for s in subsets(basis.len(), form.degree) {
        let vs: Vec<Vec<CRat>> = s.iter().map(|&i| zs[i].clone()).collect();
        out.insert(s, form.eval(&vs));
    }
    let real = out.terms.values().all(|c| c.is_real());
    (out, real)
}

/// Evaluates `alpha ∧ beta` on real vectors, with `alpha` complex-linear and
/// `beta` a real form on `R^{2n}`.
pub fn eval_wedge_mixed(alpha: &CForm, beta: &RForm, vecs: &[Vec<Rat>]) -> CRat {
    let k = vecs.len();
    assert_eq!(alpha.degree + beta.degree, k);
    let zs: Vec<Vec<CRat>> = vecs.iter().map(|v| complexify(v)).collect();
    let mut acc = CRat::zero();
    for s in subsets(k, alpha.degree) {
        let rest: Vec<usize> = (0..k).filter(|i| !s.contains(i)).collect();
        let mut perm: Vec<usize> = s.iter().chain(&rest).copied().collect();
        let sgn = sort_sign(&mut perm).unwrap();
        let a = alpha.eval(&s.iter().map(|&i| zs[i].clone()).collect::<Vec<_>>());
        if a.is_zero() {
            continue;
        }
        let b = beta.eval(&rest.iter().map(|&i| vecs[i].clone()).collect::<Vec<_>>());
        let term = a.scale(&b);
        acc = if sgn > 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Pullback of a real form on `R^{2n}` along an inclusion.
pub fn restrict_real(form: &RForm, basis: &[Vec<Rat>]) -> RForm {
    let mut out = RForm::zero(basis.len(), form.degree);
    for s in subsets(basis.len(), form.degree) {
        let vs: Vec<Vec<Rat>> = s.iter().map(|&i| basis[i].clone()).collect();
        out.insert(s, form.eval(&vs));
    }
    out
}

/// Maximal complex subspace `E ∩ J(E)` of a real subspace.
#[derive(Clone, Debug)]
pub struct ComplexPart {
    /// Complex basis `c_1..c_r` (as real vectors); the real basis in standard
    /// complex orientation is `c_1, J c_1, ..., c_r, J c_r`.
    pub complex_basis: Vec<Vec<Rat>>,
    pub degenerate: bool,
}

impl ComplexPart {
    pub fn real_basis(&self) -> Vec<Vec<Rat>> {
        self.complex_basis
            .iter()
            .flat_map(|c| [c.clone(), apply_j(c)])
            .collect()
    }

    pub fn complex_dim(&self) -> usize {
        self.complex_basis.len()
    }
}

pub fn max_complex_subspace(basis: &[Vec<Rat>], ambient: usize) -> ComplexPart {
    let e = Subspace::span(ambient, basis);
    let jb: Vec<Vec<Rat>> = e.basis.iter().map(|b| apply_j(b)).collect();
    let je = Subspace::span(ambient, &jb);
    let inter = e.intersect(&je);
    let mut cb: Vec<Vec<Rat>> = Vec::new();
    let mut real: Vec<Vec<Rat>> = Vec::new();
    for b in &inter.basis {
        let mut trial = real.clone();
        trial.push(b.clone());
        if rank(&trial) > real.len() {
            real.push(b.clone());
            real.push(apply_j(b));
            cb.push(b.clone());
        }
    }
    // degenerate iff codim_C of the complex part < real codim
    let codim_c = ambient / 2 - cb.len();
    let codim_r = ambient - e.dim();
    ComplexPart {
        complex_basis: cb,
        degenerate: codim_c < codim_r,
    }
}

/// Ordered basis of a subspace, standing for one of its two orientations.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientationToken {
    pub basis: Vec<Vec<Rat>>,
}

impl OrientationToken {
    pub fn new(basis: Vec<Vec<Rat>>) -> Self {
        OrientationToken { basis }
    }

    pub fn ambient(&self) -> usize {
        self.basis.first().map_or(0, |b| b.len())
    }

    /// Sign of the change-of-basis determinant from `self` to `other`
    /// (both must span the same subspace). Empty bases compare as `+1`.
    pub fn relative_sign(&self, other: &OrientationToken) -> i32 {
        if self.basis.is_empty() && other.basis.is_empty() {
            return 1;
        }
        let amb = self.ambient().max(other.ambient());
        let s = Subspace::span(amb, &self.basis);
        let a: Vec<Vec<Rat>> = self.basis.iter().map(|v| s.coords(v)).collect();
        let b: Vec<Vec<Rat>> = other.basis.iter().map(|v| s.coords(v)).collect();
        sign(&det(&a)) * sign(&det(&b))
    }
}

/// Complex form together with the orientation of the carrying cell it refers to.
#[derive(Clone, Debug, PartialEq)]
pub struct OddForm {
    pub form: CForm,
    pub orientation: OrientationToken,
}

impl OddForm {
    pub fn new(form: CForm, orientation: OrientationToken) -> Self {
        OddForm { form, orientation }
    }

    /// The form expressed relative to another orientation of the same space.
    pub fn transported(&self, target: &OrientationToken) -> OddForm {
        let s = self.orientation.relative_sign(target);
        let form = if s > 0 { self.form.clone() } else { self.form.neg() };
        OddForm::new(form, target.clone())
    }
}

/// Outcome of examining a frame on an oriented cell.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameReport {
    /// Restriction to the tangent space is real-valued.
    pub real: bool,
    /// Restriction vanishes whenever an argument lies in the complex part.
    pub kills_complex: bool,
    pub degenerate: bool,
    /// Restriction to the tangent space is identically zero.
    pub zero: bool,
    /// Value of the pushed-forward volume form on the quotient basis,
    /// oriented compatibly with the cell; `None` unless the conditions hold.
    pub density: Option<Rat>,
}

impl FrameReport {
    pub fn sign(&self) -> Option<i32> {
        self.density.as_ref().map(sign)
    }
}

/// Quotient representatives of `E / C_E`, chosen greedily from the basis.
pub fn quotient_basis(tangent: &[Vec<Rat>], cpart: &ComplexPart) -> Vec<Vec<Rat>> {
    let cr = cpart.real_basis();
    let mut out = cr.clone();
    for t in tangent {
        let mut trial = out.clone();
        trial.push(t.clone());
        if rank(&trial) == trial.len() {
            out = trial;
        }
    }
    out.split_off(cr.len())
}

/// Examines the frame `form` on a cell with oriented tangent basis `tangent`:
/// the two frame conditions and the sign of the pushforward to `E / C_E`
/// (orientation of `C_E` taken as the standard complex orientation).
pub fn analyze_frame(form: &CForm, tangent: &[Vec<Rat>]) -> FrameReport {
    let ambient = tangent.first().map_or(2 * form.dim, |t| t.len());
    let cpart = max_complex_subspace(tangent, ambient);
    let cr = cpart.real_basis();
    let q = quotient_basis(tangent, &cpart);
    let mut full = cr.clone();
    full.extend(q.iter().cloned());
    let (vals, real) = restrict(form, &full);
    let zero = vals.is_zero();
    let nc = cr.len();
    let kills_complex = vals.terms.keys().all(|k| k.iter().all(|&i| i >= nc));
    let density = if real && kills_complex && q.len() == form.degree {
        let token = OrientationToken::new(tangent.to_vec());
        let sigma = token.relative_sign(&OrientationToken::new(full.clone()));
        let key: Vec<usize> = (nc..nc + q.len()).collect();
        let v = vals.terms.get(&key).map(|c| c.re.clone()).unwrap_or_else(Rat::zero);
        Some(if sigma > 0 { v } else { -v })
    } else if zero {
        Some(Rat::zero())
    } else {
        None
    };
    FrameReport {
        real,
        kills_complex,
        degenerate: cpart.degenerate,
        zero,
        density,
    }
}

/// Sign of `det(Im <q_i, f_j>)` for quotient representatives `q` (vectors of
/// `C^n`) and face directions `f` (vectors of the dual space).
pub fn symplectic_orientation_sign(q: &[Vec<Rat>], f: &[Vec<Rat>]) -> i32 {
    let m: Vec<Vec<Rat>> = q
        .iter()
        .map(|qi| f.iter().map(|fj| pairing(qi, &complexify(fj)).im).collect())
        .collect();
    if m.is_empty() {
        return 1;
    }
    sign(&det(&m))
}

pub fn identity_basis(dim: usize) -> Vec<Vec<Rat>> {
    (0..dim)
        .map(|i| {
            let mut v = vec![Rat::zero(); dim];
            v[i] = Rat::one();
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn rv(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn wedge_basics() {
        let dx1 = RForm::blade(2, &[0], rat(1));
        let dy1 = RForm::blade(2, &[1], rat(1));
        let w = dx1.wedge(&dy1);
        assert_eq!(w.terms.get(&vec![0, 1]), Some(&rat(1)));
        assert!(dx1.wedge(&dx1).is_zero());
        let a = RForm::blade(4, &[0], rat(1)).add(&RForm::blade(4, &[1], rat(1)));
        let dx2 = RForm::blade(4, &[2], rat(1));
        let expect = RForm::blade(4, &[0, 2], rat(1)).add(&RForm::blade(4, &[1, 2], rat(1)));
        assert_eq!(a.wedge(&dx2), expect);
        // degree overflow
        let top = RForm::blade(2, &[0, 1], rat(1));
        assert!(top.wedge(&dx1).is_zero());
    }

    #[test]
    fn complex_structure() {
        assert_eq!(apply_j(&rv(&[1, 0])), rv(&[0, 1]));
        assert_eq!(apply_j(&rv(&[0, 1])), rv(&[-1, 0]));
        let v = rv(&[3, -2, 5, 7]);
        let jj = apply_j(&apply_j(&v));
        assert_eq!(jj, v.iter().map(|x| -x).collect::<Vec<_>>());
    }

    #[test]
    fn rho_examples() {
        let ex1 = RForm::blade(4, &[0], rat(1));
        assert_eq!(rho(&ex1), CForm::blade(2, &[0], CRat::one()));
        let ex1ey1 = RForm::blade(4, &[0, 1], rat(1));
        assert!(rho(&ex1ey1).is_zero());
        let ex1ex2 = RForm::blade(4, &[0, 2], rat(1));
        assert_eq!(rho(&ex1ex2), CForm::blade(2, &[0, 1], CRat::one()));
        let ey1 = RForm::blade(4, &[1], rat(1));
        assert_eq!(rho(&ey1), CForm::blade(2, &[0], CRat::i()));
    }

    #[test]
    fn dc_of_coordinates() {
        let one = vec![CRat::one()];
        // g = x1
        assert_eq!(dc_affine(&one), RForm::blade(2, &[1], rat(-1)));
        // g = y1 = Re <z, -i>
        let mi = vec![-CRat::i()];
        assert_eq!(dc_affine(&mi), RForm::blade(2, &[0], rat(1)));
        assert!(dc_affine(&[CRat::zero()]).is_zero());
        // complex version has dc_affine as its real part
        let w = vec![CRat::new(ratio(2, 3), rat(-5))];
        let c = dc_complex(&w, 1);
        for b in identity_basis(2) {
            let val = c.eval(&[complexify(&b)]);
            assert_eq!(val.re, dc_affine(&w).eval(&[b]));
        }
    }

    #[test]
    fn restrict_examples() {
        let dx1 = CForm::blade(2, &[0], CRat::one());
        let dz = dx1.clone();
        // dz restricted to span(e_y) is i
        let (r, real) = restrict(&dz, &[rv(&[0, 1])]);
        assert!(!real);
        assert_eq!(r.terms.get(&vec![0]), Some(&CRat::i()));
        // i dz2 restricted to span(e_x1, e_y1, e_x2)
        let idz2 = CForm::blade(2, &[1], CRat::i());
        let (r, real) = restrict(&idz2, &[rv(&[1, 0, 0, 0]), rv(&[0, 1, 0, 0]), rv(&[0, 0, 1, 0])]);
        assert!(!real);
        assert_eq!(r.terms.get(&vec![2]), Some(&CRat::i()));
        // real forms
        let dxr = RForm::blade(2, &[0], rat(1));
        assert!(restrict_real(&dxr, &[rv(&[0, 1])]).is_zero());
        let dyr = RForm::blade(2, &[1], rat(1));
        assert_eq!(restrict_real(&dyr, &[rv(&[0, 1])]).terms.get(&vec![0]), Some(&rat(1)));
    }

    #[test]
    fn complex_subspaces() {
        let c = max_complex_subspace(&[rv(&[1, 0, 0, 0]), rv(&[0, 1, 0, 0])], 4);
        assert_eq!(c.complex_dim(), 1);
        assert!(c.degenerate);
        let c = max_complex_subspace(&[rv(&[1, 0, 0, 0]), rv(&[0, 1, 0, 0]), rv(&[0, 0, 1, 0])], 4);
        assert_eq!(c.complex_dim(), 1);
        assert!(!c.degenerate);
        let c = max_complex_subspace(&identity_basis(4), 4);
        assert_eq!(c.complex_dim(), 2);
        assert!(!c.degenerate);
    }

    #[test]
    fn quotient_sign_on_imaginary_line() {
        // E = i R in C^1, frame -i dz restricts to dy
        let f = CForm::blade(1, &[0], -CRat::i());
        let rep = analyze_frame(&f, &[rv(&[0, 1])]);
        assert_eq!(rep.sign(), Some(1));
        assert_eq!(analyze_frame(&f.neg(), &[rv(&[0, 1])]).sign(), Some(-1));
        assert_eq!(analyze_frame(&CForm::zero(1, 1), &[rv(&[0, 1])]).sign(), Some(0));
        // a non-real frame has no sign
        let g = CForm::blade(1, &[0], CRat::one());
        assert_eq!(analyze_frame(&g, &[rv(&[0, 1])]).sign(), None);
    }

    #[test]
    fn symplectic_sign_examples() {
        // n = 1, quotient e_y, face direction e_a
        assert_eq!(symplectic_orientation_sign(&[rv(&[0, 1])], &[rv(&[1, 0])]), 1);
        assert_eq!(symplectic_orientation_sign(&[rv(&[0, -1])], &[rv(&[1, 0])]), -1);
        let q = [rv(&[0, 1, 0, 0]), rv(&[0, 0, 0, -1])];
        let f = [rv(&[1, 0, 0, 0]), rv(&[0, 0, 1, 0])];
        assert_eq!(symplectic_orientation_sign(&q, &f), -1);
    }

    #[test]
    fn orientation_transport() {
        let t = OrientationToken::new(vec![rv(&[1, 0]), rv(&[0, 1])]);
        let s = OrientationToken::new(vec![rv(&[0, 1]), rv(&[1, 0])]);
        assert_eq!(t.relative_sign(&s), -1);
        let f = OddForm::new(CForm::scalar(1, CRat::one()), t.clone());
        let g = f.transported(&s);
        assert_eq!(g.form, CForm::scalar(1, -CRat::one()));
        assert_eq!(g.transported(&t), f);
    }
}
