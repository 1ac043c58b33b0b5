//! Homogeneous ETPs dual to convex polytopes in the dual space.

use std::collections::BTreeSet;

use crate::error::{EtvError, Result};
use crate::exterior::{
    complexify, max_complex_subspace, quotient_basis, re_pairing_covector, rho, symplectic_orientation_sign, CForm,
    OrientationToken, RForm,
};
use crate::framed::{Etv, FramedCell, FramedSet};
use crate::linalg::{rank, Subspace};
use crate::polyhedron::{volume_multivector, Affine, HPoly, VPolytope};
use crate::scalar::{CRat, Rat};

/// One `(2n-k)`-face of the polytope and its framed dual cone.
#[derive(Clone, Debug, PartialEq)]
pub struct DualFace {
    /// Vertex indices of the face.
    pub face: BTreeSet<usize>,
    pub cone: HPoly,
    pub degenerate: bool,
    /// Frame in the canonical orientation of the cone (zero if degenerate).
    pub frame: CForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualFanEtp {
    pub gamma: VPolytope,
    pub k: usize,
    pub faces: Vec<DualFace>,
    pub result: Etv,
}

impl DualFanEtp {
    pub fn framed(&self) -> FramedSet {
        let n = self.gamma.ambient() / 2;
        let cells = self
            .faces
            .iter()
            .filter(|f| !f.degenerate)
            .map(|f| FramedCell {
                geom: f.cone.clone(),
                frame: f.frame.clone(),
            })
            .collect();
        FramedSet::new(n, self.k, 2 * n - self.k, cells)
    }
}

fn support_piece(v: &[Rat]) -> Affine {
    Affine::linear(re_pairing_covector(&complexify(v)))
}

/// Points of `C^n` where `max Re <z, w>` over `gamma` is attained on the
/// whole face.
pub fn dual_cone(gamma: &VPolytope, face: &BTreeSet<usize>) -> HPoly {
    let dim = gamma.ambient();
    let v0 = support_piece(&gamma.vertices[*face.iter().next().unwrap()]);
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for (i, v) in gamma.vertices.iter().enumerate() {
        let d = v0.sub(&support_piece(v));
        if face.contains(&i) {
            eqs.push(d);
        } else {
            ineqs.push(d);
        }
    }
    HPoly::new(dim, eqs, ineqs)
}

fn face_points(gamma: &VPolytope, face: &BTreeSet<usize>) -> Vec<Vec<Rat>> {
    face.iter().map(|&i| gamma.vertices[i].clone()).collect()
}

/// Canonical basis of the direction space of a face.
fn direction_basis(pts: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let diffs: Vec<Vec<Rat>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    Subspace::span(pts[0].len(), &diffs).basis
}

/// A face is degenerate when its real dimension exceeds the complex
/// dimension of the complex span of its directions.
pub fn is_degenerate_face(directions: &[Vec<Rat>]) -> bool {
    if directions.is_empty() {
        return false;
    }
    let cs: Vec<Vec<CRat>> = directions.iter().map(|v| complexify(v)).collect();
    rank(&cs) < directions.len()
}

/// `X^{gamma, k}`: dual cones of the `(2n-k)`-faces framed by
/// `(-i)^m rho(p_delta)` with orientations matched through `Im <z, z*>`.
pub fn dual_fan_etp(gamma: &VPolytope, k: usize) -> Result<DualFanEtp> {
    let dim = gamma.ambient();
    if dim % 2 != 0 {
        return Err(EtvError::Dimension(format!(
            "polytope lives in R^{dim}, expected the real form of a complex dual space"
        )));
    }
    let n = dim / 2;
    if k < n || k > 2 * n {
        return Err(EtvError::Dimension(format!("k = {k} outside [{n}, {}]", 2 * n)));
    }
    if !gamma.is_bounded() {
        return Err(EtvError::Invalid("polytope must be bounded".into()));
    }
    let m = 2 * n - k;
    let mut faces = Vec::new();
    for face in gamma.face_sets(m) {
        let pts = face_points(gamma, &face);
        let f = direction_basis(&pts);
        let cone = dual_cone(gamma, &face);
        if is_degenerate_face(&f) {
            faces.push(DualFace {
                face,
                frame: CForm::zero(n, m),
                cone,
                degenerate: true,
            });
            continue;
        }
        let p = volume_multivector(&pts, &f);
        let w = rho(&p).scale(&CRat::neg_i_pow(m));
        let tangent = cone.tangent_basis();
        let cpart = max_complex_subspace(&tangent, dim);
        let q = quotient_basis(&tangent, &cpart);
        let s = symplectic_orientation_sign(&q, &f);
        let mut oriented = cpart.real_basis();
        oriented.extend(q);
        let w = if s > 0 { w } else { w.neg() };
        let cell = FramedSet::cell_from_oriented(cone, w, &oriented);
        faces.push(DualFace {
            face,
            cone: cell.geom,
            degenerate: false,
            frame: cell.frame,
        });
    }
    let mut out = DualFanEtp {
        gamma: gamma.clone(),
        k,
        faces,
        result: Etv::zero(n, k),
    };
    out.result = Etv::from_framed_cells(&out.framed())?;
    Ok(out)
}

/// Faces of `face` of one dimension lower with their induced (outward
/// first) orientation signs relative to the canonical orientations.
fn oriented_facets(pts: &[Vec<Rat>]) -> Vec<(Vec<Vec<Rat>>, Vec<Vec<Rat>>, i32)> {
    let poly = VPolytope::new(pts.to_vec()).to_hpoly();
    let top = OrientationToken::new(direction_basis(pts));
    let mut out = Vec::new();
    for (facet, f) in poly.facets() {
        let verts = facet.vertices();
        let fb = direction_basis(&verts);
        let mut ind = vec![poly.outward(&f)];
        ind.extend(fb.iter().cloned());
        let s = top.relative_sign(&OrientationToken::new(ind));
        out.push((verts, fb, s));
    }
    out
}

/// Pascal conditions: the oriented sum of `p_delta` over the `m`-faces of
/// every `(m+1)`-face vanishes, for `p` and for `rho(p)`; for `m > n`
/// every `rho(p_delta)` vanishes.
pub fn pascal_check(gamma: &VPolytope, m: usize) -> bool {
    pascal_check_with(gamma, m, &|pts, f| volume_multivector(pts, f))
}

/// Pascal check with a substitute volume cochain (negative controls).
pub fn pascal_check_with(gamma: &VPolytope, m: usize, p: &dyn Fn(&[Vec<Rat>], &[Vec<Rat>]) -> RForm) -> bool {
    let dim = gamma.ambient();
    let n = dim / 2;
    if m > n {
        for face in gamma.face_sets(m) {
            let pts = face_points(gamma, &face);
            if !rho(&p(&pts, &direction_basis(&pts))).is_zero() {
                return false;
            }
        }
    }
    for theta in gamma.face_sets(m + 1) {
        let pts = face_points(gamma, &theta);
        let mut sum = RForm::zero(dim, m);
        for (verts, fb, s) in oriented_facets(&pts) {
            let term = p(&verts, &fb);
            sum = if s > 0 { sum.add(&term) } else { sum.sub(&term) };
        }
        if !sum.is_zero() || !rho(&sum).is_zero() {
            return false;
        }
    }
    true
}

/// `rho(p_delta) = 1/(m+1) sum w_theta ∧ rho(p_theta)` over the `m`-faces
/// `theta` of every `(m+1)`-face, checked with two choices of the points
/// `w_theta` (first and last vertex).
pub fn volume_recursion_check(gamma: &VPolytope, m: usize) -> bool {
    let dim = gamma.ambient();
    let scale = Rat::from_integer((m as i64 + 1).into());
    for delta in gamma.face_sets(m + 1) {
        let pts = face_points(gamma, &delta);
        let lhs = rho(&volume_multivector(&pts, &direction_basis(&pts)));
        for pick_last in [false, true] {
            let mut sum = CForm::zero(dim / 2, m + 1);
            for (verts, fb, s) in oriented_facets(&pts) {
                let w = if pick_last { verts.last().unwrap() } else { &verts[0] };
                let term = rho(&RForm::from_vector(w).wedge(&volume_multivector(&verts, &fb)));
                sum = if s > 0 { sum.add(&term) } else { sum.sub(&term) };
            }
            let rhs = sum.scale(&CRat::real(Rat::from_integer(1.into()) / &scale));
            if rhs != lhs {
                return false;
            }
        }
    }
    true
}
