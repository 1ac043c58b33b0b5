//! JSON interchange. Every number is an exact string: rationals as `"p/q"`
//! or `"p"`, complex scalars as `{"re","im"}`.

use serde::{Deserialize, Serialize};

use crate::current::{Poly, TestForm};
use crate::degeneracy::{DegeneracyWitness, HDegeneracyCertificate, VectorFamily};
use crate::error::{EtvError, Result};
use crate::exterior::{CForm, Ext};
use crate::framed::{Etv, FramedSet};
use crate::monge::{AffineFunc, PLFunction};
use crate::polyhedron::{Affine, HPoly, VPolytope};
use crate::scalar::{fmt_rat, parse_rat, CRat, Rat};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CRatJson {
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub indices: Vec<usize>,
    pub value: CRatJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AffineJson {
    pub coeffs: Vec<String>,
    #[serde(rename = "const")]
    pub constant: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HPolyJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default)]
    pub eq: Vec<AffineJson>,
    #[serde(default)]
    pub ineq: Vec<AffineJson>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub empty: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VPolytopeJson {
    pub vertices: Vec<Vec<String>>,
    #[serde(default)]
    pub rays: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FrameJson {
    pub form: Vec<TermJson>,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FramedCellJson {
    pub geom: HPolyJson,
    pub frame: FrameJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FramedSetJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub k: usize,
    pub cells: Vec<FramedCellJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WeightedCellJson {
    pub geom: HPolyJson,
    pub weight: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EtvJson {
    pub n: usize,
    pub k: usize,
    pub cells: Vec<WeightedCellJson>,
}

/// An ETV given either by weights or by frames.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum EtvInput {
    Weighted(EtvJson),
    Framed(FramedSetJson),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AffineFuncJson {
    pub w: Vec<CRatJson>,
    pub c: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PLFunctionJson {
    pub plus: Vec<AffineFuncJson>,
    #[serde(default)]
    pub minus: Vec<AffineFuncJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VectorFamilyJson {
    pub n: usize,
    pub sets: Vec<Vec<Vec<CRatJson>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MonomialJson {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FormTermJson {
    pub indices: Vec<usize>,
    pub poly: Vec<MonomialJson>,
}

/// Polynomial form `sum p_I dx_I` on the box `window`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TestFormJson {
    pub dim: usize,
    pub degree: usize,
    pub window: Vec<[String; 2]>,
    pub terms: Vec<FormTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WitnessJson {
    pub p: usize,
    pub subset: Vec<usize>,
    pub subspace: Vec<Vec<CRatJson>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CertificateJson {
    pub subset: Vec<usize>,
    pub subspace: Vec<Vec<String>>,
    pub correctors: Vec<AffineFuncJson>,
}

pub fn rat_out(r: &Rat) -> String {
    fmt_rat(r)
}

pub fn rats_out(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

pub fn rats_in(v: &[String]) -> Result<Vec<Rat>> {
    v.iter().map(|s| parse_rat(s)).collect()
}

pub fn crat_out(c: &CRat) -> CRatJson {
    CRatJson {
        re: fmt_rat(&c.re),
        im: fmt_rat(&c.im),
    }
}

pub fn crat_in(c: &CRatJson) -> Result<CRat> {
    Ok(CRat::new(parse_rat(&c.re)?, parse_rat(&c.im)?))
}

fn crats_in(v: &[CRatJson]) -> Result<Vec<CRat>> {
    v.iter().map(crat_in).collect()
}

pub fn form_out(f: &CForm) -> Vec<TermJson> {
    f.terms
        .iter()
        .map(|(idx, c)| TermJson {
            indices: idx.clone(),
            value: crat_out(c),
        })
        .collect()
}

/// Builds a form of the given degree on `R^dim`; repeated index tuples add up.
pub fn form_in(dim: usize, degree: usize, terms: &[TermJson]) -> Result<CForm> {
    let mut f = Ext::zero(dim, degree);
    for t in terms {
        if t.indices.len() != degree || t.indices.iter().any(|&i| i >= dim) {
            return Err(EtvError::Parse(format!(
                "form term {:?} does not fit degree {degree} on R^{dim}",
                t.indices
            )));
        }
        f = f.add(&Ext::blade(dim, &t.indices, crat_in(&t.value)?));
    }
    Ok(f)
}

pub fn affine_out(a: &Affine) -> AffineJson {
    AffineJson {
        coeffs: rats_out(&a.a),
        constant: fmt_rat(&a.c),
    }
}

pub fn affine_in(a: &AffineJson) -> Result<Affine> {
    Ok(Affine::new(rats_in(&a.coeffs)?, parse_rat(&a.constant)?))
}

pub fn hpoly_out(p: &HPoly) -> HPolyJson {
    HPolyJson {
        dim: Some(p.dim),
        eq: p.eqs.iter().map(affine_out).collect(),
        ineq: p.ineqs.iter().map(affine_out).collect(),
        empty: p.empty,
    }
}

pub fn hpoly_in(p: &HPolyJson) -> Result<HPoly> {
    let dim = p
        .dim
        .or_else(|| p.eq.iter().chain(&p.ineq).map(|a| a.coeffs.len()).next())
        .ok_or_else(|| EtvError::Parse("polyhedron without constraints needs \"dim\"".into()))?;
    if p.empty {
        return Ok(HPoly::empty(dim));
    }
    let eqs = p.eq.iter().map(affine_in).collect::<Result<Vec<_>>>()?;
    let ineqs = p.ineq.iter().map(affine_in).collect::<Result<Vec<_>>>()?;
    if eqs.iter().chain(&ineqs).any(|a| a.a.len() != dim) {
        return Err(EtvError::Parse(format!("constraint length differs from dim {dim}")));
    }
    Ok(HPoly::new(dim, eqs, ineqs))
}

pub fn vpolytope_out(p: &VPolytope) -> VPolytopeJson {
    VPolytopeJson {
        vertices: p.vertices.iter().map(|v| rats_out(v)).collect(),
        rays: p.rays.iter().map(|v| rats_out(v)).collect(),
    }
}

pub fn vpolytope_in(p: &VPolytopeJson) -> Result<VPolytope> {
    let vs = p.vertices.iter().map(|v| rats_in(v)).collect::<Result<Vec<_>>>()?;
    let rs = p.rays.iter().map(|v| rats_in(v)).collect::<Result<Vec<_>>>()?;
    let Some(d) = vs.first().map(|v| v.len()) else {
        return Err(EtvError::Parse("polytope without vertices".into()));
    };
    if vs.iter().chain(&rs).any(|v| v.len() != d) {
        return Err(EtvError::Parse("points of different lengths".into()));
    }
    Ok(VPolytope::with_rays(vs, rs))
}

pub fn framed_out(fs: &FramedSet) -> FramedSetJson {
    FramedSetJson {
        n: Some(fs.n),
        k: fs.k,
        cells: fs
            .cells
            .iter()
            .map(|c| FramedCellJson {
                geom: hpoly_out(&c.geom),
                frame: FrameJson {
                    form: form_out(&c.frame),
                    basis: c.geom.tangent_basis().iter().map(|v| rats_out(v)).collect(),
                },
            })
            .collect(),
    }
}

pub fn framed_in(fs: &FramedSetJson) -> Result<FramedSet> {
    let geoms = fs.cells.iter().map(|c| hpoly_in(&c.geom)).collect::<Result<Vec<_>>>()?;
    let dim = match fs.n {
        Some(n) => 2 * n,
        None => geoms
            .first()
            .map(|g| g.dim)
            .ok_or_else(|| EtvError::Parse("framed set without cells needs \"n\"".into()))?,
    };
    if dim % 2 != 0 || fs.k > dim || geoms.iter().any(|g| g.dim != dim) {
        return Err(EtvError::Parse(format!("cells must live in R^{dim} with k <= {dim}")));
    }
    let degree = dim - fs.k;
    let mut cells = Vec::new();
    for (c, geom) in fs.cells.iter().zip(geoms) {
        let frame = form_in(dim, degree, &c.frame.form)?;
        let basis = c.frame.basis.iter().map(|v| rats_in(v)).collect::<Result<Vec<_>>>()?;
        if geom.is_empty() {
            continue;
        }
        if geom.affine_dim() != fs.k as i64 {
            return Err(EtvError::Parse(format!(
                "cell of dimension {} in a {}-dimensional set",
                geom.affine_dim(),
                fs.k
            )));
        }
        if basis.len() != fs.k
            || basis.iter().any(|v| v.len() != dim)
            || crate::linalg::Subspace::span(dim, &basis) != geom.tangent_space()
        {
            return Err(EtvError::Parse(
                "frame basis must be a basis of the cell's tangent space".into(),
            ));
        }
        cells.push(FramedSet::cell_from_oriented(geom, frame, &basis));
    }
    Ok(FramedSet::new(dim / 2, fs.k, degree, cells))
}

pub fn etv_out(x: &Etv) -> EtvJson {
    EtvJson {
        n: x.n,
        k: x.k,
        cells: x
            .cells
            .iter()
            .map(|c| WeightedCellJson {
                geom: hpoly_out(&c.geom),
                weight: fmt_rat(&c.weight),
            })
            .collect(),
    }
}

fn weighted_in(x: &EtvJson) -> Result<Etv> {
    let dim = 2 * x.n;
    if x.k > dim {
        return Err(EtvError::Parse(format!("k = {} exceeds {dim}", x.k)));
    }
    let mut cells = Vec::new();
    for c in &x.cells {
        let geom = hpoly_in(&c.geom)?;
        if geom.dim != dim {
            return Err(EtvError::Parse(format!("cell in R^{} instead of R^{dim}", geom.dim)));
        }
        if geom.is_empty() {
            continue;
        }
        if geom.affine_dim() != x.k as i64 {
            return Err(EtvError::Parse(format!(
                "cell of dimension {} in a {}-dimensional set",
                geom.affine_dim(),
                x.k
            )));
        }
        if crate::framed::unit_frame(x.n, &geom.tangent_basis()).is_none() {
            return Err(EtvError::NotEtp(format!(
                "weighted cell through {} is degenerate",
                crate::scalar::fmt_point(geom.relint_point())
            )));
        }
        cells.push((geom, parse_rat(&c.weight)?));
    }
    Ok(Etv::from_weighted(x.n, x.k, cells))
}

/// Weighted input is taken as is; framed input is validated as an ETP.
pub fn etv_in(x: &EtvInput) -> Result<Etv> {
    match x {
        EtvInput::Weighted(w) => weighted_in(w),
        EtvInput::Framed(f) => Etv::from_framed(&framed_in(f)?),
    }
}

pub fn affine_func_out(f: &AffineFunc) -> AffineFuncJson {
    AffineFuncJson {
        w: f.w.iter().map(crat_out).collect(),
        c: fmt_rat(&f.c),
    }
}

pub fn affine_func_in(f: &AffineFuncJson) -> Result<AffineFunc> {
    Ok(AffineFunc::new(crats_in(&f.w)?, parse_rat(&f.c)?))
}

pub fn pl_out(h: &PLFunction) -> PLFunctionJson {
    PLFunctionJson {
        plus: h.plus.iter().map(affine_func_out).collect(),
        minus: h.minus.iter().map(affine_func_out).collect(),
    }
}

/// An empty `minus` list means the function is convex.
pub fn pl_in(h: &PLFunctionJson) -> Result<PLFunction> {
    let plus = h.plus.iter().map(affine_func_in).collect::<Result<Vec<_>>>()?;
    let minus = h.minus.iter().map(affine_func_in).collect::<Result<Vec<_>>>()?;
    let n = plus
        .first()
        .map(|f| f.n())
        .ok_or_else(|| EtvError::Parse("function without affine pieces".into()))?;
    if plus.iter().chain(&minus).any(|f| f.n() != n) {
        return Err(EtvError::Parse("affine pieces on different spaces".into()));
    }
    if minus.is_empty() {
        PLFunction::convex(n, plus)
    } else {
        PLFunction::new(n, plus, minus)
    }
}

pub fn family_out(f: &VectorFamily) -> VectorFamilyJson {
    VectorFamilyJson {
        n: f.n,
        sets: f
            .sets
            .iter()
            .map(|s| s.iter().map(|v| v.iter().map(crat_out).collect()).collect())
            .collect(),
    }
}

pub fn family_in(f: &VectorFamilyJson) -> Result<VectorFamily> {
    let sets = f
        .sets
        .iter()
        .map(|s| s.iter().map(|v| crats_in(v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    VectorFamily::new(f.n, sets).map_err(|e| EtvError::Parse(e.to_string()))
}

pub fn test_form_out(phi: &TestForm) -> TestFormJson {
    TestFormJson {
        dim: phi.dim,
        degree: phi.degree,
        window: phi.window.iter().map(|(a, b)| [fmt_rat(a), fmt_rat(b)]).collect(),
        terms: phi
            .terms
            .iter()
            .map(|(idx, p)| FormTermJson {
                indices: idx.clone(),
                poly: p
                    .terms
                    .iter()
                    .map(|(e, c)| MonomialJson {
                        exponents: e.clone(),
                        coeff: fmt_rat(c),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn test_form_in(f: &TestFormJson) -> Result<TestForm> {
    if f.window.len() != f.dim || f.degree > f.dim {
        return Err(EtvError::Parse(format!("window must have {} intervals", f.dim)));
    }
    let mut window = Vec::with_capacity(f.dim);
    for [a, b] in &f.window {
        let (a, b) = (parse_rat(a)?, parse_rat(b)?);
        if a > b {
            return Err(EtvError::Parse("window interval with lo > hi".into()));
        }
        window.push((a, b));
    }
    let mut phi = TestForm::new(f.dim, f.degree, window);
    for t in &f.terms {
        if t.indices.len() != f.degree
            || t.indices.windows(2).any(|w| w[0] >= w[1])
            || t.indices.iter().any(|&i| i >= f.dim)
        {
            return Err(EtvError::Parse(format!(
                "form index {:?} must be increasing of length {} below {}",
                t.indices, f.degree, f.dim
            )));
        }
        let mut p = Poly::zero(f.dim);
        for m in &t.poly {
            if m.exponents.len() != f.dim {
                return Err(EtvError::Parse("monomial exponent length differs from dim".into()));
            }
            p = p.add(&Poly::monomial(m.exponents.clone(), parse_rat(&m.coeff)?));
        }
        phi = phi.with_term(t.indices.clone(), p);
    }
    Ok(phi)
}

pub fn witness_out(w: &DegeneracyWitness) -> WitnessJson {
    WitnessJson {
        p: w.p,
        subset: w.subset.clone(),
        subspace: w.h.iter().map(|v| v.iter().map(crat_out).collect()).collect(),
    }
}

pub fn certificate_out(c: &HDegeneracyCertificate) -> CertificateJson {
    CertificateJson {
        subset: c.subset.clone(),
        subspace: c.h.iter().map(|v| rats_out(v)).collect(),
        correctors: c.correctors.iter().map(affine_func_out).collect(),
    }
}
