//! Polynomial test forms on box windows and their exact integration over
//! simplices.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exterior::RForm;
use crate::scalar::Rat;

/// Polynomial with rational coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Rat::one());
        p
    }

    /// `c x^e`
    pub fn monomial(e: Vec<u32>, c: Rat) -> Self {
        let mut p = Poly::zero(e.len());
        p.add_term(e, c);
        p
    }

    /// `c + sum a_i x_i`
    pub fn affine(a: &[Rat], c: &Rat) -> Self {
        let mut p = Poly::constant(a.len(), c.clone());
        for (i, ai) in a.iter().enumerate() {
            p = p.add(&Poly::var(a.len(), i).scale(ai));
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn scale(&self, t: &Rat) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c * t);
        }
        p
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::constant(self.nvars, Rat::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(c.clone(), |acc, (&k, xi)| acc * pow_rat(xi, k)))
            .sum()
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, c * Rat::from_integer(e[i].into()));
            }
        }
        p
    }

    /// Composition with `x_i = base_i + sum_j dirs[j][i] t_j`.
    pub fn substitute(&self, base: &[Rat], dirs: &[Vec<Rat>]) -> Poly {
        let k = dirs.len();
        let lin: Vec<Poly> = (0..self.nvars)
            .map(|i| {
                let a: Vec<Rat> = dirs.iter().map(|d| d[i].clone()).collect();
                Poly::affine(&a, &base[i])
            })
            .collect();
        let mut out = Poly::zero(k);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(k, c.clone());
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    term = term.mul(&lin[i].pow(ei));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Integral over the standard simplex `{t >= 0, sum t <= 1}`.
    pub fn integrate_standard_simplex(&self) -> Rat {
        let k = self.nvars as u32;
        self.terms
            .iter()
            .map(|(e, c)| {
                let num = e.iter().fold(Rat::one(), |acc, &b| acc * fact(b));
                let total: u32 = e.iter().sum();
                c * num / fact(k + total)
            })
            .sum()
    }
}

fn pow_rat(x: &Rat, k: u32) -> Rat {
    (0..k).fold(Rat::one(), |acc, _| acc * x)
}

fn fact(k: u32) -> Rat {
    (1..=k).fold(Rat::one(), |acc, i| acc * Rat::from_integer(i.into()))
}

/// Real differential form on `R^{2n}` with polynomial coefficients, paired
/// with a bounded box window.
#[derive(Clone, Debug, PartialEq)]
pub struct TestForm {
    pub dim: usize,
    pub degree: usize,
    pub window: Vec<(Rat, Rat)>,
    pub terms: BTreeMap<Vec<usize>, Poly>,
}

impl TestForm {
    pub fn new(dim: usize, degree: usize, window: Vec<(Rat, Rat)>) -> Self {
        TestForm {
            dim,
            degree,
            window,
            terms: BTreeMap::new(),
        }
    }

    /// Adds `p dx_I` (the index list must be strictly increasing).
    pub fn with_term(mut self, idx: Vec<usize>, p: Poly) -> Self {
        assert_eq!(idx.len(), self.degree);
        let e = self.terms.entry(idx.clone()).or_insert_with(|| Poly::zero(self.dim));
        *e = e.add(&p);
        if e.is_zero() {
            self.terms.remove(&idx);
        }
        self
    }

    pub fn constant(dim: usize, window: Vec<(Rat, Rat)>, c: Rat) -> Self {
        TestForm::new(dim, 0, window).with_term(Vec::new(), Poly::constant(dim, c))
    }

    /// Exterior derivative.
    pub fn d(&self) -> TestForm {
        let mut out = TestForm::new(self.dim, self.degree + 1, self.window.clone());
        for (idx, p) in &self.terms {
            for i in 0..self.dim {
                if idx.contains(&i) {
                    continue;
                }
                let dp = p.derivative(i);
                if dp.is_zero() {
                    continue;
                }
                let pos = idx.iter().filter(|&&j| j < i).count();
                let mut new_idx = idx.clone();
                new_idx.insert(pos, i);
                let sgn = if pos % 2 == 0 { Rat::one() } else { -Rat::one() };
                out = out.with_term(new_idx, dp.scale(&sgn));
            }
        }
        out
    }

    /// Multiplies every coefficient by `prod (x_i - lo_i)(hi_i - x_i)`, which
    /// vanishes on the window boundary.
    pub fn bumped(&self) -> TestForm {
        let mut b = Poly::constant(self.dim, Rat::one());
        for (i, (lo, hi)) in self.window.iter().enumerate() {
            let x = Poly::var(self.dim, i);
            let f = x.add(&Poly::constant(self.dim, -lo.clone()));
            let g = Poly::constant(self.dim, hi.clone()).add(&x.scale(&-Rat::one()));
            b = b.mul(&f).mul(&g);
        }
        let mut out = TestForm::new(self.dim, self.degree, self.window.clone());
        for (idx, p) in &self.terms {
            out = out.with_term(idx.clone(), p.mul(&b));
        }
        out
    }

    pub fn basis_form(&self, idx: &[usize]) -> RForm {
        RForm::blade(self.dim, idx, Rat::one())
    }
}
