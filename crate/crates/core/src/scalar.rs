//! Exact scalars: rationals and Gaussian rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{EtvError, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || EtvError::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Formats in lowest terms with a positive denominator; integers without `/1`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `(a, b, ...)` with exact entries.
pub fn fmt_point(p: &[Rat]) -> String {
    format!("({})", p.iter().map(fmt_rat).collect::<Vec<_>>().join(", "))
}

pub fn fmt_crat(c: &CRat) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rat(&c.re),
        (true, false) => format!("{}i", fmt_rat(&c.im)),
        (false, false) if c.im < Rat::zero() => format!("{}-{}i", fmt_rat(&c.re), fmt_rat(&-&c.im)),
        (false, false) => format!("{}+{}i", fmt_rat(&c.re), fmt_rat(&c.im)),
    }
}

pub fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Complex number with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        CRat { re, im }
    }

    pub fn real(re: Rat) -> Self {
        CRat { re, im: Rat::zero() }
    }

    pub fn i() -> Self {
        CRat::new(Rat::zero(), Rat::one())
    }

    /// `(-i)^m`
    pub fn neg_i_pow(m: usize) -> Self {
        match m % 4 {
            0 => CRat::one(),
            1 => CRat::new(Rat::zero(), -Rat::one()),
            2 => CRat::real(-Rat::one()),
            _ => CRat::i(),
        }
    }

    pub fn conj(&self) -> Self {
        CRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, t: &Rat) -> Self {
        CRat::new(&self.re * t, &self.im * t)
    }
}

impl fmt::Debug for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_rat(&self.re))
        } else {
            write!(f, "({}+{}i)", fmt_rat(&self.re), fmt_rat(&self.im))
        }
    }
}

impl Zero for CRat {
    fn zero() -> Self {
        CRat::new(Rat::zero(), Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for CRat {
    fn one() -> Self {
        CRat::real(Rat::one())
    }
}

impl<'a> Add<&'a CRat> for &'a CRat {
    type Output = CRat;
    fn add(self, o: &CRat) -> CRat {
        CRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Add for CRat {
    type Output = CRat;
    fn add(self, o: CRat) -> CRat {
        &self + &o
    }
}

impl<'a> Sub<&'a CRat> for &'a CRat {
    type Output = CRat;
    fn sub(self, o: &CRat) -> CRat {
        CRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Sub for CRat {
    type Output = CRat;
    fn sub(self, o: CRat) -> CRat {
        &self - &o
    }
}

impl<'a> Mul<&'a CRat> for &'a CRat {
    type Output = CRat;
    fn mul(self, o: &CRat) -> CRat {
        CRat::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Mul for CRat {
    type Output = CRat;
    fn mul(self, o: CRat) -> CRat {
        &self * &o
    }
}

impl<'a> Div<&'a CRat> for &'a CRat {
    type Output = CRat;
    fn div(self, o: &CRat) -> CRat {
        let n = o.norm_sqr();
        let p = self * &o.conj();
        CRat::new(p.re / &n, p.im / &n)
    }
}

impl Div for CRat {
    type Output = CRat;
    fn div(self, o: CRat) -> CRat {
        &self / &o
    }
}

impl Neg for CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat::new(-self.re, -self.im)
    }
}

impl Neg for &CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat::new(-self.re.clone(), -self.im.clone())
    }
}

/// Minimal field interface shared by the real and complex linear algebra.
pub trait Field: Clone + PartialEq + fmt::Debug + Zero + One {
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fdiv(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
}

macro_rules! impl_field {
    ($t:ty) => {
        impl Field for $t {
            fn fadd(&self, o: &Self) -> Self {
                self + o
            }
            fn fsub(&self, o: &Self) -> Self {
                self - o
            }
            fn fmul(&self, o: &Self) -> Self {
                self * o
            }
            fn fdiv(&self, o: &Self) -> Self {
                self / o
            }
            fn fneg(&self) -> Self {
                -self
            }
        }
    };
}

impl_field!(Rat);
impl_field!(CRat);
