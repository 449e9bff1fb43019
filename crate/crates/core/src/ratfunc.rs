//! Rational functions in a fixed number of variables.
//!
//! Stored as a coprime pair of ordinary polynomials with a monic denominator,
//! so structural equality is equality of functions.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{gcd, Poly};
use crate::rat::Q;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator("division by the zero function".into()));
        }
        Ok(Self::normalize(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        Self::normalize(p, Poly::one(n))
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        RatFunc { num: Poly::constant(nvars, c), den: Poly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        RatFunc { num: Poly::var(nvars, i), den: Poly::one(nvars) }
    }

    /// Laurent monomial `c·x^e`.
    pub fn monomial(nvars: usize, e: Vec<i64>, c: Q) -> Self {
        Self::from_poly(Poly::monomial(nvars, e, c))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        let n = num.nvars().max(den.nvars());
        if num.is_zero() {
            return RatFunc { num: Poly::zero(n), den: Poly::one(n) };
        }
        let (num, den) = if den.is_monomial() {
            (num.div_exact(&den).unwrap(), Poly::one(n))
        } else if let Some(q) = num.div_exact(&den) {
            (q, Poly::one(n))
        } else {
            (num, den)
        };
        // move negative exponents into the denominator, drop shared monomials
        let nm = num.min_exponents();
        let dm = den.min_exponents();
        let shift_n: Vec<i64> = nm.iter().zip(&dm).map(|(a, b)| -a.min(b)).collect();
        let shift_d: Vec<i64> = dm.iter().zip(&nm).map(|(a, b)| -a.min(b)).collect();
        let mut num = num.mul_monomial(&shift_n, &Q::one());
        let mut den = den.mul_monomial(&shift_d, &Q::one());
        if !den.is_monomial() {
            let g = gcd(&num, &den);
            if g.as_constant().is_none() {
                num = num.div_exact(&g).expect("gcd divides");
                den = den.div_exact(&g).expect("gcd divides");
            }
        }
        let lc = den.lead().unwrap().1.clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is a monomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    /// The Laurent polynomial, when the denominator is a monomial.
    pub fn as_laurent(&self) -> Option<Poly> {
        self.den.is_monomial().then(|| self.num.div_exact(&self.den).unwrap())
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return Self::normalize(&self.num + &o.num, self.den.clone());
        }
        Self::normalize(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        Self::normalize(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.num.is_zero() {
            return Err(Error::ZeroDenominator("division by the zero function".into()));
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<RatFunc> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        // coprime parts stay coprime under powers
        Ok(RatFunc { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn add_constant(&self, c: &Q) -> RatFunc {
        let shifted = &self.num + &self.den.scale(c);
        if shifted.is_zero() {
            return RatFunc { num: Poly::zero(self.nvars()), den: Poly::one(self.nvars()) };
        }
        RatFunc { num: shifted, den: self.den.clone() }
    }

    /// Value at a point; `None` when the denominator vanishes there.
    pub fn eval(&self, values: &[Q]) -> Option<Q> {
        let d = self.den.eval(values)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(values)? / d)
    }

    pub fn render(&self, names: &[String]) -> String {
        let n = self.num.render(names);
        if self.den.as_constant().is_some() {
            return n;
        }
        let d = self.den.render(names);
        let n = if self.num.len() > 1 { format!("({n})") } else { n };
        let d = if d.contains(['*', '/', ' ']) { format!("({d})") } else { d };
        format!("{n}/{d}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars()).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(0), den: Poly::one(0) }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl std::ops::Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        RatFunc::add(&self, &o)
    }
}
