//! Truncated formal series in lattice monomials z^m and a deformation
//! parameter t, with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{self, Q};

/// `t^t_power · z^exponent`. Ordered by `(t_power, exponent)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub t_power: u32,
    pub exponent: Vec<i64>,
}

impl Monomial {
    pub fn new(exponent: impl Into<Vec<i64>>, t_power: u32) -> Self {
        Monomial { t_power, exponent: exponent.into() }
    }

    pub fn one(dim: usize) -> Self {
        Monomial { t_power: 0, exponent: vec![0; dim] }
    }

    pub fn is_one(&self) -> bool {
        self.t_power == 0 && self.exponent.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            t_power: self.t_power + other.t_power,
            exponent: self.exponent.iter().zip(&other.exponent).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Grading {
    /// grade = power of t
    #[serde(rename = "t")]
    TPower,
    /// grade = sum of the exponent coordinates
    #[serde(rename = "degree")]
    ConeDegree,
    /// grade = power of t plus the exponent sum
    #[serde(rename = "sum")]
    Sum,
}

/// A grading and the largest grade kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationContext {
    pub grading: Grading,
    pub order: u32,
}

impl TruncationContext {
    pub fn new(grading: Grading, order: u32) -> Self {
        TruncationContext { grading, order }
    }

    pub fn t(order: u32) -> Self {
        Self::new(Grading::TPower, order)
    }

    pub fn degree(order: u32) -> Self {
        Self::new(Grading::ConeDegree, order)
    }

    pub fn grade(&self, m: &Monomial) -> i64 {
        let s: i64 = m.exponent.iter().sum();
        match self.grading {
            Grading::TPower => m.t_power as i64,
            Grading::ConeDegree => s,
            Grading::Sum => m.t_power as i64 + s,
        }
    }
}

/// Finite map from monomials to nonzero rationals; nothing above the
/// truncation order is ever stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    dim: usize,
    trunc: TruncationContext,
    terms: BTreeMap<Monomial, Q>,
}

impl Series {
    pub fn zero(dim: usize, trunc: TruncationContext) -> Self {
        Series { dim, trunc, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, trunc: TruncationContext, c: Q) -> Self {
        let mut s = Self::zero(dim, trunc);
        if !c.is_zero() {
            s.terms.insert(Monomial::one(dim), c);
        }
        s
    }

    pub fn one(dim: usize, trunc: TruncationContext) -> Self {
        Self::constant(dim, trunc, Q::one())
    }

    /// `c · t^t_power · z^exponent`, or zero if its grade exceeds the order.
    pub fn monomial(dim: usize, trunc: TruncationContext, c: Q, exponent: &[i64], t_power: u32) -> Result<Self> {
        let mut s = Self::zero(dim, trunc);
        s.add_term(Monomial::new(exponent.to_vec(), t_power), c)?;
        Ok(s)
    }

    /// Builds a series from `(exponent, t_power, coefficient)` triples.
    pub fn from_terms<I>(dim: usize, trunc: TruncationContext, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, u32, Q)>,
    {
        let mut s = Self::zero(dim, trunc);
        for (e, t, c) in terms {
            s.add_term(Monomial::new(e, t), c)?;
        }
        Ok(s)
    }

    /// Adds `c·m` in place, dropping it when above the order.
    pub fn add_term(&mut self, m: Monomial, c: Q) -> Result<()> {
        if m.exponent.len() != self.dim {
            return Err(Error::InvalidCharge(format!(
                "monomial exponent of length {} in a series of dimension {}",
                m.exponent.len(),
                self.dim
            )));
        }
        let g = self.trunc.grade(&m);
        if g < 0 {
            return Err(Error::NegativeGrade(format!("monomial {:?} has grade {g}", m)));
        }
        if g > self.trunc.order as i64 {
            return Ok(());
        }
        self.add_raw(m, c);
        Ok(())
    }

    fn add_raw(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc(&self) -> TruncationContext {
        self.trunc
    }

    pub fn order(&self) -> u32 {
        self.trunc.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one(self.dim))
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    /// Smallest grade among the stored terms.
    pub fn min_grade(&self) -> Option<i64> {
        self.terms.keys().map(|m| self.trunc.grade(m)).min()
    }

    /// The terms of exactly grade `g`.
    pub fn grade_part(&self, g: i64) -> Series {
        let mut s = Self::zero(self.dim, self.trunc);
        for (m, c) in &self.terms {
            if self.trunc.grade(m) == g {
                s.terms.insert(m.clone(), c.clone());
            }
        }
        s
    }

    /// Same terms under a smaller order.
    pub fn truncate(&self, order: u32) -> Series {
        let trunc = TruncationContext { order, ..self.trunc };
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| trunc.grade(m) <= order as i64)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Series { dim: self.dim, trunc, terms }
    }

    /// Reinterprets the series under a larger order (no new terms appear).
    pub fn with_order(&self, order: u32) -> Series {
        if order <= self.trunc.order {
            return self.truncate(order);
        }
        Series { dim: self.dim, trunc: TruncationContext { order, ..self.trunc }, terms: self.terms.clone() }
    }

    /// self += c · t^j z^m · src, dropping terms past the order.
    pub(crate) fn add_shifted(&mut self, src: &Series, shift: &Monomial, c: &Q) {
        let order = self.trunc.order as i64;
        for (m, v) in &src.terms {
            let target = m.mul(shift);
            if self.trunc.grade(&target) <= order {
                self.add_raw(target, v * c);
            }
        }
    }

    fn check_same(&self, other: &Series) -> Result<()> {
        if self.dim != other.dim || self.trunc != other.trunc {
            return Err(Error::ContextMismatch(format!(
                "series contexts differ: ({}, {:?}) vs ({}, {:?})",
                self.dim, self.trunc, other.dim, other.trunc
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_same(other)?;
        let mut s = self.clone();
        for (m, c) in &other.terms {
            s.add_raw(m.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_same(other)?;
        let mut s = self.clone();
        for (m, c) in &other.terms {
            s.add_raw(m.clone(), -c);
        }
        Ok(s)
    }

    pub fn neg(&self) -> Series {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, k: &Q) -> Series {
        let mut s = Self::zero(self.dim, self.trunc);
        if k.is_zero() {
            return s;
        }
        for (m, c) in &self.terms {
            s.terms.insert(m.clone(), c * k);
        }
        s
    }

    /// Multiplies by `t^t_power z^exponent`, dropping anything pushed past the order.
    pub fn shift(&self, exponent: &[i64], t_power: u32) -> Result<Series> {
        let step = Monomial::new(exponent.to_vec(), t_power);
        let mut s = Self::zero(self.dim, self.trunc);
        for (m, c) in &self.terms {
            s.add_term(m.mul(&step), c.clone())?;
        }
        Ok(s)
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_same(other)?;
        Ok(self.mul_raw(other))
    }

    pub(crate) fn mul_raw(&self, other: &Series) -> Series {
        let order = self.trunc.order as i64;
        let mut rhs: Vec<(i64, &Monomial, &Q)> =
            other.terms.iter().map(|(m, c)| (self.trunc.grade(m), m, c)).collect();
        rhs.sort_by_key(|(g, _, _)| *g);
        let mut out = Self::zero(self.dim, self.trunc);
        for (m1, c1) in &self.terms {
            let g1 = self.trunc.grade(m1);
            for (g2, m2, c2) in &rhs {
                if g1 + g2 > order {
                    break;
                }
                out.add_raw(m1.mul(m2), c1 * *c2);
            }
        }
        out
    }

    /// `self^k`; negative powers need a unit.
    pub fn pow(&self, k: i64) -> Result<Series> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut result = Self::one(self.dim, self.trunc);
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_raw(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_raw(&base);
            }
        }
        Ok(result)
    }

    /// Splits `self = c·(1 + r)` with every term of `r` of positive grade.
    fn unit_split(&self) -> Option<(Q, Series)> {
        let c = self.constant_term();
        if c.is_zero() {
            return None;
        }
        let mut r = self.scale(&c.recip());
        r.add_raw(Monomial::one(self.dim), -Q::one());
        if r.terms.keys().any(|m| self.trunc.grade(m) < 1) {
            return None;
        }
        Some((c, r))
    }

    pub fn inverse(&self) -> Result<Series> {
        let (c, r) = self
            .unit_split()
            .ok_or_else(|| Error::NotInvertible(format!("{self} is not a unit of the truncated ring")))?;
        let neg_r = r.neg();
        let mut acc = Self::one(self.dim, self.trunc);
        let mut power = Self::one(self.dim, self.trunc);
        for _ in 0..self.trunc.order {
            power = power.mul_raw(&neg_r);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale(&c.recip()))
    }

    pub fn exp(&self) -> Result<Series> {
        if self.terms.keys().any(|m| self.trunc.grade(m) < 1) {
            return Err(Error::NotSmall(format!("exp needs every term of positive grade: {self}")));
        }
        let mut acc = Self::one(self.dim, self.trunc);
        let mut power = Self::one(self.dim, self.trunc);
        for n in 1..=self.trunc.order as i64 {
            power = power.mul_raw(self).scale(&rat::qf(1, n));
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc)
    }

    pub fn log(&self) -> Result<Series> {
        let ok = self.constant_term().is_one() && self.unit_split().is_some();
        if !ok {
            return Err(Error::NotUnit(format!("log needs constant term 1 and a nilpotent remainder: {self}")));
        }
        let mut r = self.clone();
        r.add_raw(Monomial::one(self.dim), -Q::one());
        let mut acc = Self::zero(self.dim, self.trunc);
        let mut power = Self::one(self.dim, self.trunc);
        for n in 1..=self.trunc.order as i64 {
            power = power.mul_raw(&r);
            if power.is_zero() {
                break;
            }
            let k = if n % 2 == 1 { rat::qf(1, n) } else { rat::qf(-1, n) };
            acc = acc.add(&power.scale(&k))?;
        }
        Ok(acc)
    }

    /// The log derivation ∂_n: z^m ↦ ⟨m, n⟩ z^m, with t pairing to zero.
    pub fn apply_derivation(&self, n: &[i64]) -> Series {
        let mut s = Self::zero(self.dim, self.trunc);
        for (m, c) in &self.terms {
            let k: i64 = m.exponent.iter().zip(n).map(|(a, b)| a * b).sum();
            if k != 0 {
                s.terms.insert(m.clone(), c * rat::q(k));
            }
        }
        s
    }

    /// Text form with the given variable names.
    pub fn render(&self, names: &[&str], t_name: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            if m.t_power == 1 {
                factors.push(t_name.to_string());
            } else if m.t_power > 1 {
                factors.push(format!("{t_name}^{}", m.t_power));
            }
            for (j, &e) in m.exponent.iter().enumerate() {
                let name = names.get(j).map(|s| s.to_string()).unwrap_or_else(|| format!("x{}", j + 1));
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            let mag = c.abs();
            let body = if factors.is_empty() {
                rat::fmt(&mag)
            } else if mag.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", rat::fmt(&mag), factors.join("*"))
            };
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

pub(crate) fn default_names(dim: usize) -> Vec<String> {
    if dim <= 4 {
        ["x", "y", "z", "w"][..dim].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.dim);
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.render(&refs, "t"))
    }
}
