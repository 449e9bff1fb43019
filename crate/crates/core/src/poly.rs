//! Sparse multivariate Laurent polynomials over the rationals.
//!
//! Terms are kept in lexicographic exponent order; the leading term is the
//! lex-largest one. Negative exponents are allowed everywhere except in
//! `gcd`, which works on ordinary polynomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::{self, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Q::one())
    }

    pub fn monomial(nvars: usize, exponent: Vec<i64>, c: Q) -> Self {
        assert_eq!(exponent.len(), nvars, "exponent length");
        let mut p = Self::zero(nvars);
        p.add_term(exponent, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exponent: Vec<i64>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
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

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Q)> {
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

    pub fn coeff(&self, e: &[i64]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Lex-largest term.
    pub fn lead(&self) -> Option<(&Vec<i64>, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, e: &[i64], c: &Q) -> Poly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.iter().zip(e).map(|(a, b)| a + b).collect(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    /// `self * self`, using each cross product once.
    pub fn square(&self) -> Poly {
        let lo: Vec<i64> = self.min_exponents().iter().map(|a| 2 * a).collect();
        let hi: Vec<i64> = self.max_exponents().iter().map(|a| 2 * a).collect();
        let (l, t) = self.integer_form();
        let Some(grid) = Grid::new(&lo, &hi, t.len() * t.len()) else {
            return self * self;
        };
        let base = self.min_exponents();
        let idx: Vec<usize> = t.iter().map(|(e, _)| grid.offset(e, &base)).collect();
        let mut acc = vec![BigInt::zero(); grid.size];
        for i in 0..t.len() {
            acc[2 * idx[i]] += &t[i].1 * &t[i].1;
            for j in i + 1..t.len() {
                acc[idx[i] + idx[j]] += (&t[i].1 * &t[j].1) << 1;
            }
        }
        grid.collect(self.nvars, acc, &(&l * &l))
    }

    /// Coordinatewise minimum of the exponents (zero vector for 0).
    pub fn min_exponents(&self) -> Vec<i64> {
        let mut m: Option<Vec<i64>> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(v) => v.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    pub fn max_exponents(&self) -> Vec<i64> {
        let mut m: Option<Vec<i64>> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(v) => v.iter().zip(e).map(|(a, b)| *a.max(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k >= 0))
    }

    pub fn degree_in(&self, v: usize) -> i64 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    /// `self / d` when the division is exact, `None` otherwise.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dl, dc) = d.lead()?;
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        if d.is_monomial() {
            let inv: Vec<i64> = dl.iter().map(|k| -k).collect();
            return Some(self.mul_monomial(&inv, &dc.recip()));
        }
        // the Newton polytope of an exact quotient sits in this box
        let lo: Vec<i64> = self.min_exponents().iter().zip(d.min_exponents()).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = self.max_exponents().iter().zip(d.max_exponents()).map(|(a, b)| a - b).collect();
        if let Some(q) = self.div_exact_integral(d, &lo, &hi) {
            return q;
        }
        let mut r = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((rl, rc)) = r.lead() {
            let e: Vec<i64> = rl.iter().zip(dl).map(|(a, b)| a - b).collect();
            if e.iter().zip(&lo).zip(&hi).any(|((k, l), h)| k < l || k > h) {
                return None;
            }
            let c = rc / dc;
            for (k, v) in &d.terms {
                r.add_term(k.iter().zip(&e).map(|(a, b)| a + b).collect(), -(v * &c));
            }
            q.add_term(e, c);
        }
        Some(q)
    }

    /// Common denominator and the integer numerators.
    fn integer_form(&self) -> (BigInt, Vec<(&Vec<i64>, BigInt)>) {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            if !c.denom().is_one() {
                l = l.lcm(c.denom());
            }
        }
        let terms = self.terms.iter().map(|(e, c)| (e, c.numer() * (&l / c.denom()))).collect();
        (l, terms)
    }

    /// Long division over the integers. Outer `None` means a quotient
    /// coefficient was not integral and the rational path must decide.
    fn div_exact_integral(&self, d: &Poly, lo: &[i64], hi: &[i64]) -> Option<Option<Poly>> {
        let (la, ta) = self.integer_form();
        let (ld, td) = d.integer_form();
        let (dl, dc) = td.last().map(|(e, c)| ((*e).clone(), c.clone()))?;
        let a_lo = self.min_exponents();
        if let Some(grid) = Grid::new(&a_lo, &self.max_exponents(), ta.len() * td.len()) {
            let mut r = vec![BigInt::zero(); grid.size];
            for (e, c) in ta {
                r[grid.index(e)] = c;
            }
            // index shift of each divisor term relative to its leading term
            let lead_off = grid.offset(&dl, &d.min_exponents());
            let shifts: Vec<(usize, &BigInt)> = td.iter().map(|(k, v)| (grid.offset(k, &d.min_exponents()), v)).collect();
            let mut q: Vec<(Vec<i64>, BigInt)> = Vec::new();
            for idx in (0..grid.size).rev() {
                if r[idx].is_zero() {
                    continue;
                }
                let e: Vec<i64> = grid.unpack(idx).iter().zip(&dl).map(|(a, b)| a - b).collect();
                if e.iter().zip(lo).zip(hi).any(|((k, l), h)| k < l || k > h) {
                    return Some(None);
                }
                let (c, rem) = r[idx].div_rem(&dc);
                if !rem.is_zero() {
                    return None;
                }
                let base = idx - lead_off;
                for (off, v) in &shifts {
                    r[base + off] -= *v * &c;
                }
                q.push((e, c));
            }
            let scale = Q::new(ld, la);
            return Some(Some(Poly {
                nvars: self.nvars,
                terms: q.into_iter().map(|(e, c)| (e, Q::from_integer(c) * &scale)).collect(),
            }));
        }
        let mut r: BTreeMap<Vec<i64>, BigInt> = ta.into_iter().map(|(e, c)| (e.clone(), c)).collect();
        let mut q: Vec<(Vec<i64>, BigInt)> = Vec::new();
        let mut key = vec![0i64; self.nvars];
        while let Some((rl, rc)) = r.iter().next_back() {
            let e: Vec<i64> = rl.iter().zip(&dl).map(|(a, b)| a - b).collect();
            if e.iter().zip(lo).zip(hi).any(|((k, l), h)| k < l || k > h) {
                return Some(None);
            }
            let (c, rem) = rc.div_rem(&dc);
            if !rem.is_zero() {
                return None;
            }
            for (k, v) in &td {
                for (slot, (a, b)) in key.iter_mut().zip(k.iter().zip(&e)) {
                    *slot = a + b;
                }
                let prod = v * &c;
                match r.get_mut(&key[..]) {
                    Some(x) => {
                        *x -= prod;
                        if x.is_zero() {
                            r.remove(&key[..]);
                        }
                    }
                    None => {
                        r.insert(key.clone(), -prod);
                    }
                }
            }
            q.push((e, c));
        }
        let scale = Q::new(ld, la);
        Some(Some(Poly { nvars: self.nvars, terms: q.into_iter().map(|(e, c)| (e, Q::from_integer(c) * &scale)).collect() }))
    }

    pub fn eval(&self, values: &[Q]) -> Option<Q> {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(e) {
                if k < 0 && v.is_zero() {
                    return None;
                }
                t *= num_traits::pow::Pow::pow(v, k as i32);
            }
            acc += t;
        }
        Some(acc)
    }

    /// Substitutes `x_i ↦ c_i·z^{e_i}` (Laurent monomials in `nvars` new variables).
    pub fn substitute_monomials(&self, nvars: usize, images: &[(Q, Vec<i64>)]) -> Poly {
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exp = vec![0i64; nvars];
            for (k, (ic, ie)) in e.iter().zip(images) {
                if *k == 0 {
                    continue;
                }
                coeff *= num_traits::pow::Pow::pow(ic, *k as i32);
                for (x, y) in exp.iter_mut().zip(ie) {
                    *x += k * y;
                }
            }
            out.add_term(exp, coeff);
        }
        out
    }

    /// Substitutes polynomials for the variables (nonnegative exponents only).
    pub fn substitute(&self, images: &[Poly]) -> Option<Poly> {
        let nvars = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut t = Self::constant(nvars, c.clone());
            for (k, img) in e.iter().zip(images) {
                if *k < 0 {
                    return None;
                }
                if *k > 0 {
                    t = &t * &img.pow(*k as u32);
                }
            }
            out = &out + &t;
        }
        Some(out)
    }

    /// Clears negative exponents with the smallest monomial factor and makes
    /// the polynomial monic in lex order. Zero stays zero.
    pub fn normalized(&self) -> Poly {
        let Some((_, c)) = self.lead() else {
            return self.clone();
        };
        let shift: Vec<i64> = self.min_exponents().iter().map(|k| -k).collect();
        self.mul_monomial(&shift, &c.recip())
    }

    /// Monic in lex order.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Coefficient of v^k, as a polynomial with the v exponent removed.
    fn coeff_in(&self, v: usize, k: i64) -> Poly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == k {
                let mut e2 = e.clone();
                e2[v] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    fn main_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.terms.keys().any(|e| e[v] != 0))
    }

    fn content_in(&self, v: usize) -> Poly {
        let mut g = Self::zero(self.nvars);
        for k in 0..=self.degree_in(v) {
            let c = self.coeff_in(v, k);
            if !c.is_zero() {
                g = gcd(&g, &c);
                if g.as_constant().is_some() {
                    return Self::one(self.nvars);
                }
            }
        }
        g
    }

    /// Pseudo-remainder of self by b with respect to v.
    fn prem(&self, b: &Poly, v: usize) -> Poly {
        let db = b.degree_in(v);
        let lb = b.coeff_in(v, db);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lr = r.coeff_in(v, dr);
            let mut shift = vec![0; self.nvars];
            shift[v] = dr - db;
            r = &(&r * &lb) - &(b * &lr).mul_monomial(&shift, &Q::one());
        }
        r
    }
}

/// Greatest common divisor of two polynomials with nonnegative exponents,
/// monic in lex order. Recursive primitive remainder sequences.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let n = a.nvars.max(b.nvars);
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one(n);
    }
    if a.is_monomial() || b.is_monomial() {
        // gcd with a monomial is the common monomial factor
        let (m, other) = if a.is_monomial() { (a, b) } else { (b, a) };
        let me = m.lead().unwrap().0;
        let oe = other.min_exponents();
        let e: Vec<i64> = me.iter().zip(&oe).map(|(x, y)| *x.min(y)).collect();
        return Poly::monomial(n, e, Q::one());
    }
    let v = match (a.main_var(), b.main_var()) {
        (Some(x), Some(y)) => x.max(y),
        _ => return Poly::one(n),
    };
    if a.degree_in(v) == 0 {
        return gcd(a, &b.content_in(v));
    }
    if b.degree_in(v) == 0 {
        return gcd(&a.content_in(v), b);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = p.prem(&q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            return c.monic();
        }
        let cr = r.content_in(v);
        p = q;
        q = r.div_exact(&cr).expect("content divides");
        q = primitive_rational(&q);
    }
    let g = &c * &q;
    g.monic()
}

/// Scales a polynomial so its coefficients are coprime integers.
fn primitive_rational(p: &Poly) -> Poly {
    let mut num = num_bigint::BigInt::zero();
    let mut den = num_bigint::BigInt::one();
    for c in p.terms.values() {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return p.clone();
    }
    p.scale(&Q::new(den, num))
}

/// Dense mixed-radix indexing of an exponent box. Index order is lex order,
/// so scanning downward visits terms from the leading one.
struct Grid {
    lo: Vec<i64>,
    strides: Vec<usize>,
    extents: Vec<usize>,
    size: usize,
}

impl Grid {
    /// `None` when the box is large relative to the work it would save.
    fn new(lo: &[i64], hi: &[i64], work: usize) -> Option<Grid> {
        let n = lo.len();
        let mut extents = vec![0usize; n];
        let mut size: usize = 1;
        for i in 0..n {
            let e = usize::try_from(hi[i] - lo[i] + 1).ok()?;
            extents[i] = e;
            size = size.checked_mul(e)?;
        }
        if size > (1 << 22) || size > 8 * work.max(64) {
            return None;
        }
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * extents[i + 1];
        }
        Some(Grid { lo: lo.to_vec(), strides, extents, size })
    }

    /// Index contribution of `e - base`; offsets of two factors add.
    fn offset(&self, e: &[i64], base: &[i64]) -> usize {
        e.iter().zip(base).zip(&self.strides).map(|((a, b), s)| (a - b) as usize * s).sum()
    }

    fn index(&self, e: &[i64]) -> usize {
        self.offset(e, &self.lo)
    }

    fn unpack(&self, mut idx: usize) -> Vec<i64> {
        let mut e = vec![0i64; self.lo.len()];
        for i in 0..e.len() {
            e[i] = self.lo[i] + (idx / self.strides[i]) as i64;
            idx %= self.strides[i];
        }
        debug_assert!(e.iter().zip(&self.lo).zip(&self.extents).all(|((a, l), x)| ((a - l) as usize) < *x));
        e
    }

    fn collect(&self, nvars: usize, acc: Vec<BigInt>, den: &BigInt) -> Poly {
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (self.unpack(i), Q::new(v, den.clone())))
            .collect();
        Poly { nvars, terms }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut s = self.clone();
        for (e, c) in &o.terms {
            s.add_term(e.clone(), c.clone());
        }
        s
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut s = self.clone();
        for (e, c) in &o.terms {
            s.add_term(e.clone(), -c);
        }
        s
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let nvars = self.nvars.max(o.nvars);
        if self.is_zero() || o.is_zero() {
            return Poly::zero(nvars);
        }
        // integer accumulation avoids a gcd per coefficient product
        let (la, ta) = self.integer_form();
        let (lb, tb) = o.integer_form();
        let den = la * lb;
        let lo: Vec<i64> = self.min_exponents().iter().zip(o.min_exponents()).map(|(a, b)| a + b).collect();
        let hi: Vec<i64> = self.max_exponents().iter().zip(o.max_exponents()).map(|(a, b)| a + b).collect();
        if let Some(grid) = Grid::new(&lo, &hi, ta.len() * tb.len()) {
            let (lo_a, lo_b) = (self.min_exponents(), o.min_exponents());
            let ia: Vec<usize> = ta.iter().map(|(e, _)| grid.offset(e, &lo_a)).collect();
            let ib: Vec<usize> = tb.iter().map(|(e, _)| grid.offset(e, &lo_b)).collect();
            let mut acc = vec![BigInt::zero(); grid.size];
            for ((_, ca), i) in ta.iter().zip(&ia) {
                for ((_, cb), j) in tb.iter().zip(&ib) {
                    acc[i + j] += ca * cb;
                }
            }
            return grid.collect(nvars, acc, &den);
        }
        let mut acc: HashMap<Vec<i64>, BigInt> = HashMap::with_capacity(ta.len() * tb.len() / 2 + 1);
        let mut key = vec![0i64; nvars];
        for (ea, ca) in &ta {
            for (eb, cb) in &tb {
                for (k, (a, b)) in key.iter_mut().zip(ea.iter().zip(eb.iter())) {
                    *k = a + b;
                }
                let prod = ca * cb;
                match acc.get_mut(&key[..]) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(key.clone(), prod);
                    }
                }
            }
        }
        Poly {
            nvars,
            terms: acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k, Q::new(v, den.clone()))).collect(),
        }
    }
}

impl Poly {
    /// Text form with the given variable names, highest terms first.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            for (k, name) in e.iter().zip(names) {
                match *k {
                    0 => {}
                    1 => factors.push(name.clone()),
                    k => factors.push(format!("{name}^{k}")),
                }
            }
            let neg = c.is_negative();
            let a = c.abs();
            let body = if factors.is_empty() {
                rat::fmt(&a)
            } else if a.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", rat::fmt(&a), factors.join("*"))
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl Poly {
    /// Parses sums of products like `2*X^2*t - (1 + W)^2/3`. Unknown names,
    /// stray characters and negative powers of non-monomials are errors.
    pub fn parse(s: &str, names: &[String]) -> Result<Poly, String> {
        let mut p = Parser { src: s.as_bytes(), pos: 0, names };
        let out = p.sum()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(format!("unexpected '{}' at offset {}", p.src[p.pos] as char, p.pos));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Poly, String> {
        let n = self.names.len();
        let mut acc = Poly::zero(n);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.product()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn product(&mut self) -> Result<Poly, String> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    if !d.is_monomial() {
                        return Err("can only divide by a monomial".into());
                    }
                    acc = acc.div_exact(&d).expect("monomial division");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly, String> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let k: i64 = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| format!("bad exponent at offset {start}"))?;
        if k >= 0 {
            Ok(base.pow(k as u32))
        } else if base.is_monomial() {
            Ok(Poly::one(base.nvars).div_exact(&base.pow((-k) as u32)).expect("monomial division"))
        } else {
            Err("negative power of a non-monomial".into())
        }
    }

    fn atom(&mut self) -> Result<Poly, String> {
        let n = self.names.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(format!("missing ')' at offset {}", self.pos));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Poly::constant(n, rat::parse(text).expect("digits")))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let i = self.names.iter().position(|v| v == name).ok_or_else(|| format!("unknown variable '{name}'"))?;
                Ok(Poly::var(n, i))
            }
            Some(c) => Err(format!("unexpected '{}' at offset {}", c as char, self.pos)),
            None => Err("unexpected end of input".into()),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}
