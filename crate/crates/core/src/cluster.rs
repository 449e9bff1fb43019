//! Cluster seeds, mutations, and the flip/pop/juggle moves on Fock–Goncharov
//! coordinates; the rank-2 Y-system; Fock–Goncharov relations.
//!
//! Coordinates are rational functions in a fixed list of symbols. The
//! initial system for a seed of size n has symbols `X1..Xn, A1..An`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{invariant, Error, Result};
use crate::lattice::{Charge, LatticeContext, QuadraticRefinement};
use crate::poly::Poly;
use crate::rat::{self, Q};
use crate::ratfunc::RatFunc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    lattice: LatticeContext,
    basis: Vec<Charge>,
    d: Vec<i64>,
    frozen: BTreeSet<usize>,
    // rows: basis coordinates of the standard unit vectors
    inverse: Vec<Vec<Q>>,
}

impl Seed {
    pub fn new(
        lattice: LatticeContext,
        basis: Vec<Charge>,
        d: Vec<i64>,
        frozen: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let n = lattice.rank();
        if basis.len() != n {
            return Err(Error::RankMismatch(format!("seed has {} basis vectors, lattice rank is {n}", basis.len())));
        }
        for e in &basis {
            lattice.pair(e, e)?;
        }
        if d.len() != n {
            return Err(Error::RankMismatch(format!("{} multipliers for {n} basis vectors", d.len())));
        }
        if d.iter().any(|&k| k <= 0) {
            return Err(invariant("d", "multipliers d_i must be positive integers"));
        }
        let frozen: BTreeSet<usize> = frozen.into_iter().collect();
        if let Some(&k) = frozen.iter().find(|&&k| k >= n) {
            return Err(Error::RankMismatch(format!("frozen index {k} out of range")));
        }
        let m: Vec<Vec<i64>> = basis.iter().map(|e| e.0.clone()).collect();
        let inverse = rat::inverse(&m).ok_or_else(|| invariant("basis", "seed basis is linearly dependent"))?;
        Ok(Seed { lattice, basis, d, frozen, inverse })
    }

    /// Seed whose basis is the lattice's degree basis, all d_i = 1, nothing frozen.
    pub fn from_lattice(lattice: &LatticeContext) -> Result<Self> {
        let n = lattice.rank();
        Seed::new(lattice.clone(), lattice.degree_basis().to_vec(), vec![1; n], [])
    }

    pub fn lattice(&self) -> &LatticeContext {
        &self.lattice
    }

    pub fn basis(&self) -> &[Charge] {
        &self.basis
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    pub fn frozen(&self) -> &BTreeSet<usize> {
        &self.frozen
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// ε_ij = (e_i, e_j)·d_j.
    pub fn epsilon(&self, i: usize, j: usize) -> i64 {
        self.lattice.pair(&self.basis[i], &self.basis[j]).expect("basis checked") * self.d[j]
    }

    pub fn exchange_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.epsilon(i, j)).collect()).collect()
    }

    /// Integer coordinates of a charge in the seed basis.
    pub fn coordinates(&self, g: &Charge) -> Result<Vec<i64>> {
        self.lattice.pair(g, g)?;
        let n = self.len();
        (0..n)
            .map(|i| {
                let c: Q = (0..n).map(|r| rat::q(g.0[r]) * &self.inverse[r][i]).sum();
                rat::to_int(&c)
                    .ok_or_else(|| Error::InvalidCharge(format!("{g} is not an integral combination of the seed basis")))
            })
            .collect()
    }

    fn check_mutable(&self, k: usize) -> Result<()> {
        if k >= self.len() {
            return Err(Error::RankMismatch(format!("index {k} out of range for a seed of size {}", self.len())));
        }
        if self.frozen.contains(&k) {
            return Err(Error::FrozenIndex(k));
        }
        Ok(())
    }

    /// The basis after mutation at k (the charge part of a flip).
    fn mutated_basis(&self, k: usize) -> Vec<Charge> {
        (0..self.len())
            .map(|i| {
                if i == k {
                    -&self.basis[k]
                } else {
                    &self.basis[i] + &self.basis[k].scale(self.epsilon(i, k).max(0))
                }
            })
            .collect()
    }

    fn with_basis(&self, basis: Vec<Charge>) -> Seed {
        let m: Vec<Vec<i64>> = basis.iter().map(|e| e.0.clone()).collect();
        let inverse = rat::inverse(&m).expect("mutation preserves bases");
        Seed { basis, inverse, ..self.clone() }
    }
}

/// Values of the X- and A-coordinates of a seed, as rational functions in
/// named symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FGVariableSystem {
    symbols: Vec<String>,
    x: Vec<RatFunc>,
    a: Vec<RatFunc>,
}

impl FGVariableSystem {
    /// Symbols `X1..Xn, A1..An` with every coordinate equal to its symbol.
    pub fn initial(n: usize) -> Self {
        let symbols: Vec<String> =
            (1..=n).map(|i| format!("X{i}")).chain((1..=n).map(|i| format!("A{i}"))).collect();
        let x = (0..n).map(|i| RatFunc::var(2 * n, i)).collect();
        let a = (0..n).map(|i| RatFunc::var(2 * n, n + i)).collect();
        FGVariableSystem { symbols, x, a }
    }

    /// X-coordinates only; `a` may be empty.
    pub fn new(symbols: Vec<String>, x: Vec<RatFunc>, a: Vec<RatFunc>) -> Result<Self> {
        if !a.is_empty() && a.len() != x.len() {
            return Err(Error::RankMismatch(format!("{} X-coordinates but {} A-coordinates", x.len(), a.len())));
        }
        if let Some(f) = x.iter().chain(&a).find(|f| f.nvars() != symbols.len() && !f.is_zero()) {
            return Err(Error::RankMismatch(format!("coordinate in {} symbols, expected {}", f.nvars(), symbols.len())));
        }
        Ok(FGVariableSystem { symbols, x, a })
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn x(&self) -> &[RatFunc] {
        &self.x
    }

    pub fn a(&self) -> &[RatFunc] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn render_x(&self, i: usize) -> String {
        self.x[i].render(&self.symbols)
    }

    pub fn render_a(&self, i: usize) -> String {
        self.a[i].render(&self.symbols)
    }

    /// X_γ = ∏ X_i^{c_i} for γ = Σ c_i e_i in the seed basis.
    pub fn x_charge(&self, seed: &Seed, g: &Charge) -> Result<RatFunc> {
        let c = seed.coordinates(g)?;
        let mut out = RatFunc::one(self.symbols.len());
        for (xi, ci) in self.x.iter().zip(c) {
            if ci != 0 {
                out = out.mul(&xi.pow(ci)?);
            }
        }
        Ok(out)
    }

    fn check_len(&self, seed: &Seed) -> Result<()> {
        if self.len() != seed.len() {
            return Err(Error::RankMismatch(format!("{} coordinates for a seed of size {}", self.len(), seed.len())));
        }
        Ok(())
    }
}

/// Cluster mutation at a non-frozen index k.
pub fn mutate(seed: &Seed, sys: &FGVariableSystem, k: usize) -> Result<(Seed, FGVariableSystem)> {
    seed.check_mutable(k)?;
    sys.check_len(seed)?;
    let n = seed.len();
    let xk = &sys.x[k];
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        if i == k {
            x.push(xk.inv()?);
            continue;
        }
        let e = seed.epsilon(i, k);
        if e == 0 {
            x.push(sys.x[i].clone());
            continue;
        }
        let factor = xk.pow(-e.signum())?.add_constant(&Q::one()).pow(-e)?;
        x.push(sys.x[i].mul(&factor));
    }
    let mut a = sys.a.clone();
    if !a.is_empty() {
        let nv = sys.symbols.len();
        let (mut plus, mut minus) = (RatFunc::one(nv), RatFunc::one(nv));
        for j in 0..n {
            let e = seed.epsilon(k, j);
            if e > 0 {
                plus = plus.mul(&sys.a[j].pow(e)?);
            } else if e < 0 {
                minus = minus.mul(&sys.a[j].pow(-e)?);
            }
        }
        a[k] = plus.add(&minus).div(&sys.a[k])?;
    }
    let new_seed = seed.with_basis(seed.mutated_basis(k));
    Ok((new_seed, FGVariableSystem { symbols: sys.symbols.clone(), x, a }))
}

/// Flip across the BPS ray of the hypermultiplet e_k. Returns the relabeled
/// charges and the images of the old coordinates,
/// X_{γ_i} ↦ X_{γ_i}(1 + X_{γ_k})^{−⟨γ_i, γ_k⟩}.
pub fn flip(seed: &Seed, sys: &FGVariableSystem, k: usize) -> Result<(Seed, FGVariableSystem)> {
    seed.check_mutable(k)?;
    sys.check_len(seed)?;
    let xk = sys.x_charge(seed, &seed.basis[k])?.add_constant(&Q::one());
    let mut x = Vec::with_capacity(seed.len());
    for (i, xi) in sys.x.iter().enumerate() {
        let p = seed.lattice.pair(&seed.basis[i], &seed.basis[k])?;
        x.push(if p == 0 { xi.clone() } else { xi.mul(&xk.pow(-p)?) });
    }
    let new_seed = seed.with_basis(seed.mutated_basis(k));
    Ok((new_seed, FGVariableSystem { symbols: sys.symbols.clone(), x, a: sys.a.clone() }))
}

/// Pop at a degenerate edge E with companion E': X_E ↦ X_E⁻¹, X_E' ↦ X_E·X_E'.
pub fn pop_transform(sys: &FGVariableSystem, e: usize, e2: usize) -> Result<FGVariableSystem> {
    if e >= sys.len() || e2 >= sys.len() {
        return Err(Error::RankMismatch(format!("pop indices ({e}, {e2}) out of range")));
    }
    if e == e2 {
        return Err(invariant("distinct_edges", "the degenerate edge and its companion must differ"));
    }
    let mut x = sys.x.clone();
    x[e] = sys.x[e].inv()?;
    x[e2] = sys.x[e].mul(&sys.x[e2]);
    Ok(FGVariableSystem { x, ..sys.clone() })
}

/// Juggle from T^{−∞} to T^{+∞}. Returns (γ_A⁺, γ_B⁺) and the coordinates
/// after X_γ ↦ X_γ(1 − X_{γ_vec})^{−2⟨γ, γ_vec⟩} with γ_vec = −γ_A⁺.
pub fn juggle(
    seed: &Seed,
    sys: &FGVariableSystem,
    gamma_a: &Charge,
    gamma_b: &Charge,
) -> Result<(Charge, Charge, FGVariableSystem)> {
    sys.check_len(seed)?;
    let ctx = seed.lattice();
    let p = ctx.pair(gamma_b, gamma_a)?;
    if p != -2 {
        return Err(Error::PairingMismatch(format!("<{gamma_b}, {gamma_a}> = {p}, a juggle needs -2")));
    }
    let a_plus = -gamma_a;
    let b_plus = &(-gamma_b) + &gamma_a.scale(2);
    let vec = -&a_plus;
    let one_minus = sys.x_charge(seed, &vec)?.neg().add_constant(&Q::one());
    let mut x = Vec::with_capacity(seed.len());
    for (i, xi) in sys.x.iter().enumerate() {
        let k = ctx.pair(&seed.basis[i], &vec)?;
        x.push(if k == 0 { xi.clone() } else { xi.mul(&one_minus.pow(-2 * k)?) });
    }
    Ok((a_plus, b_plus, FGVariableSystem { symbols: sys.symbols.clone(), x, a: sys.a.clone() }))
}

/// The recursion y_{n+1} = 1/x_n, x_{n+1} = y_n(1 + x_n)^r.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YRule {
    pub exponent: u32,
}

impl YRule {
    pub fn pentagon() -> Self {
        YRule { exponent: 1 }
    }

    pub fn su2() -> Self {
        YRule { exponent: 2 }
    }
}

/// Initial point: two indeterminates `x`, `y`, or exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum YStart {
    Symbolic,
    Values(Q, Q),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YSystemRun {
    /// (x_n, y_n) for n = 1, 2, ...; stops early once the orbit closes.
    pub orbit: Vec<(RatFunc, RatFunc)>,
    pub period: Option<usize>,
}

impl YSystemRun {
    pub fn symbols() -> [String; 2] {
        ["x".to_string(), "y".to_string()]
    }

    pub fn render(&self) -> Vec<(String, String)> {
        let names = Self::symbols();
        self.orbit.iter().map(|(x, y)| (x.render(&names), y.render(&names))).collect()
    }
}

/// Iterates the recursion for up to `steps` steps and reports the least
/// period p ≤ steps with (x_{p+1}, y_{p+1}) = (x_1, y_1).
pub fn y_system_run(rule: YRule, start: YStart, steps: usize) -> Result<YSystemRun> {
    let (x1, y1) = match start {
        YStart::Symbolic => (RatFunc::var(2, 0), RatFunc::var(2, 1)),
        YStart::Values(x, y) => (RatFunc::constant(2, x), RatFunc::constant(2, y)),
    };
    let mut orbit = vec![(x1.clone(), y1.clone())];
    for n in 1..=steps {
        let (x, y) = orbit.last().unwrap();
        let y_next = x.inv().map_err(|_| Error::ZeroDenominator(format!("x_{n} = 0")))?;
        let x_next = y.mul(&x.add_constant(&Q::one()).pow(rule.exponent as i64)?);
        let closed = x_next == x1 && y_next == y1;
        orbit.push((x_next, y_next));
        if closed {
            return Ok(YSystemRun { orbit, period: Some(n) });
        }
    }
    Ok(YSystemRun { orbit, period: None })
}

/// A Fock–Goncharov coordinate symbol or its inverse, written `x1` or `1/y3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FGSymbol {
    pub name: String,
    pub power: i64,
}

impl FGSymbol {
    pub fn new(name: impl Into<String>) -> Self {
        FGSymbol { name: name.into(), power: 1 }
    }

    pub fn inverse(name: impl Into<String>) -> Self {
        FGSymbol { name: name.into(), power: -1 }
    }

    /// The Laurent monomial in `vars` (which must contain the name).
    pub fn to_poly(&self, vars: &[String]) -> Option<Poly> {
        let i = vars.iter().position(|v| *v == self.name)?;
        let mut e = vec![0; vars.len()];
        e[i] = self.power;
        Some(Poly::monomial(vars.len(), e, Q::one()))
    }
}

impl fmt::Display for FGSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power {
            1 => write!(f, "{}", self.name),
            -1 => write!(f, "1/{}", self.name),
            p => write!(f, "{}^{p}", self.name),
        }
    }
}

impl FromStr for FGSymbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let valid = |n: &str| !n.is_empty() && n.chars().all(|c| c.is_alphanumeric() || c == '_');
        let (name, power) = if let Some(rest) = s.strip_prefix("1/") {
            (rest, -1)
        } else if let Some((n, p)) = s.split_once('^') {
            (n, p.parse::<i64>().map_err(|_| Error::InvalidElement(format!("bad exponent in symbol {s:?}")))?)
        } else {
            (s, 1)
        };
        if !valid(name) || power == 0 {
            return Err(Error::InvalidElement(format!("bad coordinate symbol {s:?}")));
        }
        Ok(FGSymbol { name: name.to_string(), power })
    }
}

impl Serialize for FGSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FGSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Slab data attached to a node of the cycle around a joint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FGSlab {
    pub omega: i64,
    /// Expected exponent; checked against the pairings when given.
    #[serde(default)]
    pub a: Option<i64>,
    /// Longitudinal factor X_s; absent means 1.
    #[serde(default)]
    pub side: Option<FGSymbol>,
}

/// One coordinate in the cyclic order around a joint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FGNode {
    pub symbol: FGSymbol,
    pub charge: Charge,
    #[serde(default)]
    pub slab: Option<FGSlab>,
}

/// X_prev · X_next = (1 − σ·X_mid)^{exponent} · X_side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FGRelation {
    pub slab: Charge,
    pub lhs: [FGSymbol; 2],
    pub mid: FGSymbol,
    pub sigma: i8,
    pub exponent: i64,
    pub side: Option<FGSymbol>,
}

impl FGRelation {
    /// Variable names used, in first-appearance order.
    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for s in self.lhs.iter().chain([&self.mid]).chain(&self.side) {
            if !out.contains(&s.name) {
                out.push(s.name.clone());
            }
        }
        out
    }

    /// lhs − rhs as a Laurent polynomial in `vars`.
    pub fn to_poly(&self, vars: &[String]) -> Result<Poly> {
        let sym = |s: &FGSymbol| {
            s.to_poly(vars).ok_or_else(|| Error::InvalidElement(format!("symbol {} not among the variables", s.name)))
        };
        let n = vars.len();
        let lhs = &sym(&self.lhs[0])? * &sym(&self.lhs[1])?;
        let base = &Poly::one(n) - &sym(&self.mid)?.scale(&rat::q(self.sigma as i64));
        let mut rhs = if self.exponent >= 0 {
            base.pow(self.exponent as u32)
        } else {
            return Err(Error::InvalidElement("negative exponent in a relation".into()));
        };
        if let Some(s) = &self.side {
            rhs = &rhs * &sym(s)?;
        }
        Ok(&lhs - &rhs)
    }
}

impl fmt::Display for FGRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |s: &FGSymbol| if s.power == 1 { s.to_string() } else { format!("({s})") };
        let sign = if self.sigma < 0 { "+" } else { "-" };
        write!(f, "{}*{} = ", wrap(&self.lhs[0]), wrap(&self.lhs[1]))?;
        match self.exponent {
            0 => write!(f, "1")?,
            1 => write!(f, "(1 {sign} {})", self.mid)?,
            e => write!(f, "(1 {sign} {})^{e}", self.mid)?,
        }
        if let Some(s) = &self.side {
            write!(f, "*{}", wrap(s))?;
        }
        Ok(())
    }
}

/// One relation per slab node of the cyclic list, using its two neighbours.
/// The exponent is a·Ω with a = ⟨γ_prev, γ_mid⟩ = ⟨γ_mid, γ_next⟩ > 0.
pub fn fg_relations(
    ctx: &LatticeContext,
    r: &QuadraticRefinement,
    nodes: &[FGNode],
) -> Result<Vec<FGRelation>> {
    let n = nodes.len();
    if n < 3 {
        return Err(Error::InconsistentPairings(format!("a cycle needs at least three nodes, got {n}")));
    }
    let mut out = Vec::new();
    for (j, node) in nodes.iter().enumerate() {
        let Some(slab) = &node.slab else { continue };
        let prev = &nodes[(j + n - 1) % n];
        let next = &nodes[(j + 1) % n];
        let a = ctx.pair(&prev.charge, &node.charge)?;
        let b = ctx.pair(&node.charge, &next.charge)?;
        if a <= 0 || a != b {
            return Err(Error::InconsistentPairings(format!(
                "slab {}: <{}, {}> = {a} and <{}, {}> = {b} must be equal and positive",
                node.symbol, prev.charge, node.charge, node.charge, next.charge
            )));
        }
        if let Some(expected) = slab.a {
            if expected != a {
                return Err(Error::InconsistentPairings(format!(
                    "slab {}: supplied a = {expected}, pairing gives {a}",
                    node.symbol
                )));
            }
        }
        out.push(FGRelation {
            slab: node.charge.clone(),
            lhs: [prev.symbol.clone(), next.symbol.clone()],
            mid: node.symbol.clone(),
            sigma: r.sign(ctx, &node.charge)?,
            exponent: a * slab.omega,
            side: slab.side.clone(),
        });
    }
    Ok(out)
}
