//! Slab gluing for toric degenerations.
//!
//! Each slab glues two thickened charts by a fiber product; the glued ring is
//! cut out by a single relation `X_in·X_out = f^a·x_s·t^e`. Collecting one
//! relation per slab gives the degeneration ideal, whose fiber at a chosen
//! value of `t` can be compared with a Fock–Goncharov relation ideal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cluster::{FGRelation, FGSymbol};
use crate::error::{invariant, Error, Result};
use crate::lattice::Charge;
use crate::poly::Poly;
use crate::rat::Q;
use crate::scattering::{is_consistent, ScatteringDiagram};

/// Name of the degeneration parameter; always the last ring variable.
pub const T: &str = "t";

/// `X_g1_-2` for the charge (1,−2).
pub fn default_name(g: &Charge) -> String {
    let coords: Vec<String> = g.0.iter().map(|c| c.to_string()).collect();
    format!("X_g{}", coords.join("_"))
}

/// Gluing data for one slab. Polynomials live in the ring of the global
/// variables followed by `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlabGluingSpec {
    pub charge: Charge,
    pub function: Poly,
    pub a: u32,
    pub e: u32,
    pub incoming: usize,
    pub outgoing: usize,
    /// Longitudinal monomial; `None` means 1.
    pub side: Option<Poly>,
}

/// `X_in·X_out − f^a·x_s·t^e` together with the fiber-product lifts.
#[derive(Clone, Debug, PartialEq)]
pub struct GluingRelation {
    pub slab: Charge,
    pub incoming: usize,
    pub outgoing: usize,
    pub relation: Poly,
    /// `f^a·x_s·t^e` mod `t^{k+1}`.
    pub rhs: Poly,
    /// Lifts of `X_in` and `X_out` into the two chart rings. Chart variables
    /// `x`, `y` are appended after `t`.
    pub lifts: [[Poly; 2]; 2],
    factored: String,
}

impl GluingRelation {
    /// The right-hand side in factored form, e.g. `(1 + W)^2*t`.
    pub fn factored(&self) -> &str {
        &self.factored
    }

    fn truncated(&self, k: u32) -> GluingRelation {
        let mut out = self.clone();
        out.relation = truncate_t(&self.relation, k);
        out.rhs = truncate_t(&self.rhs, k);
        out
    }
}

fn truncate_t(p: &Poly, k: u32) -> Poly {
    let n = p.nvars();
    Poly::from_terms(n, p.terms().filter(|(e, _)| e[n - 1] <= k as i64).map(|(e, c)| (e.clone(), c.clone())))
}

fn widen(p: &Poly, extra: usize) -> Poly {
    let n = p.nvars() + extra;
    Poly::from_terms(
        n,
        p.terms().map(|(e, c)| {
            let mut e = e.clone();
            e.resize(n, 0);
            (e, c.clone())
        }),
    )
}

/// Glues the two charts across one slab at order `k`.
pub fn glue_slab(spec: &SlabGluingSpec, names: &[String], k: u32) -> Result<GluingRelation> {
    let n = spec.function.nvars();
    if names.len() != n || names.last().map(String::as_str) != Some(T) {
        return Err(invariant("variables", format!("expected the globals followed by '{T}'")));
    }
    if spec.incoming >= n - 1 || spec.outgoing >= n - 1 || spec.incoming == spec.outgoing {
        return Err(invariant("transverse", "transverse variables must be two distinct globals"));
    }
    if spec.function.coeff(&vec![0; n]) != Q::one() || spec.function.terms().count() == 0 {
        return Err(Error::NotUnit(format!("slab function {} must have constant term 1", spec.function.render(names))));
    }
    if spec.a == 0 || spec.e == 0 {
        return Err(invariant("exponents", "a and e must be at least 1"));
    }
    if k < spec.e {
        return Err(Error::OrderTooLow(format!("order {k} leaves nothing of t^{}", spec.e)));
    }
    let side = spec.side.clone().unwrap_or_else(|| Poly::one(n));
    if side.nvars() != n || !side.is_monomial() {
        return Err(invariant("side", "longitudinal factor must be a monomial"));
    }
    let mut te = vec![0; n];
    te[n - 1] = spec.e as i64;
    let fa = spec.function.pow(spec.a);
    let full = &fa * &side.mul_monomial(&te, &Q::one());
    let rhs = truncate_t(&full, k);
    let mut lhs_e = vec![0; n];
    lhs_e[spec.incoming] += 1;
    lhs_e[spec.outgoing] += 1;
    let relation = &Poly::monomial(n, lhs_e, Q::one()) - &rhs;
    if !relation.is_polynomial() {
        return Err(Error::InconsistentStructure(format!(
            "relation {} has negative exponents",
            relation.render(names)
        )));
    }

    // chart ring: globals, t, x, y
    let m = n + 2;
    let (x, y) = (Poly::var(m, n), Poly::var(m, n + 1));
    let fa_w = widen(&fa, 2);
    let lifts = [[x.clone(), &fa_w * &x], [&fa_w * &y, y.clone()]];
    let xs_t = widen(&side.mul_monomial(&te, &Q::one()), 2);
    let chart = &(&x * &y) - &xs_t;
    for (c, (a, b)) in lifts[0].iter().zip(&lifts[1]).enumerate() {
        let prod = a * b;
        let residual = &prod - &(&fa_w * &xs_t);
        if !residual.is_zero() && divides_laurent(&chart, &residual).is_none() {
            return Err(invariant("lift", format!("component {c} does not satisfy the relation")));
        }
    }

    let mut factored = String::new();
    if !spec.function.is_polynomial() || !side.is_polynomial() {
        // the factors only make sense together; show the product
        factored = rhs.render(names);
    } else {
        if spec.function.len() > 1 {
            factored = format!("({})", spec.function.render(names));
            if spec.a > 1 {
                factored.push_str(&format!("^{}", spec.a));
            }
        }
        for part in [side.render(names), format!("{T}^{}", spec.e)] {
            if part == "1" {
                continue;
            }
            let part = part.strip_suffix("^1").map(str::to_string).unwrap_or(part);
            if !factored.is_empty() {
                factored.push('*');
            }
            factored.push_str(&part);
        }
    }
    if rhs != full {
        factored.push_str(&format!(" mod {T}^{}", k + 1));
    }
    Ok(GluingRelation {
        slab: spec.charge.clone(),
        incoming: spec.incoming,
        outgoing: spec.outgoing,
        relation,
        rhs,
        lifts,
        factored,
    })
}

fn divides_laurent(d: &Poly, p: &Poly) -> Option<Poly> {
    let shift: Vec<i64> = d.min_exponents().iter().zip(p.min_exponents()).map(|(a, b)| -a.min(&b)).collect();
    let one = Q::one();
    p.mul_monomial(&shift, &one).div_exact(&d.mul_monomial(&shift, &one))
}

/// A symbol of a chart rewritten as `c·globals^u·t^v` before gluing.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSymbol {
    pub name: String,
    /// Laurent monomial in the globals followed by `t`.
    pub image: Poly,
}

/// Slab data before local symbols are eliminated. Polynomials use the
/// structure's full variable list: globals, locals, `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlabInput {
    pub charge: Charge,
    pub function: Poly,
    pub a: u32,
    pub e: u32,
    pub incoming: usize,
    pub outgoing: usize,
    pub side: Option<Poly>,
}

/// A marked structure: globals labelled by charges, local symbols, slabs and
/// an optional consistency certificate.
#[derive(Clone, Debug)]
pub struct DegenerationStructure {
    globals: Vec<(Charge, String)>,
    locals: Vec<LocalSymbol>,
    slabs: Vec<SlabInput>,
    certificate: Option<ScatteringDiagram>,
}

impl DegenerationStructure {
    pub fn new(globals: Vec<(Charge, Option<String>)>, locals: Vec<LocalSymbol>) -> Result<Self> {
        let globals: Vec<(Charge, String)> =
            globals.into_iter().map(|(g, n)| (g.clone(), n.unwrap_or_else(|| default_name(&g)))).collect();
        let mut seen = BTreeSet::new();
        for name in globals.iter().map(|(_, n)| n).chain(locals.iter().map(|l| &l.name)) {
            if name == T || !seen.insert(name.clone()) {
                return Err(invariant("glossary", format!("variable name '{name}' is reused")));
            }
        }
        let charges: BTreeSet<&Charge> = globals.iter().map(|(g, _)| g).collect();
        if charges.len() != globals.len() {
            return Err(invariant("glossary", "two globals share a charge"));
        }
        for l in &locals {
            if l.image.nvars() != globals.len() + 1 || !l.image.is_monomial() {
                return Err(invariant(
                    "local",
                    format!("'{}' must map to a monomial in the globals and {T}", l.name),
                ));
            }
        }
        Ok(DegenerationStructure { globals, locals, slabs: Vec::new(), certificate: None })
    }

    pub fn with_slab(mut self, slab: SlabInput) -> Self {
        self.slabs.push(slab);
        self
    }

    pub fn with_certificate(mut self, d: ScatteringDiagram) -> Self {
        self.certificate = Some(d);
        self
    }

    pub fn globals(&self) -> &[(Charge, String)] {
        &self.globals
    }

    /// Globals followed by `t`: the ring the ideal lives in.
    pub fn ring_names(&self) -> Vec<String> {
        self.globals.iter().map(|(_, n)| n.clone()).chain([T.to_string()]).collect()
    }

    /// Globals, locals, `t`: the ring slab inputs are written in.
    pub fn input_names(&self) -> Vec<String> {
        let mut v: Vec<String> = self.globals.iter().map(|(_, n)| n.clone()).collect();
        v.extend(self.locals.iter().map(|l| l.name.clone()));
        v.push(T.into());
        v
    }

    /// Index of the global labelled by `g`.
    pub fn index_of(&self, g: &Charge) -> Option<usize> {
        self.globals.iter().position(|(c, _)| c == g)
    }

    /// Eliminates local symbols from an input polynomial.
    pub fn rewrite(&self, p: &Poly) -> Poly {
        let ng = self.globals.len();
        let mut images: Vec<(Q, Vec<i64>)> = (0..ng)
            .map(|i| {
                let mut e = vec![0; ng + 1];
                e[i] = 1;
                (Q::one(), e)
            })
            .collect();
        for l in &self.locals {
            let (e, c) = l.image.lead().expect("monomial");
            images.push((c.clone(), e.clone()));
        }
        let mut te = vec![0; ng + 1];
        te[ng] = 1;
        images.push((Q::one(), te));
        p.substitute_monomials(ng + 1, &images)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegenerationIdeal {
    pub order: u32,
    pub relations: Vec<GluingRelation>,
    pub glossary: Vec<(Charge, String)>,
}

impl DegenerationIdeal {
    pub fn names(&self) -> Vec<String> {
        self.glossary.iter().map(|(_, n)| n.clone()).chain([T.to_string()]).collect()
    }

    pub fn generators(&self) -> Vec<Poly> {
        self.relations.iter().map(|r| r.relation.clone()).collect()
    }

    /// Reduction to a lower order.
    pub fn truncate(&self, k: u32) -> DegenerationIdeal {
        DegenerationIdeal {
            order: k.min(self.order),
            relations: self.relations.iter().map(|r| r.truncated(k)).collect(),
            glossary: self.glossary.clone(),
        }
    }

    /// One line per relation, `X*Y = (1 + W)*t`.
    pub fn equations(&self) -> Vec<String> {
        let names = self.names();
        self.relations
            .iter()
            .map(|r| format!("{}*{} = {}", names[r.incoming], names[r.outgoing], r.factored))
            .collect()
    }
}

impl fmt::Display for DegenerationIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.equations() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// One relation per slab. Slabs listed from both sides of the same wall must
/// produce the same relation and are merged.
pub fn assemble_ideal(s: &DegenerationStructure, k: u32) -> Result<DegenerationIdeal> {
    if let Some(d) = &s.certificate {
        if !is_consistent(d, k)? {
            return Err(Error::InconsistentStructure(format!("the scattering certificate fails at order {k}")));
        }
    }
    let names = s.ring_names();
    let width = s.input_names().len();
    let mut out: Vec<GluingRelation> = Vec::new();
    let mut seen: BTreeMap<(Charge, usize, usize), usize> = BTreeMap::new();
    for slab in &s.slabs {
        if slab.function.nvars() != width || slab.side.as_ref().is_some_and(|p| p.nvars() != width) {
            return Err(invariant("variables", "slab polynomials use the wrong variable count"));
        }
        let spec = SlabGluingSpec {
            charge: slab.charge.clone(),
            function: s.rewrite(&slab.function),
            a: slab.a,
            e: slab.e,
            incoming: slab.incoming,
            outgoing: slab.outgoing,
            side: slab.side.as_ref().map(|p| s.rewrite(p)),
        };
        let rel = glue_slab(&spec, &names, k)?;
        let key = (slab.charge.clone(), rel.incoming.min(rel.outgoing), rel.incoming.max(rel.outgoing));
        match seen.get(&key) {
            Some(&i) if out[i].relation == rel.relation => {}
            Some(&i) => {
                return Err(Error::InconsistentStructure(format!(
                    "the two sides of slab {:?} give {} and {}",
                    slab.charge.0,
                    out[i].relation.render(&names),
                    rel.relation.render(&names)
                )))
            }
            None => {
                seen.insert(key, out.len());
                out.push(rel);
            }
        }
    }
    Ok(DegenerationIdeal { order: k, relations: out, glossary: s.globals.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum Comparison {
    Match,
    Mismatch { generator: String, detail: String },
}

/// Sets `t`, renames the globals into FG symbols and compares the two
/// generator sets after clearing denominators and normalizing.
pub fn specialize_and_compare(
    ideal: &DegenerationIdeal,
    t_value: &Q,
    fg: &[FGRelation],
    renaming: &BTreeMap<String, FGSymbol>,
) -> Result<Comparison> {
    let names = ideal.names();
    let ng = names.len() - 1;
    let mut fg_names: Vec<String> = Vec::new();
    for r in fg {
        for s in r.symbols() {
            if !fg_names.contains(&s) {
                fg_names.push(s);
            }
        }
    }
    fg_names.sort();
    let mut targets = BTreeSet::new();
    for g in &names[..ng] {
        let sym = renaming
            .get(g)
            .ok_or_else(|| Error::RenamingNotBijective(format!("'{g}' has no image")))?;
        if !targets.insert(sym.name.clone()) {
            return Err(Error::RenamingNotBijective(format!("'{}' is hit twice", sym.name)));
        }
        if sym.power.abs() != 1 {
            return Err(Error::RenamingNotBijective(format!("'{sym}' is not invertible over the integers")));
        }
    }
    if let Some(extra) = renaming.keys().find(|k| !names[..ng].contains(k)) {
        return Err(Error::RenamingNotBijective(format!("'{extra}' is not a variable of the ideal")));
    }
    let fg_set: BTreeSet<String> = fg_names.iter().cloned().collect();
    if targets != fg_set {
        let missing: Vec<&String> = fg_set.symmetric_difference(&targets).collect();
        return Err(Error::RenamingNotBijective(format!("unmatched symbols {missing:?}")));
    }

    let nf = fg_names.len();
    let mut images: Vec<(Q, Vec<i64>)> = names[..ng]
        .iter()
        .map(|g| {
            let sym = &renaming[g];
            let mut e = vec![0; nf];
            e[fg_names.iter().position(|n| *n == sym.name).unwrap()] = sym.power;
            (Q::one(), e)
        })
        .collect();
    if t_value.is_zero() && ideal.relations.iter().any(|r| r.relation.min_exponents()[ng] < 0) {
        return Err(Error::ZeroDenominator("t = 0 in a negative power of t".into()));
    }
    images.push((t_value.clone(), vec![0; nf]));

    let mut theirs: Vec<(Poly, String)> = Vec::new();
    for r in fg {
        theirs.push((r.to_poly(&fg_names)?.normalized(), r.to_string()));
    }
    let mut matched = vec![false; theirs.len()];
    let eqs = ideal.equations();
    for (rel, eq) in ideal.relations.iter().zip(&eqs) {
        let ours = rel.relation.substitute_monomials(nf, &images).normalized();
        match theirs.iter().position(|(p, _)| *p == ours) {
            Some(i) => matched[i] = true,
            None => {
                return Ok(Comparison::Mismatch {
                    generator: eq.clone(),
                    detail: format!("becomes {} = 0, not among the FG relations", ours.render(&fg_names)),
                })
            }
        }
    }
    if let Some(i) = matched.iter().position(|m| !m) {
        return Ok(Comparison::Mismatch {
            generator: theirs[i].1.clone(),
            detail: "FG relation not produced by the degeneration".into(),
        });
    }
    Ok(Comparison::Match)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{fg_relations, FGNode, FGSlab};
    use crate::lattice::{LatticeContext, QuadraticRefinement};
    use crate::rat::q;
    use crate::scattering::{binomial, complete, two_lines};

    fn ring(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).chain([T.to_string()]).collect()
    }

    fn slab(s: &DegenerationStructure, g: [i64; 2], f: &str, a: u32, e: u32, inc: [i64; 2], out: [i64; 2]) -> SlabInput {
        SlabInput {
            charge: Charge::from(g),
            function: Poly::parse(f, &s.input_names()).unwrap(),
            a,
            e,
            incoming: s.index_of(&Charge::from(inc)).unwrap(),
            outgoing: s.index_of(&Charge::from(out)).unwrap(),
            side: None,
        }
    }

    /// Strong coupling chamber: Y, W on the slabs, X, Z opposite.
    fn strong(power: u32) -> DegenerationStructure {
        let s = DegenerationStructure::new(
            vec![
                (Charge::from([-1, 0]), Some("X".into())),
                (Charge::from([1, 0]), Some("Y".into())),
                (Charge::from([0, -1]), Some("Z".into())),
                (Charge::from([0, 1]), Some("W".into())),
            ],
            vec![],
        )
        .unwrap();
        let s1 = slab(&s, [1, 0], "1 + Y", power, 1, [0, -1], [0, 1]);
        let s2 = slab(&s, [0, 1], "1 + W", power, 1, [-1, 0], [1, 0]);
        s.with_slab(s1).with_slab(s2)
    }

    fn weak() -> DegenerationStructure {
        let ring = ["X", "Y", "Z", "W", "P", "u", "p0", "t"].map(String::from);
        let mono = |s: &str| Poly::parse(s, &ring[..5].iter().cloned().chain([T.to_string()]).collect::<Vec<_>>()).unwrap();
        let s = DegenerationStructure::new(
            vec![
                (Charge::from([1, 0]), Some("X".into())),
                (Charge::from([0, 1]), Some("Y".into())),
                (Charge::from([-1, 0]), Some("Z".into())),
                (Charge::from([1, 1]), Some("W".into())),
                (Charge::from([-1, -1]), Some("P".into())),
            ],
            vec![
                LocalSymbol { name: "u".into(), image: mono("P^-1") },
                LocalSymbol { name: "p0".into(), image: mono("P*t^-2") },
            ],
        )
        .unwrap();
        let s1 = slab(&s, [1, 1], "1 + W", 1, 1, [1, 0], [0, 1]);
        let s2 = slab(&s, [0, 1], "1 + Y", 1, 1, [1, 1], [-1, 0]);
        let mut s3 = slab(&s, [-1, -1], "1 + t^2*u", 1, 2, [-1, 0], [1, 0]);
        s3.side = Some(Poly::parse("p0", &s.input_names()).unwrap());
        s.with_slab(s1).with_slab(s2).with_slab(s3)
    }

    fn rels(ideal: &DegenerationIdeal, expected: &[&str]) {
        let names = ideal.names();
        let want: BTreeSet<Poly> = expected.iter().map(|s| Poly::parse(s, &names).unwrap()).collect();
        let got: BTreeSet<Poly> = ideal.generators().into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn single_slab_gluing() {
        let names = ring(&["Z", "W", "Y"]);
        let spec = SlabGluingSpec {
            charge: Charge::from([1, 0]),
            function: Poly::parse("1 + Y", &names).unwrap(),
            a: 1,
            e: 1,
            incoming: 0,
            outgoing: 1,
            side: None,
        };
        let g = glue_slab(&spec, &names, 3).unwrap();
        assert_eq!(g.relation, Poly::parse("Z*W - (1 + Y)*t", &names).unwrap());
        assert_eq!(g.factored(), "(Y + 1)*t");
        let chart: Vec<String> = names.iter().cloned().chain(["z".into(), "w".into()]).collect();
        assert_eq!(g.lifts[0][1].render(&chart), "Y*z + z");
        assert_eq!(g.lifts[1][0].render(&chart), "Y*w + w");

        let toric = SlabGluingSpec { function: Poly::one(4), e: 2, ..spec.clone() };
        assert_eq!(glue_slab(&toric, &names, 2).unwrap().relation, Poly::parse("Z*W - t^2", &names).unwrap());
        assert!(matches!(glue_slab(&toric, &names, 1), Err(Error::OrderTooLow(_))));

        let squared = SlabGluingSpec { a: 2, ..spec.clone() };
        assert_eq!(glue_slab(&squared, &names, 1).unwrap().relation, Poly::parse("Z*W - (1 + Y)^2*t", &names).unwrap());

        let bad = SlabGluingSpec { function: Poly::parse("2 + Y", &names).unwrap(), ..spec.clone() };
        assert!(matches!(glue_slab(&bad, &names, 1), Err(Error::NotUnit(_))));
        // t-dependent functions are cut at the order
        let tf = SlabGluingSpec { function: Poly::parse("1 + Y*t", &names).unwrap(), ..spec };
        let g = glue_slab(&tf, &names, 1).unwrap();
        assert_eq!(g.relation, Poly::parse("Z*W - t", &names).unwrap());
        assert_eq!(g.factored(), "(Y*t + 1)*t mod t^2");
    }

    #[test]
    fn example_one_ideals() {
        let ideal = assemble_ideal(&strong(1), 4).unwrap();
        rels(&ideal, &["X*Y - (1 + W)*t", "Z*W - (1 + Y)*t"]);
        assert_eq!(ideal.equations(), vec!["Z*W = (Y + 1)*t", "X*Y = (W + 1)*t"]);

        let ideal = assemble_ideal(&weak(), 4).unwrap();
        rels(&ideal, &["X*Y - (1 + W)*t", "W*Z - (1 + Y)*t", "Z*X - (t^2 + P)"]);
        assert_eq!(ideal.relations.len(), 3);
        assert!(matches!(assemble_ideal(&weak(), 1), Err(Error::OrderTooLow(_))));
    }

    #[test]
    fn example_three_ideal() {
        let ideal = assemble_ideal(&strong(2), 3).unwrap();
        rels(&ideal, &["X*Y - (1 + W)^2*t", "Z*W - (1 + Y)^2*t"]);
    }

    #[test]
    fn both_sides_and_certificates() {
        let s = strong(1);
        let dup = slab(&s, [1, 0], "1 + Y", 1, 1, [0, 1], [0, -1]);
        let ideal = assemble_ideal(&s.clone().with_slab(dup), 2).unwrap();
        assert_eq!(ideal.relations.len(), 2);
        let clash = slab(&s, [1, 0], "1 + 2*Y", 1, 1, [0, 1], [0, -1]);
        assert!(matches!(assemble_ideal(&s.clone().with_slab(clash), 2), Err(Error::InconsistentStructure(_))));

        let lines = two_lines(binomial([1, 0], 1, q(1), 4).unwrap(), binomial([0, 1], 1, q(1), 4).unwrap()).unwrap();
        assert!(matches!(
            assemble_ideal(&s.clone().with_certificate(lines.clone()), 4),
            Err(Error::InconsistentStructure(_))
        ));
        let done = complete(&lines, 4, 1).unwrap();
        assert!(assemble_ideal(&s.with_certificate(done), 4).is_ok());
    }

    #[test]
    fn order_compatibility() {
        let w = weak();
        for k in 2..5 {
            assert_eq!(assemble_ideal(&w, k + 1).unwrap().truncate(k), assemble_ideal(&w, k).unwrap());
        }
    }

    fn node(sym: &str, g: [i64; 2], slab: bool) -> FGNode {
        FGNode {
            symbol: sym.parse().unwrap(),
            charge: Charge::from(g),
            slab: slab.then_some(FGSlab { omega: 1, a: None, side: None }),
        }
    }

    fn renaming(pairs: &[(&str, &str)]) -> BTreeMap<String, FGSymbol> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.parse().unwrap())).collect()
    }

    fn strong_fg(p: i64) -> Vec<FGRelation> {
        let ctx = LatticeContext::new(
            vec![vec![0, p], vec![-p, 0]],
            vec![Charge::from([1, 0]), Charge::from([0, 1])],
            vec![],
        )
        .unwrap();
        let cycle = vec![
            node("1/y1", [0, -1], false),
            node("x1", [1, 0], true),
            node("1/y3", [0, 1], true),
            node("x3", [-1, 0], false),
        ];
        fg_relations(&ctx, &QuadraticRefinement::all_minus(2), &cycle).unwrap()
    }

    #[test]
    fn fibers_match_fg_ideals() {
        let strong_names = renaming(&[("X", "x3"), ("Y", "x1"), ("Z", "1/y1"), ("W", "1/y3")]);
        let ideal = assemble_ideal(&strong(1), 2).unwrap();
        assert_eq!(specialize_and_compare(&ideal, &q(1), &strong_fg(1), &strong_names).unwrap(), Comparison::Match);
        let ideal3 = assemble_ideal(&strong(2), 2).unwrap();
        assert_eq!(specialize_and_compare(&ideal3, &q(1), &strong_fg(2), &strong_names).unwrap(), Comparison::Match);

        let weak_fg = {
            let ctx = LatticeContext::standard2();
            let cycle = vec![
                node("x1", [1, 0], false),
                node("x2", [1, 1], true),
                node("x3", [0, 1], true),
                node("x4", [-1, 0], false),
                node("x5", [-1, -1], true),
            ];
            fg_relations(&ctx, &QuadraticRefinement::all_minus(2), &cycle).unwrap()
        };
        let w = renaming(&[("X", "x1"), ("Y", "x3"), ("Z", "x4"), ("W", "x2"), ("P", "x5")]);
        assert_eq!(
            specialize_and_compare(&assemble_ideal(&weak(), 3).unwrap(), &q(1), &weak_fg, &w).unwrap(),
            Comparison::Match
        );

        // t = 2 is a different fiber
        assert!(matches!(specialize_and_compare(&ideal, &q(2), &strong_fg(1), &strong_names).unwrap(), Comparison::Mismatch { .. }));
    }

    #[test]
    fn wrong_renamings() {
        let ideal = assemble_ideal(&strong(1), 2).unwrap();
        let swapped = renaming(&[("X", "x1"), ("Y", "x3"), ("Z", "1/y3"), ("W", "1/y1")]);
        match specialize_and_compare(&ideal, &q(1), &strong_fg(1), &swapped).unwrap() {
            Comparison::Mismatch { generator, .. } => assert_eq!(generator, "Z*W = (Y + 1)*t"),
            Comparison::Match => panic!("swapped renaming matched"),
        }
        let twice = renaming(&[("X", "x3"), ("Y", "x3"), ("Z", "1/y1"), ("W", "1/y3")]);
        assert!(matches!(specialize_and_compare(&ideal, &q(1), &strong_fg(1), &twice), Err(Error::RenamingNotBijective(_))));
        let short = renaming(&[("X", "x3"), ("Y", "x1"), ("Z", "1/y1")]);
        assert!(matches!(specialize_and_compare(&ideal, &q(1), &strong_fg(1), &short), Err(Error::RenamingNotBijective(_))));
    }

    #[test]
    fn default_names() {
        let s = DegenerationStructure::new(vec![(Charge::from([1, -2]), None)], vec![]).unwrap();
        assert_eq!(s.ring_names(), vec!["X_g1_-2", "t"]);
        assert!(DegenerationStructure::new(vec![(Charge::from([1, 0]), Some("t".into()))], vec![]).is_err());
    }
}
