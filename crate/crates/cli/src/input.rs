//! Request documents and their validation.
//!
//! One document can carry several sections; each verb reads the ones it
//! needs and reports a missing section with its JSON pointer.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Deserialize;
use wallcross::cluster::{FGNode, FGSymbol, YRule, YStart};
use wallcross::degeneration::{DegenerationStructure, LocalSymbol, SlabInput};
use wallcross::scattering::{point, Kind, RayLine, ScatteringDiagram};
use wallcross::series::Monomial;
use wallcross::{
    rat, validate_refinement, CentralChargeModel, Charge, KSFactor, KSWord, LatticeContext, Poly, QuadraticRefinement,
    Series, TruncationContext, Q,
};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    /// Free-form; not used.
    #[serde(default)]
    #[allow(dead_code)]
    pub description: Option<String>,
    pub lattice: Option<LatticeSpec>,
    pub truncation: Option<TruncationSpec>,
    pub lhs: Option<Vec<KSFactor>>,
    pub rhs: Option<Vec<KSFactor>>,
    pub order_key: Option<OrderKey>,
    pub diagram: Option<DiagramSpec>,
    pub ysystem: Option<YSystemSpec>,
    pub structure: Option<StructureSpec>,
    pub fg: Option<FgSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub rank: usize,
    pub skew_form: Vec<Vec<i64>>,
    pub degree_basis: Vec<Vec<i64>>,
    #[serde(default)]
    pub refinement: Option<Vec<i8>>,
    #[serde(default)]
    pub central_charges: Option<Vec<ComplexSpec>>,
    #[serde(default)]
    pub flavor_masses: Option<Vec<ComplexSpec>>,
    #[serde(default)]
    pub flavor_subspace: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum GradingSpec {
    Degree,
    T,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    #[serde(default)]
    pub grading: Option<GradingSpec>,
    pub order: u32,
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum OrderKey {
    /// Factors listed by increasing angle of their degree-basis coordinates.
    AngleAscending,
    AngleDescending,
    /// Decreasing BPS ray phase from the lattice's central charges.
    CentralCharge,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: String,
    pub exponent: Vec<i64>,
    #[serde(default)]
    pub t: u32,
}

#[derive(Debug, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
pub enum KindSpec {
    Line,
    Ray,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub kind: KindSpec,
    #[serde(default)]
    pub base: Option<[String; 2]>,
    pub direction: [i64; 2],
    pub function: Vec<TermSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramSpec {
    #[serde(default)]
    pub truncation: Option<TruncationSpec>,
    pub elements: Vec<ElementSpec>,
}

#[derive(Debug, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
pub enum RuleSpec {
    Pentagon,
    Su2,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YSystemSpec {
    pub rule: RuleSpec,
    /// Exact starting values; symbolic when absent.
    #[serde(default)]
    pub start: Option<[String; 2]>,
    pub steps: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalSpec {
    pub charge: Vec<i64>,
    #[serde(default)]
    pub name: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalSpec {
    pub name: String,
    pub image: String,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlabSpec {
    pub charge: Vec<i64>,
    pub function: String,
    #[serde(default = "one")]
    pub a: u32,
    #[serde(default = "one")]
    pub e: u32,
    pub incoming: Vec<i64>,
    pub outgoing: Vec<i64>,
    #[serde(default)]
    pub side: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    pub globals: Vec<GlobalSpec>,
    #[serde(default)]
    pub locals: Vec<LocalSpec>,
    pub slabs: Vec<SlabSpec>,
    /// Initial diagram; it is completed and must come out consistent.
    #[serde(default)]
    pub certificate: Option<DiagramSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FgSpec {
    /// Lattice for the FG pairings; the document's lattice when absent.
    #[serde(default)]
    pub lattice: Option<LatticeSpec>,
    pub cycle: Vec<FGNode>,
    pub renaming: BTreeMap<String, FGSymbol>,
}

fn schema(pointer: &str, message: impl Into<String>) -> CliError {
    CliError::Schema { pointer: pointer.to_string(), message: message.into() }
}

fn to_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let mut pointer = to_pointer(e.path());
        let message = e.inner().to_string();
        if let Some(rest) = message.strip_prefix("missing field `") {
            if let Some(field) = rest.split('`').next() {
                pointer.push('/');
                pointer.push_str(field);
            }
        }
        if pointer.is_empty() {
            pointer.push('/');
        }
        CliError::Schema { pointer, message }
    })
}

pub fn require<'a, T>(section: &'a Option<T>, pointer: &str) -> Result<&'a T, CliError> {
    section.as_ref().ok_or_else(|| schema(pointer, "section required by this command is missing"))
}

pub fn rational(s: &str, pointer: &str) -> Result<Q, CliError> {
    rat::parse(s).ok_or_else(|| schema(pointer, format!("'{s}' is not a rational p/q")))
}

pub struct Lattice {
    pub ctx: LatticeContext,
    pub refinement: QuadraticRefinement,
    pub model: Option<CentralChargeModel>,
}

fn complex(v: &[ComplexSpec]) -> Vec<Complex64> {
    v.iter().map(|c| Complex64::new(c.re, c.im)).collect()
}

pub fn lattice(spec: &LatticeSpec) -> Result<Lattice, CliError> {
    if spec.skew_form.len() != spec.rank {
        return Err(CliError::Invariant {
            invariant: "rank".into(),
            detail: format!("rank is {} but skew_form has {} rows", spec.rank, spec.skew_form.len()),
        });
    }
    let charges = |v: &[Vec<i64>]| v.iter().map(|c| Charge(c.clone())).collect::<Vec<_>>();
    let ctx = LatticeContext::new(spec.skew_form.clone(), charges(&spec.degree_basis), charges(&spec.flavor_subspace))?;
    let refinement = match &spec.refinement {
        Some(s) => QuadraticRefinement::new(s.clone())?,
        None => QuadraticRefinement::all_minus(spec.rank),
    };
    validate_refinement(&ctx, &refinement, 2)?;
    let model = match &spec.central_charges {
        Some(z) => {
            let mut m = CentralChargeModel::new(complex(z));
            if let Some(f) = &spec.flavor_masses {
                m.flavor_masses = complex(f);
            }
            m.validate(&ctx)?;
            Some(m)
        }
        None => None,
    };
    Ok(Lattice { ctx, refinement, model })
}

pub fn word(factors: &[KSFactor]) -> KSWord {
    KSWord::new(factors.to_vec())
}

pub fn degree_truncation(spec: &TruncationSpec, order: Option<u32>, pointer: &str) -> Result<TruncationContext, CliError> {
    if spec.grading == Some(GradingSpec::T) {
        return Err(schema(&format!("{pointer}/grading"), "KS words are truncated by charge degree"));
    }
    Ok(TruncationContext::degree(order.unwrap_or(spec.order)))
}

fn series(terms: &[TermSpec], order: u32, pointer: &str) -> Result<Series, CliError> {
    let mut s = Series::zero(2, TruncationContext::t(order));
    for (i, t) in terms.iter().enumerate() {
        let p = format!("{pointer}/{i}");
        if t.exponent.len() != 2 {
            return Err(schema(&format!("{p}/exponent"), "exponents have two entries"));
        }
        s.add_term(Monomial::new(t.exponent.clone(), t.t), rational(&t.coeff, &format!("{p}/coeff"))?)?;
    }
    Ok(s)
}

/// The diagram at its own order, or at `order` when given.
pub fn diagram(spec: &DiagramSpec, fallback: Option<&TruncationSpec>, order: Option<u32>, pointer: &str) -> Result<ScatteringDiagram, CliError> {
    let tspec = spec.truncation.as_ref().or(fallback);
    if let Some(t) = tspec {
        if t.grading == Some(GradingSpec::Degree) {
            return Err(schema(&format!("{pointer}/truncation/grading"), "diagrams are truncated by powers of t"));
        }
    }
    let k = match (order, tspec) {
        (Some(k), _) => k,
        (None, Some(t)) => t.order,
        (None, None) => return Err(schema(&format!("{pointer}/truncation/order"), "no truncation order given")),
    };
    let mut elements = Vec::new();
    for (i, el) in spec.elements.iter().enumerate() {
        let p = format!("{pointer}/elements/{i}");
        let base = match &el.base {
            Some([x, y]) => [rational(x, &format!("{p}/base/0"))?, rational(y, &format!("{p}/base/1"))?],
            None => point(0, 0),
        };
        let f = series(&el.function, k, &format!("{p}/function"))?;
        let kind = match el.kind {
            KindSpec::Line => Kind::Line,
            KindSpec::Ray => Kind::Ray,
        };
        elements.push(RayLine::new(kind, base, el.direction, f)?);
    }
    Ok(ScatteringDiagram::new(TruncationContext::t(k), elements)?)
}

pub fn ysystem(spec: &YSystemSpec) -> Result<(YRule, YStart), CliError> {
    let rule = match spec.rule {
        RuleSpec::Pentagon => YRule::pentagon(),
        RuleSpec::Su2 => YRule::su2(),
    };
    let start = match &spec.start {
        None => YStart::Symbolic,
        Some([x, y]) => YStart::Values(rational(x, "/ysystem/start/0")?, rational(y, "/ysystem/start/1")?),
    };
    Ok((rule, start))
}

fn poly(text: &str, names: &[String], pointer: &str) -> Result<Poly, CliError> {
    Poly::parse(text, names).map_err(|m| schema(pointer, m))
}

pub fn structure(spec: &StructureSpec, order: u32, threads: usize) -> Result<DegenerationStructure, CliError> {
    let globals: Vec<(Charge, Option<String>)> =
        spec.globals.iter().map(|g| (Charge(g.charge.clone()), g.name.clone())).collect();
    let mut ring: Vec<String> = globals
        .iter()
        .map(|(g, n)| n.clone().unwrap_or_else(|| wallcross::degeneration::default_name(g)))
        .collect();
    ring.push(wallcross::degeneration::T.to_string());
    let mut locals = Vec::new();
    for (i, l) in spec.locals.iter().enumerate() {
        locals.push(LocalSymbol { name: l.name.clone(), image: poly(&l.image, &ring, &format!("/structure/locals/{i}/image"))? });
    }
    let mut s = DegenerationStructure::new(globals, locals)?;
    let names = s.input_names();
    let mut slabs = Vec::new();
    for (i, sl) in spec.slabs.iter().enumerate() {
        let p = format!("/structure/slabs/{i}");
        let index = |c: &Vec<i64>, field: &str| {
            s.index_of(&Charge(c.clone())).ok_or_else(|| CliError::Invariant {
                invariant: "slab_variables".into(),
                detail: format!("{p}/{field}: no global is labelled by {}", Charge(c.clone())),
            })
        };
        slabs.push(SlabInput {
            charge: Charge(sl.charge.clone()),
            function: poly(&sl.function, &names, &format!("{p}/function"))?,
            a: sl.a,
            e: sl.e,
            incoming: index(&sl.incoming, "incoming")?,
            outgoing: index(&sl.outgoing, "outgoing")?,
            side: sl.side.as_ref().map(|t| poly(t, &names, &format!("{p}/side"))).transpose()?,
        });
    }
    for slab in slabs {
        s = s.with_slab(slab);
    }
    if let Some(c) = &spec.certificate {
        let d = diagram(c, None, Some(order), "/structure/certificate")?;
        s = s.with_certificate(wallcross::scattering::complete(&d, order, threads)?);
    }
    Ok(s)
}
