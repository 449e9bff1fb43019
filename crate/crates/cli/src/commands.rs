//! One function per verb. Each returns a report; nothing is printed here.

use serde::Serialize;
use serde_json::{json, Value};
use wallcross::autom::first_difference;
use wallcross::cluster::{fg_relations, y_system_run, YStart};
use wallcross::degeneration::{assemble_ideal, specialize_and_compare, Comparison, DegenerationIdeal};
use wallcross::scattering::{complete, is_consistent, spectrum_generator_factorize, Kind, RayLine};
use wallcross::{compose_word, factorize_ordered, rat, Charge, KSWord, Series, Q};

use crate::input::{self, Document, OrderKey};
use crate::CliError;

pub struct Options {
    pub order: Option<u32>,
    pub t: Q,
    pub threads: usize,
}

/// Outcome plus the two renderings.
pub struct Report {
    pub success: bool,
    pub json: Value,
    pub text: String,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { success: true, json, text }
    }
}

#[derive(Serialize)]
struct Term {
    coeff: String,
    exponent: Vec<i64>,
    t: u32,
}

fn terms(s: &Series) -> Vec<Term> {
    s.terms()
        .map(|(m, c)| Term { coeff: rat::fmt(c), exponent: m.exponent.clone(), t: m.t_power })
        .collect()
}

fn word_json(w: &KSWord) -> Value {
    serde_json::to_value(w).expect("words serialize")
}

fn order_of(doc: &Document, opts: &Options) -> Result<wallcross::TruncationContext, CliError> {
    let t = input::require(&doc.truncation, "/truncation")?;
    input::degree_truncation(t, opts.order, "/truncation")
}

pub fn verify_wcf(doc: &Document, opts: &Options) -> Result<Report, CliError> {
    let lat = input::lattice(input::require(&doc.lattice, "/lattice")?)?;
    let tr = order_of(doc, opts)?;
    let lhs = input::word(input::require(&doc.lhs, "/lhs")?);
    let rhs = input::word(input::require(&doc.rhs, "/rhs")?);
    let a = compose_word(&lat.ctx, &lat.refinement, &lhs, tr)?;
    let b = compose_word(&lat.ctx, &lat.refinement, &rhs, tr)?;
    let identity = format!("identity mod degree {}", tr.order + 1);
    let (success, report) = match first_difference(&a, &b) {
        None => (true, identity),
        Some(d) => (false, d),
    };
    let text = format!("{lhs} = {rhs}\n{}: {report}\n", if success { "holds" } else { "fails" });
    Ok(Report {
        success,
        json: json!({
            "result": if success { "identity" } else { "mismatch" },
            "order": tr.order,
            "lhs": word_json(&lhs),
            "rhs": word_json(&rhs),
            "report": report,
        }),
        text,
    })
}

fn angle_key(ctx: &wallcross::LatticeContext, g: &Charge) -> f64 {
    match ctx.coordinates(g) {
        Ok(c) if c.len() >= 2 => rat::to_f64(&c[1]).atan2(rat::to_f64(&c[0])),
        _ => f64::NAN,
    }
}

fn compare_expected(found: &KSWord, doc: &Document) -> (bool, Value) {
    match &doc.rhs {
        Some(r) => {
            let want = input::word(r);
            (*found == want, json!(*found == want))
        }
        None => (true, Value::Null),
    }
}

fn word_report(verb: &str, found: KSWord, order: u32, doc: &Document) -> Report {
    let (success, matches) = compare_expected(&found, doc);
    let mut text = format!("{found}\n");
    if !matches.is_null() {
        text.push_str(if success { "matches the expected word\n" } else { "differs from the expected word\n" });
    }
    Report {
        success,
        json: json!({ "command": verb, "order": order, "word": word_json(&found), "text": found.to_string(), "matches_expected": matches }),
        text,
    }
}

pub fn factorize(doc: &Document, opts: &Options) -> Result<Report, CliError> {
    let lat = input::lattice(input::require(&doc.lattice, "/lattice")?)?;
    let tr = order_of(doc, opts)?;
    let target = compose_word(&lat.ctx, &lat.refinement, &input::word(input::require(&doc.lhs, "/lhs")?), tr)?;
    let key_kind = doc.order_key.unwrap_or(if lat.model.is_some() { OrderKey::CentralCharge } else { OrderKey::AngleAscending });
    let found = match key_kind {
        OrderKey::CentralCharge => {
            let model = lat.model.as_ref().ok_or_else(|| CliError::Schema {
                pointer: "/lattice/central_charges".into(),
                message: "ordering by central charge needs central_charges".into(),
            })?;
            spectrum_generator_factorize(&target, &lat.refinement, model, tr.order)?
        }
        OrderKey::AngleAscending => {
            let key = |g: &Charge| -angle_key(&lat.ctx, g);
            factorize_ordered(&target, &lat.refinement, &key, tr.order)?
        }
        OrderKey::AngleDescending => {
            let key = |g: &Charge| angle_key(&lat.ctx, g);
            factorize_ordered(&target, &lat.refinement, &key, tr.order)?
        }
    };
    Ok(word_report("factorize", found, tr.order, doc))
}

pub fn spectrum_generator(doc: &Document, opts: &Options) -> Result<Report, CliError> {
    let lat = input::lattice(input::require(&doc.lattice, "/lattice")?)?;
    let model = lat.model.as_ref().ok_or_else(|| CliError::Schema {
        pointer: "/lattice/central_charges".into(),
        message: "the spectrum generator is ordered by central charges".into(),
    })?;
    let tr = order_of(doc, opts)?;
    let s = compose_word(&lat.ctx, &lat.refinement, &input::word(input::require(&doc.lhs, "/lhs")?), tr)?;
    let found = spectrum_generator_factorize(&s, &lat.refinement, model, tr.order)?;
    Ok(word_report("spectrum-generator", found, tr.order, doc))
}

fn element_json(el: &RayLine, added: bool) -> Value {
    json!({
        "kind": if el.kind == Kind::Line { "line" } else { "ray" },
        "base": [rat::fmt(&el.base[0]), rat::fmt(&el.base[1])],
        "direction": el.direction,
        "function": terms(&el.function),
        "added": added,
    })
}

fn element_text(el: &RayLine) -> String {
    let kind = if el.kind == Kind::Line { "line" } else { "ray " };
    format!(
        "{kind} ({},{}) through ({}, {}): {}",
        el.direction[0],
        el.direction[1],
        rat::fmt(&el.base[0]),
        rat::fmt(&el.base[1]),
        el.function
    )
}

pub fn complete_cmd(doc: &Document, opts: &Options) -> Result<Report, CliError> {
    let spec = input::require(&doc.diagram, "/diagram")?;
    let d = input::diagram(spec, doc.truncation.as_ref(), opts.order, "/diagram")?;
    let k = d.trunc().order;
    let done = complete(&d, k, opts.threads)?;
    let initial = |el: &RayLine| {
        d.elements().iter().any(|o| o.kind == el.kind && o.base == el.base && o.direction == el.direction)
    };
    let mut kinds: Vec<&str> = d.elements().iter().map(|e| if e.kind == Kind::Line { "line" } else { "ray" }).collect();
    kinds.sort();
    kinds.dedup();
    let consistent = is_consistent(&done, k)?;
    let mut text = String::new();
    for el in done.elements() {
        text.push_str(&element_text(el));
        if !initial(el) {
            text.push_str("  [added]");
        }
        text.push('\n');
    }
    text.push_str(&format!("consistent mod t^{}\n", k + 1));
    Ok(Report {
        success: consistent,
        json: json!({
            "order": k,
            "initial_forms": kinds,
            "consistent": consistent,
            "elements": done.elements().iter().map(|e| element_json(e, !initial(e))).collect::<Vec<_>>(),
        }),
        text,
    })
}

pub fn ysystem(doc: &Document, opts: &Options) -> Result<Report, CliError> {
    let spec = input::require(&doc.ysystem, "/ysystem")?;
    let (rule, start) = input::ysystem(spec)?;
    let steps = opts.order.map(|k| k as usize).unwrap_or(spec.steps);
    let symbolic = start == YStart::Symbolic;
    let run = y_system_run(rule, start, steps)?;
    let orbit = run.render();
    let mut text = String::new();
    for (n, (x, y)) in orbit.iter().enumerate() {
        text.push_str(&format!("x_{0} = {x}\ny_{0} = {y}\n", n + 1));
    }
    text.push_str(&match run.period {
        Some(p) => format!("period {p}\n"),
        None => format!("no period within {steps} steps\n"),
    });
    Ok(Report::ok(
        json!({
            "exponent": rule.exponent,
            "symbolic": symbolic,
            "steps": steps,
            "orbit": orbit.iter().map(|(x, y)| [x, y]).collect::<Vec<_>>(),
            "period": run.period,
        }),
        text,
    ))
}

fn ideal_for(doc: &Document, opts: &Options) -> Result<DegenerationIdeal, CliError> {
    let spec = input::require(&doc.structure, "/structure")?;
    let k = match (opts.order, &doc.truncation) {
        (Some(k), _) => k,
        (None, Some(t)) => t.order,
        (None, None) => {
            return Err(CliError::Schema { pointer: "/truncation/order".into(), message: "no truncation order given".into() })
        }
    };
    let s = input::structure(spec, k, opts.threads)?;
    Ok(assemble_ideal(&s, k)?)
}

fn ideal_json(ideal: &DegenerationIdeal) -> Value {
    let names = ideal.names();
    let ng = names.len() - 1;
    let chart: Vec<String> = names.iter().cloned().chain(["x".to_string(), "y".to_string()]).collect();
    let relations: Vec<Value> = ideal
        .relations
        .iter()
        .zip(ideal.equations())
        .map(|(r, eq)| {
            let rhs: Vec<Value> = r
                .rhs
                .terms()
                .map(|(e, c)| json!({ "coeff": rat::fmt(c), "exponent": e[..ng].to_vec(), "t": e[ng] }))
                .collect();
            let lift = |i: usize| [r.lifts[i][0].render(&chart), r.lifts[i][1].render(&chart)];
            let (a, b) = (&names[r.incoming], &names[r.outgoing]);
            json!({
                "slab": r.slab,
                "lhs": [a, b],
                "rhs": rhs,
                "equation": eq,
                "lifts": { a.clone(): lift(0), b.clone(): lift(1) },
            })
        })
        .collect();
    let glossary: serde_json::Map<String, Value> =
        ideal.glossary.iter().map(|(g, n)| (n.clone(), json!(g))).collect();
    json!({ "order": ideal.order, "relations": relations, "glossary": glossary })
}

pub fn glue(doc: &Document, opts: &Options) -> Result<Report, CliError> {
    let ideal = ideal_for(doc, opts)?;
    let mut text = format!("order {}\n", ideal.order);
    text.push_str(&ideal.to_string());
    Ok(Report::ok(ideal_json(&ideal), text))
}

pub fn compare_fiber(doc: &Document, opts: &Options) -> Result<Report, CliError> {
    let ideal = ideal_for(doc, opts)?;
    let fg = input::require(&doc.fg, "/fg")?;
    let lat = match &fg.lattice {
        Some(l) => input::lattice(l)?,
        None => input::lattice(input::require(&doc.lattice, "/lattice")?)?,
    };
    let rels = fg_relations(&lat.ctx, &lat.refinement, &fg.cycle)?;
    let result = specialize_and_compare(&ideal, &opts.t, &rels, &fg.renaming)?;
    let t = rat::fmt(&opts.t);
    let fg_text: Vec<String> = rels.iter().map(|r| r.to_string()).collect();
    let mut text = format!("degeneration at t = {t}:\n");
    for eq in ideal.equations() {
        text.push_str(&format!("  {eq}\n"));
    }
    text.push_str("Fock-Goncharov relations:\n");
    for r in &fg_text {
        text.push_str(&format!("  {r}\n"));
    }
    let success = result == Comparison::Match;
    match &result {
        Comparison::Match => text.push_str("Match\n"),
        Comparison::Mismatch { generator, detail } => text.push_str(&format!("Mismatch at {generator}: {detail}\n")),
    }
    let mut out = serde_json::to_value(&result).expect("comparison serializes");
    out["t"] = json!(t);
    out["degeneration"] = json!(ideal.equations());
    out["fock_goncharov"] = json!(fg_text);
    Ok(Report { success, json: out, text })
}
