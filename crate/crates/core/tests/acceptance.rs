//! The nine acceptance checks, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines always reach stdout.

mod laws;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use proptest::strategy::Strategy;
use proptest::test_runner::{TestCaseError, TestRunner};
use wallcross::autom::first_difference;
use wallcross::scattering::{binomial, complete, origin, path_ordered_product, two_lines, Kind, Loop, ScatteringDiagram};
use wallcross::{
    assemble_ideal, compose_word, factorize_ordered, fg_relations, rat, specialize_and_compare, y_system_run, Charge,
    Comparison, DegenerationIdeal, DegenerationStructure, FGNode, FGRelation, FGSlab, FGSymbol, KSFactor, KSWord,
    LatticeContext, LocalSymbol, Poly, QuadraticRefinement, Series, SlabInput, TruncationContext, YRule, YStart, Q,
};

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn word<const N: usize>(fs: &[([i64; N], i64)]) -> KSWord {
    KSWord::new(fs.iter().map(|(g, o)| KSFactor::new(*g, *o)).collect())
}

fn lattice(skew: Vec<Vec<i64>>, basis: Vec<Vec<i64>>, flavor: Vec<Vec<i64>>) -> LatticeContext {
    let c = |v: Vec<Vec<i64>>| v.into_iter().map(Charge).collect();
    LatticeContext::new(skew, c(basis), c(flavor)).unwrap()
}

fn identity(ctx: &LatticeContext, a: &KSWord, b: &KSWord, order: u32) -> Check {
    let r = QuadraticRefinement::all_minus(ctx.rank());
    let tr = TruncationContext::degree(order);
    let x = compose_word(ctx, &r, a, tr).map_err(|e| e.to_string())?;
    let y = compose_word(ctx, &r, b, tr).map_err(|e| e.to_string())?;
    match first_difference(&x, &y) {
        None => Ok(()),
        Some(d) => Err(format!("{a} vs {b}: {d}")),
    }
}

fn pentagon() -> Check {
    identity(
        &LatticeContext::standard2(),
        &word(&[([0, 1], 1), ([1, 0], 1)]),
        &word(&[([1, 0], 1), ([1, 1], 1), ([0, 1], 1)]),
        10,
    )
}

fn su2_spectrum() -> Check {
    let ctx = lattice(vec![vec![0, -1], vec![1, 0]], vec![vec![2, -1], vec![0, 1]], vec![]);
    let r = QuadraticRefinement::all_minus(2);
    let key = |g: &Charge| {
        let c = ctx.coordinates(g).unwrap();
        rat::to_f64(&c[1]).atan2(rat::to_f64(&c[0]))
    };
    for k in 1..=5u32 {
        let d = 2 * k + 1;
        let tr = TruncationContext::degree(d);
        let target = compose_word(&ctx, &r, &word(&[([2, -1], 1), ([0, 1], 1)]), tr).map_err(|e| e.to_string())?;
        let found = factorize_ordered(&target, &r, &key, d).map_err(|e| e.to_string())?;
        let mut want = BTreeSet::new();
        for n in 0..=k as i64 {
            want.insert(KSFactor::new(ctx.from_coords(&[n + 1, n]), 1));
            want.insert(KSFactor::new(ctx.from_coords(&[n, n + 1]), 1));
        }
        want.insert(KSFactor::new(ctx.from_coords(&[1, 1]), -2));
        let got: BTreeSet<KSFactor> = found.factors.iter().cloned().collect();
        ensure(got == want, || format!("k = {k}: got {found}"))?;
        let again = compose_word(&ctx, &r, &found, tr).map_err(|e| e.to_string())?;
        ensure(again == target, || format!("k = {k}: recomposition differs"))?;
    }
    Ok(())
}

fn flavored() -> Check {
    let ctx = lattice(
        vec![vec![0, -1, 1], vec![1, 0, 0], vec![-1, 0, 0]],
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, -1]],
        vec![vec![0, 1, 1]],
    );
    // basis coordinates are γ1, γ2, −γ3
    identity(
        &ctx,
        &word(&[([1, 0, 0], 1), ([0, 1, 0], 1), ([0, 0, -1], 1)]),
        &word(&[([0, 1, 0], 1), ([0, 0, -1], 1), ([1, 1, -1], 1), ([1, 1, 0], 1), ([1, 0, -1], 1), ([1, 0, 0], 1)]),
        8,
    )
}

fn bin(m: [i64; 2], j: u32, c: i64, order: u32) -> Series {
    binomial(m, j, rat::q(c), order).unwrap()
}

fn rays(d: &ScatteringDiagram) -> BTreeMap<[i64; 2], Series> {
    d.elements().iter().filter(|e| e.kind == Kind::Ray).map(|e| (e.direction, e.function.clone())).collect()
}

fn example_one_completion() -> Check {
    let order = 10;
    let d = two_lines(bin([1, 0], 1, 1, order), bin([0, 1], 1, 1, order)).map_err(|e| e.to_string())?;
    let c = complete(&d, order, 1).map_err(|e| e.to_string())?;
    let want = BTreeMap::from([([1, 1], bin([1, 1], 2, 1, order))]);
    ensure(rays(&c) == want, || format!("rays {:?}", rays(&c).keys().collect::<Vec<_>>()))
}

fn example_three_completion() -> Check {
    for k in 1..=4u32 {
        let order = 2 * k + 1;
        let sq = |m| bin(m, 1, 1, order).pow(2).unwrap();
        let d = two_lines(sq([1, 0]), sq([0, 1])).map_err(|e| e.to_string())?;
        let c = complete(&d, order, 2).map_err(|e| e.to_string())?;
        let mut want = BTreeMap::new();
        for n in 1..=k as i64 {
            let j = (2 * n + 1) as u32;
            want.insert([n + 1, n], bin([n + 1, n], j, 1, order).pow(2).unwrap());
            want.insert([n, n + 1], bin([n, n + 1], j, 1, order).pow(2).unwrap());
        }
        want.insert([1, 1], bin([1, 1], 2, -1, order).pow(-4).unwrap());
        ensure(rays(&c) == want, || format!("k = {k}: rays {:?}", rays(&c).keys().collect::<Vec<_>>()))?;
        let around = path_ordered_product(&c, &Loop::Around(origin()), order).map_err(|e| e.to_string())?;
        ensure(around.is_identity(), || format!("k = {k}: loop is not the identity"))?;
    }
    Ok(())
}

fn y_systems() -> Check {
    let pent = y_system_run(YRule::pentagon(), YStart::Symbolic, 10).map_err(|e| e.to_string())?;
    ensure(pent.period == Some(5), || format!("pentagon period {:?}", pent.period))?;
    let su2 = y_system_run(YRule::su2(), YStart::Symbolic, 40).map_err(|e| e.to_string())?;
    ensure(su2.period.is_none(), || format!("SU(2) period {:?}", su2.period))
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

fn named(gs: &[([i64; 2], &str)]) -> Vec<(Charge, Option<String>)> {
    gs.iter().map(|(g, n)| (Charge::from(*g), Some(n.to_string()))).collect()
}

fn strong(a: u32) -> DegenerationStructure {
    let s = DegenerationStructure::new(named(&[([-1, 0], "X"), ([1, 0], "Y"), ([0, -1], "Z"), ([0, 1], "W")]), vec![])
        .unwrap();
    let s1 = slab(&s, [1, 0], "1 + Y", a, 1, [0, -1], [0, 1]);
    let s2 = slab(&s, [0, 1], "1 + W", a, 1, [-1, 0], [1, 0]);
    s.with_slab(s1).with_slab(s2)
}

fn weak() -> DegenerationStructure {
    let globals = ["X", "Y", "Z", "W", "P", "t"].map(String::from);
    let mono = |s: &str| Poly::parse(s, &globals).unwrap();
    let s = DegenerationStructure::new(
        named(&[([1, 0], "X"), ([0, 1], "Y"), ([-1, 0], "Z"), ([1, 1], "W"), ([-1, -1], "P")]),
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

fn same_generators(ideal: &DegenerationIdeal, expected: &[&str]) -> Check {
    let names = ideal.names();
    let want: BTreeSet<Poly> = expected.iter().map(|s| Poly::parse(s, &names).unwrap()).collect();
    let got: BTreeSet<Poly> = ideal.generators().into_iter().collect();
    ensure(got == want, || format!("got {}", ideal.equations().join(", ")))
}

fn ideals() -> Check {
    let ideal = |s: &DegenerationStructure, k| assemble_ideal(s, k).map_err(|e| e.to_string());
    same_generators(&ideal(&strong(1), 4)?, &["X*Y - (1 + W)*t", "Z*W - (1 + Y)*t"])?;
    same_generators(&ideal(&weak(), 4)?, &["X*Y - (1 + W)*t", "W*Z - (1 + Y)*t", "Z*X - (t^2 + P)"])?;
    same_generators(&ideal(&strong(2), 4)?, &["X*Y - (1 + W)^2*t", "Z*W - (1 + Y)^2*t"])
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

fn fg(p: i64, cycle: &[FGNode]) -> Vec<FGRelation> {
    let ctx = lattice(vec![vec![0, p], vec![-p, 0]], vec![vec![1, 0], vec![0, 1]], vec![]);
    fg_relations(&ctx, &QuadraticRefinement::all_minus(2), cycle).unwrap()
}

fn fibers() -> Check {
    let strong_cycle = [node("1/y1", [0, -1], false), node("x1", [1, 0], true), node("1/y3", [0, 1], true), node("x3", [-1, 0], false)];
    let weak_cycle = [
        node("x1", [1, 0], false),
        node("x2", [1, 1], true),
        node("x3", [0, 1], true),
        node("x4", [-1, 0], false),
        node("x5", [-1, -1], true),
    ];
    let strong_names = renaming(&[("X", "x3"), ("Y", "x1"), ("Z", "1/y1"), ("W", "1/y3")]);
    let weak_names = renaming(&[("X", "x1"), ("Y", "x3"), ("Z", "x4"), ("W", "x2"), ("P", "x5")]);
    let cases = [
        ("strong", strong(1), fg(1, &strong_cycle), &strong_names),
        ("weak", weak(), fg(1, &weak_cycle), &weak_names),
        ("SU(2)", strong(2), fg(2, &strong_cycle), &strong_names),
    ];
    let one = Q::from_integer(1.into());
    for (label, s, rels, names) in cases {
        let ideal = assemble_ideal(&s, 3).map_err(|e| e.to_string())?;
        match specialize_and_compare(&ideal, &one, &rels, names).map_err(|e| e.to_string())? {
            Comparison::Match => {}
            Comparison::Mismatch { generator, detail } => return Err(format!("{label}: {generator}: {detail}")),
        }
    }
    Ok(())
}

fn law<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Check {
    TestRunner::new(laws::config()).run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn properties() -> Check {
    law("refinement", laws::refinement_input(), laws::refinement_law)?;
    law("bracket", laws::word_input(), laws::bracket_law)?;
    law("roundtrip", laws::sorted_word_input(), laws::roundtrip_law)?;
    law("completion", laws::two_line_input(), laws::completion_law)?;
    law("reality", laws::reality_input(), laws::reality_law)
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 9] = [
        ("pentagon identity mod degree 10", pentagon),
        ("SU(2) spectrum for k <= 5", su2_spectrum),
        ("flavored identity mod degree 8", flavored),
        ("two-line completion adds one ray", example_one_completion),
        ("squared-line completion for k <= 4", example_three_completion),
        ("Y-system periods", y_systems),
        ("degeneration ideals", ideals),
        ("t = 1 fibers match FG relations", fibers),
        ("property suites", properties),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {}: {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failures += 1;
                println!("FAIL {}: {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
