//! Randomized laws shared by the property suite and the acceptance run.
//! `TV_PROPTEST_CASES` sets the number of cases per law.

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError};
use wallcross::scattering::{binomial, complete, two_lines, Kind};
use wallcross::{
    compose_word, factorize_ordered, poisson_bracket, rat, semiflat_coordinate, CentralChargeModel, Charge, KSFactor,
    KSWord, LatticeContext, QuadraticRefinement, SemiflatContext, TruncationContext,
};

type Outcome = Result<(), TestCaseError>;

pub fn config() -> Config {
    let cases = std::env::var("TV_PROPTEST_CASES").ok().and_then(|s| s.parse().ok()).unwrap_or(100);
    Config { cases, failure_persistence: None, ..Config::default() }
}

fn rank2(p: i64) -> LatticeContext {
    LatticeContext::new(vec![vec![0, p], vec![-p, 0]], vec![Charge::from([1, 0]), Charge::from([0, 1])], vec![])
        .unwrap()
}

fn signs(n: usize) -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { 1i8 } else { -1 }), n)
}

/// Small positive-cone charge with nonzero degree.
fn cone_charge() -> impl Strategy<Value = [i64; 2]> {
    (0i64..4, 0i64..4).prop_filter("nonzero", |(a, b)| a + b > 0).prop_map(|(a, b)| [a, b])
}

pub fn refinement_input() -> impl Strategy<Value = (i64, Vec<i8>)> {
    (-3i64..=3, signs(2))
}

/// σ(a)σ(b) = (−1)^⟨a,b⟩ σ(a+b) for every pair in the 9×9 box.
pub fn refinement_law((p, s): (i64, Vec<i8>)) -> Outcome {
    let ctx = rank2(p);
    let refinement = QuadraticRefinement::new(s).unwrap();
    let pts: Vec<Charge> = (-4i64..=4).flat_map(|x| (-4i64..=4).map(move |y| Charge::from([x, y]))).collect();
    for a in &pts {
        let sa = refinement.sign(&ctx, a).unwrap();
        for b in &pts {
            let parity = if ctx.pair(a, b).unwrap().rem_euclid(2) == 0 { 1 } else { -1 };
            prop_assert_eq!(sa * refinement.sign(&ctx, b).unwrap(), parity * refinement.sign(&ctx, &(a + b)).unwrap());
        }
    }
    Ok(())
}

type WordInput = (i64, Vec<([i64; 2], i64)>, Vec<i8>);

pub fn word_input() -> impl Strategy<Value = WordInput> {
    (1i64..=2, prop::collection::vec((cone_charge(), -2i64..=2), 1..4), signs(2))
}

pub fn bracket_law((p, factors, s): WordInput) -> Outcome {
    let ctx = rank2(p);
    let r = QuadraticRefinement::new(s).unwrap();
    let tr = TruncationContext::degree(6);
    let w = KSWord::new(factors.into_iter().filter(|(_, o)| *o != 0).map(|(g, o)| KSFactor::new(g, o)).collect());
    let auto = compose_word(&ctx, &r, &w, tr).unwrap();
    let (a, b) = (Charge::from([1, 0]), Charge::from([0, 1]));
    let (wa, wb) = (auto.image_of(&a).unwrap(), auto.image_of(&b).unwrap());
    let lhs = poisson_bracket(&ctx, &wa, &wb).unwrap();
    let rhs = wa.mul(&wb).unwrap().scale(&rat::q(ctx.pair(&a, &b).unwrap()));
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn sorted_word_input() -> impl Strategy<Value = (std::collections::BTreeSet<usize>, Vec<i64>, i64)> {
    (
        prop::collection::btree_set(0usize..9, 1..5),
        prop::collection::vec(prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2), Just(3)], 9),
        1i64..=2,
    )
}

pub fn roundtrip_law((picks, omegas, p): (std::collections::BTreeSet<usize>, Vec<i64>, i64)) -> Outcome {
    // primitive charges of distinct slope, sorted by decreasing angle
    const PRIMS: [[i64; 2]; 9] = [[0, 1], [1, 3], [1, 2], [2, 3], [1, 1], [3, 2], [2, 1], [3, 1], [1, 0]];
    let ctx = rank2(p);
    let r = QuadraticRefinement::all_minus(2);
    let w = KSWord::new(picks.iter().map(|&i| KSFactor::new(PRIMS[i], omegas[i])).collect());
    let tr = TruncationContext::degree(5);
    let target = compose_word(&ctx, &r, &w, tr).unwrap();
    let key = |g: &Charge| (g.0[1] as f64).atan2(g.0[0] as f64);
    let found = factorize_ordered(&target, &r, &key, 5).unwrap();
    prop_assert_eq!(found, w);
    Ok(())
}

pub fn two_line_input() -> impl Strategy<Value = (i64, i64, i64)> {
    (-2i64..=2, -2i64..=2, 1i64..=2)
}

/// Completion at t-order 4, i.e. mod t^5.
pub fn completion_law((a, b, c): (i64, i64, i64)) -> Outcome {
    let order = 4;
    let mut fx = binomial([1, 0], 1, rat::q(c), order).unwrap();
    if a != 0 {
        fx = fx.mul(&binomial([2, 0], 2, rat::q(a), order).unwrap()).unwrap();
    }
    let fy = binomial([0, 1], 1, rat::q(b.abs().max(1)), order).unwrap();
    let d = two_lines(fx, fy).unwrap();
    let full = complete(&d, order, 1).unwrap();
    prop_assert_eq!(&complete(&full, order, 1).unwrap(), &full);
    let lower = complete(&d.with_order(order - 1), order - 1, 1).unwrap();
    prop_assert_eq!(full.with_order(order - 1).minimal_normalize(), lower);
    prop_assert!(full.elements().iter().filter(|e| e.kind == Kind::Line).count() == 2);
    Ok(())
}

type RealityInput = ((i64, i64), f64, f64, (f64, f64), (f64, f64, f64, f64));

pub fn reality_input() -> impl Strategy<Value = RealityInput> {
    (
        (-5i64..=5, -5i64..=5),
        0.2f64..3.0,
        -3.1f64..3.1,
        (-3.0f64..3.0, -3.0f64..3.0),
        (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0),
    )
}

/// X_γ(−1/ξ̄) = conj X_{−γ}(ξ).
pub fn reality_law((g, xr, xa, th, z): RealityInput) -> Outcome {
    let ctx = LatticeContext::standard2();
    let model = CentralChargeModel::new(vec![Complex64::new(z.0, z.1), Complex64::new(z.2, z.3)]);
    let sf = SemiflatContext { radius: 0.3, theta: vec![th.0, th.1] };
    let xi = Complex64::from_polar(xr, xa);
    let gamma = Charge::from([g.0, g.1]);
    let here = semiflat_coordinate(&sf, &model, &ctx, &gamma, -1.0 / xi.conj()).unwrap();
    let there = semiflat_coordinate(&sf, &model, &ctx, &(-&gamma), xi).unwrap().conj();
    let scale = here.norm().max(1.0);
    prop_assert!((here - there).norm() <= 1e-10 * scale, "{} vs {}", here, there);
    Ok(())
}
