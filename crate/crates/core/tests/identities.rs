use std::collections::BTreeSet;

use num_complex::Complex64;
use wallcross::autom::first_difference;
use wallcross::scattering::spectrum_generator_factorize;
use wallcross::{
    compose_word, factorize_ordered, rat, CentralChargeModel, Charge, KSFactor, KSWord, LatticeContext,
    QuadraticRefinement, TruncationContext,
};

fn word<const N: usize>(fs: &[([i64; N], i64)]) -> KSWord {
    KSWord::new(fs.iter().map(|(g, o)| KSFactor::new(*g, *o)).collect())
}

fn same(ctx: &LatticeContext, r: &QuadraticRefinement, a: &KSWord, b: &KSWord, order: u32) {
    let tr = TruncationContext::degree(order);
    let x = compose_word(ctx, r, a, tr).unwrap();
    let y = compose_word(ctx, r, b, tr).unwrap();
    assert_eq!(first_difference(&x, &y), None, "{a} vs {b}");
}

#[test]
fn pentagon() {
    let ctx = LatticeContext::standard2();
    let r = QuadraticRefinement::all_minus(2);
    let lhs = word(&[([0, 1], 1), ([1, 0], 1)]);
    let rhs = word(&[([1, 0], 1), ([1, 1], 1), ([0, 1], 1)]);
    same(&ctx, &r, &lhs, &rhs, 10);
    // not an identity with the factors in the other order
    let tr = TruncationContext::degree(4);
    let swapped = word(&[([0, 1], 1), ([1, 1], 1), ([1, 0], 1)]);
    assert!(first_difference(&compose_word(&ctx, &r, &lhs, tr).unwrap(), &compose_word(&ctx, &r, &swapped, tr).unwrap()).is_some());
}

fn su2() -> LatticeContext {
    LatticeContext::new(
        vec![vec![0, -1], vec![1, 0]],
        vec![Charge::from([2, -1]), Charge::from([0, 1])],
        vec![],
    )
    .unwrap()
}

#[test]
fn su2_spectrum_for_small_k() {
    let ctx = su2();
    let r = QuadraticRefinement::all_minus(2);
    let key = |g: &Charge| {
        let c = ctx.coordinates(g).unwrap();
        rat::to_f64(&c[1]).atan2(rat::to_f64(&c[0]))
    };
    for k in 1..=3u32 {
        let d = 2 * k + 1;
        let tr = TruncationContext::degree(d);
        let target = compose_word(&ctx, &r, &word(&[([2, -1], 1), ([0, 1], 1)]), tr).unwrap();
        let found = factorize_ordered(&target, &r, &key, d).unwrap();
        let mut want = BTreeSet::new();
        for n in 0..=k as i64 {
            want.insert(KSFactor::new(ctx.from_coords(&[n + 1, n]), 1));
            want.insert(KSFactor::new(ctx.from_coords(&[n, n + 1]), 1));
        }
        want.insert(KSFactor::new([2, 0], -2));
        let got: BTreeSet<KSFactor> = found.factors.iter().cloned().collect();
        assert_eq!(got, want, "k = {k}");
        assert_eq!(compose_word(&ctx, &r, &found, tr).unwrap(), target);
    }
}

fn flavored() -> LatticeContext {
    LatticeContext::new(
        vec![vec![0, -1, 1], vec![1, 0, 0], vec![-1, 0, 0]],
        vec![Charge::from([1, 0, 0]), Charge::from([0, 1, 0]), Charge::from([0, 0, -1])],
        vec![Charge::from([0, 1, 1])],
    )
    .unwrap()
}

#[test]
fn flavored_identity() {
    let ctx = flavored();
    let r = QuadraticRefinement::all_minus(3);
    let lhs = word(&[([1, 0, 0], 1), ([0, 1, 0], 1), ([0, 0, -1], 1)]);
    let rhs = word(&[
        ([0, 1, 0], 1),
        ([0, 0, -1], 1),
        ([1, 1, -1], 1),
        ([1, 1, 0], 1),
        ([1, 0, -1], 1),
        ([1, 0, 0], 1),
    ]);
    same(&ctx, &r, &lhs, &rhs, 8);
    // γ2 and γ3 pair to zero, so their factors commute
    same(&ctx, &r, &word(&[([0, 1, 0], 1), ([0, 0, -1], 1)]), &word(&[([0, 0, -1], 1), ([0, 1, 0], 1)]), 6);
}

#[test]
fn spectrum_generator_in_both_chambers() {
    // weak-coupling reading uses the negated pentagon pairing
    let ctx = LatticeContext::new(
        vec![vec![0, -1], vec![1, 0]],
        vec![Charge::from([1, 0]), Charge::from([0, 1])],
        vec![],
    )
    .unwrap();
    let r = QuadraticRefinement::all_minus(2);
    let tr = TruncationContext::degree(6);
    let s = compose_word(&ctx, &r, &word(&[([1, 0], 1), ([0, 1], 1)]), tr).unwrap();
    let strong = CentralChargeModel::new(vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)]);
    let weak = CentralChargeModel::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
    let a = spectrum_generator_factorize(&s, &r, &strong, 6).unwrap();
    let b = spectrum_generator_factorize(&s, &r, &weak, 6).unwrap();
    assert_eq!(a, word(&[([1, 0], 1), ([0, 1], 1)]));
    assert_eq!(b, word(&[([0, 1], 1), ([1, 1], 1), ([1, 0], 1)]));
}
