mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use carnot_core::fields::{
    apply_to_polynomial, field, left_field, realize_element, realize_word, right_field, GradedPolynomial,
    PolyDiffOperator, Side,
};
use carnot_core::poly::Poly;
use carnot_core::rational::int;
use carnot_core::uea::Uea;
use carnot_core::{GradedLieAlgebra, Rational};
use common::*;

fn bracket_field(alg: &GradedLieAlgebra, a: usize, b: usize, side: Side) -> PolyDiffOperator {
    let mut out = PolyDiffOperator::zero(alg.dim());
    for (k, c) in alg.basis_bracket(a, b) {
        out.add_scaled(&field(alg, *k, side).unwrap(), c);
    }
    out
}

/// Exponent vectors with weighted degree exactly `d`.
fn monomials_of_degree(weights: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn rec(weights: &[u32], d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == weights.len() {
            if d == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let w = weights[prefix.len()];
        for e in 0..=d / w {
            prefix.push(e);
            rec(weights, d - e * w, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(weights, d, &mut Vec::new(), &mut out);
    out
}

fn words(m: usize, k: usize) -> Vec<Vec<usize>> {
    (0..k).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                (0..m).map(move |l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect()
    })
}

/// `x ↦ f(y · x)` as a polynomial in `x`.
fn left_translate(alg: &GradedLieAlgebra, f: &Poly, y: &[Rational]) -> Poly {
    let n = alg.dim();
    let subs: Vec<Poly> =
        y.iter().map(|c| Poly::constant(n, c.clone())).chain((0..n).map(|k| Poly::var(n, k))).collect();
    let product: Vec<Poly> = alg.bch().components().iter().map(|c| c.compose(&subs)).collect();
    f.compose(&product)
}

#[test]
fn realized_structure_constants() {
    for alg in [h1(), free23(), arc(GradedLieAlgebra::heisenberg(2).unwrap())] {
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                let left = left_field(&alg, a).unwrap().commutator(&left_field(&alg, b).unwrap());
                assert_eq!(left, bracket_field(&alg, a, b, Side::Left), "{} left [{a},{b}]", alg.name());
                // Right-invariant fields realize the opposite algebra.
                let right = right_field(&alg, a).unwrap().commutator(&right_field(&alg, b).unwrap());
                let mut expected = PolyDiffOperator::zero(alg.dim());
                expected.add_scaled(&bracket_field(&alg, a, b, Side::Right), &int(-1));
                assert_eq!(right, expected, "{} right [{a},{b}]", alg.name());
            }
        }
    }
}

#[test]
fn left_and_right_fields_commute() {
    for alg in [h1(), free23(), arc(GradedLieAlgebra::free(3, 2).unwrap())] {
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let c = left_field(&alg, i).unwrap().commutator(&right_field(&alg, j).unwrap());
                assert!(c.is_zero(), "{} [X{i}, X{j}^R]", alg.name());
            }
        }
    }
}

#[test]
fn fields_agree_at_identity() {
    let alg = free23();
    let origin = vec![int(0); alg.dim()];
    for i in 0..alg.dim() {
        let l = left_field(&alg, i).unwrap();
        let r = right_field(&alg, i).unwrap();
        for k in 0..alg.dim() {
            let mut alpha = vec![0; alg.dim()];
            alpha[k] = 1;
            assert_eq!(l.coefficient(&alpha).eval(&origin), r.coefficient(&alpha).eval(&origin));
        }
    }
}

#[test]
fn words_annihilate_low_degree_polynomials() {
    for alg in [h1(), free23()] {
        for k in 1..=4u32 {
            let ws = words(alg.m(), k as usize);
            let ops: Vec<PolyDiffOperator> = ws.iter().map(|w| realize_word(&alg, w, Side::Left).unwrap()).collect();
            for d in 0..k {
                for alpha in monomials_of_degree(alg.weights(), d) {
                    let p = GradedPolynomial::monomial(&alg, alpha.clone()).unwrap();
                    for (w, op) in ws.iter().zip(&ops) {
                        assert!(
                            apply_to_polynomial(op, &p).unwrap().is_zero(),
                            "{} word {w:?} on {alpha:?}",
                            alg.name()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn words_lower_degree_by_length() {
    let alg = free23();
    for alpha in monomials_of_degree(alg.weights(), 5) {
        let p = GradedPolynomial::monomial(&alg, alpha).unwrap();
        for w in words(2, 2) {
            let q = apply_to_polynomial(&realize_word(&alg, &w, Side::Left).unwrap(), &p).unwrap();
            assert!(q.is_zero() || q.degrees() == vec![3]);
        }
    }
}

#[test]
fn realization_matches_normal_form() {
    for alg in [h1(), free23()] {
        let uea = Uea::new(alg.clone());
        for w in words(2, 3) {
            let direct = realize_word(&alg, &w, Side::Left).unwrap();
            let via_pbw = realize_element(&alg, &uea.from_word(&w).unwrap(), Side::Left).unwrap();
            assert_eq!(direct, via_pbw, "{} {w:?}", alg.name());
        }
    }
}

fn random_poly<R: Rng>(rng: &mut R, alg: &Arc<GradedLieAlgebra>) -> Poly {
    let mut p = Poly::zero(alg.dim());
    for _ in 0..3 {
        let alpha: Vec<u32> = (0..alg.dim()).map(|_| rng.gen_range(0..3)).collect();
        p.add_term(alpha, int(rng.gen_range(-4..=4)));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn left_fields_are_left_invariant(seed in any::<u64>(), i in 0usize..2) {
        let alg = if seed % 2 == 0 { h1() } else { free23() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, &alg);
        let y = random_vector(&mut rng, alg.dim(), 3);
        let x = left_field(&alg, i).unwrap();
        prop_assert_eq!(
            x.apply(&left_translate(&alg, &f, &y)),
            left_translate(&alg, &x.apply(&f), &y)
        );
    }

    #[test]
    fn realization_is_multiplicative(seed in any::<u64>()) {
        let alg = free23();
        let uea = Uea::new(alg.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&mut rng, &alg, 2, 2);
        let b = random_element(&mut rng, &alg, 2, 2);
        let ab = realize_element(&alg, &uea.multiply(&a, &b), Side::Left).unwrap();
        let composed = realize_element(&alg, &a, Side::Left)
            .unwrap()
            .compose(&realize_element(&alg, &b, Side::Left).unwrap());
        prop_assert_eq!(ab, composed);
    }
}
