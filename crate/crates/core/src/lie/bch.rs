//! Baker–Campbell–Hausdorff product via Dynkin's formula, truncated at the
//! step of the algebra (exact, since the algebra is nilpotent).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::GradedLieAlgebra;
use crate::poly::Poly;
use crate::rational::{self, Rational};

/// One term `c · [a_1, [a_2, … [a_{N-1}, a_N]]]` of the series; letters are
/// `false` for the left factor `X` and `true` for the right factor `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynkinTerm {
    pub letters: Vec<bool>,
    pub coeff: Rational,
}

/// `log(e^X e^Y)` through total degree `max_degree`, grouped by the
/// right-nested bracket word. Words whose innermost bracket is `[a, a]` are
/// dropped.
pub fn dynkin_series(max_degree: usize) -> Vec<DynkinTerm> {
    let mut acc: BTreeMap<Vec<bool>, Rational> = BTreeMap::new();
    for total in 1..=max_degree {
        for blocks in 1..=total {
            let mut seq = Vec::with_capacity(blocks);
            enumerate_blocks(total, blocks, &mut seq, &mut |pairs| {
                let mut denom = BigInt::from(total as u64) * BigInt::from(blocks as u64);
                let mut word = Vec::with_capacity(total);
                for &(r, s) in pairs {
                    denom *= rational::factorial(r as u64) * rational::factorial(s as u64);
                    word.extend(std::iter::repeat_n(false, r));
                    word.extend(std::iter::repeat_n(true, s));
                }
                if word.len() >= 2 && word[word.len() - 1] == word[word.len() - 2] {
                    return;
                }
                let sign = if blocks % 2 == 1 { 1 } else { -1 };
                let c = Rational::new(BigInt::from(sign), denom);
                *acc.entry(word).or_insert_with(Rational::zero) += c;
            });
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(letters, coeff)| DynkinTerm { letters, coeff }).collect()
}

type Emit<'a> = dyn FnMut(&[(usize, usize)]) + 'a;

fn enumerate_blocks(remaining: usize, blocks_left: usize, seq: &mut Vec<(usize, usize)>, emit: &mut Emit<'_>) {
    if blocks_left == 0 {
        if remaining == 0 {
            emit(seq);
        }
        return;
    }
    // every remaining block needs at least one letter
    if remaining < blocks_left {
        return;
    }
    for size in 1..=remaining - (blocks_left - 1) {
        for r in 0..=size {
            seq.push((r, size - r));
            enumerate_blocks(remaining - size, blocks_left - 1, seq, emit);
            seq.pop();
        }
    }
}

/// The group law `z = x · y` as one polynomial per coordinate in the `2n`
/// variables `(x_1..x_n, y_1..y_n)`.
#[derive(Clone, Debug)]
pub struct BchMap {
    dim: usize,
    series: Vec<DynkinTerm>,
    components: Vec<Poly>,
}

impl BchMap {
    pub(crate) fn build(alg: &GradedLieAlgebra) -> Self {
        let n = alg.dim();
        let nvars = 2 * n;
        let x: Vec<Poly> = (0..n).map(|k| Poly::var(nvars, k)).collect();
        let y: Vec<Poly> = (0..n).map(|k| Poly::var(nvars, n + k)).collect();
        let series = dynkin_series(alg.step());
        let mut components = vec![Poly::zero(nvars); n];
        for term in &series {
            let nested =
                nested_bracket(&term.letters, |is_y| if is_y { &y } else { &x }, |u, v| alg.bracket_poly(u, v));
            for (acc, p) in components.iter_mut().zip(&nested) {
                acc.add_scaled(p, &term.coeff);
            }
        }
        BchMap { dim: n, series, components }
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn series(&self) -> &[DynkinTerm] {
        &self.series
    }

    pub fn apply(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let point: Vec<Rational> = x.iter().chain(y).cloned().collect();
        self.components.iter().map(|p| p.eval(&point)).collect()
    }

    pub fn apply_f64(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let point: Vec<f64> = x.iter().chain(y).cloned().collect();
        self.components.iter().map(|p| p.eval(&point)).collect()
    }

    /// Evaluates the Dynkin series directly with vector brackets, bypassing
    /// the cached polynomials.
    pub fn apply_by_brackets(&self, alg: &GradedLieAlgebra, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for term in &self.series {
            let v = nested_bracket(&term.letters, |is_y| if is_y { y } else { x }, |u, v| alg.bracket_vec(u, v));
            for (acc, c) in out.iter_mut().zip(v) {
                *acc += c * &term.coeff;
            }
        }
        out
    }
}

fn nested_bracket<'a, T: Clone + 'a, S: ?Sized + AsRef<[T]> + 'a>(
    letters: &[bool],
    pick: impl Fn(bool) -> &'a S,
    bracket: impl Fn(&[T], &[T]) -> Vec<T>,
) -> Vec<T> {
    let (last, rest) = letters.split_last().expect("non-empty word");
    let mut acc: Vec<T> = pick(*last).as_ref().to_vec();
    for &l in rest.iter().rev() {
        acc = bracket(pick(l).as_ref(), &acc);
    }
    acc
}
