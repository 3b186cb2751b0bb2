#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;

use carnot_core::linalg::Matrix;
use carnot_core::operators::OperatorMatrix;
use carnot_core::rational::{frac, random_small};
use carnot_core::uea::UeaElement;
use carnot_core::{GradedLieAlgebra, GroupPoint, Rational};

pub fn arc(alg: GradedLieAlgebra) -> Arc<GradedLieAlgebra> {
    Arc::new(alg)
}

pub fn h1() -> Arc<GradedLieAlgebra> {
    arc(GradedLieAlgebra::heisenberg(1).unwrap())
}

pub fn free23() -> Arc<GradedLieAlgebra> {
    arc(GradedLieAlgebra::free(2, 3).unwrap())
}

/// A sparse element with up to `terms` PBW monomials of length at most `len`.
pub fn random_element<R: Rng>(rng: &mut R, alg: &GradedLieAlgebra, terms: usize, len: usize) -> UeaElement {
    let mut e = UeaElement::zero();
    for _ in 0..rng.gen_range(1..=terms) {
        let k = rng.gen_range(0..=len);
        let mut m: Vec<u16> = (0..k).map(|_| rng.gen_range(0..alg.dim()) as u16).collect();
        m.sort_unstable();
        e.add_term(m, random_small(rng, 5));
    }
    e
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Rational> {
    (0..n).map(|_| random_small(rng, bound)).collect()
}

pub fn random_point<R: Rng>(rng: &mut R, alg: &GradedLieAlgebra) -> GroupPoint {
    GroupPoint::new(random_vector(rng, alg.dim(), 4))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_rows((0..rows).map(|_| (0..cols).map(|_| frac(rng.gen_range(-3..=3), 1)).collect()).collect())
}

/// A homogeneous operator with a handful of random words.
pub fn random_operator<R: Rng>(
    rng: &mut R,
    alg: &Arc<GradedLieAlgebra>,
    dim_in: usize,
    dim_out: usize,
    order: usize,
) -> OperatorMatrix {
    let mut op = OperatorMatrix::zero(alg.clone(), dim_in, dim_out, order);
    for _ in 0..rng.gen_range(1..=3) {
        let word: Vec<usize> = (0..order).map(|_| rng.gen_range(0..alg.m())).collect();
        op.add_term(word, &random_matrix(rng, dim_out, dim_in)).unwrap();
    }
    op
}

pub fn all_presets() -> Vec<Arc<GradedLieAlgebra>> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(arc(GradedLieAlgebra::abelian(n).unwrap()));
    }
    for n in 1..=3 {
        out.push(arc(GradedLieAlgebra::heisenberg(n).unwrap()));
    }
    for (m, r) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)] {
        out.push(arc(GradedLieAlgebra::free(m, r).unwrap()));
    }
    out
}

/// An order-2 operator on an abelian group whose last input column is
/// `Δ · w`, so `w` lies in every image `A(ξ)[V]` and canceling fails.
pub fn planted_non_canceling<R: Rng>(
    rng: &mut R,
    alg: &Arc<GradedLieAlgebra>,
    dim_in: usize,
    dim_out: usize,
) -> OperatorMatrix {
    let mut a = random_operator(rng, alg, dim_in, dim_out, 2);
    let w: Vec<Rational> = loop {
        let w: Vec<Rational> = (0..dim_out).map(|_| frac(rng.gen_range(-3..=3), 1)).collect();
        if w.iter().any(|x| *x != frac(0, 1)) {
            break w;
        }
    };
    // Clear the last column, then plant the Laplacian there.
    let snapshot: Vec<(Vec<usize>, Matrix)> = a.terms().iter().map(|(w, m)| (w.clone(), m.clone())).collect();
    for (word, m) in snapshot {
        for i in 0..dim_out {
            a.add_entry(word.clone(), i, dim_in - 1, -m[(i, dim_in - 1)].clone()).unwrap();
        }
    }
    for g in 0..alg.m() {
        for (i, wi) in w.iter().enumerate() {
            a.add_entry(vec![g, g], i, dim_in - 1, wi.clone()).unwrap();
        }
    }
    a
}
