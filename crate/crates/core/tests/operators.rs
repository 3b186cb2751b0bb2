mod common;

use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use carnot_core::linalg::{in_span, span_basis, Matrix};
use carnot_core::operators::{check_canceling_euclidean, CancelingVerdict, MultiIndex, OperatorMatrix};
use carnot_core::rational::int;
use carnot_core::uea::Uea;
use carnot_core::{Error, GradedLieAlgebra};
use common::*;

fn constant(alg: &Arc<GradedLieAlgebra>, m: &Matrix) -> OperatorMatrix {
    let mut op = OperatorMatrix::zero(alg.clone(), m.cols(), m.rows(), 0);
    op.add_term(vec![], m).unwrap();
    op
}

fn invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

fn curl(alg: &Arc<GradedLieAlgebra>) -> OperatorMatrix {
    let mut op = OperatorMatrix::zero(alg.clone(), 2, 1, 1);
    op.add_entry(vec![0], 0, 1, int(1)).unwrap();
    op.add_entry(vec![1], 0, 0, int(-1)).unwrap();
    op
}

#[test]
fn curl_symbol_cocanceling_divergence_not() {
    let alg = h1();
    assert!(curl(&alg).symmetrize().check_cocanceling().cocanceling);
    // Divergence: ξ ↦ (ξ1 ξ2) kills a line at every point but the family
    // of kernels intersects trivially.
    let mut div = OperatorMatrix::zero(alg.clone(), 2, 1, 1);
    div.add_entry(vec![0], 0, 0, int(1)).unwrap();
    div.add_entry(vec![1], 0, 1, int(1)).unwrap();
    assert!(div.symmetrize().check_cocanceling().cocanceling);
    // X1 acting on the first component only leaves e2 in every kernel.
    let mut partial = OperatorMatrix::zero(alg, 2, 1, 1);
    partial.add_entry(vec![0], 0, 0, int(1)).unwrap();
    let v = partial.symmetrize().check_cocanceling();
    assert!(!v.cocanceling);
    assert_eq!(v.common_kernel, vec![vec![int(0), int(1)]]);
}

#[test]
fn multi_index_of_word() {
    assert_eq!(MultiIndex::of_word(2, &[1, 0, 1]).exponents(), &[1, 2]);
    assert_eq!(MultiIndex::of_word(3, &[2, 2]).degree(), 2);
}

#[test]
fn symmetrize_collects_permuted_words() {
    let alg = h1();
    let mut op = OperatorMatrix::zero(alg, 1, 1, 2);
    op.add_entry(vec![0, 1], 0, 0, int(1)).unwrap();
    op.add_entry(vec![1, 0], 0, 0, int(-1)).unwrap();
    // X1X2 - X2X1 = T has vanishing symbol.
    assert!(op.symmetrize().is_zero());
}

#[test]
fn canceling_on_the_plane() {
    let r2 = arc(GradedLieAlgebra::abelian(2).unwrap());
    let mut grad = OperatorMatrix::zero(r2.clone(), 1, 2, 1);
    grad.add_entry(vec![0], 0, 0, int(1)).unwrap();
    grad.add_entry(vec![1], 1, 0, int(1)).unwrap();
    assert!(check_canceling_euclidean(&grad, 16, 0).unwrap().is_certified());

    let mut lap = OperatorMatrix::zero(r2, 1, 1, 2);
    lap.add_entry(vec![0, 0], 0, 0, int(1)).unwrap();
    lap.add_entry(vec![1, 1], 0, 0, int(1)).unwrap();
    match check_canceling_euclidean(&lap, 16, 0).unwrap() {
        CancelingVerdict::NotCertified { candidate, .. } => assert_eq!(candidate.len(), 1),
        v => panic!("{v:?}"),
    }
    assert!(matches!(check_canceling_euclidean(&curl(&h1()), 16, 0), Err(Error::NotAbelian)));
}

#[test]
fn compose_checks_algebra_and_shapes() {
    let alg = h1();
    let c = curl(&alg);
    assert!(matches!(c.compose(&c), Err(Error::DimensionMismatch { .. })));
    let other = curl(&free23());
    let id = constant(&free23(), &Matrix::identity(1));
    assert!(id.compose(&other).is_ok());
    assert!(c.compose(&id).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn compose_associative(seed in any::<u64>()) {
        let alg = free23();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_operator(&mut rng, &alg, 2, 3, 1);
        let b = random_operator(&mut rng, &alg, 3, 2, 2);
        let c = random_operator(&mut rng, &alg, 2, 2, 1);
        prop_assert_eq!(c.compose(&b)?.compose(&a)?, c.compose(&b.compose(&a)?)?);
    }

    #[test]
    fn compose_bilinear(seed in any::<u64>(), s in -4i64..4) {
        let alg = h1();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_operator(&mut rng, &alg, 2, 2, 1);
        let b = random_operator(&mut rng, &alg, 2, 2, 1);
        let c = random_operator(&mut rng, &alg, 2, 1, 2);
        let mut sum = a.scale(&int(s));
        sum.add_scaled(&b, &int(1))?;
        let mut expected = c.compose(&a)?.scale(&int(s));
        expected.add_scaled(&c.compose(&b)?, &int(1))?;
        prop_assert_eq!(c.compose(&sum)?, expected);
    }

    #[test]
    fn transpose_involution_and_antihomomorphism(seed in any::<u64>()) {
        let alg = free23();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_operator(&mut rng, &alg, 2, 3, 2);
        let b = random_operator(&mut rng, &alg, 3, 1, 1);
        prop_assert_eq!(a.formal_transpose().formal_transpose(), a.clone());
        prop_assert_eq!(
            b.compose(&a)?.formal_transpose(),
            a.formal_transpose().compose(&b.formal_transpose())?
        );
    }

    #[test]
    fn normal_form_of_composition_is_product(seed in any::<u64>()) {
        let alg = free23();
        let uea = Uea::new(alg.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_operator(&mut rng, &alg, 2, 2, 2);
        let b = random_operator(&mut rng, &alg, 2, 1, 1);
        let lhs = b.compose(&a)?.to_uea_matrix(&uea)?;
        let rhs = b.to_uea_matrix(&uea)?.mul(&a.to_uea_matrix(&uea)?, &uea)?;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symbol_of_transpose(seed in any::<u64>()) {
        let alg = h1();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_operator(&mut rng, &alg, 2, 3, 3);
        let sym = a.symmetrize();
        let sym_t = a.formal_transpose().symmetrize();
        let sign = int(if a.order() % 2 == 1 { -1 } else { 1 });
        for (beta, m) in sym.terms() {
            prop_assert_eq!(sym_t.coefficient(beta).cloned(), Some(m.transpose().scale(&sign)));
        }
        prop_assert_eq!(sym.terms().len(), sym_t.terms().len());
    }

    #[test]
    fn cocanceling_invariant_under_basis_change(seed in any::<u64>()) {
        let alg = free23();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_operator(&mut rng, &alg, 3, 2, 2);
        let p = constant(&alg, &invertible(&mut rng, 3));
        let q = constant(&alg, &invertible(&mut rng, 2));
        let changed = q.compose(&a)?.compose(&p)?;
        prop_assert_eq!(
            a.symmetrize().check_cocanceling().cocanceling,
            changed.symmetrize().check_cocanceling().cocanceling
        );
    }

    #[test]
    fn witness_points_exist_for_curl(seed in any::<u64>(), cx in -3i64..3, cy in -3i64..3) {
        let sym = curl(&h1()).symmetrize();
        let pts = sym.cocanceling_witness_points(&[int(cx), int(cy)], &int(1), seed, 64)?;
        prop_assert!(!pts.is_empty() && pts.len() <= 2);
    }

    #[test]
    fn canceling_never_certifies_planted_image(seed in any::<u64>()) {
        let alg = arc(GradedLieAlgebra::abelian(2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = planted_non_canceling(&mut rng, &alg, 3, 3);
        match check_canceling_euclidean(&a, 8, seed)? {
            CancelingVerdict::Certified { .. } => prop_assert!(false, "false certification"),
            CancelingVerdict::NotCertified { candidate, .. } => {
                let sym = a.symmetrize();
                for _ in 0..4 {
                    let xi = random_vector(&mut rng, 2, 7);
                    prop_assume!(xi.iter().any(|x| !x.is_zero()));
                    let s = sym.at(&xi)?;
                    let image: Vec<_> = (0..s.cols()).map(|j| s.column(j)).collect();
                    for v in &candidate {
                        prop_assert!(in_span(3, &span_basis(3, &image), v));
                    }
                }
            }
        }
    }
}
