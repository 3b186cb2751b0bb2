mod common;

use carnot_core::annihilator::{
    closed_form_annihilator, closed_form_parts, example_operator, find_annihilator, korn_reduction_check, solve_n,
    swap_factor, AnnihilatorCertificate, ExampleId, Provenance,
};
use carnot_core::linalg::Matrix;
use carnot_core::operators::OperatorMatrix;
use carnot_core::rational::int;
use carnot_core::uea::{Uea, UeaElement};
use carnot_core::{Error, GradedLieAlgebra};
use common::*;

fn groups() -> Vec<std::sync::Arc<GradedLieAlgebra>> {
    vec![h1(), free23(), arc(GradedLieAlgebra::free(3, 2).unwrap()), arc(GradedLieAlgebra::heisenberg(2).unwrap())]
}

#[test]
fn gradient_pipeline_on_several_groups() {
    for alg in groups() {
        let uea = Uea::new(alg.clone());
        let cf = closed_form_annihilator(ExampleId::Gradient, &uea).unwrap();
        let r = alg.step();
        assert_eq!((cf.l0.order(), cf.m.order(), cf.n.order()), (1, r, r + 1), "{}", alg.name());
        assert!(cf.sym_n_zero && cf.sym_l0_cocanceling && cf.sym_ml0_cocanceling);
        assert_eq!(cf.sym_m_rank, cf.m.dim_in());
        // Sym(M)(1,…,1) is the identity on F.
        let at = cf.m.symmetrize().at(&cf.xi0).unwrap();
        assert_eq!(at, Matrix::identity(cf.m.dim_in()));
        cf.certificate.verify(&uea).unwrap();
    }
}

#[test]
fn gradient_n_words_on_h1() {
    // N = X₂[X₁,X₂] + [X₂,[X₁,X₂]] on f₂: the first term gives (2,1,2)↦+1,
    // (2,2,1)↦−1; the second gives (2,1,2)↦+2, (2,2,1)↦−1, (1,2,2)↦−1.
    let uea = Uea::new(h1());
    let cf = closed_form_annihilator(ExampleId::Gradient, &uea).unwrap();
    let words: Vec<_> = cf.n.terms().keys().cloned().collect();
    assert_eq!(words, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
    let coeff = |w: &[usize]| cf.n.terms()[w][(0, 1)].clone();
    assert_eq!((coeff(&[1, 0, 1]), coeff(&[1, 1, 0]), coeff(&[0, 1, 1])), (int(3), int(-2), int(-1)));
    assert!(cf.n.terms().values().all(|m| m[(0, 0)] == int(0)));
}

#[test]
fn powers_two_on_h1() {
    let uea = Uea::new(h1());
    let cf = closed_form_annihilator(ExampleId::Powers(2), &uea).unwrap();
    assert_eq!(cf.m.order(), 8);
    assert_eq!(cf.certificate.l.order(), 10);
    assert!(cf.sym_n_zero && cf.sym_ml0_cocanceling);
}

#[test]
fn powers_on_free_groups() {
    for alg in [free23(), arc(GradedLieAlgebra::free(3, 2).unwrap())] {
        let uea = Uea::new(alg.clone());
        let cf = closed_form_annihilator(ExampleId::Powers(2), &uea).unwrap();
        assert_eq!(cf.certificate.l.order(), 2 * (2 * alg.step() + 1));
    }
}

#[test]
fn korn_pipeline_on_h1() {
    let uea = Uea::new(h1());
    let cf = closed_form_annihilator(ExampleId::Korn, &uea).unwrap();
    assert_eq!(cf.m.order(), 16);
    assert_eq!(cf.certificate.l.order(), 18);
    assert_eq!(cf.a.dim_out(), 3);
    assert!(cf.sym_n_zero && cf.sym_l0_cocanceling && cf.sym_ml0_cocanceling);
}

#[test]
fn korn_reduction_cases() {
    for alg in groups() {
        let uea = Uea::new(alg.clone());
        let report = korn_reduction_check(&uea).unwrap();
        assert_eq!(report.k, 2 * alg.step());
        assert!(report.all_zero(), "{}: {:?}", alg.name(), report.cases);
        let has_case3 = report.cases.iter().any(|c| c.case == 3);
        assert_eq!(has_case3, alg.m() > 2, "{}", alg.name());
    }
}

#[test]
fn swap_factor_reconstructs() {
    let alg = free23();
    let uea = Uea::new(alg.clone());
    for l in 0..2 {
        for lp in 0..2 {
            let c = uea.commutator_factor(l, lp).unwrap();
            let swapped = swap_factor(&c, l, &uea).unwrap();
            // X_l^r C = C̃ X_l^r
            let xr = uea.power(&UeaElement::basis(l), alg.step());
            assert_eq!(uea.multiply(&xr, &c), uea.multiply(&swapped, &xr));
            uea.factor_coordinates(&swapped, l).unwrap();
        }
    }
}

#[test]
fn commutator_factor_on_h1() {
    // X₂²X₁ = (X₁X₂ − 2T)·X₂
    let uea = Uea::new(h1());
    let c = uea.commutator_factor(1, 0).unwrap();
    let expected = UeaElement::monomial(vec![0, 1], int(1)).sub(&UeaElement::monomial(vec![2], int(2)));
    assert_eq!(c, expected);
}

#[test]
fn solver_cross_check() {
    for id in [ExampleId::Gradient, ExampleId::Powers(2)] {
        let alg = h1();
        let uea = Uea::new(alg.clone());
        let (a, l0, mm, n) = closed_form_parts(id, &alg).unwrap();
        let solved = solve_n(&a, &l0, &mm, &uea).unwrap().expect("N exists");
        assert!(solved.symmetrize().is_zero());
        let l = mm.compose(&l0).unwrap().sub(&solved).unwrap();
        let cert = AnnihilatorCertificate::new(l, a.clone(), Provenance::Solved, &uea).unwrap();
        let closed = closed_form_annihilator(id, &uea).unwrap();
        assert_eq!(cert.cocanceling, closed.certificate.cocanceling);
        // Both N's agree modulo operators killed by A.
        let diff = solved.sub(&n).unwrap().compose(&a).unwrap().to_uea_matrix(&uea).unwrap();
        assert!(diff.is_zero());
    }
}

#[test]
fn search_reports_absence_and_presence() {
    let alg = h1();
    let uea = Uea::new(alg.clone());
    let g = example_operator(ExampleId::Gradient, &alg).unwrap();
    assert!(find_annihilator(&g, 1, 1, 0, &uea).unwrap().is_none());
    for seed in [0, 1, 99] {
        let cert = find_annihilator(&g, 3, 1, seed, &uea).unwrap().unwrap();
        assert!(cert.cocanceling.cocanceling);
        cert.verify(&uea).unwrap();
    }
    assert!(matches!(find_annihilator(&g, 0, 1, 0, &uea), Err(Error::InvalidParameter(_))));
}

#[test]
fn certificate_rejects_curl_alone() {
    let alg = h1();
    let uea = Uea::new(alg.clone());
    let g = example_operator(ExampleId::Gradient, &alg).unwrap();
    let mut curl = OperatorMatrix::zero(alg.clone(), 2, 1, 1);
    curl.add_entry(vec![0], 0, 1, int(1)).unwrap();
    curl.add_entry(vec![1], 0, 0, int(-1)).unwrap();
    let err = AnnihilatorCertificate::new(curl, g, Provenance::Solved, &uea).unwrap_err();
    assert!(err.to_string().contains("T"), "{err}");
}

#[test]
fn one_generator_is_rejected() {
    let alg = arc(GradedLieAlgebra::abelian(1).unwrap());
    assert!(closed_form_parts(ExampleId::Gradient, &alg).is_err());
}
