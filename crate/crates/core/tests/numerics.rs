use carnot_core::annihilator::ExampleId;
use carnot_core::numerics::{
    hardy_report, refine_study, sobolev_report, BumpFunction, QuadratureGrid, StudyVerdict, TestFunction,
};
use carnot_core::rational::{frac, int};
use carnot_core::{Error, GradedLieAlgebra, Rational};
use num_traits::Zero;

fn h1() -> GradedLieAlgebra {
    GradedLieAlgebra::heisenberg(1).unwrap()
}

fn bump(power: u32) -> TestFunction {
    TestFunction::scalar(BumpFunction::new(3, power))
}

fn grid_for(alg: &GradedLieAlgebra, u: &TestFunction, n: usize) -> QuadratureGrid {
    QuadratureGrid::covering(alg, u, n, &Rational::zero()).unwrap()
}

#[test]
fn sobolev_gradient_is_stable() {
    let alg = h1();
    let u = bump(4);
    let g = grid_for(&alg, &u, 16);
    let study =
        refine_study(&[16, 32, 64], 0.03, |n| sobolev_report(&alg, ExampleId::Gradient, &u, &g.with_n(n)?)).unwrap();
    assert_eq!(study.verdict, StudyVerdict::Pass, "{}", study.to_csv());
    let r = study.final_report();
    assert!(r.ratio.is_finite() && r.ratio > 0.0);
    assert_eq!(r.history.len(), 3);
}

#[test]
fn coarse_grids_fail_the_study() {
    let alg = h1();
    let u = bump(4);
    let g = grid_for(&alg, &u, 2);
    let study = refine_study(&[2, 4], 0.03, |n| sobolev_report(&alg, ExampleId::Gradient, &u, &g.with_n(n)?)).unwrap();
    assert_eq!(study.verdict, StudyVerdict::Fail);
}

#[test]
fn ratio_is_dilation_invariant() {
    let alg = h1();
    let u = bump(4);
    let g = grid_for(&alg, &u, 32);
    let base = sobolev_report(&alg, ExampleId::Gradient, &u, &g).unwrap();
    for lambda in [int(2), frac(1, 2)] {
        let ud = u.dilated(&lambda);
        let gd = g.dilated(&alg, &lambda).unwrap();
        let r = sobolev_report(&alg, ExampleId::Gradient, &ud, &gd).unwrap();
        assert!(((r.ratio - base.ratio) / base.ratio).abs() < 0.02, "{} vs {}", r.ratio, base.ratio);
    }
}

#[test]
fn ratio_is_scale_invariant() {
    let alg = h1();
    let u = bump(4);
    let g = grid_for(&alg, &u, 16);
    let a = sobolev_report(&alg, ExampleId::Gradient, &u, &g).unwrap();
    let b = sobolev_report(&alg, ExampleId::Gradient, &u.scaled(&int(-3)), &g).unwrap();
    assert!(((a.ratio - b.ratio) / a.ratio).abs() < 1e-12);
}

#[test]
fn hardy_gradient_is_stable() {
    let alg = h1();
    let u = bump(4);
    let g = grid_for(&alg, &u, 32);
    let study =
        refine_study(&[32, 64], 0.03, |n| hardy_report(&alg, ExampleId::Gradient, &u, 1, 1.0, &g.with_n(n)?)).unwrap();
    assert_eq!(study.verdict, StudyVerdict::Pass, "{}", study.to_csv());
}

#[test]
fn hardy_away_from_origin() {
    // The weight's singularity sits outside the support here.
    let alg = h1();
    let u = TestFunction::scalar(BumpFunction::new(3, 4).with_center(vec![int(3), int(0), int(0)]));
    let g = grid_for(&alg, &u, 32);
    let a = hardy_report(&alg, ExampleId::Gradient, &u, 1, 1.0, &g).unwrap();
    let b = hardy_report(&alg, ExampleId::Gradient, &u, 1, 1.0, &g.with_n(64).unwrap()).unwrap();
    assert!(((a.lhs - b.lhs) / b.lhs).abs() < 0.01);
}

#[test]
fn hardy_parameter_window() {
    let alg = h1();
    let u = bump(4);
    let g = grid_for(&alg, &u, 8);
    assert!(matches!(hardy_report(&alg, ExampleId::Gradient, &u, 1, 1.34, &g), Err(Error::InvalidParameter(_))));
    assert!(matches!(hardy_report(&alg, ExampleId::Gradient, &u, 2, 1.0, &g), Err(Error::InvalidParameter(_))));
    assert!(hardy_report(&alg, ExampleId::Gradient, &u, 1, 1.3, &g).is_ok());
}

#[test]
fn korn_is_stable() {
    let alg = h1();
    let u = TestFunction {
        components: vec![
            BumpFunction::new(3, 4).with_center(vec![frac(1, 2), int(0), int(0)]),
            BumpFunction::new(3, 4).with_center(vec![int(0), frac(1, 2), int(0)]),
        ],
    };
    let g = grid_for(&alg, &u, 16);
    let study =
        refine_study(&[16, 32, 64], 0.03, |n| sobolev_report(&alg, ExampleId::Korn, &u, &g.with_n(n)?)).unwrap();
    assert_eq!(study.verdict, StudyVerdict::Pass, "{}", study.to_csv());
}

#[test]
fn grid_must_cover_support() {
    let alg = h1();
    let u = bump(4);
    let small = QuadratureGrid::new(vec![frac(1, 2); 3], 8).unwrap();
    assert!(matches!(sobolev_report(&alg, ExampleId::Gradient, &u, &small), Err(Error::SupportViolation)));
}
