use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};

use carnot_core::annihilator::{
    annihilator_space, closed_form_annihilator, example_operator, find_annihilator, korn_reduction_check,
    AnnihilatorCertificate, ExampleId,
};
use carnot_core::numerics::{
    hardy_report, refine_study, sobolev_report, BumpFunction, InequalityReport, QuadratureGrid, StudyVerdict,
    TestFunction,
};
use carnot_core::operators::{check_canceling_euclidean, CancelingVerdict, OperatorMatrix};
use carnot_core::rational::{self, frac};
use carnot_core::uea::Uea;
use carnot_core::{Error, GradedLieAlgebra, Rational};
use num_traits::Zero;

use crate::report::{self, RunReport};
use crate::spec::SpecDocument;
use crate::{exit, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckTask {
    Cocanceling,
    Canceling,
    ComposeZero,
}

impl std::str::FromStr for CheckTask {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cocanceling" => Ok(CheckTask::Cocanceling),
            "canceling" => Ok(CheckTask::Canceling),
            "compose-zero" => Ok(CheckTask::ComposeZero),
            _ => Err(format!("unknown task `{s}` (cocanceling, canceling, compose-zero)")),
        }
    }
}

fn require_operator(doc: &SpecDocument) -> Result<&OperatorMatrix, CliError> {
    doc.operator.as_ref().ok_or_else(|| CliError::Field { path: "$.operator".into(), msg: "missing".into() })
}

fn vectors(vs: &[Vec<Rational>]) -> Value {
    Value::Array(vs.iter().map(|v| report::rationals(v)).collect())
}

fn show(vs: &[Vec<Rational>]) -> String {
    let parts: Vec<String> =
        vs.iter().map(|v| format!("({})", v.iter().map(rational::format).collect::<Vec<_>>().join(", "))).collect();
    format!("span{{{}}}", parts.join(", "))
}

pub fn check(doc: &SpecDocument, task: CheckTask, seed: u64, budget: usize) -> Result<RunReport, CliError> {
    let a = require_operator(doc)?;
    let start = Instant::now();
    let mut rep = RunReport::new(match task {
        CheckTask::Cocanceling => "check/cocanceling",
        CheckTask::Canceling => "check/canceling",
        CheckTask::ComposeZero => "check/compose-zero",
    });
    rep.set("group", report::group(&doc.group));
    match task {
        CheckTask::Cocanceling => {
            let sym = a.symmetrize();
            let v = sym.check_cocanceling();
            rep.set("symbol", report::symbol(&sym));
            rep.set("cocanceling", json!(v.cocanceling));
            rep.set("common_kernel", vectors(&v.common_kernel));
            rep.line(format!("cocanceling: {}", v.cocanceling));
            if !v.cocanceling {
                rep.line(format!("common kernel: {}", show(&v.common_kernel)));
                rep.exit_code = exit::VERDICT_FALSE;
            }
        }
        CheckTask::Canceling => {
            rep.seed = Some(seed);
            match check_canceling_euclidean(a, budget, seed)? {
                CancelingVerdict::Certified { samples } => {
                    rep.set("canceling", json!("certified"));
                    rep.set("samples", vectors(&samples));
                    rep.line(format!("canceling: certified after {} sample points", samples.len()));
                }
                CancelingVerdict::NotCertified { candidate, samples } => {
                    rep.set("canceling", json!("not_certified"));
                    rep.set("candidate", vectors(&candidate));
                    rep.set("samples", json!(samples));
                    rep.line(format!("canceling: not certified; candidate {}", show(&candidate)));
                    rep.exit_code = exit::VERDICT_FALSE;
                }
            }
        }
        CheckTask::ComposeZero => {
            let l = doc.annihilator.as_ref().ok_or_else(|| CliError::Field {
                path: "$.annihilator".into(),
                msg: "compose-zero needs an annihilator block".into(),
            })?;
            let uea = Uea::new(doc.group.clone());
            let residual = l.compose(a)?.to_uea_matrix(&uea)?;
            let zero = residual.is_zero();
            rep.set("compose_zero", json!(zero));
            rep.set("sym_l_cocanceling", json!(l.symmetrize().check_cocanceling().cocanceling));
            rep.line(format!("L∘A = 0: {zero}"));
            if let Some((i, j, e)) = residual.first_nonzero() {
                let shown = e.display(&doc.group).to_string();
                rep.set("witness", json!({ "row": i + 1, "col": j + 1, "entry": shown }));
                rep.line(format!("(L∘A)[{},{}] = {shown}", i + 1, j + 1));
                rep.exit_code = exit::VERDICT_FALSE;
            }
        }
    }
    rep.time("check", start.elapsed());
    Ok(rep)
}

fn certificate_json(cert: &AnnihilatorCertificate) -> Value {
    json!({
        "provenance": cert.provenance.to_string(),
        "residual_zero": cert.residual.is_zero(),
        "cocanceling": cert.cocanceling.cocanceling,
        "L": report::operator(&cert.l),
    })
}

pub fn verify_example(alg: Arc<GradedLieAlgebra>, id: ExampleId, korn_reduction: bool) -> Result<RunReport, CliError> {
    let mut rep = RunReport::new(format!("verify-example/{id}"));
    rep.set("group", report::group(&alg));
    let uea = Uea::new(alg.clone());
    let start = Instant::now();
    match closed_form_annihilator(id, &uea) {
        Ok(cf) => {
            let full = cf.sym_m_rank == cf.m.dim_in();
            rep.set(
                "orders",
                json!({ "A": cf.a.order(), "L0": cf.l0.order(), "M": cf.m.order(), "N": cf.n.order(), "L": cf.certificate.l.order() }),
            );
            rep.set("residual_zero", json!(cf.certificate.residual.is_zero()));
            rep.set("sym_n_zero", json!(cf.sym_n_zero));
            rep.set("sym_l_cocanceling", json!(cf.certificate.cocanceling.cocanceling));
            rep.set("sym_m_full_rank_at_xi0", json!(full));
            rep.set("sym_l0_cocanceling", json!(cf.sym_l0_cocanceling));
            rep.set("sym_ml0_cocanceling", json!(cf.sym_ml0_cocanceling));
            rep.set("N", report::operator(&cf.n));
            rep.set("certificate", certificate_json(&cf.certificate));
            rep.line(format!(
                "orders: A {}, L0 {}, M {}, N {}, L {}",
                cf.a.order(),
                cf.l0.order(),
                cf.m.order(),
                cf.n.order(),
                cf.certificate.l.order()
            ));
            rep.line(format!("(M∘L0 - N)∘A = 0: {}", cf.certificate.residual.is_zero()));
            rep.line(format!("Sym(N) = 0: {}", cf.sym_n_zero));
            rep.line(format!("Sym(L) cocanceling: {}", cf.certificate.cocanceling.cocanceling));
            rep.line(format!("Sym(M)(1,...,1) full rank: {full}"));
            rep.line(format!("N has {} words, L has {} words", cf.n.terms().len(), cf.certificate.l.terms().len()));
        }
        Err(Error::Certificate(msg)) => {
            rep.set("certificate_error", json!(msg));
            rep.line(format!("certificate failed: {msg}"));
            rep.exit_code = exit::VERDICT_FALSE;
        }
        Err(e) => return Err(e.into()),
    }
    rep.time("closed form", start.elapsed());
    if korn_reduction {
        let start = Instant::now();
        let kr = korn_reduction_check(&uea)?;
        let cases: Vec<Value> = kr
            .cases
            .iter()
            .map(|c| json!({ "i": c.i + 1, "j": c.j + 1, "l": c.l + 1, "case": c.case, "residual_zero": c.residual_zero }))
            .collect();
        rep.set("korn_reduction", json!({ "k": kr.k, "all_zero": kr.all_zero(), "cases": cases }));
        rep.line(format!(
            "korn reductions (k = {}): {} cases, all residuals zero: {}",
            kr.k,
            kr.cases.len(),
            kr.all_zero()
        ));
        if !kr.all_zero() {
            rep.exit_code = exit::VERDICT_FALSE;
        }
        rep.time("korn reduction", start.elapsed());
    }
    Ok(rep)
}

pub fn find(
    alg: Arc<GradedLieAlgebra>,
    a: &OperatorMatrix,
    degree: usize,
    dim_f: usize,
    seed: u64,
) -> Result<RunReport, CliError> {
    let mut rep = RunReport::new("find-annihilator");
    rep.seed = Some(seed);
    rep.set("group", report::group(&alg));
    rep.set("degree", json!(degree));
    rep.set("dimF", json!(dim_f));
    let uea = Uea::new(alg);
    let start = Instant::now();
    let space = annihilator_space(a, degree, &uea)?;
    rep.set("solution_space_dim", json!(space.len()));
    rep.line(format!("annihilators of order {degree}: dimension {}", space.len()));
    match find_annihilator(a, degree, dim_f, seed, &uea)? {
        Some(cert) => {
            rep.set("found", json!(true));
            rep.set("certificate", certificate_json(&cert));
            rep.line(format!("cocanceling annihilator found ({} words)", cert.l.terms().len()));
            for (w, m) in cert.l.terms() {
                let word: Vec<String> = w.iter().map(|l| (l + 1).to_string()).collect();
                rep.line(format!("  ({}) -> {:?}", word.join(","), m));
            }
        }
        None => {
            rep.set("found", json!(false));
            rep.line("no cocanceling annihilator at this order");
            rep.exit_code = exit::NOT_FOUND;
        }
    }
    rep.time("search", start.elapsed());
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NumericTask {
    Sobolev,
    Hardy { ell: usize, p: f64 },
}

/// Bumps of power `bump`; vector-valued examples offset each component
/// along its own first-layer axis.
pub fn default_test_function(alg: &GradedLieAlgebra, id: ExampleId, bump: u32) -> Result<TestFunction, CliError> {
    let dim_v = example_operator(id, &Arc::new(alg.clone()))?.dim_in();
    if dim_v == 1 {
        return Ok(TestFunction::scalar(BumpFunction::new(alg.dim(), bump)));
    }
    let components = (0..dim_v)
        .map(|v| {
            let mut c = vec![Rational::zero(); alg.dim()];
            c[v] = frac(1, 2);
            BumpFunction::new(alg.dim(), bump).with_center(c)
        })
        .collect();
    Ok(TestFunction { components })
}

fn inequality_json(r: &InequalityReport) -> Value {
    json!({
        "n": r.n,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "ratio": r.ratio,
    })
}

pub fn numeric(
    alg: &GradedLieAlgebra,
    task: NumericTask,
    id: ExampleId,
    bump: u32,
    levels: &[usize],
    tolerance: f64,
) -> Result<RunReport, CliError> {
    let u = default_test_function(alg, id, bump)?;
    let grid = QuadratureGrid::covering(alg, &u, levels.first().copied().unwrap_or(2), &Rational::zero())?;
    let start = Instant::now();
    let study = refine_study(levels, tolerance, |n| {
        let g = grid.with_n(n)?;
        match task {
            NumericTask::Sobolev => sobolev_report(alg, id, &u, &g),
            NumericTask::Hardy { ell, p } => hardy_report(alg, id, &u, ell, p, &g),
        }
    })?;
    let name = match task {
        NumericTask::Sobolev => "sobolev",
        NumericTask::Hardy { .. } => "hardy",
    };
    let mut rep = RunReport::new(format!("{name}/{id}"));
    let last = study.final_report();
    rep.set("group", report::group(alg));
    rep.set("inequality", json!(last.inequality.label()));
    rep.set("function", json!(last.function));
    rep.set("bump_power", json!(bump));
    rep.set("box_half_widths", report::rationals(&last.half_widths));
    rep.set("levels", Value::Array(study.reports.iter().map(inequality_json).collect()));
    rep.set("max_relative_change", json!(study.max_relative_change));
    rep.set("tolerance", json!(tolerance));
    rep.set("verdict", json!(study.verdict.to_string()));
    rep.line(format!("{} for {id}, u = {}", last.inequality.label(), last.function));
    for r in &study.reports {
        rep.line(format!("n = {:>4}: lhs {:.6e}  rhs {:.6e}  ratio {:.6e}", r.n, r.lhs, r.rhs, r.ratio));
    }
    rep.line(format!(
        "max relative change {:.3e} (tolerance {tolerance}): {}",
        study.max_relative_change, study.verdict
    ));
    rep.csv = Some(study.to_csv());
    if study.verdict != StudyVerdict::Pass {
        rep.exit_code = exit::VERDICT_FALSE;
    }
    rep.time("quadrature", start.elapsed());
    Ok(rep)
}

pub fn group_info(alg: &GradedLieAlgebra) -> RunReport {
    let mut rep = RunReport::new("group-info");
    let n = alg.dim();
    let mut brackets = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let combo = alg.basis_bracket(a, b);
            if combo.is_empty() {
                continue;
            }
            let terms: Vec<Value> =
                combo.iter().map(|(k, c)| json!({ "basis": k + 1, "coeff": rational::format(c) })).collect();
            brackets.push(json!({ "a": a + 1, "b": b + 1, "result": terms }));
        }
    }
    rep.set("group", report::group(alg));
    rep.set("dimension", json!(n));
    rep.set("step", json!(alg.step()));
    rep.set("homogeneous_dimension", json!(alg.homogeneous_dimension()));
    rep.set("weights", json!(alg.weights()));
    rep.set("labels", json!(alg.labels()));
    rep.set("brackets", Value::Array(brackets));
    rep.line(format!("{}: dim {}, step {}, Q = {}", alg.name(), n, alg.step(), alg.homogeneous_dimension()));
    rep.line(format!("layer dims {:?}", alg.layer_dims()));
    rep.line(alg.basis_convention());
    for a in 0..n {
        for b in a + 1..n {
            let combo = alg.basis_bracket(a, b);
            if combo.is_empty() {
                continue;
            }
            let rhs: Vec<String> =
                combo.iter().map(|(k, c)| format!("{}*{}", rational::format(c), alg.label(*k))).collect();
            rep.line(format!("[{}, {}] = {}", alg.label(a), alg.label(b), rhs.join(" + ")));
        }
    }
    rep
}
