//! Quadrature probes of the L¹ Sobolev, Hardy and Korn inequalities with
//! polynomial bump test functions.
//!
//! Derivatives are exact: every operator is realized as a polynomial
//! differential operator and applied to the polynomial piece of the bump.
//! Only node evaluation and summation use floating point.

use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::annihilator::{example_operator, ExampleId};
use crate::error::{Error, Result};
use crate::fields::{realize_word, Side};
use crate::lie::GradedLieAlgebra;
use crate::poly::{FloatPoly, Poly};
use crate::rational::{self, Rational};

/// `(1 - |δ_λ x - c|²)^p` inside the Euclidean unit ball, zero outside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BumpFunction {
    power: u32,
    center: Vec<Rational>,
    dilation: Rational,
    amplitude: Rational,
}

impl BumpFunction {
    pub fn new(dim: usize, power: u32) -> Self {
        BumpFunction {
            power,
            center: vec![Rational::zero(); dim],
            dilation: Rational::one(),
            amplitude: Rational::one(),
        }
    }

    pub fn with_center(mut self, center: Vec<Rational>) -> Self {
        self.center = center;
        self
    }

    /// Precomposes with `δ_λ`.
    pub fn with_dilation(mut self, lambda: Rational) -> Self {
        self.dilation = lambda;
        self
    }

    pub fn scaled(mut self, c: Rational) -> Self {
        self.amplitude = c;
        self
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn dilation(&self) -> &Rational {
        &self.dilation
    }

    fn check(&self, alg: &GradedLieAlgebra) -> Result<()> {
        if self.center.len() != alg.dim() {
            return Err(Error::DimensionMismatch { expected: alg.dim(), found: self.center.len() });
        }
        if self.dilation <= Rational::zero() {
            return Err(Error::InvalidParameter("dilation must be positive".into()));
        }
        Ok(())
    }

    /// `1 - |δ_λ x - c|²`, positive exactly on the support.
    pub fn support_polynomial(&self, alg: &GradedLieAlgebra) -> Result<Poly> {
        self.check(alg)?;
        let n = alg.dim();
        let mut g = Poly::one(n);
        for k in 0..n {
            let s = num_traits::pow(self.dilation.clone(), alg.weight(k) as usize);
            let mut lin = Poly::var(n, k).scale(&s);
            lin.add_term(vec![0; n], -self.center[k].clone());
            g.add_scaled(&(&lin * &lin), &-Rational::one());
        }
        Ok(g)
    }

    /// The polynomial that agrees with the bump on its support.
    pub fn piece(&self, alg: &GradedLieAlgebra) -> Result<Poly> {
        Ok(self.support_polynomial(alg)?.pow(self.power).scale(&self.amplitude))
    }

    /// Coordinate bounds of the support.
    pub fn support_box(&self, alg: &GradedLieAlgebra) -> Result<Vec<(Rational, Rational)>> {
        self.check(alg)?;
        Ok((0..alg.dim())
            .map(|k| {
                let s = num_traits::pow(self.dilation.clone(), alg.weight(k) as usize);
                let c = &self.center[k];
                ((c - Rational::one()) / &s, (c + Rational::one()) / &s)
            })
            .collect())
    }

    pub fn describe(&self) -> String {
        let c: Vec<String> = self.center.iter().map(rational::format).collect();
        format!(
            "{}*(1-|delta_{}(x)-({})|^2)^{}_+",
            rational::format(&self.amplitude),
            rational::format(&self.dilation),
            c.join(","),
            self.power
        )
    }
}

/// One bump per component of a vector-valued test function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestFunction {
    pub components: Vec<BumpFunction>,
}

impl TestFunction {
    pub fn scalar(b: BumpFunction) -> Self {
        TestFunction { components: vec![b] }
    }

    /// Applies the same dilation to every component.
    pub fn dilated(&self, lambda: &Rational) -> Self {
        TestFunction {
            components: self.components.iter().map(|b| b.clone().with_dilation(&b.dilation * lambda)).collect(),
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        TestFunction {
            components: self
                .components
                .iter()
                .map(|b| {
                    let a = &b.amplitude * c;
                    b.clone().scaled(a)
                })
                .collect(),
        }
    }

    fn min_power(&self) -> u32 {
        self.components.iter().map(|b| b.power).min().unwrap_or(0)
    }

    pub fn describe(&self) -> String {
        self.components.iter().map(BumpFunction::describe).collect::<Vec<_>>().join(" ; ")
    }

    /// Smallest symmetric box holding every component's support.
    pub fn covering_half_widths(&self, alg: &GradedLieAlgebra) -> Result<Vec<Rational>> {
        let mut half = vec![Rational::zero(); alg.dim()];
        for b in &self.components {
            for (h, (lo, hi)) in half.iter_mut().zip(b.support_box(alg)?) {
                let m = rational::abs(&lo).max(rational::abs(&hi));
                if m > *h {
                    *h = m;
                }
            }
        }
        Ok(half)
    }
}

/// Midpoint rule on `Π [-h_k, h_k]` with `n` cells per axis; `n` is even so
/// no node lies on a coordinate hyperplane through the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureGrid {
    half_widths: Vec<Rational>,
    n: usize,
}

impl QuadratureGrid {
    pub fn new(half_widths: Vec<Rational>, n: usize) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::InvalidParameter(format!("grid size {n} must be even and positive")));
        }
        if half_widths.iter().any(|h| h <= &Rational::zero()) {
            return Err(Error::InvalidParameter("box half-widths must be positive".into()));
        }
        Ok(QuadratureGrid { half_widths, n })
    }

    /// Box covering `u`, enlarged by `margin` (relative), with `n` cells.
    pub fn covering(alg: &GradedLieAlgebra, u: &TestFunction, n: usize, margin: &Rational) -> Result<Self> {
        let scale = Rational::one() + margin;
        let half = u.covering_half_widths(alg)?.into_iter().map(|h| h * &scale).collect();
        Self::new(half, n)
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.half_widths.clone(), n)
    }

    /// The box mapped by `δ_{1/λ}`, matching a test function precomposed with `δ_λ`.
    pub fn dilated(&self, alg: &GradedLieAlgebra, lambda: &Rational) -> Result<Self> {
        let half = self
            .half_widths
            .iter()
            .enumerate()
            .map(|(k, h)| h / num_traits::pow(lambda.clone(), alg.weight(k) as usize))
            .collect();
        Self::new(half, self.n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_widths(&self) -> &[Rational] {
        &self.half_widths
    }

    pub fn nodes(&self) -> usize {
        self.n.pow(self.half_widths.len() as u32)
    }

    pub fn cell_volume(&self) -> f64 {
        self.half_widths.iter().map(|h| 2.0 * rational::to_f64(h) / self.n as f64).product()
    }

    fn node(&self, mut idx: usize, out: &mut [f64]) {
        for (k, h) in self.half_widths.iter().enumerate() {
            let i = idx % self.n;
            idx /= self.n;
            let h = rational::to_f64(h);
            out[k] = -h + (i as f64 + 0.5) * 2.0 * h / self.n as f64;
        }
    }

    fn covers(&self, alg: &GradedLieAlgebra, u: &TestFunction) -> Result<bool> {
        let need = u.covering_half_widths(alg)?;
        Ok(need.iter().zip(&self.half_widths).all(|(a, b)| a <= b))
    }
}

/// Sum in a fixed binary tree so the result does not depend on scheduling.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// `(Σ |v|^p · vol)^{1/p}`, or the maximum for `p = ∞`.
pub fn lp_norm(samples: &[f64], p: f64, cell_volume: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("exponent {p} must be at least 1")));
    }
    if p.is_infinite() {
        return Ok(samples.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    let powered: Vec<f64> = samples.iter().map(|v| v.abs().powf(p)).collect();
    Ok((pairwise_sum(&powered) * cell_volume).powf(1.0 / p))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Inequality {
    Sobolev,
    Hardy { ell: usize, p: f64 },
}

impl Inequality {
    pub fn label(&self) -> String {
        match self {
            Inequality::Sobolev => "sobolev".into(),
            Inequality::Hardy { ell, p } => format!("hardy(ell={ell}, p={p})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub inequality: Inequality,
    pub example: ExampleId,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub n: usize,
    pub half_widths: Vec<Rational>,
    pub function: String,
    /// `(n, lhs, rhs)` for each grid in a refinement study, ascending in `n`.
    pub history: Vec<(usize, f64, f64)>,
}

/// Sum of gated pieces: `Σ_v [g_v(x) > 0] P_v(x)`.
struct Channel {
    pieces: Vec<(usize, FloatPoly)>,
}

struct Evaluator {
    gates: Vec<FloatPoly>,
    lhs: Vec<Channel>,
    rhs: Vec<Channel>,
}

impl Evaluator {
    fn build(alg: &GradedLieAlgebra, id: ExampleId, u: &TestFunction, lhs_order: usize) -> Result<Self> {
        let alg_arc = Arc::new(alg.clone());
        let a = example_operator(id, &alg_arc)?;
        if u.components.len() != a.dim_in() {
            return Err(Error::DimensionMismatch { expected: a.dim_in(), found: u.components.len() });
        }
        let needed = a.order().max(lhs_order) as u32;
        if u.min_power() < needed + 2 {
            return Err(Error::InvalidParameter(format!(
                "bump power {} too small for derivatives of order {needed}",
                u.min_power()
            )));
        }
        let gates = u
            .components
            .iter()
            .map(|b| b.support_polynomial(alg).map(|g| FloatPoly::new(&g)))
            .collect::<Result<Vec<_>>>()?;
        let pieces: Vec<Poly> = u.components.iter().map(|b| b.piece(alg)).collect::<Result<_>>()?;

        let m = alg.m();
        let words: Vec<Vec<usize>> = (0..lhs_order).fold(vec![Vec::new()], |acc, _| {
            acc.into_iter().flat_map(|w| (0..m).map(move |l| [w.clone(), vec![l]].concat())).collect()
        });
        let mut lhs = Vec::new();
        for w in &words {
            let op = realize_word(alg, w, Side::Left)?;
            for (v, p) in pieces.iter().enumerate() {
                lhs.push(Channel { pieces: vec![(v, FloatPoly::new(&op.apply(p)))] });
            }
        }
        let mut rhs = Vec::new();
        for e in 0..a.dim_out() {
            let mut per_v: Vec<Poly> = vec![Poly::zero(alg.dim()); a.dim_in()];
            for (w, mat) in a.terms() {
                let op = realize_word(alg, w, Side::Left)?;
                for (v, p) in pieces.iter().enumerate() {
                    let c = &mat[(e, v)];
                    if !c.is_zero() {
                        per_v[v].add_scaled(&op.apply(p), c);
                    }
                }
            }
            rhs.push(Channel {
                pieces: per_v
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(v, p)| (v, FloatPoly::new(p)))
                    .collect(),
            });
        }
        Ok(Evaluator { gates, lhs, rhs })
    }

    fn channel(&self, c: &Channel, x: &[f64], inside: &[bool]) -> f64 {
        c.pieces.iter().filter(|(v, _)| inside[*v]).map(|(_, p)| p.eval(x)).sum()
    }

    /// Per node: Euclidean size of the left-hand quantity and the absolute
    /// value of every right-hand component.
    fn sample(&self, grid: &QuadratureGrid) -> (Vec<f64>, Vec<Vec<f64>>, Vec<f64>) {
        let dim = grid.half_widths.len();
        let rows: Vec<(f64, Vec<f64>, Vec<f64>)> = (0..grid.nodes())
            .into_par_iter()
            .map(|idx| {
                let mut x = vec![0.0; dim];
                grid.node(idx, &mut x);
                let inside: Vec<bool> = self.gates.iter().map(|g| g.eval(&x) > 0.0).collect();
                let size = self.lhs.iter().map(|c| self.channel(c, &x, &inside).powi(2)).sum::<f64>().sqrt();
                let rhs = self.rhs.iter().map(|c| self.channel(c, &x, &inside).abs()).collect();
                (size, rhs, x)
            })
            .collect();
        let lhs = rows.iter().map(|r| r.0).collect();
        let n_rhs = self.rhs.len();
        let rhs = (0..n_rhs).map(|e| rows.iter().map(|r| r.1[e]).collect()).collect();
        // points flattened for the Hardy weight
        let pts = rows.into_iter().flat_map(|r| r.2).collect();
        (lhs, rhs, pts)
    }
}

fn order_of(id: ExampleId) -> usize {
    match id {
        ExampleId::Gradient | ExampleId::Korn => 1,
        ExampleId::Powers(k) => k,
    }
}

fn finish(
    inequality: Inequality,
    id: ExampleId,
    lhs: f64,
    rhs: f64,
    grid: &QuadratureGrid,
    u: &TestFunction,
) -> InequalityReport {
    let ratio = if rhs == 0.0 && lhs == 0.0 { f64::NAN } else { lhs / rhs };
    InequalityReport {
        inequality,
        example: id,
        lhs,
        rhs,
        ratio,
        n: grid.n,
        half_widths: grid.half_widths.clone(),
        function: u.describe(),
        history: vec![(grid.n, lhs, rhs)],
    }
}

/// `‖D^{k-1}u‖_{Q/(Q-1)}` against `Σ_e ‖(A(D)u)_e‖_{L¹}`.
pub fn sobolev_report(
    alg: &GradedLieAlgebra,
    id: ExampleId,
    u: &TestFunction,
    grid: &QuadratureGrid,
) -> Result<InequalityReport> {
    if !grid.covers(alg, u)? {
        return Err(Error::SupportViolation);
    }
    let k = order_of(id);
    let q = alg.homogeneous_dimension() as f64;
    let ev = Evaluator::build(alg, id, u, k - 1)?;
    let (lhs_s, rhs_s, _) = ev.sample(grid);
    let vol = grid.cell_volume();
    let lhs = lp_norm(&lhs_s, q / (q - 1.0), vol)?;
    let rhs = rhs_s.iter().map(|s| lp_norm(s, 1.0, vol)).sum::<Result<f64>>()?;
    Ok(finish(Inequality::Sobolev, id, lhs, rhs, grid, u))
}

/// `(∫ (‖x‖^{Q-ℓ} |D^{k-ℓ}u|)^p ‖x‖^{-Q} dx)^{1/p}` against `‖A(D)u‖_{L¹}`.
pub fn hardy_report(
    alg: &GradedLieAlgebra,
    id: ExampleId,
    u: &TestFunction,
    ell: usize,
    p: f64,
    grid: &QuadratureGrid,
) -> Result<InequalityReport> {
    let k = order_of(id);
    let q = alg.homogeneous_dimension();
    if ell < 1 || ell > k.min(q - 1) {
        return Err(Error::InvalidParameter(format!("ell = {ell} outside 1..={}", k.min(q - 1))));
    }
    let p_max = q as f64 / (q - ell) as f64;
    if !(p >= 1.0 && p < p_max) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [1, {p_max})")));
    }
    if !grid.covers(alg, u)? {
        return Err(Error::SupportViolation);
    }
    let ev = Evaluator::build(alg, id, u, k - ell)?;
    let (lhs_s, rhs_s, pts) = ev.sample(grid);
    let vol = grid.cell_volume();
    let dim = alg.dim();
    let qf = q as f64;
    let weighted: Vec<f64> = lhs_s
        .iter()
        .zip(pts.chunks(dim))
        .map(|(v, x)| {
            let norm = alg.homogeneous_norm_f64(x);
            if *v == 0.0 {
                0.0
            } else {
                (norm.powf(qf - ell as f64) * v).powf(p) * norm.powf(-qf)
            }
        })
        .collect();
    let lhs = (pairwise_sum(&weighted) * vol).powf(1.0 / p);
    let rhs = rhs_s.iter().map(|s| lp_norm(s, 1.0, vol)).sum::<Result<f64>>()?;
    Ok(finish(Inequality::Hardy { ell, p }, id, lhs, rhs, grid, u))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StudyVerdict {
    Pass,
    Fail,
    Degenerate,
}

impl std::fmt::Display for StudyVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StudyVerdict::Pass => "PASS",
            StudyVerdict::Fail => "FAIL",
            StudyVerdict::Degenerate => "DEGENERATE",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RefinementStudy {
    pub reports: Vec<InequalityReport>,
    pub max_relative_change: f64,
    pub tolerance: f64,
    pub verdict: StudyVerdict,
}

pub const DEFAULT_TOLERANCE: f64 = 0.03;

/// Runs `producer` at each grid size and compares successive ratios.
pub fn refine_study<F>(levels: &[usize], tolerance: f64, producer: F) -> Result<RefinementStudy>
where
    F: Fn(usize) -> Result<InequalityReport>,
{
    if levels.len() < 2 {
        return Err(Error::InvalidParameter("a refinement study needs at least two levels".into()));
    }
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    let mut reports = levels.iter().map(|&n| producer(n)).collect::<Result<Vec<_>>>()?;
    let history: Vec<(usize, f64, f64)> = reports.iter().map(|r| (r.n, r.lhs, r.rhs)).collect();
    for r in &mut reports {
        r.history = history.clone();
    }
    let degenerate = reports.iter().any(|r| !r.ratio.is_finite());
    let max_relative_change =
        reports.windows(2).map(|w| ((w[1].ratio - w[0].ratio) / w[1].ratio).abs()).fold(0.0f64, f64::max);
    let verdict = if degenerate {
        StudyVerdict::Degenerate
    } else if max_relative_change < tolerance {
        StudyVerdict::Pass
    } else {
        StudyVerdict::Fail
    };
    Ok(RefinementStudy { reports, max_relative_change, tolerance, verdict })
}

impl RefinementStudy {
    pub fn final_report(&self) -> &InequalityReport {
        self.reports.last().expect("at least two levels")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,lhs,rhs,ratio\n");
        for r in &self.reports {
            let _ = writeln!(out, "{},{:.12e},{:.12e},{:.12e}", r.n, r.lhs, r.rhs, r.ratio);
        }
        out
    }
}
