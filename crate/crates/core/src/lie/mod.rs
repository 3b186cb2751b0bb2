//! Stratified Lie algebras with exact structure constants, and the group law
//! they induce in exponential coordinates.

mod bch;
pub mod hall;

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{Poly, Scalar};
use crate::rational::{self, Rational};

pub use bch::{dynkin_series, BchMap, DynkinTerm};

/// Sparse linear combination of basis elements.
pub type Combination = Vec<(usize, Rational)>;

/// Preset identifiers accepted by [`GradedLieAlgebra::preset`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    Abelian(usize),
    Heisenberg(usize),
    Free { generators: usize, step: usize },
    Custom(CustomAlgebra),
}

/// Raw input for a user-supplied algebra. Indices are 1-based, matching the
/// spec-file convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CustomAlgebra {
    pub layer_dims: Vec<usize>,
    pub brackets: Vec<(usize, usize, Vec<Rational>)>,
}

#[derive(Clone)]
pub struct GradedLieAlgebra {
    name: String,
    layer_dims: Vec<usize>,
    weights: Vec<u32>,
    labels: Vec<String>,
    table: Vec<Vec<Combination>>,
    bch: OnceLock<BchMap>,
}

impl fmt::Debug for GradedLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedLieAlgebra").field("name", &self.name).field("layer_dims", &self.layer_dims).finish()
    }
}

impl GradedLieAlgebra {
    pub fn preset(preset: &Preset) -> Result<Self> {
        match preset {
            Preset::Abelian(n) => Self::abelian(*n),
            Preset::Heisenberg(n) => Self::heisenberg(*n),
            Preset::Free { generators, step } => Self::free(*generators, *step),
            Preset::Custom(raw) => Self::custom(raw),
        }
    }

    /// Parses `abelian:N`, `heisenberg:N` or `free:M,R`.
    pub fn from_descriptor(text: &str) -> Result<Self> {
        let bad = || Error::UnknownPreset(text.to_string());
        let (name, params) = text.split_once(':').ok_or_else(bad)?;
        let nums: Vec<usize> =
            params.split(',').map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?;
        match (name.trim(), nums.as_slice()) {
            ("abelian", [n]) => Self::abelian(*n),
            ("heisenberg", [n]) => Self::heisenberg(*n),
            ("free", [m, r]) => Self::free(*m, *r),
            _ => Err(bad()),
        }
    }

    pub fn abelian(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("abelian dimension must be positive".into()));
        }
        let labels = (1..=n).map(|i| format!("X{i}")).collect();
        Ok(Self::assemble(format!("abelian:{n}"), vec![n], labels, vec![vec![Vec::new(); n]; n]))
    }

    /// Basis `X_1..X_n, Y_1..Y_n, T` with `[X_i, Y_i] = T`. For `n = 1` the
    /// generators are labelled `X1, X2`.
    pub fn heisenberg(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("heisenberg index must be positive".into()));
        }
        let dim = 2 * n + 1;
        let mut labels: Vec<String> = if n == 1 {
            vec!["X1".into(), "X2".into()]
        } else {
            (1..=n).map(|i| format!("X{i}")).chain((1..=n).map(|i| format!("Y{i}"))).collect()
        };
        labels.push("T".into());
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for i in 0..n {
            table[i][n + i] = vec![(2 * n, Rational::one())];
            table[n + i][i] = vec![(2 * n, -Rational::one())];
        }
        Ok(Self::assemble(format!("heisenberg:{n}"), vec![2 * n, 1], labels, table))
    }

    pub fn free(generators: usize, step: usize) -> Result<Self> {
        if generators < 2 && step > 1 {
            return Err(Error::InvalidParameter("free algebra needs at least 2 generators".into()));
        }
        if generators == 0 || step == 0 {
            return Err(Error::InvalidParameter("free algebra parameters must be positive".into()));
        }
        let hall = hall::HallBasis::new(generators, step);
        let labels = (0..hall.len()).map(|i| hall.label(i)).collect();
        Ok(Self::assemble(format!("free:{generators},{step}"), hall.layer_dims(), labels, hall.structure_constants()))
    }

    /// Validates a user-supplied algebra exhaustively.
    pub fn custom(raw: &CustomAlgebra) -> Result<Self> {
        let invalid = |invariant, detail: String| Error::InvalidAlgebra { invariant, detail };
        if raw.layer_dims.is_empty() || raw.layer_dims.contains(&0) {
            return Err(invalid("layers", "layer dimensions must be positive".into()));
        }
        let dim: usize = raw.layer_dims.iter().sum();
        let mut table: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; dim]; dim];
        for (a, b, coeffs) in &raw.brackets {
            let (a, b) = (*a, *b);
            if a == 0 || b == 0 || a > dim || b > dim {
                return Err(invalid("indices", format!("bracket ({a},{b}) outside 1..={dim}")));
            }
            if coeffs.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: coeffs.len() });
            }
            if table[a - 1][b - 1].is_some() {
                return Err(invalid("indices", format!("bracket ({a},{b}) given twice")));
            }
            table[a - 1][b - 1] = Some(coeffs.clone());
        }
        let mut dense = vec![vec![Vec::new(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let here = table[a][b].clone();
                let there = table[b][a].clone();
                let value = match (here, there) {
                    (Some(x), Some(y)) => {
                        if x.iter().zip(&y).any(|(p, q)| p + q != Rational::zero()) {
                            return Err(invalid(
                                "antisymmetry",
                                format!("[e{},e{}] != -[e{},e{}]", a + 1, b + 1, b + 1, a + 1),
                            ));
                        }
                        x
                    }
                    (Some(x), None) => x,
                    (None, Some(y)) => y.into_iter().map(|q| -q).collect(),
                    (None, None) => vec![Rational::zero(); dim],
                };
                if a == b && value.iter().any(|q| !q.is_zero()) {
                    return Err(invalid("antisymmetry", format!("[e{0},e{0}] != 0", a + 1)));
                }
                dense[a][b] = value.into_iter().enumerate().filter(|(_, q)| !q.is_zero()).collect();
            }
        }
        let labels = (1..=dim).map(|i| format!("e{i}")).collect();
        let alg = Self::assemble("custom".into(), raw.layer_dims.clone(), labels, dense);
        alg.validate()?;
        Ok(alg)
    }

    fn assemble(name: String, layer_dims: Vec<usize>, labels: Vec<String>, table: Vec<Vec<Combination>>) -> Self {
        let weights = layer_dims.iter().enumerate().flat_map(|(j, &d)| std::iter::repeat_n(j as u32 + 1, d)).collect();
        GradedLieAlgebra { name, layer_dims, weights, labels, table, bch: OnceLock::new() }
    }

    /// Checks antisymmetry, grading, the Jacobi identity over all basis
    /// triples, and generation by the first layer.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let invalid = |invariant, detail: String| Error::InvalidAlgebra { invariant, detail };
        for a in 0..n {
            for b in 0..n {
                let ab = self.dense_bracket(a, b);
                let ba = self.dense_bracket(b, a);
                if ab.iter().zip(&ba).any(|(x, y)| !(x + y).is_zero()) {
                    return Err(invalid("antisymmetry", format!("pair ({},{})", a + 1, b + 1)));
                }
                let w = self.weights[a] + self.weights[b];
                if let Some((k, _)) = self.table[a][b].iter().find(|(k, _)| self.weights[*k] != w) {
                    return Err(invalid(
                        "grading",
                        format!("[e{},e{}] has weight-{} component e{}", a + 1, b + 1, self.weights[*k], k + 1),
                    ));
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let ea = unit(n, a);
                    let eb = unit(n, b);
                    let ec = unit(n, c);
                    let j1 = self.bracket_vec(&ea, &self.bracket_vec(&eb, &ec));
                    let j2 = self.bracket_vec(&eb, &self.bracket_vec(&ec, &ea));
                    let j3 = self.bracket_vec(&ec, &self.bracket_vec(&ea, &eb));
                    if (0..n).any(|k| !(&j1[k] + &j2[k] + &j3[k]).is_zero()) {
                        return Err(invalid("jacobi", format!("witness triple ({},{},{})", a + 1, b + 1, c + 1)));
                    }
                }
            }
        }
        let mut previous: Vec<Vec<Rational>> = (0..self.m()).map(|i| unit(n, i)).collect();
        for (j, &d) in self.layer_dims.iter().enumerate().skip(1) {
            let mut next = Vec::new();
            for g in 0..self.m() {
                for v in &previous {
                    next.push(self.bracket_vec(&unit(n, g), v));
                }
            }
            let basis = linalg::span_basis(n, &next);
            if basis.len() != d {
                return Err(invalid(
                    "generation",
                    format!("layer {} spanned to dimension {} of {}", j + 1, basis.len(), d),
                ));
            }
            previous = basis;
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Dimension of the first layer.
    pub fn m(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn step(&self) -> usize {
        self.layer_dims.len()
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Homogeneous dimension `Σ j · dim g_j`.
    pub fn homogeneous_dimension(&self) -> usize {
        self.layer_dims.iter().enumerate().map(|(j, d)| (j + 1) * d).sum()
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().flatten().all(Vec::is_empty)
    }

    pub fn layer_range(&self, j: usize) -> std::ops::Range<usize> {
        let start: usize = self.layer_dims[..j - 1].iter().sum();
        start..start + self.layer_dims[j - 1]
    }

    /// `[e_a, e_b]` as a sparse combination.
    pub fn basis_bracket(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        &self.table[a][b]
    }

    fn dense_bracket(&self, a: usize, b: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        for (k, c) in &self.table[a][b] {
            v[*k] = c.clone();
        }
        v
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
        for w in [u, v] {
            if w.len() != self.dim() {
                return Err(Error::DimensionMismatch { expected: self.dim(), found: w.len() });
            }
        }
        Ok(self.bracket_vec(u, v))
    }

    pub(crate) fn bracket_vec(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (a, ua) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, vb) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let s = ua * vb;
                for (k, c) in &self.table[a][b] {
                    out[*k] += &s * c;
                }
            }
        }
        out
    }

    /// Bracket of vectors with polynomial entries.
    pub(crate) fn bracket_poly(&self, u: &[Poly], v: &[Poly]) -> Vec<Poly> {
        let nvars = u.first().map_or(0, Poly::nvars);
        let mut out = vec![Poly::zero(nvars); self.dim()];
        for (a, ua) in u.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
            for (b, vb) in v.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                if self.table[a][b].is_empty() {
                    continue;
                }
                let prod = ua * vb;
                for (k, c) in &self.table[a][b] {
                    out[*k].add_scaled(&prod, c);
                }
            }
        }
        out
    }

    /// The group law in exponential coordinates, built on first use.
    pub fn bch(&self) -> &BchMap {
        self.bch.get_or_init(|| BchMap::build(self))
    }

    /// Human-readable description of the basis order.
    pub fn basis_convention(&self) -> String {
        format!("{}: weight-major basis [{}]", self.name, self.labels.join(", "))
    }

    pub fn dilate<T: Scalar + PartialOrd>(&self, lambda: &T, x: &GroupPoint<T>) -> Result<GroupPoint<T>> {
        if lambda.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidParameter("dilation factor must be positive".into()));
        }
        self.check_point(x.coords.len())?;
        let coords = x
            .coords
            .iter()
            .zip(&self.weights)
            .map(|(c, &w)| (0..w).fold(c.clone(), |acc, _| acc * lambda.clone()))
            .collect();
        Ok(GroupPoint { coords })
    }

    /// Jacobian matrix of `x ↦ δ_λ x` as polynomials in `λ` (one variable).
    pub fn dilation_jacobian(&self) -> Vec<Vec<Poly>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(
                        |j| {
                            if i == j {
                                Poly::monomial(vec![self.weights[i]], Rational::one())
                            } else {
                                Poly::zero(1)
                            }
                        },
                    )
                    .collect()
            })
            .collect()
    }

    /// `‖x‖^{2·r!} = Σ_j (|x_j|²)^{r!/j}`, exact.
    pub fn homogeneous_norm_power(&self, x: &GroupPoint<Rational>) -> Rational {
        let rf = factorial(self.step());
        (1..=self.step())
            .map(|j| {
                let sq: Rational = x.coords[self.layer_range(j)].iter().map(|c| c * c).sum();
                num_traits::pow(sq, rf / j)
            })
            .sum()
    }

    pub fn homogeneous_norm(&self, x: &GroupPoint<Rational>) -> f64 {
        let floats: Vec<f64> = x.coords.iter().map(rational::to_f64).collect();
        self.homogeneous_norm_f64(&floats)
    }

    /// `(Σ_j |x_j|^{2r!/j})^{1/(2r!)}` evaluated with per-layer rescaling so
    /// that large exponents do not overflow.
    pub fn homogeneous_norm_f64(&self, x: &[f64]) -> f64 {
        let r = self.step();
        let e = 2.0 * factorial(r) as f64;
        let gauges: Vec<f64> = (1..=r)
            .map(|j| {
                let sq: f64 = x[self.layer_range(j)].iter().map(|c| c * c).sum();
                sq.sqrt().powf(1.0 / j as f64)
            })
            .collect();
        let top = gauges.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return 0.0;
        }
        let s: f64 = gauges.iter().map(|g| (g / top).powf(e)).sum();
        top * s.powf(1.0 / e)
    }

    pub fn group_multiply(&self, x: &GroupPoint<Rational>, y: &GroupPoint<Rational>) -> Result<GroupPoint<Rational>> {
        self.check_point(x.coords.len())?;
        self.check_point(y.coords.len())?;
        Ok(GroupPoint { coords: self.bch().apply(&x.coords, &y.coords) })
    }

    pub fn group_inverse(&self, x: &GroupPoint<Rational>) -> GroupPoint<Rational> {
        GroupPoint { coords: x.coords.iter().map(|c| -c.clone()).collect() }
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: len });
        }
        Ok(())
    }

    pub fn identity(&self) -> GroupPoint<Rational> {
        GroupPoint { coords: vec![Rational::zero(); self.dim()] }
    }
}

/// A point of the group in exponential coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPoint<T = Rational> {
    pub coords: Vec<T>,
}

impl<T> GroupPoint<T> {
    pub fn new(coords: Vec<T>) -> Self {
        GroupPoint { coords }
    }
}

impl GroupPoint<Rational> {
    pub fn from_i64(coords: &[i64]) -> Self {
        GroupPoint { coords: coords.iter().map(|&c| rational::int(c)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> Rational {
        self.coords.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero)
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Determinant of a square matrix of univariate polynomials, by cofactor
/// expansion along rows skipping zero entries.
pub fn poly_determinant(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    let nvars = m.first().and_then(|r| r.first()).map_or(1, Poly::nvars);
    fn rec(m: &[Vec<Poly>], row: usize, used: &mut Vec<bool>, nvars: usize) -> Poly {
        let n = m.len();
        if row == n {
            return Poly::one(nvars);
        }
        let mut acc = Poly::zero(nvars);
        let mut sign_base = 0usize;
        for col in 0..n {
            if used[col] {
                continue;
            }
            let entry = &m[row][col];
            if !entry.is_zero() {
                used[col] = true;
                let minor = rec(m, row + 1, used, nvars);
                used[col] = false;
                let term = entry * &minor;
                let sign = if sign_base.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
                acc.add_scaled(&term, &sign);
            }
            sign_base += 1;
        }
        acc
    }
    rec(m, 0, &mut vec![false; n], nvars)
}
