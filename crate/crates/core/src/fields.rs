//! Left- and right-invariant vector fields as polynomial-coefficient
//! differential operators in exponential coordinates.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::lie::GradedLieAlgebra;
use crate::poly::Poly;
use crate::rational::{self, Rational};
use crate::uea::UeaElement;

/// `Σ_α p_α(x) ∂^α` with partials normalized (coordinate partials commute).
#[derive(Clone, PartialEq, Eq)]
pub struct PolyDiffOperator {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Poly>,
}

impl fmt::Debug for PolyDiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl PolyDiffOperator {
    pub fn zero(nvars: usize) -> Self {
        PolyDiffOperator { nvars, terms: BTreeMap::new() }
    }

    pub fn identity(nvars: usize) -> Self {
        let mut op = Self::zero(nvars);
        op.add_term(vec![0; nvars], Poly::one(nvars));
        op
    }

    /// `∂_i`.
    pub fn partial(nvars: usize, i: usize) -> Self {
        let mut alpha = vec![0; nvars];
        alpha[i] = 1;
        let mut op = Self::zero(nvars);
        op.add_term(alpha, Poly::one(nvars));
        op
    }

    /// First-order operator `Σ_k coeffs[k] ∂_k`.
    pub fn vector_field(coeffs: Vec<Poly>) -> Self {
        let n = coeffs.len();
        let mut op = Self::zero(n);
        for (k, p) in coeffs.into_iter().enumerate() {
            let mut alpha = vec![0; n];
            alpha[k] = 1;
            op.add_term(alpha, p);
        }
        op
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, alpha: &[u32]) -> Poly {
        self.terms.get(alpha).cloned().unwrap_or_else(|| Poly::zero(self.nvars))
    }

    pub fn add_term(&mut self, alpha: Vec<u32>, p: Poly) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(alpha.clone()).or_insert_with(|| Poly::zero(p.nvars()));
        entry.add_scaled(&p, &Rational::one());
        if entry.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn add_scaled(&mut self, other: &PolyDiffOperator, c: &Rational) {
        for (alpha, p) in &other.terms {
            self.add_term(alpha.clone(), p.scale(c));
        }
    }

    pub fn sub(&self, other: &PolyDiffOperator) -> PolyDiffOperator {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    /// `self ∘ other`, by the Leibniz rule
    /// `a ∂^α (b ∂^β) = Σ_{μ≤α} C(α,μ) a (∂^μ b) ∂^{α-μ+β}`.
    pub fn compose(&self, other: &PolyDiffOperator) -> PolyDiffOperator {
        let mut out = Self::zero(self.nvars);
        for (alpha, a) in &self.terms {
            for mu in sub_indices(alpha) {
                let binom = alpha
                    .iter()
                    .zip(&mu)
                    .fold(Rational::one(), |acc, (&x, &y)| acc * rational::binomial(x as u64, y as u64));
                let rest: Vec<u32> = alpha.iter().zip(&mu).map(|(x, y)| x - y).collect();
                for (beta, b) in &other.terms {
                    let db = b.partial(&mu);
                    if db.is_zero() {
                        continue;
                    }
                    let gamma: Vec<u32> = rest.iter().zip(beta).map(|(x, y)| x + y).collect();
                    out.add_term(gamma, (a * &db).scale(&binom));
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &PolyDiffOperator) -> PolyDiffOperator {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (alpha, a) in &self.terms {
            let d = p.partial(alpha);
            if !d.is_zero() {
                out.add_scaled(&(a * &d), &Rational::one());
            }
        }
        out
    }
}

fn sub_indices(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=a).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

/// Polynomial in exponential coordinates with the layer weights attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPolynomial {
    poly: Poly,
    weights: Vec<u32>,
}

impl GradedPolynomial {
    pub fn new(alg: &GradedLieAlgebra, poly: Poly) -> Result<Self> {
        if poly.nvars() != alg.dim() {
            return Err(Error::DimensionMismatch { expected: alg.dim(), found: poly.nvars() });
        }
        Ok(GradedPolynomial { poly, weights: alg.weights().to_vec() })
    }

    /// The monomial `x^α`.
    pub fn monomial(alg: &GradedLieAlgebra, alpha: Vec<u32>) -> Result<Self> {
        if alpha.len() != alg.dim() {
            return Err(Error::DimensionMismatch { expected: alg.dim(), found: alpha.len() });
        }
        Self::new(alg, Poly::monomial(alpha, Rational::one()))
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// `‖α‖ = Σ_j j|α_j|` of each monomial, ascending and deduplicated.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> =
            self.poly.terms().map(|(e, _)| e.iter().zip(&self.weights).map(|(k, w)| k * w).sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn degree(&self) -> Option<u32> {
        self.poly.weighted_degree(&self.weights)
    }
}

fn check_index(alg: &GradedLieAlgebra, i: usize) -> Result<()> {
    if i >= alg.dim() {
        return Err(Error::LetterOutOfRange { letter: i + 1, max: alg.dim() });
    }
    Ok(())
}

/// `X_i φ(x) = d/ds φ(x · exp(s e_i))` at `s = 0`. Any basis index is
/// accepted; indices past the first layer give the fields of higher layers.
pub fn left_field(alg: &GradedLieAlgebra, i: usize) -> Result<PolyDiffOperator> {
    check_index(alg, i)?;
    let n = alg.dim();
    let vars: Vec<Poly> = (0..n).map(|k| Poly::var(n, k)).chain((0..n).map(|_| Poly::zero(n))).collect();
    let coeffs = alg.bch().components().iter().map(|c| c.derivative(n + i).compose(&vars)).collect();
    Ok(PolyDiffOperator::vector_field(coeffs))
}

/// `X_i^R φ(x) = d/ds φ(exp(s e_i) · x)` at `s = 0`.
pub fn right_field(alg: &GradedLieAlgebra, i: usize) -> Result<PolyDiffOperator> {
    check_index(alg, i)?;
    let n = alg.dim();
    let vars: Vec<Poly> = (0..n).map(|_| Poly::zero(n)).chain((0..n).map(|k| Poly::var(n, k))).collect();
    let coeffs = alg.bch().components().iter().map(|c| c.derivative(i).compose(&vars)).collect();
    Ok(PolyDiffOperator::vector_field(coeffs))
}

pub fn field(alg: &GradedLieAlgebra, i: usize, side: Side) -> Result<PolyDiffOperator> {
    match side {
        Side::Left => left_field(alg, i),
        Side::Right => right_field(alg, i),
    }
}

/// `X_{γ_1} ⋯ X_{γ_k}` composed in order; letters are 0-based generators.
pub fn realize_word(alg: &GradedLieAlgebra, word: &[usize], side: Side) -> Result<PolyDiffOperator> {
    if let Some(&bad) = word.iter().find(|&&l| l >= alg.m()) {
        return Err(Error::LetterOutOfRange { letter: bad + 1, max: alg.m() });
    }
    let fields: Vec<PolyDiffOperator> = (0..alg.m()).map(|i| field(alg, i, side)).collect::<Result<_>>()?;
    Ok(word.iter().fold(PolyDiffOperator::identity(alg.dim()), |acc, &l| acc.compose(&fields[l])))
}

/// Realizes an enveloping-algebra element term by term, each PBW monomial
/// as the product of its basis fields.
pub fn realize_element(alg: &GradedLieAlgebra, e: &UeaElement, side: Side) -> Result<PolyDiffOperator> {
    let fields: Vec<PolyDiffOperator> = (0..alg.dim()).map(|i| field(alg, i, side)).collect::<Result<_>>()?;
    let mut out = PolyDiffOperator::zero(alg.dim());
    for (mono, c) in e.terms() {
        let op = mono.iter().fold(PolyDiffOperator::identity(alg.dim()), |acc, &i| acc.compose(&fields[i as usize]));
        out.add_scaled(&op, c);
    }
    Ok(out)
}

pub fn apply_to_polynomial(op: &PolyDiffOperator, p: &GradedPolynomial) -> Result<GradedPolynomial> {
    if op.nvars() != p.poly.nvars() {
        return Err(Error::DimensionMismatch { expected: op.nvars(), found: p.poly.nvars() });
    }
    Ok(GradedPolynomial { poly: op.apply(&p.poly), weights: p.weights.clone() })
}
