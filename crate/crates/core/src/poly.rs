//! Sparse commutative polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{self, Rational};

/// Values a polynomial can be evaluated at.
pub trait Scalar: Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> {
    fn from_rational(q: &Rational) -> Self;
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        rational::to_f64(q)
    }
}

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exponents: Exponents, c: Rational) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, e: Exponents, c: Rational) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        assert_eq!(self.nvars, other.nvars);
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            self.add_term(e.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        let mut p = Poly::zero(self.nvars);
        p.add_scaled(self, c);
        p
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(e2, c * rational::int(e[var] as i64));
        }
        out
    }

    /// Applies `∂^alpha`.
    pub fn partial(&self, alpha: &[u32]) -> Poly {
        let mut p = self.clone();
        for (var, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                if p.is_zero() {
                    return p;
                }
                p = p.derivative(var);
            }
        }
        p
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars);
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = S::from_rational(c);
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitutes `vars[i]` for variable `i`; all substitutes share a
    /// variable count.
    pub fn compose(&self, vars: &[Poly]) -> Poly {
        assert_eq!(vars.len(), self.nvars);
        let n = vars.first().map_or(0, Poly::nvars);
        let mut out = Poly::zero(n);
        let mut powers: Vec<Vec<Poly>> = vars.iter().map(|v| vec![Poly::one(n), v.clone()]).collect();
        for (e, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &vars[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out.add_scaled(&t, &Rational::one());
        }
        out
    }

    /// Keeps the terms in which every variable outside `keep` has exponent
    /// zero (i.e. sets those variables to 0), then re-indexes to `keep`.
    pub fn restrict(&self, keep: std::ops::Range<usize>) -> Poly {
        let mut out = Poly::zero(keep.len());
        for (e, c) in &self.terms {
            let outside_zero = e.iter().enumerate().all(|(i, &k)| keep.contains(&i) || k == 0);
            if outside_zero {
                out.add_term(e[keep.clone()].to_vec(), c.clone());
            }
        }
        out
    }

    /// Re-embeds into `total` variables starting at `offset`.
    pub fn embed(&self, total: usize, offset: usize) -> Poly {
        let mut out = Poly::zero(total);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; total];
            e2[offset..offset + self.nvars].copy_from_slice(e);
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Maximum of `Σ weights[i]·e[i]` over the terms; `None` for zero.
    pub fn weighted_degree(&self, weights: &[u32]) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().zip(weights).map(|(k, w)| k * w).sum()).max()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_scaled(rhs, &Rational::one());
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_scaled(rhs, &-Rational::one());
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                if mono.is_empty() {
                    rational::format(c)
                } else {
                    format!("{}*{}", rational::format(c), mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A polynomial with coefficients pre-converted to `f64`, for fast repeated
/// evaluation on quadrature nodes.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    nvars: usize,
    max_exp: Vec<u32>,
    terms: Vec<(f64, Vec<u32>)>,
}

impl FloatPoly {
    pub fn new(p: &Poly) -> Self {
        let mut max_exp = vec![0; p.nvars];
        let terms = p
            .terms()
            .map(|(e, c)| {
                for (m, &k) in max_exp.iter_mut().zip(e) {
                    *m = (*m).max(k);
                }
                (rational::to_f64(c), e.clone())
            })
            .collect();
        FloatPoly { nvars: p.nvars, max_exp, terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        let powers: Vec<Vec<f64>> = x
            .iter()
            .zip(&self.max_exp)
            .map(|(&v, &m)| {
                let mut p = Vec::with_capacity(m as usize + 1);
                p.push(1.0);
                for k in 1..=m as usize {
                    p.push(p[k - 1] * v);
                }
                p
            })
            .collect();
        self.terms.iter().map(|(c, e)| e.iter().enumerate().fold(*c, |acc, (i, &k)| acc * powers[i][k as usize])).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn arithmetic_and_derivative() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = &(&x * &x) + &(&x * &y);
        assert_eq!(p.derivative(0), &x.scale(&int(2)) + &y);
        assert_eq!(p.eval(&[int(2), int(3)]), int(10));
        assert!((p.eval(&[2.0, 3.0]) - 10.0).abs() < 1e-15);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn compose_and_restrict() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = &x * &y;
        let t = Poly::var(1, 0);
        let q = p.compose(&[t.clone(), &t + &Poly::one(1)]);
        assert_eq!(q, &(&t * &t) + &t);
        assert_eq!((&p + &x).restrict(0..1), Poly::var(1, 0));
    }

    #[test]
    fn float_eval_matches() {
        let x = Poly::var(3, 0);
        let z = Poly::var(3, 2);
        let p = &(&x * &z).pow(2) - &Poly::constant(3, crate::rational::frac(1, 3));
        let f = FloatPoly::new(&p);
        let pt = [0.5, -1.0, 2.0];
        assert!((f.eval(&pt) - p.eval(&pt)).abs() < 1e-14);
    }
}
