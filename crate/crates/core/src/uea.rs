//! Exact arithmetic in the universal enveloping algebra, kept in
//! Poincaré–Birkhoff–Witt normal form over the algebra's basis order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::lie::GradedLieAlgebra;
use crate::linalg::Matrix;
use crate::rational::{self, Rational};

/// Non-decreasing sequence of basis indices.
pub type Monomial = Vec<u16>;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct UeaElement {
    terms: BTreeMap<Monomial, Rational>,
}

impl UeaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new(), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        debug_assert!(m.windows(2).all(|w| w[0] <= w[1]));
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn basis(i: usize) -> Self {
        Self::monomial(vec![i as u16], Rational::one())
    }

    /// Degree-one element from a coefficient vector over the Lie basis.
    pub fn from_lie_vector(v: &[Rational]) -> Self {
        let mut e = Self::zero();
        for (i, c) in v.iter().enumerate() {
            e.add_term(vec![i as u16], c.clone());
        }
        e
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u16]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add_scaled(&mut self, other: &UeaElement, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> UeaElement {
        let mut e = Self::zero();
        e.add_scaled(self, c);
        e
    }

    pub fn sub(&self, other: &UeaElement) -> UeaElement {
        let mut e = self.clone();
        e.add_scaled(other, &-Rational::one());
        e
    }

    pub fn add(&self, other: &UeaElement) -> UeaElement {
        let mut e = self.clone();
        e.add_scaled(other, &Rational::one());
        e
    }

    /// Weighted degrees present, ascending.
    pub fn degrees(&self, alg: &GradedLieAlgebra) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|m| m.iter().map(|&i| alg.weight(i as usize)).sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn display<'a>(&'a self, alg: &'a GradedLieAlgebra) -> impl fmt::Display + 'a {
        DisplayUea { e: self, alg }
    }
}

impl fmt::Debug for UeaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{}*{:?}", rational::format(c), m)).collect();
        write!(f, "{{{}}}", parts.join(" + "))
    }
}

struct DisplayUea<'a> {
    e: &'a UeaElement,
    alg: &'a GradedLieAlgebra,
}

impl fmt::Display for DisplayUea<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.e.terms {
            let mut factors: Vec<String> = Vec::new();
            let mut i = 0;
            while i < m.len() {
                let mut j = i;
                while j < m.len() && m[j] == m[i] {
                    j += 1;
                }
                let label = self.alg.label(m[i] as usize);
                factors.push(if j - i == 1 { label.to_string() } else { format!("{label}^{}", j - i) });
                i = j;
            }
            let negative = c < &Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            let sep = match (first, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let body = if factors.is_empty() {
                rational::format(&mag)
            } else if mag.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", rational::format(&mag), factors.join("*"))
            };
            write!(f, "{sep}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// Multiplication context for one algebra. Caches the normal form of
/// `monomial · e_i` products.
pub struct Uea {
    alg: Arc<GradedLieAlgebra>,
    cache: RwLock<HashMap<(Monomial, u16), UeaElement>>,
}

impl fmt::Debug for Uea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Uea").field("alg", &self.alg.name()).finish()
    }
}

impl Uea {
    pub fn new(alg: Arc<GradedLieAlgebra>) -> Self {
        Uea { alg, cache: RwLock::new(HashMap::new()) }
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.alg
    }

    pub fn algebra_arc(&self) -> &Arc<GradedLieAlgebra> {
        &self.alg
    }

    /// Normal form of `m · e_i`.
    fn mul_monomial_basis(&self, m: &[u16], i: u16) -> UeaElement {
        match m.last() {
            None => return UeaElement::basis(i as usize),
            Some(&j) if j <= i => {
                let mut out = m.to_vec();
                out.push(i);
                return UeaElement::monomial(out, Rational::one());
            }
            _ => {}
        }
        let key = (m.to_vec(), i);
        if let Some(hit) = self.cache.read().get(&key) {
            return hit.clone();
        }
        let j = *m.last().unwrap();
        let prefix = &m[..m.len() - 1];
        // prefix · e_j · e_i = (prefix · e_i) · e_j + prefix · [e_j, e_i]
        let head = self.mul_monomial_basis(prefix, i);
        let mut out = self.mul_element_basis(&head, j);
        for (k, c) in self.alg.basis_bracket(j as usize, i as usize) {
            out.add_scaled(&self.mul_monomial_basis(prefix, *k as u16), c);
        }
        self.cache.write().insert(key, out.clone());
        out
    }

    fn mul_element_basis(&self, e: &UeaElement, i: u16) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in &e.terms {
            out.add_scaled(&self.mul_monomial_basis(m, i), c);
        }
        out
    }

    pub fn multiply(&self, a: &UeaElement, b: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (mb, cb) in &b.terms {
            let mut t = a.clone();
            for &i in mb {
                t = self.mul_element_basis(&t, i);
            }
            out.add_scaled(&t, cb);
        }
        out
    }

    pub fn commutator(&self, a: &UeaElement, b: &UeaElement) -> UeaElement {
        self.multiply(a, b).sub(&self.multiply(b, a))
    }

    pub fn power(&self, a: &UeaElement, n: usize) -> UeaElement {
        (0..n).fold(UeaElement::one(), |acc, _| self.multiply(&acc, a))
    }

    pub fn generator(&self, letter: usize) -> Result<UeaElement> {
        self.check_letter(letter)?;
        Ok(UeaElement::basis(letter))
    }

    fn check_letter(&self, letter: usize) -> Result<()> {
        if letter >= self.alg.m() {
            return Err(Error::LetterOutOfRange { letter: letter + 1, max: self.alg.m() });
        }
        Ok(())
    }

    /// `X_γ = X_{γ_1} ⋯ X_{γ_k}` in normal form; letters are 0-based.
    pub fn from_word(&self, word: &[usize]) -> Result<UeaElement> {
        for &l in word {
            self.check_letter(l)?;
        }
        Ok(self.word_normal_form(word))
    }

    pub(crate) fn word_normal_form(&self, word: &[usize]) -> UeaElement {
        word.iter().fold(UeaElement::one(), |acc, &l| self.mul_element_basis(&acc, l as u16))
    }

    /// `(X_γ)^t = (-1)^k X_{γ_k} ⋯ X_{γ_1}`.
    pub fn transpose_word(&self, word: &[usize]) -> Result<UeaElement> {
        let reversed: Vec<usize> = word.iter().rev().copied().collect();
        let e = self.from_word(&reversed)?;
        Ok(if word.len() % 2 == 1 { e.scale(&-Rational::one()) } else { e })
    }

    /// `(ad X_l)^s (X_{l'})` as a Lie-algebra vector.
    pub fn ad_power(&self, l: usize, lp: usize, s: usize) -> Vec<Rational> {
        let n = self.alg.dim();
        let x = crate::lie::unit(n, l);
        (0..s).fold(crate::lie::unit(n, lp), |acc, _| self.alg.bracket_vec(&x, &acc))
    }

    /// Both sides of `X_l^s X_{l'} = Σ_j C(s,j) (ad X_l)^{s-j}(X_{l'}) X_l^j`.
    /// The left side is straightened directly; the right side takes its ad
    /// powers from the Lie bracket.
    pub fn ad_power_expand(&self, l: usize, lp: usize, s: usize) -> Result<(UeaElement, UeaElement)> {
        self.check_letter(l)?;
        self.check_letter(lp)?;
        if s == 0 {
            return Err(Error::InvalidParameter("s must be positive".into()));
        }
        let mut word = vec![l; s];
        word.push(lp);
        let lhs = self.word_normal_form(&word);
        let xl = UeaElement::basis(l);
        let mut rhs = UeaElement::zero();
        for j in 0..=s {
            let ad = UeaElement::from_lie_vector(&self.ad_power(l, lp, s - j));
            let term = self.multiply(&ad, &self.power(&xl, j));
            rhs.add_scaled(&term, &rational::binomial(s as u64, j as u64));
        }
        Ok((lhs, rhs))
    }

    /// `C` with `X_l^r X_{l'} = C · X_l` where `r` is the step; `C` lies in
    /// `g_r + g_{r-1}·X_l + ⋯ + g_1·X_l^{r-1}`. Both the reconstruction and
    /// the membership are checked before returning.
    pub fn commutator_factor(&self, l: usize, lp: usize) -> Result<UeaElement> {
        self.check_letter(l)?;
        self.check_letter(lp)?;
        let r = self.alg.step();
        let xl = UeaElement::basis(l);
        let mut c = UeaElement::zero();
        for j in 1..=r {
            let ad = UeaElement::from_lie_vector(&self.ad_power(l, lp, r - j));
            let term = self.multiply(&ad, &self.power(&xl, j - 1));
            c.add_scaled(&term, &rational::binomial(r as u64, j as u64));
        }
        let mut word = vec![l; r];
        word.push(lp);
        let residual = self.word_normal_form(&word).sub(&self.multiply(&c, &xl));
        if !residual.is_zero() {
            return Err(Error::Certificate(format!("X_l^r X_l' - C X_l = {}", residual.display(&self.alg))));
        }
        self.factor_coordinates(&c, l)?;
        Ok(c)
    }

    /// Elements `e_b · X_l^s` with `weight(b) = r - s`, `0 <= s < r`, spanning
    /// the space `C` must lie in. Returned as `(b, s, normal form)`.
    pub fn factor_space(&self, l: usize) -> Vec<(usize, usize, UeaElement)> {
        let r = self.alg.step();
        let xl = UeaElement::basis(l);
        let mut out = Vec::new();
        for s in 0..r {
            let tail = self.power(&xl, s);
            for b in self.alg.layer_range(r - s) {
                out.push((b, s, self.multiply(&UeaElement::basis(b), &tail)));
            }
        }
        out
    }

    /// Coordinates of `c` in [`Uea::factor_space`]; a membership error names
    /// a monomial that cannot be matched.
    pub fn factor_coordinates(&self, c: &UeaElement, l: usize) -> Result<Vec<(usize, usize, Rational)>> {
        let space = self.factor_space(l);
        let (coords, residual) = solve_in_span(c, &space.iter().map(|(_, _, e)| e.clone()).collect::<Vec<_>>());
        match coords {
            Some(x) => {
                Ok(space.iter().zip(x).filter(|(_, v)| !v.is_zero()).map(|((b, s, _), v)| (*b, *s, v)).collect())
            }
            None => {
                let witness = residual
                    .map(|m| UeaElement::monomial(m, Rational::one()).display(&self.alg).to_string())
                    .unwrap_or_default();
                Err(Error::Membership(format!("offending monomial {witness}")))
            }
        }
    }
}

/// Solves `target = Σ x_i spanning[i]` over PBW monomials. On failure returns
/// a monomial of `target` outside the spanning support, when one exists.
pub(crate) fn solve_in_span(target: &UeaElement, spanning: &[UeaElement]) -> (Option<Vec<Rational>>, Option<Monomial>) {
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    for e in spanning.iter().chain(std::iter::once(target)) {
        for m in e.terms.keys() {
            let next = rows.len();
            rows.entry(m.clone()).or_insert(next);
        }
    }
    let mut a = Matrix::zeros(rows.len(), spanning.len());
    for (j, e) in spanning.iter().enumerate() {
        for (m, c) in &e.terms {
            a[(rows[m], j)] = c.clone();
        }
    }
    let mut b = vec![Rational::zero(); rows.len()];
    for (m, c) in &target.terms {
        b[rows[m]] = c.clone();
    }
    match a.solve(&b) {
        Some(x) => (Some(x), None),
        None => {
            let outside = target
                .terms
                .keys()
                .find(|m| spanning.iter().all(|e| !e.terms.contains_key(*m)))
                .or_else(|| target.terms.keys().next())
                .cloned();
            (None, outside)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn h1() -> Uea {
        Uea::new(Arc::new(GradedLieAlgebra::heisenberg(1).unwrap()))
    }

    fn mono(m: &[u16], c: i64) -> UeaElement {
        UeaElement::monomial(m.to_vec(), int(c))
    }

    #[test]
    fn single_straightening() {
        let u = h1();
        // X2·X1 = X1X2 - T
        let e = u.from_word(&[1, 0]).unwrap();
        assert_eq!(e, mono(&[0, 1], 1).sub(&mono(&[2], 1)));
        let ab = Uea::new(Arc::new(GradedLieAlgebra::abelian(2).unwrap()));
        assert_eq!(ab.from_word(&[1, 0]).unwrap(), mono(&[0, 1], 1));
    }

    #[test]
    fn word_examples() {
        let u = h1();
        let diff = u.from_word(&[0, 1]).unwrap().sub(&u.from_word(&[1, 0]).unwrap());
        assert_eq!(diff, mono(&[2], 1));
        assert_eq!(u.from_word(&[]).unwrap(), UeaElement::one());
        // X2 X2 X1 = X1 X2^2 - 2 X2 T
        let expected = mono(&[0, 1, 1], 1).sub(&mono(&[1, 2], 2));
        assert_eq!(u.from_word(&[1, 1, 0]).unwrap(), expected);
        assert!(matches!(u.from_word(&[2]), Err(Error::LetterOutOfRange { letter: 3, max: 2 })));
    }

    #[test]
    fn display_uses_labels() {
        let u = h1();
        let e = u.from_word(&[1, 1, 0]).unwrap();
        assert_eq!(e.display(u.algebra()).to_string(), "X1*X2^2 - 2*X2*T");
    }

    #[test]
    fn transpose_examples() {
        let u = h1();
        assert_eq!(u.transpose_word(&[0]).unwrap(), mono(&[0], -1));
        assert_eq!(u.transpose_word(&[0, 1]).unwrap(), mono(&[0, 1], 1).sub(&mono(&[2], 1)));
    }

    #[test]
    fn ad_expansion_small_cases() {
        let u = h1();
        let (lhs, rhs) = u.ad_power_expand(0, 1, 1).unwrap();
        assert_eq!(lhs, rhs);
        let (lhs, rhs) = u.ad_power_expand(0, 1, 2).unwrap();
        assert_eq!(lhs, rhs);
        // X1²X2 = 2 T X1 + X2 X1², in normal form X1²X2
        assert_eq!(lhs, mono(&[0, 0, 1], 1));
        let tx1 = u.multiply(&mono(&[2], 2), &mono(&[0], 1));
        let x2x1x1 = u.from_word(&[1, 0, 0]).unwrap();
        assert_eq!(lhs, tx1.add(&x2x1x1));
    }

    #[test]
    fn commutator_factor_examples() {
        let u = h1();
        let c = u.commutator_factor(1, 0).unwrap();
        assert_eq!(c, mono(&[0, 1], 1).sub(&mono(&[2], 2)));
        let ab = Uea::new(Arc::new(GradedLieAlgebra::abelian(2).unwrap()));
        assert_eq!(ab.commutator_factor(1, 0).unwrap(), mono(&[0], 1));
    }

    #[test]
    fn membership_rejects_foreign_element() {
        let u = h1();
        // X1^2 has weight 2 but is not of the form g_1·X_2
        let err = u.factor_coordinates(&mono(&[0, 0], 1), 1).unwrap_err();
        assert!(matches!(err, Error::Membership(_)));
    }
}
