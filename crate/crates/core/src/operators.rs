//! Matrix-valued homogeneous operators `A(D) = Σ_γ A^γ X_γ` over the first
//! layer, their symbols, and the canceling / cocanceling tests.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lie::GradedLieAlgebra;
use crate::linalg::{self, Matrix};
use crate::rational::{frac, Rational};
use crate::uea::{Uea, UeaElement};

/// Letters of a word over the first layer, 0-based.
pub type Word = Vec<usize>;

/// `dim_out × dim_in` operator of homogeneous order `order`.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    alg: Arc<GradedLieAlgebra>,
    dim_in: usize,
    dim_out: usize,
    order: usize,
    terms: BTreeMap<Word, Matrix>,
}

impl PartialEq for OperatorMatrix {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg)
            && self.dim_in == other.dim_in
            && self.dim_out == other.dim_out
            && self.order == other.order
            && self.terms == other.terms
    }
}

fn same_algebra(a: &Arc<GradedLieAlgebra>, b: &Arc<GradedLieAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || (a.name() == b.name() && a.layer_dims() == b.layer_dims())
}

impl OperatorMatrix {
    pub fn zero(alg: Arc<GradedLieAlgebra>, dim_in: usize, dim_out: usize, order: usize) -> Self {
        OperatorMatrix { alg, dim_in, dim_out, order, terms: BTreeMap::new() }
    }

    /// Scalar-free building block: `X_γ` placed at entry `(row, col)`.
    pub fn entry(
        alg: Arc<GradedLieAlgebra>,
        dim_in: usize,
        dim_out: usize,
        word: Word,
        row: usize,
        col: usize,
        c: Rational,
    ) -> Result<Self> {
        let mut op = Self::zero(alg, dim_in, dim_out, word.len());
        op.add_entry(word, row, col, c)?;
        Ok(op)
    }

    pub fn algebra(&self) -> &Arc<GradedLieAlgebra> {
        &self.alg
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Word, Matrix> {
        &self.terms
    }

    /// True when no word carries a nonzero matrix. This is equality at the
    /// tensor level; use [`OperatorMatrix::to_uea_matrix`] for operator equality.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        if word.len() != self.order {
            return Err(Error::DimensionMismatch { expected: self.order, found: word.len() });
        }
        let m = self.alg.m();
        if let Some(&bad) = word.iter().find(|&&l| l >= m) {
            return Err(Error::LetterOutOfRange { letter: bad + 1, max: m });
        }
        Ok(())
    }

    pub fn add_term(&mut self, word: Word, matrix: &Matrix) -> Result<()> {
        self.check_word(&word)?;
        if matrix.rows() != self.dim_out {
            return Err(Error::DimensionMismatch { expected: self.dim_out, found: matrix.rows() });
        }
        if matrix.cols() != self.dim_in {
            return Err(Error::DimensionMismatch { expected: self.dim_in, found: matrix.cols() });
        }
        self.accumulate(word, matrix, &Rational::one());
        Ok(())
    }

    pub fn add_entry(&mut self, word: Word, row: usize, col: usize, c: Rational) -> Result<()> {
        self.check_word(&word)?;
        if row >= self.dim_out {
            return Err(Error::DimensionMismatch { expected: self.dim_out, found: row + 1 });
        }
        if col >= self.dim_in {
            return Err(Error::DimensionMismatch { expected: self.dim_in, found: col + 1 });
        }
        if c.is_zero() {
            return Ok(());
        }
        let (rows, cols) = (self.dim_out, self.dim_in);
        let m = self.terms.entry(word.clone()).or_insert_with(|| Matrix::zeros(rows, cols));
        m[(row, col)] += c;
        if m.is_zero() {
            self.terms.remove(&word);
        }
        Ok(())
    }

    fn accumulate(&mut self, word: Word, matrix: &Matrix, c: &Rational) {
        if c.is_zero() || matrix.is_zero() {
            return;
        }
        let (rows, cols) = (self.dim_out, self.dim_in);
        let m = self.terms.entry(word.clone()).or_insert_with(|| Matrix::zeros(rows, cols));
        m.add_assign_scaled(matrix, c);
        if m.is_zero() {
            self.terms.remove(&word);
        }
    }

    fn check_same_shape(&self, other: &OperatorMatrix) -> Result<()> {
        if !same_algebra(&self.alg, &other.alg) {
            return Err(Error::InvalidParameter("operators live on different algebras".into()));
        }
        for (a, b) in [(self.dim_in, other.dim_in), (self.dim_out, other.dim_out), (self.order, other.order)] {
            if a != b {
                return Err(Error::DimensionMismatch { expected: a, found: b });
            }
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &OperatorMatrix, c: &Rational) -> Result<()> {
        self.check_same_shape(other)?;
        for (w, m) in &other.terms {
            self.accumulate(w.clone(), m, c);
        }
        Ok(())
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one())?;
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> OperatorMatrix {
        let mut out = Self::zero(self.alg.clone(), self.dim_in, self.dim_out, self.order);
        for (w, m) in &self.terms {
            out.accumulate(w.clone(), m, c);
        }
        out
    }

    /// `self ∘ inner`: the word `γ'·γ` accumulates `self^{γ'} · inner^γ`.
    pub fn compose(&self, inner: &OperatorMatrix) -> Result<OperatorMatrix> {
        if !same_algebra(&self.alg, &inner.alg) {
            return Err(Error::InvalidParameter("operators live on different algebras".into()));
        }
        if self.dim_in != inner.dim_out {
            return Err(Error::DimensionMismatch { expected: self.dim_in, found: inner.dim_out });
        }
        let mut out = Self::zero(self.alg.clone(), inner.dim_in, self.dim_out, self.order + inner.order);
        let products: Vec<(Word, Matrix)> = self
            .terms
            .par_iter()
            .flat_map_iter(|(wl, ml)| {
                inner.terms.iter().map(move |(wa, ma)| {
                    let mut w = wl.clone();
                    w.extend_from_slice(wa);
                    (w, ml.mul(ma))
                })
            })
            .collect();
        for (w, m) in products {
            out.accumulate(w, &m, &Rational::one());
        }
        Ok(out)
    }

    /// `A^t(D) = Σ (A^γ)^t X_γ^t`, with `X_γ^t = (-1)^k X_{reverse(γ)}`.
    pub fn formal_transpose(&self) -> OperatorMatrix {
        let sign = if self.order % 2 == 1 { -Rational::one() } else { Rational::one() };
        let mut out = Self::zero(self.alg.clone(), self.dim_out, self.dim_in, self.order);
        for (w, m) in &self.terms {
            let rev: Word = w.iter().rev().copied().collect();
            out.accumulate(rev, &m.transpose(), &sign);
        }
        out
    }

    /// Entrywise PBW normal form of `Σ_γ A^γ_{ij} X_γ`.
    pub fn to_uea_matrix(&self, uea: &Uea) -> Result<UeaMatrix> {
        if !same_algebra(&self.alg, uea.algebra_arc()) {
            return Err(Error::InvalidParameter("enveloping algebra of a different group".into()));
        }
        let normal: HashMap<&Word, UeaElement> =
            self.terms.par_iter().map(|(w, _)| (w, uea.word_normal_form(w))).collect();
        let mut out = UeaMatrix::zeros(self.dim_out, self.dim_in);
        for (w, m) in &self.terms {
            let e = &normal[w];
            for i in 0..self.dim_out {
                for j in 0..self.dim_in {
                    let c = &m[(i, j)];
                    if !c.is_zero() {
                        out.get_mut(i, j).add_scaled(e, c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `B̃_β = Σ_{Sym(λ)=β} B^λ`.
    pub fn symmetrize(&self) -> SymbolMatrix {
        let m = self.alg.m();
        let mut terms: BTreeMap<MultiIndex, Matrix> = BTreeMap::new();
        for (w, mat) in &self.terms {
            let beta = MultiIndex::of_word(m, w);
            let entry = terms.entry(beta.clone()).or_insert_with(|| Matrix::zeros(self.dim_out, self.dim_in));
            entry.add_assign_scaled(mat, &Rational::one());
            if entry.is_zero() {
                terms.remove(&beta);
            }
        }
        SymbolMatrix { m, dim_in: self.dim_in, dim_out: self.dim_out, order: self.order, terms }
    }
}

/// Matrix with entries in the enveloping algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UeaMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<UeaElement>,
}

impl UeaMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        UeaMatrix { rows, cols, entries: vec![UeaElement::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &UeaElement {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut UeaElement {
        &mut self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(UeaElement::is_zero)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &UeaElement)> {
        self.entries.iter().enumerate().find(|(_, e)| !e.is_zero()).map(|(k, e)| (k / self.cols, k % self.cols, e))
    }

    pub fn sub(&self, other: &UeaMatrix) -> Result<UeaMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        Ok(UeaMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn mul(&self, other: &UeaMatrix, uea: &Uea) -> Result<UeaMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = UeaMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = UeaElement::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&uea.multiply(a, b));
                    }
                }
                *out.get_mut(i, j) = acc;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    exponents: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex { exponents }
    }

    pub fn of_word(m: usize, word: &[usize]) -> Self {
        let mut exponents = vec![0; m];
        for &l in word {
            exponents[l] += 1;
        }
        MultiIndex { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// `ξ^β`.
    pub fn eval(&self, xi: &[Rational]) -> Rational {
        self.exponents.iter().zip(xi).fold(Rational::one(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
    }
}

/// Symmetrized symbol `Sym(A)(ξ) = Σ_β B̃_β ξ^β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolMatrix {
    m: usize,
    dim_in: usize,
    dim_out: usize,
    order: usize,
    terms: BTreeMap<MultiIndex, Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocancelingVerdict {
    pub cocanceling: bool,
    pub common_kernel: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CancelingVerdict {
    Certified { samples: Vec<Vec<Rational>> },
    NotCertified { candidate: Vec<Vec<Rational>>, samples: usize },
}

impl CancelingVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, CancelingVerdict::Certified { .. })
    }
}

impl SymbolMatrix {
    pub fn new(
        m: usize,
        dim_in: usize,
        dim_out: usize,
        order: usize,
        terms: BTreeMap<MultiIndex, Matrix>,
    ) -> Result<Self> {
        for (beta, b) in &terms {
            if beta.degree() as usize != order || beta.exponents.len() != m {
                return Err(Error::DimensionMismatch { expected: order, found: beta.degree() as usize });
            }
            if b.rows() != dim_out || b.cols() != dim_in {
                return Err(Error::DimensionMismatch { expected: dim_out * dim_in, found: b.rows() * b.cols() });
            }
        }
        let terms = terms.into_iter().filter(|(_, b)| !b.is_zero()).collect();
        Ok(SymbolMatrix { m, dim_in, dim_out, order, terms })
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Matrix> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, beta: &MultiIndex) -> Option<&Matrix> {
        self.terms.get(beta)
    }

    pub fn at(&self, xi: &[Rational]) -> Result<Matrix> {
        if xi.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: xi.len() });
        }
        let mut out = Matrix::zeros(self.dim_out, self.dim_in);
        for (beta, b) in &self.terms {
            out.add_assign_scaled(b, &beta.eval(xi));
        }
        Ok(out)
    }

    pub fn rank_at(&self, xi: &[Rational]) -> Result<usize> {
        Ok(self.at(xi)?.rank())
    }

    /// Cocanceling iff the stacked `B̃_β` have full column rank; otherwise the
    /// common kernel is returned as witness.
    pub fn check_cocanceling(&self) -> CocancelingVerdict {
        let blocks: Vec<&Matrix> = self.terms.values().collect();
        let kernel = if blocks.is_empty() {
            (0..self.dim_in).map(|i| crate::lie::unit(self.dim_in, i)).collect()
        } else {
            Matrix::vstack(&blocks).nullspace()
        };
        CocancelingVerdict { cocanceling: kernel.is_empty(), common_kernel: kernel }
    }

    /// Rational points in the ball whose symbol kernels intersect trivially.
    /// Only points that shrink the running intersection are kept.
    pub fn cocanceling_witness_points(
        &self,
        center: &[Rational],
        radius: &Rational,
        seed: u64,
        budget: usize,
    ) -> Result<Vec<Vec<Rational>>> {
        if center.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: center.len() });
        }
        if !self.check_cocanceling().cocanceling {
            return Err(Error::InvalidParameter("symbol is not cocanceling".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut kernel: Vec<Vec<Rational>> = (0..self.dim_in).map(|i| crate::lie::unit(self.dim_in, i)).collect();
        let mut points = Vec::new();
        for _ in 0..budget {
            if kernel.is_empty() {
                break;
            }
            let xi = random_point_in_ball(&mut rng, center, radius);
            let k = self.at(&xi)?.nullspace();
            let next = linalg::intersect(self.dim_in, &kernel, &k);
            if next.len() < kernel.len() {
                kernel = next;
                points.push(xi);
            }
        }
        if kernel.is_empty() {
            Ok(points)
        } else {
            Err(Error::BudgetExhausted { draws: budget })
        }
    }
}

/// Common denominators bounded by this value for sampled points.
pub const SAMPLE_DENOMINATOR: i64 = 997;

/// Uniform-ish rational point in the closed ball, by rejection from the cube
/// with a shrunken-cube fallback.
pub fn random_point_in_ball<R: Rng + ?Sized>(rng: &mut R, center: &[Rational], radius: &Rational) -> Vec<Rational> {
    let m = center.len();
    let draw = |rng: &mut R| -> Vec<Rational> {
        (0..m)
            .map(|_| {
                let q = rng.gen_range(1..=SAMPLE_DENOMINATOR);
                frac(rng.gen_range(-q..=q), q)
            })
            .collect()
    };
    let mut u = draw(rng);
    let mut tries = 0;
    while u.iter().map(|x| x * x).sum::<Rational>() > Rational::one() {
        tries += 1;
        if tries >= 64 {
            let shrink = frac(1, m.max(1) as i64);
            u = u.iter().map(|x| x * &shrink).collect();
            break;
        }
        u = draw(rng);
    }
    center.iter().zip(&u).map(|(c, x)| c + radius * x).collect()
}

fn random_nonzero_point<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<Rational> {
    loop {
        let p = random_point_in_ball(rng, &vec![Rational::zero(); m], &Rational::one());
        if p.iter().any(|x| !x.is_zero()) {
            return p;
        }
    }
}

/// One-sided canceling test on an abelian group: the images `A(ξ)[V]` are
/// intersected over the coordinate axes and then seeded random points. An
/// empty intersection certifies canceling; an intersection that survives
/// `sample_budget` consecutive points is returned as a candidate.
pub fn check_canceling_euclidean(a: &OperatorMatrix, sample_budget: usize, seed: u64) -> Result<CancelingVerdict> {
    if !a.algebra().is_abelian() {
        return Err(Error::NotAbelian);
    }
    let symbol = a.symmetrize();
    let m = symbol.generators();
    let dim = symbol.dim_out();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current: Vec<Vec<Rational>> = (0..dim).map(|i| crate::lie::unit(dim, i)).collect();
    let mut used = Vec::new();
    let mut stable = 0usize;
    let mut axis = 0usize;
    loop {
        let xi = if axis < m {
            axis += 1;
            crate::lie::unit(m, axis - 1)
        } else {
            random_nonzero_point(&mut rng, m)
        };
        let s = symbol.at(&xi)?;
        let image: Vec<Vec<Rational>> = (0..s.cols()).map(|j| s.column(j)).collect();
        let image = linalg::span_basis(dim, &image);
        let next = linalg::intersect(dim, &current, &image);
        used.push(xi);
        if next.is_empty() {
            return Ok(CancelingVerdict::Certified { samples: used });
        }
        if next.len() < current.len() {
            stable = 0;
        } else {
            stable += 1;
        }
        current = next;
        if stable >= sample_budget {
            return Ok(CancelingVerdict::NotCertified { candidate: current, samples: used.len() });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn h1() -> Arc<GradedLieAlgebra> {
        Arc::new(GradedLieAlgebra::heisenberg(1).unwrap())
    }

    fn ab(n: usize) -> Arc<GradedLieAlgebra> {
        Arc::new(GradedLieAlgebra::abelian(n).unwrap())
    }

    fn gradient(alg: Arc<GradedLieAlgebra>) -> OperatorMatrix {
        let m = alg.m();
        let mut op = OperatorMatrix::zero(alg, 1, m, 1);
        for j in 0..m {
            op.add_entry(vec![j], j, 0, int(1)).unwrap();
        }
        op
    }

    fn curl(alg: Arc<GradedLieAlgebra>) -> OperatorMatrix {
        let mut op = OperatorMatrix::zero(alg, 2, 1, 1);
        op.add_entry(vec![0], 0, 1, int(1)).unwrap();
        op.add_entry(vec![1], 0, 0, int(-1)).unwrap();
        op
    }

    #[test]
    fn curl_after_gradient() {
        let alg = h1();
        let cg = curl(alg.clone()).compose(&gradient(alg.clone())).unwrap();
        assert_eq!(cg.order(), 2);
        assert_eq!(cg.terms()[&vec![0, 1]][(0, 0)], int(1));
        assert_eq!(cg.terms()[&vec![1, 0]][(0, 0)], int(-1));
        let uea = Uea::new(alg.clone());
        let u = cg.to_uea_matrix(&uea).unwrap();
        assert_eq!(*u.get(0, 0), UeaElement::basis(2));

        let abel = ab(2);
        let cg = curl(abel.clone()).compose(&gradient(abel.clone())).unwrap();
        assert!(cg.to_uea_matrix(&Uea::new(abel)).unwrap().is_zero());
        assert!(!cg.is_zero());
    }

    #[test]
    fn compose_rejects_mismatch() {
        let alg = h1();
        let g = gradient(alg.clone());
        assert!(matches!(g.compose(&g), Err(Error::DimensionMismatch { .. })));
        let z = OperatorMatrix::zero(alg.clone(), 2, 1, 3);
        assert!(z.compose(&g).unwrap().is_zero());
    }

    #[test]
    fn transpose_of_gradient() {
        let g = gradient(ab(2));
        let t = g.formal_transpose();
        assert_eq!(t.dim_in(), 2);
        assert_eq!(t.terms()[&vec![0]], Matrix::from_i64(&[&[-1, 0]]));
        assert_eq!(t.terms()[&vec![1]], Matrix::from_i64(&[&[0, -1]]));
        assert_eq!(t.formal_transpose(), g);

        let op = OperatorMatrix::entry(h1(), 1, 1, vec![0, 1], 0, 0, int(3)).unwrap();
        assert_eq!(op.formal_transpose().terms()[&vec![1, 0]][(0, 0)], int(3));
    }

    #[test]
    fn symbols() {
        let alg = h1();
        let mut l = OperatorMatrix::zero(alg.clone(), 1, 1, 2);
        l.add_entry(vec![0, 1], 0, 0, int(1)).unwrap();
        l.add_entry(vec![1, 0], 0, 0, int(-1)).unwrap();
        assert!(l.symmetrize().is_zero());

        let s = curl(alg.clone()).symmetrize();
        assert_eq!(s.coefficient(&MultiIndex::new(vec![1, 0])).unwrap(), &Matrix::from_i64(&[&[0, 1]]));
        assert_eq!(s.coefficient(&MultiIndex::new(vec![0, 1])).unwrap(), &Matrix::from_i64(&[&[-1, 0]]));
        assert_eq!(s.rank_at(&[int(1), int(0)]).unwrap(), 1);
        assert!(s.check_cocanceling().cocanceling);

        let x1 = OperatorMatrix::entry(alg, 2, 1, vec![0], 0, 0, int(1)).unwrap();
        let v = x1.symmetrize().check_cocanceling();
        assert!(!v.cocanceling);
        assert_eq!(v.common_kernel, vec![vec![int(0), int(1)]]);
    }

    #[test]
    fn witness_points_for_curl() {
        let s = curl(h1()).symmetrize();
        let pts = s.cocanceling_witness_points(&[int(1), int(1)], &frac(1, 2), 7, 64).unwrap();
        assert_eq!(pts.len(), 2);
        for p in &pts {
            let d: Rational = p.iter().map(|x| (x - int(1)) * (x - int(1))).sum();
            assert!(d <= frac(1, 4));
        }
    }

    #[test]
    fn canceling_examples() {
        assert!(check_canceling_euclidean(&gradient(ab(2)), 16, 1).unwrap().is_certified());
        let mut lap = OperatorMatrix::zero(ab(2), 1, 1, 2);
        lap.add_entry(vec![0, 0], 0, 0, int(1)).unwrap();
        lap.add_entry(vec![1, 1], 0, 0, int(1)).unwrap();
        match check_canceling_euclidean(&lap, 16, 1).unwrap() {
            CancelingVerdict::NotCertified { candidate, .. } => assert_eq!(candidate.len(), 1),
            v => panic!("unexpected {v:?}"),
        }
        let dx1 = OperatorMatrix::entry(ab(2), 1, 1, vec![0], 0, 0, int(1)).unwrap();
        assert!(check_canceling_euclidean(&dx1, 16, 1).unwrap().is_certified());
        assert_eq!(check_canceling_euclidean(&gradient(h1()), 4, 1), Err(Error::NotAbelian));
    }
}
