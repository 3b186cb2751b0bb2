//! Compatible annihilators: operators `L` with `L∘A = 0` in the enveloping
//! algebra whose symmetrized symbol is cocanceling.
//!
//! Three routes are provided. The closed forms build `L = M∘L₀ - N` for the
//! gradient, higher-power gradient and Korn operators. [`solve_n`] recovers
//! some `N` from given `M` and `L₀` by linear algebra. [`find_annihilator`]
//! searches the whole space of annihilators of a fixed order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lie::GradedLieAlgebra;
use crate::linalg::Matrix;
use crate::operators::{CocancelingVerdict, MultiIndex, OperatorMatrix, UeaMatrix, Word};
use crate::rational::{self, frac, int, Rational};
use crate::uea::{solve_in_span, Uea, UeaElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleId {
    Gradient,
    Powers(usize),
    Korn,
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExampleId::Gradient => write!(f, "gradient"),
            ExampleId::Powers(k) => write!(f, "powers({k})"),
            ExampleId::Korn => write!(f, "korn"),
        }
    }
}

impl std::str::FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "gradient" => return Ok(ExampleId::Gradient),
            "korn" => return Ok(ExampleId::Korn),
            _ => {}
        }
        let k = s
            .strip_prefix("powers(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("powers:"))
            .and_then(|k| k.parse::<usize>().ok())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown example `{s}`")))?;
        if k == 0 {
            return Err(Error::InvalidParameter("powers(k) needs k >= 1".into()));
        }
        Ok(ExampleId::Powers(k))
    }
}

/// Index pairs `(i, j)` with `i < j`, the basis of `Λ²` in lex order.
pub fn wedge_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect()
}

/// Index pairs `(i, j)` with `i <= j`, the basis of symmetric 2-tensors.
pub fn symmetric_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect()
}

pub fn example_operator(id: ExampleId, alg: &Arc<GradedLieAlgebra>) -> Result<OperatorMatrix> {
    let m = alg.m();
    match id {
        ExampleId::Gradient => example_operator(ExampleId::Powers(1), alg),
        ExampleId::Powers(k) => {
            if k == 0 {
                return Err(Error::InvalidParameter("powers(k) needs k >= 1".into()));
            }
            let mut op = OperatorMatrix::zero(alg.clone(), 1, m, k);
            for j in 0..m {
                op.add_entry(vec![j; k], j, 0, int(1))?;
            }
            Ok(op)
        }
        ExampleId::Korn => {
            if m < 2 {
                return Err(Error::InvalidParameter("korn needs at least two generators".into()));
            }
            let pairs = symmetric_pairs(m);
            let mut op = OperatorMatrix::zero(alg.clone(), m, pairs.len(), 1);
            for (row, &(i, j)) in pairs.iter().enumerate() {
                op.add_entry(vec![i], row, j, int(1))?;
                op.add_entry(vec![j], row, i, int(1))?;
            }
            Ok(op)
        }
    }
}

/// Elements of the free associative algebra over the first layer.
type Tensor = BTreeMap<Word, Rational>;

fn t_add(acc: &mut Tensor, w: Word, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(w.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&w);
    }
}

fn t_word(w: Word) -> Tensor {
    let mut t = Tensor::new();
    t.insert(w, Rational::one());
    t
}

fn t_mul(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            t_add(&mut out, w, ca * cb);
        }
    }
    out
}

fn t_commutator(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = t_mul(a, b);
    for (w, c) in t_mul(b, a) {
        t_add(&mut out, w, -c);
    }
    out
}

/// `(ad a)^n (c)` for a single word `a`, through the binomial expansion
/// `Σ_j C(n,j) (-1)^j a^{n-j} c a^j` so the word count stays linear in `n`.
fn t_ad_power(a: &[usize], n: usize, c: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for j in 0..=n {
        let mut coeff = rational::binomial(n as u64, j as u64);
        if j % 2 == 1 {
            coeff = -coeff;
        }
        let left: Word = a.iter().copied().cycle().take(a.len() * (n - j)).collect();
        let right: Word = a.iter().copied().cycle().take(a.len() * j).collect();
        for (w, cw) in c {
            let mut word = left.clone();
            word.extend_from_slice(w);
            word.extend_from_slice(&right);
            t_add(&mut out, word, &coeff * cw);
        }
    }
    out
}

fn add_tensor(op: &mut OperatorMatrix, t: &Tensor, row: usize, col: usize, scale: &Rational) -> Result<()> {
    for (w, c) in t {
        op.add_entry(w.clone(), row, col, c * scale)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm(ExampleId),
    Solved,
    Searched { degree: usize, seed: u64 },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::ClosedForm(id) => write!(f, "closed_form({id})"),
            Provenance::Solved => write!(f, "solved"),
            Provenance::Searched { degree, seed } => write!(f, "searched(degree={degree}, seed={seed})"),
        }
    }
}

/// A verified pair: `L∘A = 0` in the enveloping algebra and `Sym(L)` cocanceling.
#[derive(Clone, Debug)]
pub struct AnnihilatorCertificate {
    pub l: OperatorMatrix,
    pub a: OperatorMatrix,
    pub residual: UeaMatrix,
    pub cocanceling: CocancelingVerdict,
    pub provenance: Provenance,
}

impl AnnihilatorCertificate {
    /// Builds and checks a certificate; fails with the first nonzero residual
    /// entry or a non-cocanceling symbol.
    pub fn new(l: OperatorMatrix, a: OperatorMatrix, provenance: Provenance, uea: &Uea) -> Result<Self> {
        let residual = l.compose(&a)?.to_uea_matrix(uea)?;
        if let Some((i, j, e)) = residual.first_nonzero() {
            return Err(Error::Certificate(format!("(L∘A)[{},{}] = {}", i + 1, j + 1, e.display(uea.algebra()))));
        }
        let cocanceling = l.symmetrize().check_cocanceling();
        if !cocanceling.cocanceling {
            return Err(Error::Certificate(format!(
                "Sym(L) has a common kernel of dimension {}",
                cocanceling.common_kernel.len()
            )));
        }
        Ok(AnnihilatorCertificate { l, a, residual, cocanceling, provenance })
    }

    /// Re-runs both checks from the stored operators.
    pub fn verify(&self, uea: &Uea) -> Result<()> {
        let again = Self::new(self.l.clone(), self.a.clone(), self.provenance.clone(), uea)?;
        if again.residual != self.residual || again.cocanceling != self.cocanceling {
            return Err(Error::Certificate("stored verdicts do not reproduce".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub id: ExampleId,
    pub a: OperatorMatrix,
    pub l0: OperatorMatrix,
    pub m: OperatorMatrix,
    pub n: OperatorMatrix,
    pub certificate: AnnihilatorCertificate,
    pub sym_n_zero: bool,
    pub xi0: Vec<Rational>,
    pub sym_m_rank: usize,
    pub sym_l0_cocanceling: bool,
    pub sym_ml0_cocanceling: bool,
}

/// `L₀`, `M` and `N` for the given example.
pub fn closed_form_parts(
    id: ExampleId,
    alg: &Arc<GradedLieAlgebra>,
) -> Result<(OperatorMatrix, OperatorMatrix, OperatorMatrix, OperatorMatrix)> {
    let m = alg.m();
    if m < 2 {
        return Err(Error::InvalidParameter("annihilator construction needs at least two generators".into()));
    }
    let r = alg.step();
    let a = example_operator(id, alg)?;
    let f_pairs = wedge_pairs(m);
    let dim_f = f_pairs.len();
    let dim_e = a.dim_out();
    let half = frac(1, 2);
    match id {
        ExampleId::Gradient | ExampleId::Powers(_) => {
            let k = if let ExampleId::Powers(k) = id { k } else { 1 };
            let mut l0 = OperatorMatrix::zero(alg.clone(), dim_e, dim_f, k);
            let mut mm = OperatorMatrix::zero(alg.clone(), dim_f, dim_f, k * k * r);
            let mut n = OperatorMatrix::zero(alg.clone(), dim_e, dim_f, k * (k * r + 1));
            for (p, &(i, j)) in f_pairs.iter().enumerate() {
                l0.add_entry(vec![i; k], p, j, int(1))?;
                l0.add_entry(vec![j; k], p, i, int(-1))?;
                mm.add_entry(vec![j; k * k * r], p, p, int(1))?;
                let xjk = vec![j; k];
                let c = t_commutator(&t_word(vec![i; k]), &t_word(xjk.clone()));
                for s in 1..=k * r {
                    let inner = t_ad_power(&xjk, s - 1, &c);
                    let term = t_mul(&t_word(vec![j; k * (k * r - s)]), &inner);
                    add_tensor(&mut n, &term, p, j, &Rational::one())?;
                }
            }
            Ok((a, l0, mm, n))
        }
        ExampleId::Korn => {
            let big_r = r * (2 * r + 2);
            let e_pairs = symmetric_pairs(m);
            let e_index = |i: usize, j: usize| e_pairs.iter().position(|&p| p == (i.min(j), i.max(j))).unwrap();
            let mut l0 = OperatorMatrix::zero(alg.clone(), dim_e, dim_f, 2);
            let mut mm = OperatorMatrix::zero(alg.clone(), dim_f, dim_f, big_r + 2 * r);
            let mut n = OperatorMatrix::zero(alg.clone(), dim_e, dim_f, big_r + 2 * r + 2);
            for (p, &(i, j)) in f_pairs.iter().enumerate() {
                let (ii, jj, ij) = (e_index(i, i), e_index(j, j), e_index(i, j));
                l0.add_entry(vec![i, i], p, jj, half.clone())?;
                l0.add_entry(vec![j, j], p, ii, half.clone())?;
                l0.add_entry(vec![i, j], p, ij, int(-1))?;
                let mut mw = vec![i; big_r];
                mw.extend(vec![j; 2 * r]);
                mm.add_entry(mw, p, p, int(1))?;

                // X_i^R X_j^{2r-s} (ad X_j)^{s-1}(X_i [X_i, X_j]) on f_jj
                let xi = t_word(vec![i]);
                let c1 = t_mul(&xi, &t_commutator(&xi, &t_word(vec![j])));
                for s in 1..=2 * r {
                    let mut head = vec![i; big_r];
                    head.extend(vec![j; 2 * r - s]);
                    let term = t_mul(&t_word(head), &t_ad_power(&[j], s - 1, &c1));
                    add_tensor(&mut n, &term, p, jj, &half)?;
                }
                // X_i^{R-s} (ad X_i)^{s-1}(X_j^{2r} [X_j², X_i]) on f_ii
                let c2 = t_mul(&t_word(vec![j; 2 * r]), &t_commutator(&t_word(vec![j, j]), &xi));
                for s in 1..=big_r {
                    let term = t_mul(&t_word(vec![i; big_r - s]), &t_ad_power(&[i], s - 1, &c2));
                    add_tensor(&mut n, &term, p, ii, &half)?;
                }
            }
            Ok((a, l0, mm, n))
        }
    }
}

/// Builds `L = M∘L₀ - N` for the example and verifies every certificate
/// condition, including the symbol-level preservation of cocancellation.
pub fn closed_form_annihilator(id: ExampleId, uea: &Uea) -> Result<ClosedForm> {
    let alg = uea.algebra_arc().clone();
    let (a, l0, mm, n) = closed_form_parts(id, &alg)?;
    let ml0 = mm.compose(&l0)?;
    let l = ml0.sub(&n)?;
    let sym_n_zero = n.symmetrize().is_zero();
    if !sym_n_zero {
        return Err(Error::Certificate("Sym(N) is not zero".into()));
    }
    let xi0 = vec![Rational::one(); alg.m()];
    let sym_m_rank = mm.symmetrize().rank_at(&xi0)?;
    let sym_l0_cocanceling = l0.symmetrize().check_cocanceling().cocanceling;
    let sym_ml0_cocanceling = ml0.symmetrize().check_cocanceling().cocanceling;
    if sym_m_rank == mm.dim_in() && sym_l0_cocanceling && !sym_ml0_cocanceling {
        return Err(Error::Certificate("Sym(M) injective at ξ₀ and Sym(L₀) cocanceling, but Sym(M∘L₀) is not".into()));
    }
    let certificate = AnnihilatorCertificate::new(l, a.clone(), Provenance::ClosedForm(id), uea)?;
    Ok(ClosedForm {
        id,
        a,
        l0,
        m: mm,
        n,
        certificate,
        sym_n_zero,
        xi0,
        sym_m_rank,
        sym_l0_cocanceling,
        sym_ml0_cocanceling,
    })
}

/// Upper bound on unknowns per output row for the linear solvers.
pub const MAX_UNKNOWNS: usize = 1 << 15;

fn all_words(m: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..m).map(move |l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out
}

/// Column `λ, c` of the system: the PBW form of `X_λ · A[c, v]` for every `v`.
fn composed_columns(a: &OperatorMatrix, words: &[Word], uea: &Uea) -> Vec<Vec<Vec<UeaElement>>> {
    let rows: Vec<Vec<(Word, Rational, usize)>> = (0..a.dim_out())
        .map(|c| {
            a.terms()
                .iter()
                .flat_map(|(g, mat)| {
                    (0..a.dim_in()).filter_map(move |v| {
                        let x = &mat[(c, v)];
                        (!x.is_zero()).then(|| (g.clone(), x.clone(), v))
                    })
                })
                .collect()
        })
        .collect();
    words
        .par_iter()
        .map(|lam| {
            rows.iter()
                .map(|entries| {
                    let mut per_v = vec![UeaElement::zero(); a.dim_in()];
                    for (g, x, v) in entries {
                        let mut w = lam.clone();
                        w.extend_from_slice(g);
                        per_v[*v].add_scaled(&uea.word_normal_form(&w), x);
                    }
                    per_v
                })
                .collect()
        })
        .collect()
}

/// Sparse linear system keyed by `(v, monomial)` rows plus extra rows.
struct System {
    rows: BTreeMap<(usize, Vec<u16>), usize>,
    extra: usize,
    entries: Vec<(usize, usize, Rational)>,
    cols: usize,
}

impl System {
    fn new(cols: usize) -> Self {
        System { rows: BTreeMap::new(), extra: 0, entries: Vec::new(), cols }
    }

    fn row_for(&mut self, v: usize, m: &[u16]) -> usize {
        let next = self.rows.len();
        *self.rows.entry((v, m.to_vec())).or_insert(next)
    }

    fn add_uea_column(&mut self, col: usize, v: usize, e: &UeaElement) {
        for (m, c) in e.terms() {
            let r = self.row_for(v, m);
            self.entries.push((r, col, c.clone()));
        }
    }

    fn matrix(&self, extra_rows: &[Vec<(usize, Rational)>]) -> Matrix {
        let base = self.rows.len();
        let mut mat = Matrix::zeros(base + extra_rows.len() + self.extra, self.cols);
        for (r, c, x) in &self.entries {
            mat[(*r, *c)] += x.clone();
        }
        for (k, row) in extra_rows.iter().enumerate() {
            for (c, x) in row {
                mat[(base + k, *c)] += x.clone();
            }
        }
        mat
    }
}

/// Finds `N` of order `ord(M) + ord(L₀)` with `Sym(N) = 0` and
/// `N∘A = M∘L₀∘A` in the enveloping algebra, one output row at a time.
/// Returns `None` when no such `N` exists.
pub fn solve_n(
    a: &OperatorMatrix,
    l0: &OperatorMatrix,
    mm: &OperatorMatrix,
    uea: &Uea,
) -> Result<Option<OperatorMatrix>> {
    let ml0 = mm.compose(l0)?;
    let target = ml0.compose(a)?.to_uea_matrix(uea)?;
    let alg = uea.algebra();
    let m = alg.m();
    let order = ml0.order();
    let dim_e = a.dim_out();
    let unknowns = m.checked_pow(order as u32).unwrap_or(usize::MAX).saturating_mul(dim_e);
    if unknowns > MAX_UNKNOWNS {
        return Err(Error::InvalidParameter(format!("{unknowns} unknowns per row exceeds {MAX_UNKNOWNS}")));
    }
    let words = all_words(m, order);
    let columns = composed_columns(a, &words, uea);
    let col_index = |w: usize, c: usize| w * dim_e + c;

    // Sym(N) = 0: words sharing a letter multiset sum to zero, per E column.
    let mut classes: BTreeMap<MultiIndex, Vec<usize>> = BTreeMap::new();
    for (wi, w) in words.iter().enumerate() {
        classes.entry(MultiIndex::of_word(m, w)).or_default().push(wi);
    }
    let sym_rows: Vec<Vec<(usize, Rational)>> = classes
        .values()
        .flat_map(|members| {
            (0..dim_e).map(move |c| members.iter().map(|&wi| (col_index(wi, c), Rational::one())).collect())
        })
        .collect();

    let mut n = OperatorMatrix::zero(ml0.algebra().clone(), dim_e, ml0.dim_out(), order);
    for row in 0..ml0.dim_out() {
        let mut sys = System::new(words.len() * dim_e);
        for (wi, per_c) in columns.iter().enumerate() {
            for (c, per_v) in per_c.iter().enumerate() {
                for (v, e) in per_v.iter().enumerate() {
                    sys.add_uea_column(col_index(wi, c), v, e);
                }
            }
        }
        for v in 0..a.dim_in() {
            for (mono, _) in target.get(row, v).terms() {
                sys.row_for(v, mono);
            }
        }
        let mat = sys.matrix(&sym_rows);
        let mut rhs = vec![Rational::zero(); mat.rows()];
        for v in 0..a.dim_in() {
            for (mono, c) in target.get(row, v).terms() {
                rhs[sys.rows[&(v, mono.clone())]] = c.clone();
            }
        }
        let Some(x) = mat.solve(&rhs) else {
            return Ok(None);
        };
        for (wi, w) in words.iter().enumerate() {
            for c in 0..dim_e {
                let val = &x[col_index(wi, c)];
                if !val.is_zero() {
                    n.add_entry(w.clone(), row, c, val.clone())?;
                }
            }
        }
    }
    Ok(Some(n))
}

/// Basis of the single-row operators `K` of order `degree` with `K∘A = 0`.
pub fn annihilator_space(a: &OperatorMatrix, degree: usize, uea: &Uea) -> Result<Vec<OperatorMatrix>> {
    let m = uea.algebra().m();
    let dim_e = a.dim_out();
    let unknowns = m.checked_pow(degree as u32).unwrap_or(usize::MAX).saturating_mul(dim_e);
    if unknowns > MAX_UNKNOWNS {
        return Err(Error::InvalidParameter(format!("{unknowns} unknowns exceeds {MAX_UNKNOWNS}")));
    }
    let words = all_words(m, degree);
    let columns = composed_columns(a, &words, uea);
    let mut sys = System::new(words.len() * dim_e);
    for (wi, per_c) in columns.iter().enumerate() {
        for (c, per_v) in per_c.iter().enumerate() {
            for (v, e) in per_v.iter().enumerate() {
                sys.add_uea_column(wi * dim_e + c, v, e);
            }
        }
    }
    let kernel = if sys.rows.is_empty() {
        (0..sys.cols).map(|i| crate::lie::unit(sys.cols, i)).collect()
    } else {
        sys.matrix(&[]).nullspace()
    };
    kernel
        .into_iter()
        .map(|x| {
            let mut k = OperatorMatrix::zero(a.algebra().clone(), dim_e, 1, degree);
            for (wi, w) in words.iter().enumerate() {
                for c in 0..dim_e {
                    let val = &x[wi * dim_e + c];
                    if !val.is_zero() {
                        k.add_entry(w.clone(), 0, c, val.clone())?;
                    }
                }
            }
            Ok(k)
        })
        .collect()
}

/// Random draws before the deterministic fallback.
pub const SEARCH_DRAWS: usize = 128;

fn stack_rows(rows: &[OperatorMatrix], a: &OperatorMatrix, degree: usize) -> Result<OperatorMatrix> {
    let mut l = OperatorMatrix::zero(a.algebra().clone(), a.dim_out(), rows.len(), degree);
    for (r, k) in rows.iter().enumerate() {
        for (w, mat) in k.terms() {
            for c in 0..a.dim_out() {
                l.add_entry(w.clone(), r, c, mat[(0, c)].clone())?;
            }
        }
    }
    Ok(l)
}

fn combine(basis: &[OperatorMatrix], coeffs: &[Rational]) -> Result<OperatorMatrix> {
    let mut out = basis[0].scale(&Rational::zero());
    for (b, c) in basis.iter().zip(coeffs) {
        out.add_scaled(b, c)?;
    }
    Ok(out)
}

/// Searches the order-`degree` annihilators for one with `dim_f` rows and a
/// cocanceling symbol. `None` means no member was found at this degree.
pub fn find_annihilator(
    a: &OperatorMatrix,
    degree: usize,
    dim_f: usize,
    seed: u64,
    uea: &Uea,
) -> Result<Option<AnnihilatorCertificate>> {
    if degree == 0 || dim_f == 0 {
        return Err(Error::InvalidParameter("degree and output dimension must be positive".into()));
    }
    let basis = annihilator_space(a, degree, uea)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let provenance = Provenance::Searched { degree, seed };
    let accept = |rows: &[OperatorMatrix]| -> Result<Option<AnnihilatorCertificate>> {
        let l = stack_rows(rows, a, degree)?;
        if !l.symmetrize().check_cocanceling().cocanceling {
            return Ok(None);
        }
        AnnihilatorCertificate::new(l, a.clone(), provenance.clone(), uea).map(Some)
    };

    // Single basis elements first, so a one-dimensional space yields its generator.
    if let Some(cert) = search_combinations(&basis, dim_f, &accept)? {
        return Ok(Some(cert));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SEARCH_DRAWS {
        let rows: Vec<OperatorMatrix> = (0..dim_f)
            .map(|_| {
                let coeffs: Vec<Rational> = basis.iter().map(|_| int(rng.gen_range(-3..=3))).collect();
                combine(&basis, &coeffs)
            })
            .collect::<Result<_>>()?;
        if let Some(cert) = accept(&rows)? {
            return Ok(Some(cert));
        }
    }

    let mut sums = Vec::new();
    for x in 0..basis.len() {
        for y in x + 1..basis.len() {
            let mut s = basis[x].clone();
            s.add_scaled(&basis[y], &Rational::one())?;
            sums.push(s);
        }
    }
    let candidates: Vec<OperatorMatrix> = basis.iter().cloned().chain(sums).collect();
    search_combinations(&candidates, dim_f, &accept)
}

/// Tries every `dim_f`-subset of `candidates` in lex order.
fn search_combinations(
    candidates: &[OperatorMatrix],
    dim_f: usize,
    accept: &dyn Fn(&[OperatorMatrix]) -> Result<Option<AnnihilatorCertificate>>,
) -> Result<Option<AnnihilatorCertificate>> {
    let n = candidates.len();
    if dim_f > n {
        return Ok(None);
    }
    let mut choice: Vec<usize> = (0..dim_f).collect();
    loop {
        let rows: Vec<OperatorMatrix> = choice.iter().map(|&c| candidates[c].clone()).collect();
        if let Some(cert) = accept(&rows)? {
            return Ok(Some(cert));
        }
        let mut k = dim_f;
        while k > 0 && choice[k - 1] == n - dim_f + k - 1 {
            k -= 1;
        }
        if k == 0 {
            return Ok(None);
        }
        choice[k - 1] += 1;
        for t in k..dim_f {
            choice[t] = choice[t - 1] + 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KornCase {
    pub i: usize,
    pub j: usize,
    pub l: usize,
    pub case: u8,
    pub residual_zero: bool,
}

#[derive(Clone, Debug)]
pub struct KornReductionReport {
    pub k: usize,
    pub cases: Vec<KornCase>,
}

impl KornReductionReport {
    pub fn all_zero(&self) -> bool {
        self.cases.iter().all(|c| c.residual_zero)
    }
}

/// `C̃` with `X_l^r C = C̃ X_l^r`, found inside the factor space of `l`.
pub fn swap_factor(c: &UeaElement, l: usize, uea: &Uea) -> Result<UeaElement> {
    let r = uea.algebra().step();
    let xr = uea.power(&UeaElement::basis(l), r);
    let target = uea.multiply(&xr, c);
    let space = uea.factor_space(l);
    let shifted: Vec<UeaElement> = space.iter().map(|(_, _, e)| uea.multiply(e, &xr)).collect();
    let (coords, _) = solve_in_span(&target, &shifted);
    let coords = coords.ok_or_else(|| Error::Membership("no C̃ with X_l^r C = C̃ X_l^r".into()))?;
    let mut out = UeaElement::zero();
    for ((_, _, e), x) in space.iter().zip(coords) {
        out.add_scaled(e, &x);
    }
    Ok(out)
}

/// Checks, for every `i < j` and every generator `l`, the identity
/// expressing `X_l^{2r}(X_i u_j)` through derivatives of the Korn operator.
/// Each side is a row of enveloping-algebra elements acting on `u`.
pub fn korn_reduction_check(uea: &Uea) -> Result<KornReductionReport> {
    let alg = uea.algebra();
    let m = alg.m();
    if m < 2 {
        return Err(Error::InvalidParameter("korn needs at least two generators".into()));
    }
    let r = alg.step();
    let k = 2 * r;
    let x = |i: usize| UeaElement::basis(i);
    let pow = |i: usize, n: usize| uea.power(&x(i), n);
    let mul = |a: &UeaElement, b: &UeaElement| uea.multiply(a, b);
    let mut cases = Vec::new();
    for (i, j) in wedge_pairs(m) {
        for l in 0..m {
            let lhs = mul(&pow(l, k), &x(i)); // acts on u_j
            let mut rhs = vec![UeaElement::zero(); m];
            let case = if l == j {
                let c = uea.commutator_factor(j, i)?;
                rhs[j] = mul(&mul(&pow(l, r), &c), &x(j));
                1
            } else if l == i {
                let c = uea.commutator_factor(i, j)?;
                rhs[j] = mul(&pow(i, 2 * r), &x(i));
                rhs[i] = mul(&pow(i, 2 * r), &x(j)).sub(&mul(&mul(&pow(i, r), &c), &x(i)));
                2
            } else {
                let c_li = uea.commutator_factor(l, i)?;
                let c_lj = uea.commutator_factor(l, j)?;
                let tilde = swap_factor(&c_li, l, uea)?;
                let head = mul(&pow(l, r), &c_li);
                rhs[j] = mul(&head, &x(l));
                rhs[l] = mul(&head, &x(j)).sub(&mul(&mul(&tilde, &c_lj), &x(l)));
                3
            };
            let mut expected = vec![UeaElement::zero(); m];
            expected[j] = lhs;
            let residual_zero = expected.iter().zip(&rhs).all(|(a, b)| a.sub(b).is_zero());
            cases.push(KornCase { i, j, l, case, residual_zero });
        }
    }
    Ok(KornReductionReport { k, cases })
}
