//! Hall basis of the free nilpotent Lie algebra on `m` generators of step `r`.
//!
//! Basic commutators follow Marshall Hall's convention: letters first, then
//! by increasing weight; `[u, v]` is basic when `u > v` and, if
//! `u = [u1, u2]`, also `u2 <= v`. Brackets of basic commutators are rewritten
//! into the basis with the Jacobi identity, dropping weights above `r`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HallElement {
    Letter(usize),
    Pair(usize, usize),
}

#[derive(Clone, Debug)]
pub struct HallBasis {
    pub generators: usize,
    pub step: usize,
    pub elements: Vec<HallElement>,
    pub weights: Vec<u32>,
    index: HashMap<HallElement, usize>,
}

type Combo = Vec<(usize, Rational)>;

impl HallBasis {
    pub fn new(generators: usize, step: usize) -> Self {
        let mut elements = Vec::new();
        let mut weights = Vec::new();
        for i in 0..generators {
            elements.push(HallElement::Letter(i));
            weights.push(1);
        }
        for w in 2..=step as u32 {
            let existing = elements.len();
            let mut fresh = Vec::new();
            for u in 0..existing {
                for v in 0..u {
                    if weights[u] + weights[v] != w {
                        continue;
                    }
                    let ok = match elements[u] {
                        HallElement::Letter(_) => true,
                        HallElement::Pair(_, u2) => u2 <= v,
                    };
                    if ok {
                        fresh.push(HallElement::Pair(u, v));
                    }
                }
            }
            weights.extend(std::iter::repeat_n(w, fresh.len()));
            elements.extend(fresh);
        }
        let index = elements.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        HallBasis { generators, step, elements, weights, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        (1..=self.step as u32).map(|w| self.weights.iter().filter(|&&x| x == w).count()).collect()
    }

    pub fn label(&self, i: usize) -> String {
        match self.elements[i] {
            HallElement::Letter(g) => format!("X{}", g + 1),
            HallElement::Pair(u, v) => format!("[{},{}]", self.label(u), self.label(v)),
        }
    }

    /// Structure constants `[e_a, e_b]` for every ordered pair.
    pub fn structure_constants(&self) -> Vec<Vec<Combo>> {
        let n = self.len();
        let mut memo = HashMap::new();
        (0..n).map(|a| (0..n).map(|b| self.bracket(a, b, &mut memo)).collect()).collect()
    }

    fn bracket(&self, a: usize, b: usize, memo: &mut HashMap<(usize, usize), Combo>) -> Combo {
        if a == b || (self.weights[a] + self.weights[b]) as usize > self.step {
            return Vec::new();
        }
        if let Some(c) = memo.get(&(a, b)) {
            return c.clone();
        }
        let result = if a < b {
            negate(&self.bracket(b, a, memo))
        } else {
            match self.elements[a] {
                HallElement::Pair(a1, a2) if a2 > b => {
                    // [[a1,a2],b] = [[a1,b],a2] + [a1,[a2,b]]
                    let a1b = self.bracket(a1, b, memo);
                    let a2b = self.bracket(a2, b, memo);
                    let mut acc = self.bracket_combo(&a1b, &[(a2, Rational::one())], memo);
                    let rhs = self.bracket_combo(&[(a1, Rational::one())], &a2b, memo);
                    acc = add(&acc, &rhs);
                    acc
                }
                _ => {
                    let idx = self.index[&HallElement::Pair(a, b)];
                    vec![(idx, Rational::one())]
                }
            }
        };
        memo.insert((a, b), result.clone());
        result
    }

    fn bracket_combo(
        &self,
        u: &[(usize, Rational)],
        v: &[(usize, Rational)],
        memo: &mut HashMap<(usize, usize), Combo>,
    ) -> Combo {
        let mut acc: Combo = Vec::new();
        for (a, ca) in u {
            for (b, cb) in v {
                let c = ca * cb;
                let t: Combo = self.bracket(*a, *b, memo).into_iter().map(|(k, x)| (k, x * &c)).collect();
                acc = add(&acc, &t);
            }
        }
        acc
    }
}

fn negate(c: &[(usize, Rational)]) -> Combo {
    c.iter().map(|(k, x)| (*k, -x.clone())).collect()
}

fn add(a: &[(usize, Rational)], b: &[(usize, Rational)]) -> Combo {
    let mut map: std::collections::BTreeMap<usize, Rational> = a.iter().cloned().collect();
    for (k, x) in b {
        *map.entry(*k).or_insert_with(Rational::zero) += x;
    }
    map.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mobius(n: usize) -> i64 {
        let mut n = n;
        let mut result = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }

    /// Witt's formula for the dimension of the degree-k component of the free
    /// Lie algebra on m generators.
    fn witt(m: usize, k: usize) -> usize {
        let s: i64 = (1..=k).filter(|d| k.is_multiple_of(*d)).map(|d| mobius(d) * (m as i64).pow((k / d) as u32)).sum();
        (s / k as i64) as usize
    }

    #[test]
    fn layer_dims_match_witt() {
        for m in 2..=3 {
            for r in 1..=5 {
                let h = HallBasis::new(m, r);
                let expected: Vec<usize> = (1..=r).map(|k| witt(m, k)).collect();
                assert_eq!(h.layer_dims(), expected, "m={m} r={r}");
            }
        }
        assert_eq!(HallBasis::new(2, 3).layer_dims(), vec![2, 1, 2]);
    }

    #[test]
    fn labels_are_left_normed() {
        let h = HallBasis::new(2, 3);
        let labels: Vec<String> = (0..h.len()).map(|i| h.label(i)).collect();
        assert_eq!(labels, ["X1", "X2", "[X2,X1]", "[[X2,X1],X1]", "[[X2,X1],X2]"]);
    }
}
