//! Sparse multivariate polynomials over the rationals, keyed by exponent
//! vector. Deterministic term order (BTreeMap) so printing and iteration are
//! reproducible.

use crate::rational::{rat_string, rzero, to_f64, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    pub vars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPoly {
    pub fn zero(vars: usize) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    /// The monomial c * x_(idx+1).
    pub fn linear(vars: usize, idx: usize, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            let mut e = vec![0u32; vars];
            e[idx] = 1;
            p.terms.insert(e, c);
        }
        p
    }

    pub fn monomial(vars: usize, exps: Vec<u32>, c: Rat) -> Self {
        assert_eq!(exps.len(), vars);
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        assert_eq!(exps.len(), self.vars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(rzero);
        *entry += c;
        // keep the no-zero-coefficient invariant
        let dead: Vec<Vec<u32>> =
            self.terms.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
        for k in dead {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, other.vars);
        let mut out = Self::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        let mut out = Self::zero(self.vars);
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.vars);
        let mut acc = rzero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    t *= point[i].clone();
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = to_f64(c);
            for (i, &p) in e.iter().enumerate() {
                t *= point[i].powi(p as i32);
            }
            acc += t;
        }
        acc
    }

    /// Leading term in lexicographic order with x1 > x2 > ... (largest
    /// exponent vector compared left to right).
    pub fn lex_leading(&self) -> Option<(&Vec<u32>, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn to_display(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        // print highest lex first
        for (e, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    p => factors.push(format!("x{}^{}", i + 1, p)),
                }
            }
            let mono = factors.join("*");
            let piece = if mono.is_empty() {
                rat_string(c)
            } else if c == &crate::rational::rint(1) {
                mono
            } else if c == &crate::rational::rint(-1) {
                format!("-{mono}")
            } else {
                format!("{}*{}", rat_string(c), mono)
            };
            parts.push(piece);
        }
        let mut s = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                s.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }
}

/// Symbolic determinant by cofactor expansion along the first row. Fine for
/// the small matrices that arise here (d <= 8 after unit-row reduction).
pub fn sym_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|row| row.len() == n));
    let vars = m[0][0].vars;
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(vars);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = (1..n)
            .map(|i| (0..n).filter(|&c| c != j).map(|c| m[i][c].clone()).collect())
            .collect();
        let mut term = m[0][j].mul(&sym_det(&minor));
        if j % 2 == 1 {
            term = term.neg();
        }
        acc = acc.add(&term);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    #[test]
    fn arithmetic_and_eval() {
        let vars = 2;
        let p = MultiPoly::monomial(vars, vec![2, 0], rint(1))
            .add(&MultiPoly::monomial(vars, vec![0, 1], rat(1, 2)));
        let q = MultiPoly::linear(vars, 0, rint(3));
        let r = p.mul(&q);
        // (x1^2 + x2/2) * 3x1 = 3x1^3 + 3/2 x1 x2
        assert_eq!(r.eval(&[rint(2), rint(4)]), rint(24) + rint(12));
        assert_eq!(r.total_degree(), 3);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = MultiPoly::monomial(2, vec![1, 1], rint(2));
        let q = p.neg();
        assert!(p.add(&q).is_zero());
    }

    #[test]
    fn det_2x2_symbolic() {
        // det [[x1, x2], [x2, x1]] = x1^2 - x2^2
        let x1 = MultiPoly::linear(2, 0, rint(1));
        let x2 = MultiPoly::linear(2, 1, rint(1));
        let d = sym_det(&[vec![x1.clone(), x2.clone()], vec![x2, x1]]);
        assert_eq!(
            d,
            MultiPoly::monomial(2, vec![2, 0], rint(1)).add(&MultiPoly::monomial(2, vec![0, 2], rint(-1)))
        );
    }

    #[test]
    fn display_is_readable() {
        let p = MultiPoly::monomial(3, vec![2, 0, 0], rint(-2))
            .add(&MultiPoly::monomial(3, vec![1, 0, 1], rat(1, 2)));
        assert_eq!(p.to_display(), "-2*x1^2 + 1/2*x1*x3");
    }
}
