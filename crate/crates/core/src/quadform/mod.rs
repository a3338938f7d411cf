//! Tuples of real quadratic forms: exact representation, evaluation,
//! linear-change-of-variables algebra, and the NV invariant.

mod parse;
pub mod spec;

pub use parse::parse_surface;
pub use spec::{CaseTag, StructuralMeta, SurfaceSpec};

use crate::error::{CoreError, Result};
use crate::matrix::RatMatrix;
use crate::poly::MultiPoly;
use crate::rational::{rat, rint, rzero, Rat};
use num_traits::Zero;

/// A symmetric d x d rational matrix; houses one quadratic form as
/// Q(x) = xᵀ A x. Mixed monomials x_i x_j sit as 1/2 on each off-diagonal
/// entry, so the form reproduces the monomial with coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    dim: usize,
    mat: RatMatrix,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix { dim, mat: RatMatrix::zeros(dim, dim) }
    }

    /// Builds from an arbitrary square matrix; returns (matrix, was_symmetric).
    /// Non-symmetric input is symmetrized as (A + Aᵀ)/2, which is all the
    /// quadratic form sees.
    pub fn symmetrize(m: RatMatrix) -> (Self, bool) {
        assert_eq!(m.rows, m.cols);
        let dim = m.rows;
        let mut sym = true;
        let mut out = RatMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                if m[(i, j)] != m[(j, i)] {
                    sym = false;
                }
                out[(i, j)] = (&m[(i, j)] + &m[(j, i)]) * rat(1, 2);
            }
        }
        (SymMatrix { dim, mat: out }, sym)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.mat[(i, j)]
    }

    pub fn set_monomial(&mut self, i: usize, j: usize, coeff: Rat) {
        if i == j {
            self.mat[(i, i)] = coeff;
        } else {
            let half = &coeff * rat(1, 2);
            self.mat[(i, j)] = half.clone();
            self.mat[(j, i)] = half;
        }
    }

    pub fn add_monomial(&mut self, i: usize, j: usize, coeff: &Rat) {
        if i == j {
            self.mat[(i, i)] += coeff.clone();
        } else {
            let half = coeff * rat(1, 2);
            self.mat[(i, j)] += half.clone();
            self.mat[(j, i)] += half;
        }
    }

    pub fn as_matrix(&self) -> &RatMatrix {
        &self.mat
    }

    pub fn from_symmetric_unchecked(m: RatMatrix) -> Self {
        assert_eq!(m.rows, m.cols);
        debug_assert!((0..m.rows).all(|i| (0..m.cols).all(|j| m[(i, j)] == m[(j, i)])));
        SymMatrix { dim: m.rows, mat: m }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.dim);
        let ax = self.mat.mul_vec(x);
        let mut acc = rzero();
        for (xi, axi) in x.iter().zip(&ax) {
            acc += xi * &axi.clone();
        }
        acc
    }

    /// The polynomial x_i x_j coefficient view: coefficient of x_i^2 is A_ii,
    /// of x_i x_j (i<j) is 2 A_ij.
    pub fn monomials(&self) -> Vec<(usize, usize, Rat)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                let c = if i == j { self.mat[(i, i)].clone() } else { &self.mat[(i, j)] * rint(2) };
                if !c.is_zero() {
                    out.push((i, j, c));
                }
            }
        }
        out
    }

    pub fn to_poly(&self) -> MultiPoly {
        let mut p = MultiPoly::zero(self.dim);
        for (i, j, c) in self.monomials() {
            let mut e = vec![0u32; self.dim];
            e[i] += 1;
            e[j] += 1;
            p.add_term(e, c);
        }
        p
    }
}

/// An n-tuple of quadratic forms in d variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadTuple {
    d: usize,
    n: usize,
    forms: Vec<SymMatrix>,
}

impl QuadTuple {
    pub fn new(d: usize, forms: Vec<SymMatrix>) -> Result<Self> {
        if d == 0 || forms.is_empty() {
            return Err(CoreError::DimensionMismatch("need d >= 1 and n >= 1".into()));
        }
        if forms.iter().any(|f| f.dim() != d) {
            return Err(CoreError::DimensionMismatch("all forms must share dimension d".into()));
        }
        let n = forms.len();
        Ok(QuadTuple { d, n, forms })
    }

    /// Builds from (i, j, coeff) monomial lists, one list per form.
    pub fn from_monomials(d: usize, comps: Vec<Vec<(usize, usize, Rat)>>) -> Result<Self> {
        let forms = comps
            .into_iter()
            .map(|monos| {
                let mut m = SymMatrix::zeros(d);
                for (i, j, c) in monos {
                    m.add_monomial(i, j, &c);
                }
                m
            })
            .collect();
        Self::new(d, forms)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn form(&self, j: usize) -> &SymMatrix {
        &self.forms[j]
    }

    pub fn forms(&self) -> &[SymMatrix] {
        &self.forms
    }

    /// Exact evaluation Q(x) = (xᵀA_1 x, ..., xᵀA_n x).
    pub fn evaluate(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        if x.len() != self.d {
            return Err(CoreError::DimensionMismatch(format!(
                "point has {} coordinates, surface has d={}",
                x.len(),
                self.d
            )));
        }
        Ok(self.forms.iter().map(|f| f.eval(x)).collect())
    }

    pub fn evaluate_f64(&self, x: &[f64]) -> Vec<f64> {
        self.forms
            .iter()
            .map(|f| {
                let m = f.as_matrix();
                let mut acc = 0.0;
                for i in 0..self.d {
                    let mut row = 0.0;
                    for j in 0..self.d {
                        row += crate::rational::to_f64(&m[(i, j)]) * x[j];
                    }
                    acc += x[i] * row;
                }
                acc
            })
            .collect()
    }

    /// Gradient matrix (∂_k Q_j) as exact degree-<=1 polynomials; entry (j,k)
    /// is 2(A_j x)_k.
    pub fn gradient_matrix(&self) -> Vec<Vec<MultiPoly>> {
        self.forms
            .iter()
            .map(|f| {
                (0..self.d)
                    .map(|k| {
                        let mut p = MultiPoly::zero(self.d);
                        for l in 0..self.d {
                            let c = f.entry(k, l) * rint(2);
                            if !c.is_zero() {
                                p = p.add(&MultiPoly::linear(self.d, l, c));
                            }
                        }
                        p
                    })
                    .collect()
            })
            .collect()
    }

    /// NV: the number of variables some component genuinely depends on, i.e.
    /// the count of indices k such that row k of some A_j is nonzero.
    pub fn nv(&self) -> usize {
        (0..self.d)
            .filter(|&k| {
                self.forms
                    .iter()
                    .any(|f| (0..self.d).any(|l| !f.entry(k, l).is_zero()))
            })
            .count()
    }

    /// Q'(x) = Q(M1 x) · M2 where M1 is d x d and M2 is n x n'. Component j'
    /// has matrix Σ_j M2[j][j'] M1ᵀ A_j M1.
    pub fn change_of_variables(&self, m1: &RatMatrix, m2: &RatMatrix) -> Result<QuadTuple> {
        if m1.rows != self.d || m1.cols != self.d {
            return Err(CoreError::DimensionMismatch("M1 must be d x d".into()));
        }
        if m2.rows != self.n || m2.cols == 0 {
            return Err(CoreError::DimensionMismatch("M2 must be n x n' with n' >= 1".into()));
        }
        let m1t = m1.transpose();
        let pulled: Vec<RatMatrix> =
            self.forms.iter().map(|f| m1t.mul(f.as_matrix()).mul(m1)).collect();
        let forms = (0..m2.cols)
            .map(|jp| {
                let mut acc = RatMatrix::zeros(self.d, self.d);
                for (j, p) in pulled.iter().enumerate() {
                    if m2[(j, jp)].is_zero() {
                        continue;
                    }
                    for i in 0..self.d {
                        for k in 0..self.d {
                            let add = &m2[(j, jp)] * &p[(i, k)];
                            acc[(i, k)] += add;
                        }
                    }
                }
                SymMatrix::from_symmetric_unchecked(acc)
            })
            .collect();
        QuadTuple::new(self.d, forms)
    }

    /// Canonical text form; `parse_surface` of this is the identity.
    pub fn canonical_text(&self) -> String {
        let mut out = format!("d={} n={}\n", self.d, self.n);
        for (j, f) in self.forms.iter().enumerate() {
            let monos = f.monomials();
            let mut s = String::new();
            if monos.is_empty() {
                s.push('0');
            }
            for (k, (i, jj, c)) in monos.iter().enumerate() {
                let var = if i == jj {
                    format!("x{}^2", i + 1)
                } else {
                    format!("x{}*x{}", i + 1, jj + 1)
                };
                let piece = if c == &rint(1) {
                    var
                } else if c == &rint(-1) {
                    format!("-{var}")
                } else {
                    format!("{}*{}", crate::rational::rat_string(c), var)
                };
                if k == 0 {
                    s.push_str(&piece);
                } else if let Some(stripped) = piece.strip_prefix('-') {
                    s.push_str(" - ");
                    s.push_str(stripped);
                } else {
                    s.push_str(" + ");
                    s.push_str(&piece);
                }
            }
            out.push_str(&format!("Q{} = {}\n", j + 1, s));
        }
        out
    }

    /// FNV-1a hash of the canonical text; used as a cache key.
    pub fn surface_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.canonical_text().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    pub(crate) fn degenerate_example() -> QuadTuple {
        // (x1^2, x2^2 + x1 x3)
        QuadTuple::from_monomials(
            3,
            vec![vec![(0, 0, rint(1))], vec![(1, 1, rint(1)), (0, 2, rint(1))]],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let q = degenerate_example();
        assert_eq!(q.evaluate(&[rzero(), rzero(), rzero()]).unwrap(), vec![rzero(), rzero()]);
        assert_eq!(q.evaluate(&[rint(1), rint(1), rint(1)]).unwrap(), vec![rint(1), rint(2)]);
        let hyp = QuadTuple::from_monomials(
            2,
            vec![vec![(0, 1, rint(1))], vec![(0, 0, rint(1)), (1, 1, rint(-1))]],
        )
        .unwrap();
        assert_eq!(hyp.evaluate(&[rint(1), rint(1)]).unwrap(), vec![rint(1), rzero()]);
        assert!(q.evaluate(&[rint(1)]).is_err());
    }

    #[test]
    fn gradient_examples() {
        let q = degenerate_example();
        let g = q.gradient_matrix();
        // [[2x1, 0, 0], [x3, 2x2, x1]]
        assert_eq!(g[0][0], MultiPoly::linear(3, 0, rint(2)));
        assert!(g[0][1].is_zero());
        assert!(g[0][2].is_zero());
        assert_eq!(g[1][0], MultiPoly::linear(3, 2, rint(1)));
        assert_eq!(g[1][1], MultiPoly::linear(3, 1, rint(2)));
        assert_eq!(g[1][2], MultiPoly::linear(3, 0, rint(1)));

        let hyp = QuadTuple::from_monomials(
            2,
            vec![vec![(0, 1, rint(1))], vec![(0, 0, rint(1)), (1, 1, rint(-1))]],
        )
        .unwrap();
        let g = hyp.gradient_matrix();
        assert_eq!(g[0][0], MultiPoly::linear(2, 1, rint(1)));
        assert_eq!(g[0][1], MultiPoly::linear(2, 0, rint(1)));
        assert_eq!(g[1][0], MultiPoly::linear(2, 0, rint(2)));
        assert_eq!(g[1][1], MultiPoly::linear(2, 1, rint(-2)));

        let one = QuadTuple::from_monomials(1, vec![vec![(0, 0, rint(1))]]).unwrap();
        assert_eq!(one.gradient_matrix()[0][0], MultiPoly::linear(1, 0, rint(2)));
    }

    #[test]
    fn nv_examples() {
        assert_eq!(degenerate_example().nv(), 3);
        let q = QuadTuple::from_monomials(
            3,
            vec![vec![(0, 0, rint(1))], vec![(0, 1, rint(1))]],
        )
        .unwrap();
        assert_eq!(q.nv(), 2);
        let z = QuadTuple::new(2, vec![SymMatrix::zeros(2), SymMatrix::zeros(2)]).unwrap();
        assert_eq!(z.nv(), 0);
    }

    #[test]
    fn change_of_variables_examples() {
        let q = QuadTuple::from_monomials(
            2,
            vec![vec![(0, 0, rint(1))], vec![(1, 1, rint(1))]],
        )
        .unwrap();
        let id2 = RatMatrix::identity(2);
        assert_eq!(q.change_of_variables(&id2, &id2).unwrap(), q);

        // swap x1 <-> x2
        let swap = RatMatrix::from_rows(vec![vec![rzero(), rint(1)], vec![rint(1), rzero()]]);
        let swapped = q.change_of_variables(&swap, &id2).unwrap();
        assert_eq!(
            swapped,
            QuadTuple::from_monomials(2, vec![vec![(1, 1, rint(1))], vec![(0, 0, rint(1))]]).unwrap()
        );

        // project (x1^2 + x2^2, x1 x2) onto its first component
        let q2 = QuadTuple::from_monomials(
            2,
            vec![vec![(0, 0, rint(1)), (1, 1, rint(1))], vec![(0, 1, rint(1))]],
        )
        .unwrap();
        let proj = RatMatrix::from_rows(vec![vec![rint(1)], vec![rzero()]]);
        let single = q2.change_of_variables(&id2, &proj).unwrap();
        assert_eq!(single.n(), 1);
        assert_eq!(
            single,
            QuadTuple::from_monomials(2, vec![vec![(0, 0, rint(1)), (1, 1, rint(1))]]).unwrap()
        );
    }

    #[test]
    fn symmetrization_convention() {
        let (m, was_sym) = SymMatrix::symmetrize(RatMatrix::from_rows(vec![
            vec![rzero(), rint(1)],
            vec![rzero(), rzero()],
        ]));
        assert!(!was_sym);
        assert_eq!(m.entry(0, 1), &rat(1, 2));
        assert_eq!(m.entry(1, 0), &rat(1, 2));
        // xᵀAx reproduces x1*x2 with coefficient 1
        assert_eq!(m.eval(&[rint(1), rint(1)]), rint(1));
    }
}
