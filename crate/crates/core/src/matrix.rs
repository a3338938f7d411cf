//! Dense exact-rational matrices, just enough linear algebra for the
//! invariant computations: rank, kernel, determinant, inverse, and congruence
//! diagonalization of symmetric matrices.

use crate::rational::{rint, rzero, Rat};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    elems: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, elems: vec![rzero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = rint(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix { rows: r, cols: c, elems: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut elems = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                elems.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, elems }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = rzero();
                for j in 0..self.cols {
                    acc += &self[(i, j)] * &v[j];
                }
                acc
            })
            .collect()
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.elems.iter().all(|x| x.is_zero())
    }

    /// Row echelon rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..m.cols {
            let pivot = (row..m.rows).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot else { continue };
            m.swap_rows(row, p);
            let inv = m[(row, col)].clone();
            for r in row + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] / &inv;
                for c in col..m.cols {
                    let sub = &factor * &m[(row, c)];
                    m[(r, c)] -= sub;
                }
            }
            rank += 1;
            row += 1;
            if row == m.rows {
                break;
            }
        }
        rank
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            let pivot = (row..m.rows).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot else { continue };
            m.swap_rows(row, p);
            let inv = m[(row, col)].clone();
            for c in col..m.cols {
                m[(row, c)] = &m[(row, c)] / &inv;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in col..m.cols {
                        let sub = &factor * &m[(row, c)];
                        m[(r, c)] -= sub;
                    }
                }
            }
            pivots.push((row, col));
            row += 1;
            if row == m.rows {
                break;
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..m.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![rzero(); m.cols];
            v[free] = rint(1);
            for &(r, c) in &pivots {
                v[c] = -m[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = rint(1);
        for col in 0..m.cols {
            let pivot = (col..m.rows).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot else { return rzero() };
            if p != col {
                m.swap_rows(col, p);
                det = -det;
            }
            det *= m[(col, col)].clone();
            let inv = m[(col, col)].clone();
            for r in col + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] / &inv;
                for c in col..m.cols {
                    let sub = &factor * &m[(col, c)];
                    m[(r, c)] -= sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero())?;
            m.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let d = m[(col, col)].clone();
            for c in 0..n {
                m[(col, c)] = &m[(col, c)] / &d;
                inv[(col, c)] = &inv[(col, c)] / &d;
            }
            for r in 0..n {
                if r != col && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in 0..n {
                        let s1 = &factor * &m[(col, c)];
                        m[(r, c)] -= s1;
                        let s2 = &factor * &inv[(col, c)];
                        inv[(r, c)] -= s2;
                    }
                }
            }
        }
        Some(inv)
    }

    /// For symmetric `self`, returns (P, diag) with Pᵀ·self·P = diag(diag).
    /// Classical congruence reduction; handles zero diagonals by adding a row
    /// with a nonzero mixed entry.
    pub fn congruence_diagonalize(&self) -> (RatMatrix, Vec<Rat>) {
        let n = self.rows;
        assert_eq!(self.rows, self.cols);
        let mut a = self.clone();
        let mut p = RatMatrix::identity(n);
        let mut k = 0;
        while k < n {
            if a[(k, k)].is_zero() {
                // Find i>k with a[i][i] != 0 to swap, else i with a[k][i] != 0 to mix in.
                if let Some(i) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                    a.swap_sym(k, i);
                    p.swap_cols(k, i);
                } else if let Some(i) = (k + 1..n).find(|&i| !a[(k, i)].is_zero()) {
                    // column op: col_k += col_i (and symmetric row op)
                    a.add_col_sym(k, i, &rint(1));
                    p.add_col(k, i, &rint(1));
                } else {
                    k += 1;
                    continue;
                }
                if a[(k, k)].is_zero() {
                    continue;
                }
            }
            let d = a[(k, k)].clone();
            for i in k + 1..n {
                if a[(k, i)].is_zero() {
                    continue;
                }
                let factor = -(&a[(k, i)] / &d);
                a.add_col_sym(i, k, &factor);
                p.add_col(i, k, &factor);
            }
            k += 1;
        }
        let diag = (0..n).map(|i| a[(i, i)].clone()).collect();
        (p, diag)
    }

    /// Signature (n_plus, n_minus, n_zero) of a symmetric matrix.
    pub fn signature(&self) -> (usize, usize, usize) {
        let (_, diag) = self.congruence_diagonalize();
        let mut sig = (0usize, 0usize, 0usize);
        for d in diag {
            if d.is_zero() {
                sig.2 += 1;
            } else if d.is_positive() {
                sig.0 += 1;
            } else {
                sig.1 += 1;
            }
        }
        sig
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let i = a * self.cols + c;
            let j = b * self.cols + c;
            self.elems.swap(i, j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            let i = r * self.cols + a;
            let j = r * self.cols + b;
            self.elems.swap(i, j);
        }
    }

    fn swap_sym(&mut self, a: usize, b: usize) {
        self.swap_rows(a, b);
        self.swap_cols(a, b);
    }

    fn add_col(&mut self, dst: usize, src: usize, factor: &Rat) {
        for r in 0..self.rows {
            let add = factor * &self[(r, src)];
            self[(r, dst)] += add;
        }
    }

    // col_dst += factor*col_src together with the symmetric row operation
    fn add_col_sym(&mut self, dst: usize, src: usize, factor: &Rat) {
        self.add_col(dst, src, factor);
        for c in 0..self.cols {
            let add = factor * &self[(src, c)];
            self[(dst, c)] += add;
        }
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| crate::rational::to_f64(&self[(i, j)])).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.elems[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.elems[i * self.cols + j]
    }
}

/// Stacks matrices vertically.
pub fn vstack(mats: &[&RatMatrix]) -> RatMatrix {
    assert!(!mats.is_empty());
    let cols = mats[0].cols;
    let rows: usize = mats.iter().map(|m| m.rows).sum();
    let mut out = RatMatrix::zeros(rows, cols);
    let mut r0 = 0;
    for m in mats {
        assert_eq!(m.cols, cols);
        for i in 0..m.rows {
            for j in 0..cols {
                out[(r0 + i, j)] = m[(i, j)].clone();
            }
        }
        r0 += m.rows;
    }
    out
}

pub fn is_one(x: &Rat) -> bool {
    x.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn rank_kernel_det() {
        let m = RatMatrix::from_rows(vec![
            vec![rint(1), rint(2), rint(3)],
            vec![rint(2), rint(4), rint(6)],
            vec![rint(0), rint(1), rint(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        let prod = m.mul_vec(&k[0]);
        assert!(prod.iter().all(|x| x.is_zero()));
        assert!(m.det().is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = RatMatrix::from_rows(vec![
            vec![rint(2), rint(1)],
            vec![rint(1), rint(1)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(2));
    }

    #[test]
    fn congruence_diagonalization_of_offdiagonal() {
        // [[0, 1/2], [1/2, 0]] (the x1*x2 form): signature (1,1,0)
        let m = RatMatrix::from_rows(vec![
            vec![rzero(), rat(1, 2)],
            vec![rat(1, 2), rzero()],
        ]);
        let (p, diag) = m.congruence_diagonalize();
        let again = p.transpose().mul(&m).mul(&p);
        for i in 0..2 {
            for j in 0..2 {
                if i == j {
                    assert_eq!(again[(i, j)], diag[i]);
                } else {
                    assert!(again[(i, j)].is_zero());
                }
            }
        }
        assert_eq!(m.signature(), (1, 1, 0));
    }
}
