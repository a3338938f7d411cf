//! Minimal rank over the projective matrix pencil {y_1 A_1 + ... + y_n A_n}.
//! For n <= 2 the value is exact: rank drops happen at real roots of the
//! minor gcds of A_1 + t A_2, certified by Sturm sequences; the direction
//! (0,1) is checked separately. For n >= 3 a structured-plus-random search
//! gives an upper bound flagged inexact.

use crate::matrix::RatMatrix;
use crate::quadform::QuadTuple;
use crate::rational::{rint, rzero, to_f64, Rat};
use crate::unipoly::UniPoly;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct PencilResult {
    pub rank: usize,
    /// Direction y achieving the rank. Exact rational when `witness_exact`.
    pub witness: Vec<Rat>,
    /// Whether `rank` is certified to be the true minimum.
    pub exact: bool,
    /// Whether the witness direction itself is exact (an approximate witness
    /// can accompany an exact rank when the minimizing root is irrational).
    pub witness_exact: bool,
    pub log: String,
}

pub fn min_rank_pencil(q: &QuadTuple) -> PencilResult {
    match q.n() {
        1 => {
            let r = q.form(0).as_matrix().rank();
            PencilResult {
                rank: r,
                witness: vec![rint(1)],
                exact: true,
                witness_exact: true,
                log: "single form: rank of its matrix".into(),
            }
        }
        2 => pencil_rank_n2(q),
        _ => pencil_search(q, 0),
    }
}

/// Combinations of k indices from 0..n in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Lagrange interpolation through (x_i, y_i).
fn interpolate(points: &[(Rat, Rat)]) -> UniPoly {
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = UniPoly::constant(rint(1));
        let mut denom = rint(1);
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&UniPoly::linear(-xj.clone(), rint(1)));
            denom *= xi - xj;
        }
        acc = acc.add(&basis.scale(&(yi / &denom)));
    }
    acc
}

/// det of the (rows, cols) submatrix of A1 + t A2, as a polynomial in t,
/// obtained by evaluation at deg+1 points and interpolation.
fn minor_poly(a1: &RatMatrix, a2: &RatMatrix, rows: &[usize], cols: &[usize]) -> UniPoly {
    let k = rows.len();
    let npts = k + 1;
    let mut pts = Vec::with_capacity(npts);
    for m in 0..npts {
        let t = rint(m as i64);
        let sub = RatMatrix::from_fn(k, k, |i, j| {
            &a1[(rows[i], cols[j])] + &t * &a2[(rows[i], cols[j])]
        });
        pts.push((t, sub.det()));
    }
    interpolate(&pts)
}

/// gcd of all k x k minors of A1 + t A2 (zero polynomial if all vanish).
pub(crate) fn minor_gcd(a1: &RatMatrix, a2: &RatMatrix, k: usize) -> UniPoly {
    let d = a1.rows;
    let mut g = UniPoly::zero();
    for rows in combinations(d, k) {
        for cols in combinations(d, k) {
            let m = minor_poly(a1, a2, &rows, &cols);
            g = if g.is_zero() { m } else { g.gcd(&m) };
            if g.degree() == Some(0) {
                return g; // constant: no common roots possible
            }
        }
    }
    g
}

fn pencil_rank_n2(q: &QuadTuple) -> PencilResult {
    let d = q.d();
    let a1 = q.form(0).as_matrix();
    let a2 = q.form(1).as_matrix();

    // Direction (0, 1) first.
    let rank_a2 = a2.rank();
    let mut best = PencilResult {
        rank: rank_a2,
        witness: vec![rzero(), rint(1)],
        exact: true,
        witness_exact: true,
        log: String::new(),
    };

    // Affine chart y = (1, t): rank <= r somewhere iff the gcd of all
    // (r+1)-minors vanishes somewhere (identically, or at a real root).
    for r in 0..=d {
        if r >= best.rank {
            break;
        }
        if r == d {
            break;
        }
        let g = minor_gcd(a1, a2, r + 1);
        let achieved = if g.is_zero() {
            // all (r+1)-minors vanish identically: rank <= r for every t
            Some((rint(0), true))
        } else if g.has_real_root() {
            let rats = g.rational_roots();
            if let Some(t0) = rats.first() {
                Some((t0.clone(), true))
            } else {
                let t0 = g
                    .isolate_real_root(80)
                    .expect("Sturm said a real root exists");
                Some((t0, false))
            }
        } else {
            None
        };
        if let Some((t0, exact_witness)) = achieved {
            best = PencilResult {
                rank: r,
                witness: vec![rint(1), t0],
                exact: true,
                witness_exact: exact_witness,
                log: format!(
                    "minor gcd of order {} {}",
                    r + 1,
                    if exact_witness { "has a rational root" } else { "has an irrational real root (Sturm-isolated)" }
                ),
            };
            break;
        }
    }
    if best.log.is_empty() {
        best.log = "minimum attained at the (0,1) direction or generic".into();
    }
    best
}

/// Upper-bound search for n >= 3: coordinate directions, +-1 two-sparse
/// combinations, then seeded random rational directions. Exact only when the
/// zero matrix is hit.
fn pencil_search(q: &QuadTuple, seed: u64) -> PencilResult {
    let n = q.n();
    let combo_rank = |y: &[Rat]| -> usize {
        let mut acc = RatMatrix::zeros(q.d(), q.d());
        for (j, c) in y.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = q.form(j).as_matrix();
            for i in 0..q.d() {
                for k in 0..q.d() {
                    let add = c * &m[(i, k)];
                    acc[(i, k)] += add;
                }
            }
        }
        acc.rank()
    };

    let mut cands: Vec<Vec<Rat>> = Vec::new();
    for j in 0..n {
        let mut y = vec![rzero(); n];
        y[j] = rint(1);
        cands.push(y);
    }
    for i in 0..n {
        for j in i + 1..n {
            for s in [1i64, -1] {
                let mut y = vec![rzero(); n];
                y[i] = rint(1);
                y[j] = rint(s);
                cands.push(y);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let y: Vec<Rat> = (0..n).map(|_| rint(rng.gen_range(-4i64..=4))).collect();
        if y.iter().all(|c| c.is_zero()) {
            continue;
        }
        cands.push(y);
    }

    let mut best_rank = usize::MAX;
    let mut best_y = vec![rint(1)];
    for y in cands {
        let r = combo_rank(&y);
        if r < best_rank {
            best_rank = r;
            best_y = y;
            if best_rank == 0 {
                break;
            }
        }
    }
    PencilResult {
        rank: best_rank,
        witness: best_y,
        exact: best_rank == 0,
        witness_exact: true,
        log: format!("structured+random search over {} directions (n >= 3: upper bound)", 64 + n + n * (n - 1)),
    }
}

/// Float view of a pencil direction, for downstream float constructions.
pub fn witness_f64(res: &PencilResult) -> Vec<f64> {
    res.witness.iter().map(to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn degenerate() -> QuadTuple {
        QuadTuple::from_monomials(
            3,
            vec![vec![(0, 0, rint(1))], vec![(1, 1, rint(1)), (0, 2, rint(1))]],
        )
        .unwrap()
    }

    #[test]
    fn paper_examples() {
        // (x1^2, x2^2 + x1 x3): rank 1 at y = (1, 0)
        let r = min_rank_pencil(&degenerate());
        assert_eq!(r.rank, 1);
        assert!(r.exact);

        // (x1 x2, x1^2 - x2^2): every nonzero member invertible
        let hyp = QuadTuple::from_monomials(
            2,
            vec![vec![(0, 1, rint(1))], vec![(0, 0, rint(1)), (1, 1, rint(-1))]],
        )
        .unwrap();
        let r = min_rank_pencil(&hyp);
        assert_eq!(r.rank, 2);
        assert!(r.exact);

        // (x1^2, x2^2): rank 1
        let diag = QuadTuple::from_monomials(
            2,
            vec![vec![(0, 0, rint(1))], vec![(1, 1, rint(1))]],
        )
        .unwrap();
        let r = min_rank_pencil(&diag);
        assert_eq!(r.rank, 1);
        assert!(r.exact && r.witness_exact);
    }

    #[test]
    fn irrational_root_is_certified() {
        // (x1^2 + x2^2, x3^2 + x1^2 + 2x2^2 + 2*x1x2) has pencil roots from
        // a quadratic with irrational roots; minimum rank is 2.
        let q = QuadTuple::from_monomials(
            3,
            vec![
                vec![(0, 0, rint(1)), (1, 1, rint(1))],
                vec![(2, 2, rint(1)), (0, 0, rint(1)), (1, 1, rint(2)), (0, 1, rint(2))],
            ],
        )
        .unwrap();
        let r = min_rank_pencil(&q);
        assert_eq!(r.rank, 2);
        assert!(r.exact);
        // verify numerically at the isolated witness
        let y = witness_f64(&r);
        let a1 = q.form(0).as_matrix().to_f64();
        let a2 = q.form(1).as_matrix().to_f64();
        let mut b = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i][j] = y[0] * a1[i][j] + y[1] * a2[i][j];
            }
        }
        // determinant should be ~0 at a rank-2 point
        let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
            - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        assert!(det.abs() < 1e-9, "det at witness = {det}");
    }

    #[test]
    fn dependent_forms_reach_rank_zero() {
        let q = QuadTuple::from_monomials(
            2,
            vec![vec![(0, 0, rint(1))], vec![(0, 0, rint(2))]],
        )
        .unwrap();
        let r = min_rank_pencil(&q);
        assert_eq!(r.rank, 0);
        assert!(r.exact);
        // witness should kill the pencil: y = (1, t0) with 1 + 2 t0 = 0
        assert_eq!(r.witness, vec![rint(1), rat(-1, 2)]);
    }

    #[test]
    fn invariance_under_invertible_changes() {
        let q = degenerate();
        let m1 = RatMatrix::from_rows(vec![
            vec![rint(1), rint(1), rzero()],
            vec![rzero(), rint(1), rint(2)],
            vec![rint(1), rzero(), rint(1)],
        ]);
        assert!(m1.inverse().is_some());
        let m2 = RatMatrix::from_rows(vec![vec![rint(2), rint(1)], vec![rint(1), rint(1)]]);
        assert!(m2.inverse().is_some());
        let q2 = q.change_of_variables(&m1, &m2).unwrap();
        assert_eq!(min_rank_pencil(&q2).rank, min_rank_pencil(&q).rank);
    }
}
