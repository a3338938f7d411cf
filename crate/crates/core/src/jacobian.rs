//! The symbolic Jacobian engine. For an index selection i_1 < ... < i_{d-n},
//! J(x; i_1,...,i_{d-n}) is the determinant of the d x d matrix whose first
//! n rows are the gradient matrix of Q and whose remaining rows are the unit
//! vectors e_{i_1},...,e_{i_{d-n}}. Comparability of |J| with a monomial
//! drives the transversality-independent bilinear range: p >= max_j w_j + 3.

use crate::error::{CoreError, Result};
use crate::poly::{sym_det, MultiPoly};
use crate::quadform::QuadTuple;
use crate::rational::{rint, Rat};
use num_traits::Signed;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSelection {
    /// 1-based variable indices, strictly increasing.
    indices: Vec<usize>,
}

impl IndexSelection {
    pub fn new(d: usize, n: usize, indices: Vec<usize>) -> Result<Self> {
        if d < n {
            return Err(CoreError::Unsupported("selections require d >= n".into()));
        }
        if indices.len() != d - n {
            return Err(CoreError::DimensionMismatch(format!(
                "selection needs {} indices, got {}",
                d - n,
                indices.len()
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CoreError::Precondition("selection indices must be strictly increasing".into()));
        }
        if indices.iter().any(|&i| i < 1 || i > d) {
            return Err(CoreError::Precondition("selection indices must lie in 1..=d".into()));
        }
        Ok(IndexSelection { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ComparabilityVerdict {
    /// J is a single monomial c * prod x_j^{w_j}.
    ExactMonomial { coeff: String, w: Vec<u32> },
    /// J is a one-signed combination of squares of monomials, so |J| is
    /// bounded below by the square monomial recorded in `w`.
    LowerBoundMonomial { w: Vec<u32>, bound_certificate: String },
    IdenticallyZero,
    Undetermined,
}

#[derive(Debug, Clone)]
pub struct JacobianAnalysis {
    pub selection: IndexSelection,
    pub poly: MultiPoly,
    pub verdict: ComparabilityVerdict,
    /// max_j w_j for the usable verdicts.
    pub max_power: Option<u32>,
    /// The bilinear exponent threshold max_j w_j + 3.
    pub bilinear_p: Option<Rat>,
}

/// The symbolic determinant J for one selection.
pub fn jacobian_poly(q: &QuadTuple, sel: &IndexSelection) -> Result<MultiPoly> {
    let d = q.d();
    let n = q.n();
    if d < n {
        return Err(CoreError::Unsupported("jacobian requires d >= n".into()));
    }
    let grad = q.gradient_matrix();
    // Unit rows pick out their columns: expanding along them reduces the
    // d x d determinant to the n x n gradient minor on the complementary
    // columns, with the sign of the permutation that sorts the unit rows in.
    let selected: Vec<usize> = sel.indices.iter().map(|&i| i - 1).collect();
    let complement: Vec<usize> = (0..d).filter(|k| !selected.contains(k)).collect();
    let minor: Vec<Vec<MultiPoly>> = (0..n)
        .map(|j| complement.iter().map(|&k| grad[j][k].clone()).collect())
        .collect();
    let det = if n == 0 {
        MultiPoly::constant(d, rint(1))
    } else {
        sym_det(&minor)
    };
    // sign: expand the unit rows bottom-up. Removing the lowest unit row
    // first means earlier removals never shift the indices of the ones still
    // to come (they sit above and to the left), so unit row m at overall
    // 0-based position (n + m, selected[m]) contributes (-1)^{n+m+selected[m]}.
    let mut sign = 0usize;
    for (m, &col) in selected.iter().enumerate() {
        sign += n + m + col;
    }
    Ok(if sign % 2 == 1 { det.neg() } else { det })
}

/// Comparability classification of a Jacobian polynomial.
pub fn monomial_comparability(j: &MultiPoly) -> ComparabilityVerdict {
    if j.is_zero() {
        return ComparabilityVerdict::IdenticallyZero;
    }
    if j.num_terms() == 1 {
        let (e, c) = j.terms().next().unwrap();
        return ComparabilityVerdict::ExactMonomial {
            coeff: crate::rational::rat_string(c),
            w: e.clone(),
        };
    }
    // one-signed combination of squares of monomials
    let all_even = j.terms().all(|(e, _)| e.iter().all(|&p| p % 2 == 0));
    let all_pos = j.terms().all(|(_, c)| c.is_positive());
    let all_neg = j.terms().all(|(_, c)| c.is_negative());
    if all_even && (all_pos || all_neg) {
        // pick the square term whose own maximal exponent is smallest;
        // ties go to the lexicographically leading monomial (earliest
        // variables first), matching the usual choice of witness factor
        let mut best: Option<(&Vec<u32>, u32)> = None;
        for (e, _) in j.terms() {
            let maxp = e.iter().copied().max().unwrap_or(0);
            match best {
                Some((be, bm)) if bm < maxp || (bm == maxp && be >= e) => {}
                _ => best = Some((e, maxp)),
            }
        }
        let (e, _) = best.unwrap();
        return ComparabilityVerdict::LowerBoundMonomial {
            w: e.clone(),
            bound_certificate: format!(
                "{} combination of squares; |J| >= |c| * {}",
                if all_pos { "nonnegative" } else { "nonpositive" },
                MultiPoly::monomial(e.len(), e.clone(), rint(1)).to_display()
            ),
        };
    }
    ComparabilityVerdict::Undetermined
}

fn analysis_for(q: &QuadTuple, sel: IndexSelection) -> Result<JacobianAnalysis> {
    let poly = jacobian_poly(q, &sel)?;
    let verdict = monomial_comparability(&poly);
    let max_power = match &verdict {
        ComparabilityVerdict::ExactMonomial { w, .. } => w.iter().copied().max(),
        ComparabilityVerdict::LowerBoundMonomial { w, .. } => w.iter().copied().max(),
        _ => None,
    };
    let bilinear_p = max_power.map(|m| rint(m as i64) + rint(3));
    Ok(JacobianAnalysis { selection: sel, poly, verdict, max_power, bilinear_p })
}

pub fn analyze_selection(q: &QuadTuple, indices: Vec<usize>) -> Result<JacobianAnalysis> {
    let sel = IndexSelection::new(q.d(), q.n(), indices)?;
    analysis_for(q, sel)
}

/// All selections, in lexicographic order.
pub fn all_selections(d: usize, n: usize) -> Vec<Vec<usize>> {
    crate::invariants::combinations(d, d - n)
        .into_iter()
        .map(|c| c.into_iter().map(|i| i + 1).collect())
        .collect()
}

/// Exhaustive scan of the C(d, d-n) selections, minimizing the maximal
/// factor power among usable verdicts; ties go to the lexicographically
/// smallest selection. Falls back to the first selection's analysis when
/// nothing is usable.
pub fn best_selection(q: &QuadTuple) -> Result<JacobianAnalysis> {
    let d = q.d();
    let n = q.n();
    if d < n {
        return Err(CoreError::Unsupported("best_selection requires d >= n".into()));
    }
    let mut best: Option<JacobianAnalysis> = None;
    let mut fallback: Option<JacobianAnalysis> = None;
    for indices in all_selections(d, n) {
        let a = analyze_selection(q, indices)?;
        match &a.verdict {
            ComparabilityVerdict::IdenticallyZero | ComparabilityVerdict::Undetermined => {
                if fallback.is_none() {
                    fallback = Some(a);
                }
            }
            _ => {
                let mp = a.max_power.unwrap();
                match &best {
                    Some(b) if b.max_power.unwrap() <= mp => {}
                    _ => best = Some(a),
                }
            }
        }
    }
    Ok(best.or(fallback).expect("at least one selection exists when d >= n"))
}

/// The Jacobian of the bilinear change of variables: J evaluated formally at
/// the difference vector. The polynomial is identical; its variables are to
/// be read as (xi'_k - xi_k).
pub fn bilinear_change_of_variables_jacobian(q: &QuadTuple, sel: &IndexSelection) -> Result<MultiPoly> {
    jacobian_poly(q, sel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::sym_det;
    use crate::rational::{rat, rzero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn degenerate() -> QuadTuple {
        QuadTuple::from_monomials(
            3,
            vec![vec![(0, 0, rint(1))], vec![(1, 1, rint(1)), (0, 2, rint(1))]],
        )
        .unwrap()
    }

    fn four_cycle() -> QuadTuple {
        QuadTuple::from_monomials(
            4,
            vec![
                vec![(0, 1, rint(1))],
                vec![(1, 2, rint(1))],
                vec![(2, 3, rint(1))],
                vec![(3, 0, rint(1))],
            ],
        )
        .unwrap()
    }

    fn hyperbolic() -> QuadTuple {
        QuadTuple::from_monomials(
            2,
            vec![vec![(0, 1, rint(1))], vec![(0, 0, rint(1)), (1, 1, rint(-1))]],
        )
        .unwrap()
    }

    #[test]
    fn paper_jacobians() {
        let q = degenerate();
        let j2 = analyze_selection(&q, vec![2]).unwrap();
        assert_eq!(j2.poly, MultiPoly::monomial(3, vec![2, 0, 0], rint(-2)));
        let j3 = analyze_selection(&q, vec![3]).unwrap();
        assert_eq!(j3.poly, MultiPoly::monomial(3, vec![1, 1, 0], rint(4)));
        match &j3.verdict {
            ComparabilityVerdict::ExactMonomial { w, .. } => assert_eq!(w, &vec![1, 1, 0]),
            other => panic!("expected exact monomial, got {other:?}"),
        }
    }

    #[test]
    fn four_cycle_is_identically_zero() {
        let j = analyze_selection(&four_cycle(), vec![]).unwrap();
        assert!(j.poly.is_zero());
        assert_eq!(j.verdict, ComparabilityVerdict::IdenticallyZero);
        let best = best_selection(&four_cycle()).unwrap();
        assert_eq!(best.verdict, ComparabilityVerdict::IdenticallyZero);
        assert!(best.bilinear_p.is_none());
    }

    #[test]
    fn hyperbolic_lower_bound() {
        let j = analyze_selection(&hyperbolic(), vec![]).unwrap();
        // det [[x2, x1], [2x1, -2x2]] = -2 x2^2 - 2 x1^2
        let expected = MultiPoly::monomial(2, vec![2, 0], rint(-2))
            .add(&MultiPoly::monomial(2, vec![0, 2], rint(-2)));
        assert_eq!(j.poly, expected);
        match &j.verdict {
            ComparabilityVerdict::LowerBoundMonomial { w, .. } => {
                assert_eq!(w, &vec![2, 0], "witness square should be x1^2");
            }
            other => panic!("expected lower bound, got {other:?}"),
        }
        assert_eq!(j.max_power, Some(2));
        assert_eq!(j.bilinear_p, Some(rint(5)));
    }

    #[test]
    fn best_selection_on_the_degenerate_surface() {
        let b = best_selection(&degenerate()).unwrap();
        assert_eq!(b.selection.indices(), &[3]);
        assert_eq!(b.max_power, Some(1));
        assert_eq!(b.bilinear_p, Some(rint(4)));
    }

    #[test]
    fn case1_monomial_family() {
        // (x1^2, x1 x2): w = (2, 0), bilinear p = 5
        let q = QuadTuple::from_monomials(2, vec![vec![(0, 0, rint(1))], vec![(0, 1, rint(1))]]).unwrap();
        let b = best_selection(&q).unwrap();
        assert_eq!(b.selection.indices(), &[] as &[usize]);
        match &b.verdict {
            ComparabilityVerdict::ExactMonomial { w, .. } => assert_eq!(w, &vec![2, 0]),
            other => panic!("unexpected verdict {other:?}"),
        }
        assert_eq!(b.bilinear_p, Some(rint(5)));
    }

    #[test]
    fn matches_numeric_determinant_at_random_points() {
        let q = degenerate();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for sel_idx in [vec![1], vec![2], vec![3]] {
            let sel = IndexSelection::new(3, 2, sel_idx).unwrap();
            let j = jacobian_poly(&q, &sel).unwrap();
            for _ in 0..100 {
                let point: Vec<Rat> =
                    (0..3).map(|_| rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9))).collect();
                // numeric determinant of the evaluated matrix
                let grad = q.gradient_matrix();
                let mut rows: Vec<Vec<Rat>> = grad
                    .iter()
                    .map(|row| row.iter().map(|p| p.eval(&point)).collect())
                    .collect();
                for &i in sel.indices() {
                    let mut e = vec![rzero(); 3];
                    e[i - 1] = rint(1);
                    rows.push(e);
                }
                let num = crate::matrix::RatMatrix::from_rows(rows).det();
                assert_eq!(j.eval(&point), num);
            }
        }
    }

    #[test]
    fn homogeneity_and_row_permutation_invariance() {
        let q = degenerate();
        for sel_idx in [vec![1], vec![2], vec![3]] {
            let j = analyze_selection(&q, sel_idx).unwrap();
            if !j.poly.is_zero() {
                for (e, _) in j.poly.terms() {
                    assert_eq!(e.iter().sum::<u32>(), 2, "total degree must equal n");
                }
            }
        }
        // permuting the forms must not change the best max power
        let swapped = QuadTuple::from_monomials(
            3,
            vec![vec![(1, 1, rint(1)), (0, 2, rint(1))], vec![(0, 0, rint(1))]],
        )
        .unwrap();
        assert_eq!(
            best_selection(&q).unwrap().max_power,
            best_selection(&swapped).unwrap().max_power
        );
    }

    #[test]
    fn unit_row_swap_flips_sign() {
        // build the full matrix by hand with two unit rows swapped and
        // compare against the canonical selection determinant
        let q = QuadTuple::from_monomials(
            4,
            vec![vec![(0, 0, rint(1))], vec![(0, 1, rint(1))]],
        )
        .unwrap();
        let sel = IndexSelection::new(4, 2, vec![3, 4]).unwrap();
        let j = jacobian_poly(&q, &sel).unwrap();
        let grad = q.gradient_matrix();
        let unit = |i: usize| -> Vec<MultiPoly> {
            (0..4)
                .map(|k| {
                    if k == i {
                        MultiPoly::constant(4, rint(1))
                    } else {
                        MultiPoly::zero(4)
                    }
                })
                .collect()
        };
        let swapped = sym_det(&[grad[0].clone(), grad[1].clone(), unit(3), unit(2)]);
        assert_eq!(swapped, j.neg());
    }

    #[test]
    fn lemma_style_difference_jacobian() {
        // the (2.13)-style family with b = (1, 0, 0): selection {1} gives
        // 4 x2 x3, read at the difference vector
        let q = QuadTuple::from_monomials(
            3,
            vec![
                vec![(0, 0, rint(1)), (1, 1, rint(1))],
                vec![(2, 2, rint(1)), (0, 0, rint(1))],
            ],
        )
        .unwrap();
        let sel = IndexSelection::new(3, 2, vec![1]).unwrap();
        let j = bilinear_change_of_variables_jacobian(&q, &sel).unwrap();
        assert_eq!(j, MultiPoly::monomial(3, vec![0, 1, 1], rint(4)));

        // 1-D parabola: 2(x1' - x1)
        let p = QuadTuple::from_monomials(1, vec![vec![(0, 0, rint(1))]]).unwrap();
        let sel = IndexSelection::new(1, 1, vec![]).unwrap();
        let j = bilinear_change_of_variables_jacobian(&p, &sel).unwrap();
        assert_eq!(j, MultiPoly::linear(1, 0, rint(2)));

        // zero propagates
        let sel0 = IndexSelection::new(4, 4, vec![]).unwrap();
        let j0 = bilinear_change_of_variables_jacobian(&four_cycle(), &sel0).unwrap();
        assert!(j0.is_zero());
    }
}
