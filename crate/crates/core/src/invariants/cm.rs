//! The codimension-2 nondegeneracy check for d = 3, n = 2, decided through
//! the equivalence: given full stacked rank, the condition holds iff the
//! pencil minimum is 2 and no rank-2 restriction collapses to one variable.
//! The second invariant is decided exactly by analyzing the kernels of the
//! singular pencil members: a collapse exists iff some singular member
//! y1 A1 + y2 A2 has a kernel vector w with Q1(w) = Q2(w) = 0.
//!
//! On the chart y = (1, t) that reduces, for every t, to "Q2 vanishes on
//! ker(A1 + t A2)" (the pencil relation kills Q1 + t Q2 on the kernel), so
//! the whole decision lives in gcds and Sturm chains over Q[t].

use super::dinv::rational_isotropic_vector;
use super::pencil::{min_rank_pencil, minor_gcd};
use crate::error::{CoreError, Result};
use crate::matrix::{vstack, RatMatrix};
use crate::quadform::QuadTuple;
use crate::rational::{rint, rzero, Rat};
use crate::unipoly::UniPoly;
use num_traits::Zero;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CmMethod {
    #[serde(rename = "characterization_3_2")]
    Characterization32,
    #[serde(rename = "integral_probe")]
    IntegralProbe,
}

#[derive(Debug, Clone, Serialize)]
pub struct CmVerdict {
    /// None = inconclusive.
    pub satisfied: Option<bool>,
    pub method: CmMethod,
    /// (gamma, integral estimate, divergence flag) rows, when a probe ran.
    pub gamma_scan: Vec<(f64, f64, bool)>,
    pub log: String,
}

#[derive(Debug, Clone)]
pub enum Dim22Decision {
    /// No rank-2 restriction uses fewer than 2 variables.
    ExactlyTwo,
    /// Some restriction collapses; a rational certificate (w, u) spans the
    /// collapsing plane when available.
    AtMostOne { witness: Option<(Vec<Rat>, Vec<Rat>)> },
    Inconclusive(String),
}

/// Restriction of a symmetric form to the span of `basis` vectors.
fn restrict(a: &RatMatrix, basis: &[Vec<Rat>]) -> RatMatrix {
    let k = basis.len();
    RatMatrix::from_fn(k, k, |i, j| {
        let av = a.mul_vec(&basis[j]);
        let mut acc = rzero();
        for (x, y) in basis[i].iter().zip(&av) {
            acc += x * y;
        }
        acc
    })
}

/// Does the form `a` restricted to span(basis) have a nonzero real zero?
/// Returns (exists, rational witness in ambient coordinates if found).
fn restricted_real_zero(a: &RatMatrix, basis: &[Vec<Rat>]) -> (bool, Option<Vec<Rat>>) {
    if basis.is_empty() {
        return (false, None);
    }
    let r = restrict(a, basis);
    let lift = |coeffs: &[Rat]| -> Vec<Rat> {
        let d = basis[0].len();
        let mut v = vec![rzero(); d];
        for (c, b) in coeffs.iter().zip(basis) {
            for i in 0..d {
                v[i] += c * &b[i];
            }
        }
        v
    };
    if r.is_zero() {
        let mut e = vec![rzero(); basis.len()];
        e[0] = rint(1);
        return (true, Some(lift(&e)));
    }
    if basis.len() == 1 {
        return if r[(0, 0)].is_zero() {
            (true, Some(basis[0].clone()))
        } else {
            (false, None)
        };
    }
    let (pos, neg, zero) = r.signature();
    let definite = zero == 0 && (pos == 0 || neg == 0);
    if definite {
        return (false, None);
    }
    match rational_isotropic_vector(&r) {
        Some(coeffs) => (true, Some(lift(&coeffs))),
        None => (true, None),
    }
}

/// Completes an isotropic kernel vector w into the certificate plane (w, u)
/// with both forms vanishing as forms *and* pairings on the plane.
fn complete_certificate(q: &QuadTuple, w: &[Rat]) -> Option<(Vec<Rat>, Vec<Rat>)> {
    let rows: Vec<Vec<Rat>> = q
        .forms()
        .iter()
        .map(|f| f.as_matrix().mul_vec(w))
        .collect();
    let m = RatMatrix::from_rows(rows);
    let kernel = m.kernel();
    for u in kernel {
        let pair = RatMatrix::from_rows(vec![w.to_vec(), u.clone()]);
        if pair.rank() == 2 {
            return Some((w.to_vec(), u));
        }
    }
    None
}

pub fn d22_decision_3x2(q: &QuadTuple) -> Dim22Decision {
    assert!(q.d() == 3 && q.n() == 2);
    let a1 = q.form(0).as_matrix().clone();
    let a2 = q.form(1).as_matrix().clone();

    let mut found: Option<Option<(Vec<Rat>, Vec<Rat>)>> = None; // Some(witness?) once a collapse is known
    let mut note_inconclusive: Option<String> = None;

    let record = |witness: Option<Vec<Rat>>, found: &mut Option<Option<(Vec<Rat>, Vec<Rat>)>>, q: &QuadTuple| {
        let cert = witness.and_then(|w| complete_certificate(q, &w));
        match found {
            Some(Some(_)) => {}
            _ => {
                if cert.is_some() {
                    *found = Some(cert);
                } else if found.is_none() {
                    *found = Some(None);
                }
            }
        }
    };

    // Direction (0, 1): kernel of A2, Q1 restricted.
    if a2.rank() < 3 {
        let k = a2.kernel();
        let (exists, wit) = restricted_real_zero(&a1, &k);
        if exists {
            record(wit, &mut found, q);
        }
    }

    // Chart y = (1, t).
    let c = char_poly_det(&a1, &a2); // det(A1 + t A2)
    let m2 = minor_gcd(&a1, &a2, 2);

    if !c.is_zero() {
        // rational roots: exact kernel analysis
        for t0 in c.rational_roots() {
            let b = pencil_at(&a1, &a2, &t0);
            let k = b.kernel();
            let (exists, wit) = restricted_real_zero(&a2, &k);
            if exists {
                record(wit, &mut found, q);
            }
        }
        // irrational roots with 1-dimensional kernel: adjugate columns
        let adj = adjugate_cols(&a1, &a2);
        let mut h = c.clone();
        for col in &adj {
            let psi = quadform_on_polyvec(&a2, col);
            h = h.gcd(&psi);
            if h.degree() == Some(0) {
                break;
            }
        }
        let h = h.squarefree_part();
        if h.degree().map(|d| d >= 1).unwrap_or(false) {
            let m2sf = m2.squarefree_part();
            let common = h.gcd(&m2sf);
            let h1 = if common.degree().map(|d| d >= 1).unwrap_or(false) {
                h.divrem(&common).0
            } else {
                h.clone()
            };
            if h1.has_real_root() && found.is_none() {
                // roots here are irrational (rational ones were handled above
                // and are a subset; re-flagging them is harmless)
                found = Some(None);
            }
        }
        // irrational points where the kernel has dimension >= 2
        if found.is_none() {
            let gm = c.gcd(&m2).squarefree_part();
            if gm.degree().map(|d| d >= 1).unwrap_or(false) {
                let real = gm.count_real_roots();
                let rational = gm.rational_roots().len();
                if real > rational {
                    note_inconclusive = Some(
                        "singular pencil member with kernel dimension >= 2 at an irrational parameter".into(),
                    );
                }
            }
        }
    } else {
        // every member of the chart is singular
        let r_gen = if !minor_gcd(&a1, &a2, 2).is_zero() || !m2.is_zero() {
            2
        } else if !minor_gcd(&a1, &a2, 1).is_zero() {
            1
        } else {
            0
        };
        match r_gen {
            0 => {
                // both forms vanish identically
                let w = vec![rint(1), rzero(), rzero()];
                record(Some(w), &mut found, q);
            }
            1 => {
                // all members multiples of a common rank-one square: both
                // forms vanish on the complement plane of v
                let v = common_rank_one_direction(&a1, &a2);
                match v {
                    Some(v) => {
                        let vrow = RatMatrix::from_rows(vec![v]);
                        let plane = vrow.kernel();
                        if plane.len() >= 2 {
                            found = Some(Some((plane[0].clone(), plane[1].clone())));
                        } else {
                            record(plane.first().cloned(), &mut found, q);
                        }
                    }
                    None => {
                        note_inconclusive = Some("rank-one pencil without a common direction".into());
                    }
                }
            }
            _ => {
                // generic kernel is one-dimensional and varies with t
                let adj = adjugate_cols(&a1, &a2);
                let mut g = UniPoly::zero();
                let mut all_zero_cols = true;
                for col in &adj {
                    if col.iter().any(|p| !p.is_zero()) {
                        all_zero_cols = false;
                    }
                    let psi = quadform_on_polyvec(&a2, col);
                    g = if g.is_zero() { psi } else { g.gcd(&psi) };
                }
                if all_zero_cols {
                    note_inconclusive = Some("adjugate vanishes identically with generic rank 2".into());
                } else if g.is_zero() {
                    // kernel isotropic for almost every t: rational certificate
                    for t_int in 1..20i64 {
                        let t0 = rint(t_int);
                        let b = pencil_at(&a1, &a2, &t0);
                        let k = b.kernel();
                        let (exists, wit) = restricted_real_zero(&a2, &k);
                        if exists {
                            record(wit, &mut found, q);
                            break;
                        }
                    }
                    if found.is_none() {
                        note_inconclusive = Some("identically isotropic kernel but no rational sample verified".into());
                    }
                } else {
                    for t0 in g.rational_roots() {
                        let b = pencil_at(&a1, &a2, &t0);
                        let k = b.kernel();
                        let (exists, wit) = restricted_real_zero(&a2, &k);
                        if exists {
                            record(wit, &mut found, q);
                        }
                    }
                    if found.is_none() {
                        let m2sf = m2.squarefree_part();
                        let gsf = g.squarefree_part();
                        let common = gsf.gcd(&m2sf);
                        let g1 = if common.degree().map(|d| d >= 1).unwrap_or(false) {
                            gsf.divrem(&common).0
                        } else {
                            gsf
                        };
                        if g1.has_real_root() {
                            found = Some(None);
                        }
                    }
                    if found.is_none() {
                        let gm = m2.squarefree_part();
                        if gm.degree().map(|d| d >= 1).unwrap_or(false)
                            && gm.count_real_roots() > gm.rational_roots().len()
                        {
                            note_inconclusive =
                                Some("rank <= 1 pencil member at an irrational parameter".into());
                        }
                    }
                }
            }
        }
    }

    match (found, note_inconclusive) {
        (Some(wit), _) => Dim22Decision::AtMostOne { witness: wit },
        (None, Some(why)) => Dim22Decision::Inconclusive(why),
        (None, None) => Dim22Decision::ExactlyTwo,
    }
}

fn pencil_at(a1: &RatMatrix, a2: &RatMatrix, t: &Rat) -> RatMatrix {
    RatMatrix::from_fn(a1.rows, a1.cols, |i, j| &a1[(i, j)] + t * &a2[(i, j)])
}

/// det(A1 + t A2) by evaluation/interpolation.
fn char_poly_det(a1: &RatMatrix, a2: &RatMatrix) -> UniPoly {
    let d = a1.rows;
    let pts: Vec<(Rat, Rat)> = (0..=d as i64)
        .map(|m| {
            let t = rint(m);
            (t.clone(), pencil_at(a1, a2, &t).det())
        })
        .collect();
    lagrange(&pts)
}

fn lagrange(points: &[(Rat, Rat)]) -> UniPoly {
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

/// Columns of adj(A1 + t A2) as vectors of polynomials (3x3 only).
fn adjugate_cols(a1: &RatMatrix, a2: &RatMatrix) -> Vec<Vec<UniPoly>> {
    assert_eq!(a1.rows, 3);
    let entry = |i: usize, j: usize| -> UniPoly {
        UniPoly::linear(a1[(i, j)].clone(), a2[(i, j)].clone())
    };
    // adj[i][j] = (-1)^{i+j} * minor_{j,i}
    let minor = |r: usize, c: usize| -> UniPoly {
        let rs: Vec<usize> = (0..3).filter(|&x| x != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&x| x != c).collect();
        let m00 = entry(rs[0], cs[0]);
        let m01 = entry(rs[0], cs[1]);
        let m10 = entry(rs[1], cs[0]);
        let m11 = entry(rs[1], cs[1]);
        m00.mul(&m11).sub(&m01.mul(&m10))
    };
    (0..3)
        .map(|j| {
            (0..3)
                .map(|i| {
                    let m = minor(j, i);
                    if (i + j) % 2 == 1 {
                        m.neg()
                    } else {
                        m
                    }
                })
                .collect()
        })
        .collect()
}

/// Q(w(t)) for a polynomial vector w(t) and a form matrix.
fn quadform_on_polyvec(a: &RatMatrix, w: &[UniPoly]) -> UniPoly {
    let d = a.rows;
    let mut acc = UniPoly::zero();
    for i in 0..d {
        for j in 0..d {
            if a[(i, j)].is_zero() {
                continue;
            }
            acc = acc.add(&w[i].mul(&w[j]).scale(&a[(i, j)]));
        }
    }
    acc
}

/// If every pencil member has rank <= 1, both matrices are multiples of a
/// common v vᵀ; extract v.
fn common_rank_one_direction(a1: &RatMatrix, a2: &RatMatrix) -> Option<Vec<Rat>> {
    for a in [a1, a2] {
        if a.is_zero() {
            continue;
        }
        for j in 0..a.cols {
            let col = a.col(j);
            if col.iter().any(|x| !x.is_zero()) {
                return Some(col);
            }
        }
    }
    None
}

/// The d = 3, n = 2 nondegeneracy verdict via the exact characterization.
pub fn cm_check_3_2(q: &QuadTuple) -> Result<CmVerdict> {
    if q.d() != 3 || q.n() != 2 {
        return Err(CoreError::Precondition("cm_check_3_2 requires d = 3, n = 2".into()));
    }
    let mats: Vec<&RatMatrix> = q.forms().iter().map(|f| f.as_matrix()).collect();
    let stacked_rank = vstack(&mats).rank();
    if stacked_rank != 3 {
        return Err(CoreError::Precondition(format!(
            "characterization requires full stacked rank 3 (the d_{{3,2}} hypothesis); got {stacked_rank}"
        )));
    }
    let pencil = min_rank_pencil(q);
    if !pencil.exact {
        return Ok(CmVerdict {
            satisfied: None,
            method: CmMethod::Characterization32,
            gamma_scan: vec![],
            log: "pencil minimum inexact".into(),
        });
    }
    if pencil.rank != 2 {
        return Ok(CmVerdict {
            satisfied: Some(false),
            method: CmMethod::Characterization32,
            gamma_scan: vec![],
            log: format!("pencil minimum is {} (need 2)", pencil.rank),
        });
    }
    match d22_decision_3x2(q) {
        Dim22Decision::ExactlyTwo => Ok(CmVerdict {
            satisfied: Some(true),
            method: CmMethod::Characterization32,
            gamma_scan: vec![],
            log: "pencil minimum 2 and every rank-2 restriction keeps 2 variables".into(),
        }),
        Dim22Decision::AtMostOne { .. } => Ok(CmVerdict {
            satisfied: Some(false),
            method: CmMethod::Characterization32,
            gamma_scan: vec![],
            log: "a rank-2 restriction collapses to at most one variable".into(),
        }),
        Dim22Decision::Inconclusive(why) => Ok(CmVerdict {
            satisfied: None,
            method: CmMethod::Characterization32,
            gamma_scan: vec![],
            log: why,
        }),
    }
}

/// Heuristic quadrature probe of the defining spherical integral at
/// resolutions N and 4N; the divergence flag fires when refinement grows the
/// estimate by more than a factor of 2.
pub fn cm_integral_probe(q: &QuadTuple, gamma: f64, sphere_nodes: usize) -> Result<(f64, bool)> {
    let n = q.n();
    let d = q.d();
    if !(gamma > 0.0 && gamma < n as f64 / d as f64) {
        return Err(CoreError::Precondition(format!(
            "gamma must lie in (0, n/d) = (0, {})",
            n as f64 / d as f64
        )));
    }
    if sphere_nodes < 16 {
        return Err(CoreError::Precondition("sphere_nodes >= 16".into()));
    }
    if n < 2 || n > 3 {
        return Err(CoreError::Unsupported(
            "integral probe supports n = 2 and n = 3 under the desk-scale budget".into(),
        ));
    }
    let mats: Vec<Vec<Vec<f64>>> = q.forms().iter().map(|f| f.as_matrix().to_f64()).collect();
    let integrand = |y: &[f64]| -> f64 {
        let mut b = vec![vec![0.0; d]; d];
        for (c, m) in y.iter().zip(&mats) {
            for i in 0..d {
                for j in 0..d {
                    b[i][j] += c * m[i][j];
                }
            }
        }
        let det = det_f64(&mut b);
        det.abs().powf(-gamma)
    };
    let estimate = |nn: usize| -> f64 {
        match n {
            2 => {
                let mut acc = 0.0;
                for i in 0..nn {
                    let th = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / nn as f64;
                    let v = integrand(&[th.cos(), th.sin()]);
                    if v.is_finite() {
                        acc += v;
                    }
                }
                acc * 2.0 * std::f64::consts::PI / nn as f64
            }
            _ => {
                let (np, nt) = (nn, 2 * nn);
                let mut acc = 0.0;
                for i in 0..np {
                    let phi = std::f64::consts::PI * (i as f64 + 0.5) / np as f64;
                    for j in 0..nt {
                        let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / nt as f64;
                        let y = [phi.sin() * th.cos(), phi.sin() * th.sin(), phi.cos()];
                        let v = integrand(&y);
                        if v.is_finite() {
                            acc += v * phi.sin();
                        }
                    }
                }
                acc * (std::f64::consts::PI / np as f64) * (2.0 * std::f64::consts::PI / nt as f64)
            }
        }
    };
    let coarse = estimate(sphere_nodes);
    let fine = estimate(4 * sphere_nodes);
    Ok((fine, fine > 2.0 * coarse))
}

fn det_f64(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degenerate() -> QuadTuple {
        QuadTuple::from_monomials(
            3,
            vec![vec![(0, 0, rint(1))], vec![(1, 1, rint(1)), (0, 2, rint(1))]],
        )
        .unwrap()
    }

    fn cm_family(b11: i64, b22: i64, b12_doubled: i64) -> QuadTuple {
        // (x1^2 + x2^2, b11 x1^2 + b22 x2^2 + b12_doubled x1 x2 + x3^2)
        QuadTuple::from_monomials(
            3,
            vec![
                vec![(0, 0, rint(1)), (1, 1, rint(1))],
                vec![
                    (0, 0, rint(b11)),
                    (1, 1, rint(b22)),
                    (0, 1, rint(b12_doubled)),
                    (2, 2, rint(1)),
                ],
            ],
        )
        .unwrap()
    }

    #[test]
    fn cm_family_satisfies() {
        for (b11, b22, b12) in [(1, 2, 2), (3, -1, 4), (1, 1, 2), (-2, 5, 6)] {
            let v = cm_check_3_2(&cm_family(b11, b22, b12)).unwrap();
            assert_eq!(v.satisfied, Some(true), "family ({b11},{b22},{b12}): {}", v.log);
        }
    }

    #[test]
    fn degenerate_fails_via_pencil() {
        let v = cm_check_3_2(&degenerate()).unwrap();
        assert_eq!(v.satisfied, Some(false));
        // (x1^2 + x2^2, x3^2) also fails: the second form alone has rank 1
        let v = cm_check_3_2(&cm_family(0, 0, 0)).unwrap();
        assert_eq!(v.satisfied, Some(false));
    }

    #[test]
    fn precondition_is_checked() {
        // (x1^2, x1 x2) on d=3 uses only 2 variables: stacked rank 2
        let q = QuadTuple::from_monomials(
            3,
            vec![vec![(0, 0, rint(1))], vec![(0, 1, rint(1))]],
        )
        .unwrap();
        assert!(matches!(cm_check_3_2(&q), Err(CoreError::Precondition(_))));
    }

    #[test]
    fn probe_distinguishes_integrable_from_divergent() {
        // (x1^2, x2^2) on d=2: |y1 y2|^{-1/2} integrable on the circle
        let diag = QuadTuple::from_monomials(
            2,
            vec![vec![(0, 0, rint(1))], vec![(1, 1, rint(1))]],
        )
        .unwrap();
        let (est, div) = cm_integral_probe(&diag, 0.5, 64).unwrap();
        assert!(est.is_finite() && est > 0.0);
        assert!(!div, "integrable case must not be flagged");

        // (x1^2, x1 x2): det = -y2^2/4 vanishes to order 2; gamma = 0.75
        let deg = QuadTuple::from_monomials(
            2,
            vec![vec![(0, 0, rint(1))], vec![(0, 1, rint(1))]],
        )
        .unwrap();
        let (_, div) = cm_integral_probe(&deg, 0.75, 64).unwrap();
        assert!(div, "divergent case must be flagged");

        assert!(cm_integral_probe(&deg, 1.5, 64).is_err());
    }

    #[test]
    fn probe_agrees_with_characterization_on_paper_families() {
        // satisfied family: finite probe at gamma deep in (0, 2/3)
        let fam = cm_family(1, 2, 2);
        let (_, div) = cm_integral_probe(&fam, 0.6, 128).unwrap();
        assert!(!div);
        // degenerate: det = -y2^3/4, so gamma = 0.5 gives |y2|^{-1.5}
        let (_, div) = cm_integral_probe(&degenerate(), 0.5, 128).unwrap();
        assert!(div);
    }

    #[test]
    fn d22_decision_matches_hand_analysis() {
        assert!(matches!(d22_decision_3x2(&cm_family(1, 2, 2)), Dim22Decision::ExactlyTwo));
        // (x1 x2, x1 x3): both forms vanish on span(e2, e3)
        let q = QuadTuple::from_monomials(
            3,
            vec![vec![(0, 1, rint(1))], vec![(0, 2, rint(1))]],
        )
        .unwrap();
        match d22_decision_3x2(&q) {
            Dim22Decision::AtMostOne { witness } => {
                let (w, u) = witness.expect("rational certificate expected");
                let qe = |v: &Vec<Rat>| q.evaluate(v).unwrap();
                assert!(qe(&w).iter().all(|x| x.is_zero()));
                let _ = u;
            }
            other => panic!("expected collapse, got {other:?}"),
        }
        // the degenerate paper surface also collapses: kernel of A1 contains
        // (0, 1, 0)?? no: test outcome, not the witness
        match d22_decision_3x2(&degenerate()) {
            Dim22Decision::AtMostOne { .. } => {}
            other => panic!("expected collapse for the degenerate surface, got {other:?}"),
        }
    }
}
