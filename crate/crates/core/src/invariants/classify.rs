//! Constructive canonical classification for d = n = 2 tuples with full
//! stacked rank: (x1^2, x1 x2), (x1^2, x2^2), or (x1 x2, x1^2 - x2^2). The
//! class is decided by exact invariants; the transforms are built by the
//! constructive reduction (diagonalize the rank-one pencil member, complete
//! the square, rescale) in floating point with the residual reported.

use super::dinv::{d_invariant, SearchBudget};
use super::pencil::{min_rank_pencil, witness_f64};
use crate::error::{CoreError, Result};
use crate::quadform::QuadTuple;
use crate::rational::to_f64;
use serde::Serialize;

pub const CLASSIFY_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Canonical2x2 {
    /// (x1^2, x1 x2)
    XiSqXiXj,
    /// (x1^2, x2^2)
    XiSqXjSq,
    /// (x1 x2, x1^2 - x2^2)
    HyperbolicPair,
    Degenerate,
}

#[derive(Debug, Clone, Serialize)]
pub struct CanonicalClass2x2 {
    pub class: Canonical2x2,
    /// Variable-side transform: the canonical tuple arises from Q(M1 xi) . M2.
    pub m1: [[f64; 2]; 2],
    /// Form-recombination transform (columns give the new forms).
    pub m2: [[f64; 2]; 2],
    /// Max-abs deviation of the transformed tuple from the canonical one.
    pub residual: f64,
}

type M2x2 = [[f64; 2]; 2];

fn mat_of(q: &QuadTuple, j: usize) -> M2x2 {
    let m = q.form(j).as_matrix();
    [
        [to_f64(&m[(0, 0)]), to_f64(&m[(0, 1)])],
        [to_f64(&m[(1, 0)]), to_f64(&m[(1, 1)])],
    ]
}

fn mat_mul(a: &M2x2, b: &M2x2) -> M2x2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn mat_t(a: &M2x2) -> M2x2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

fn congruence(m1: &M2x2, a: &M2x2) -> M2x2 {
    mat_mul(&mat_t(m1), &mat_mul(a, m1))
}

/// Result of applying (M1, M2) to the float pair (A1, A2).
fn transform(a: &[M2x2; 2], m1: &M2x2, m2: &M2x2) -> [M2x2; 2] {
    let p = [congruence(m1, &a[0]), congruence(m1, &a[1])];
    let mut out = [[[0.0; 2]; 2]; 2];
    for jp in 0..2 {
        for i in 0..2 {
            for k in 0..2 {
                out[jp][i][k] = m2[0][jp] * p[0][i][k] + m2[1][jp] * p[1][i][k];
            }
        }
    }
    out
}

fn canonical_mats(class: Canonical2x2) -> [M2x2; 2] {
    match class {
        Canonical2x2::XiSqXiXj => [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.5], [0.5, 0.0]]],
        Canonical2x2::XiSqXjSq => [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]],
        Canonical2x2::HyperbolicPair => [[[0.0, 0.5], [0.5, 0.0]], [[1.0, 0.0], [0.0, -1.0]]],
        Canonical2x2::Degenerate => [[[0.0; 2]; 2]; 2],
    }
}

fn residual_against(a: &[M2x2; 2], m1: &M2x2, m2: &M2x2, class: Canonical2x2) -> f64 {
    let got = transform(a, m1, m2);
    let want = canonical_mats(class);
    let mut r: f64 = 0.0;
    for j in 0..2 {
        for i in 0..2 {
            for k in 0..2 {
                r = r.max((got[j][i][k] - want[j][i][k]).abs());
            }
        }
    }
    r
}

pub fn classify_2x2(q: &QuadTuple) -> Result<CanonicalClass2x2> {
    if q.d() != 2 || q.n() != 2 {
        return Err(CoreError::Precondition("classify_2x2 requires d = n = 2".into()));
    }
    let budget = SearchBudget::default();
    let d22 = d_invariant(q, 2, 2, &budget);
    if !d22.exact {
        return Err(CoreError::ClassificationRefused("full-rank invariant inexact".into()));
    }
    let identity = [[1.0, 0.0], [0.0, 1.0]];
    if d22.value < 2 {
        return Ok(CanonicalClass2x2 {
            class: Canonical2x2::Degenerate,
            m1: identity,
            m2: identity,
            residual: 0.0,
        });
    }
    let pencil = min_rank_pencil(q);
    if !pencil.exact {
        return Err(CoreError::ClassificationRefused("pencil minimum inexact".into()));
    }
    if pencil.rank == 0 {
        // linearly dependent forms cannot have two genuinely independent
        // components; treat as degenerate
        return Ok(CanonicalClass2x2 {
            class: Canonical2x2::Degenerate,
            m1: identity,
            m2: identity,
            residual: 0.0,
        });
    }

    // normalize each input form to unit max-abs entry (absorbed into M2)
    let raw = [mat_of(q, 0), mat_of(q, 1)];
    let scale = |m: &M2x2| -> f64 {
        let s = m
            .iter()
            .flatten()
            .fold(0.0f64, |acc, x| acc.max(x.abs()));
        if s == 0.0 {
            1.0
        } else {
            1.0 / s
        }
    };
    let (s1, s2) = (scale(&raw[0]), scale(&raw[1]));
    let norm_m2 = [[s1, 0.0], [0.0, s2]];
    let a = transform(&raw, &identity, &norm_m2);

    let (class, m1, mut m2) = if pencil.rank == 2 {
        hyperbolic_transforms(&a)?
    } else {
        let d12 = d_invariant(q, 1, 2, &budget);
        if !d12.exact {
            return Err(CoreError::ClassificationRefused("line invariant inexact".into()));
        }
        let y = witness_f64(&pencil);
        let y = [y[0] * (1.0 / s1), y[1] * (1.0 / s2)]; // witness in normalized coordinates
        if d12.value == 0 {
            xisq_xixj_transforms(&a, &y)?
        } else {
            xisq_xjsq_transforms(&a, &y)?
        }
    };
    // fold the input normalization into M2
    m2 = mat_mul(&norm_m2, &m2);
    let residual = residual_against(&raw, &m1, &m2, class);
    Ok(CanonicalClass2x2 { class, m1, m2, residual })
}

fn eval_pencil(a: &[M2x2; 2], y: &[f64; 2]) -> M2x2 {
    let mut b = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            b[i][j] = y[0] * a[0][i][j] + y[1] * a[1][i][j];
        }
    }
    b
}

/// Unit eigenvector of a symmetric 2x2 for the eigenvalue of largest absolute
/// value, with its eigenvalue.
fn dominant_eigen(b: &M2x2) -> (f64, [f64; 2]) {
    let (p, r, s) = (b[0][0], b[0][1], b[1][1]);
    let tr = p + s;
    let disc = ((p - s) * 0.5).hypot(r);
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    let l = if l1.abs() >= l2.abs() { l1 } else { l2 };
    // (B - l I) v = 0
    let v = if (p - l).abs() > r.abs().max(1e-300) {
        [-r, p - l]
    } else if r.abs() > 0.0 || (s - l).abs() > 0.0 {
        [l - s, r]
    } else {
        [1.0, 0.0]
    };
    let nrm = v[0].hypot(v[1]);
    if nrm == 0.0 {
        (l, [1.0, 0.0])
    } else {
        (l, [v[0] / nrm, v[1] / nrm])
    }
}

/// Shared first step for the rank-one-pencil classes: bring the tuple to
/// (x1^2, a x1^2 + 2b x1 x2 + c x2^2).
fn rank_one_first_form(a: &[M2x2; 2], y: &[f64; 2]) -> Result<(M2x2, M2x2, [M2x2; 2])> {
    let b = eval_pencil(a, y);
    let (lambda, v) = dominant_eigen(&b);
    if lambda == 0.0 {
        return Err(CoreError::ClassificationRefused("rank-one member evaluated to zero".into()));
    }
    // M1a columns (v, v_perp): (M1a^T B M1a) = diag(lambda, ~0)
    let m1a = [[v[0], -v[1]], [v[1], v[0]]];
    // choose the second form: the coordinate form less aligned with y
    let (e1, e2) = if y[0].abs() >= y[1].abs() {
        ([y[0], y[1]], [0.0, 1.0])
    } else {
        ([y[0], y[1]], [1.0, 0.0])
    };
    // M2a columns: first the pencil witness (scaled to make the form unit),
    // second the complementary coordinate form
    let m2a = [[e1[0] / lambda, e2[0]], [e1[1] / lambda, e2[1]]];
    let t = transform(a, &m1a, &m2a);
    Ok((m1a, m2a, t))
}

fn xisq_xixj_transforms(a: &[M2x2; 2], y: &[f64; 2]) -> Result<(Canonical2x2, M2x2, M2x2)> {
    let (m1a, m2a, t) = rank_one_first_form(a, y)?;
    // t = (x1^2, a x1^2 + 2b x1 x2 + c x2^2) with c ~ 0 in this class
    let (aa, bb) = (t[1][0][0], t[1][0][1]);
    if bb.abs() < 1e-12 {
        return Err(CoreError::ClassificationRefused("vanishing mixed coefficient in the collapse class".into()));
    }
    // subtract aa * form1, then rescale x2 by 1/(2 bb): (x1^2, x1 x2)
    let m2b = [[1.0, -aa], [0.0, 1.0]];
    let m1b = [[1.0, 0.0], [0.0, 0.5 / bb]];
    let m1 = mat_mul(&m1a, &m1b);
    let m2 = mat_mul(&m2a, &m2b);
    Ok((Canonical2x2::XiSqXiXj, m1, m2))
}

fn xisq_xjsq_transforms(a: &[M2x2; 2], y: &[f64; 2]) -> Result<(Canonical2x2, M2x2, M2x2)> {
    let (m1a, m2a, t) = rank_one_first_form(a, y)?;
    let (bb, cc) = (t[1][0][1], t[1][1][1]);
    if cc.abs() < 1e-12 {
        return Err(CoreError::ClassificationRefused("vanishing square coefficient in the two-squares class".into()));
    }
    // complete the square: x2' = x2 + (b/c) x1 pulls the mixed term into x1^2
    let m1b = [[1.0, 0.0], [-bb / cc, 1.0]];
    let t2 = transform(&t, &m1b, &[[1.0, 0.0], [0.0, 1.0]]);
    let aa2 = t2[1][0][0];
    // subtract aa2 * form1, rescale x2 by 1/sqrt|c|, fix the sign
    let m2b = [[1.0, -aa2], [0.0, 1.0]];
    let m1c = [[1.0, 0.0], [0.0, 1.0 / cc.abs().sqrt()]];
    let m2c = [[1.0, 0.0], [0.0, if cc < 0.0 { -1.0 } else { 1.0 }]];
    let m1 = mat_mul(&m1a, &mat_mul(&m1b, &m1c));
    let m2 = mat_mul(&m2a, &mat_mul(&m2b, &m2c));
    Ok((Canonical2x2::XiSqXjSq, m1, m2))
}

fn hyperbolic_transforms(a: &[M2x2; 2]) -> Result<(Canonical2x2, M2x2, M2x2)> {
    // Q1 is invertible and indefinite. Diagonalize it to x1^2 - x2^2, then
    // rotate onto x1 x2, clean the second form, and rescale.
    let b = a[0];
    let (p, r, s) = (b[0][0], b[0][1], b[1][1]);
    let theta = 0.5 * (2.0 * r).atan2(p - s);
    let rot = [[theta.cos(), -theta.sin()], [theta.sin(), theta.cos()]];
    let diag = congruence(&rot, &b);
    let (l1, l2) = (diag[0][0], diag[1][1]);
    if l1 * l2 >= 0.0 {
        return Err(CoreError::ClassificationRefused(
            "pencil minimum 2 but the first form is not indefinite".into(),
        ));
    }
    // order: positive eigenvalue first
    let (swap, lp, ln) = if l1 > 0.0 { (false, l1, l2) } else { (true, l2, l1) };
    let perm = if swap { [[0.0, 1.0], [1.0, 0.0]] } else { [[1.0, 0.0], [0.0, 1.0]] };
    let scl = [[1.0 / lp.sqrt(), 0.0], [0.0, 1.0 / (-ln).sqrt()]];
    // to x1 x2: x1 -> x1 + x2, x2 -> x1 - x2 sends x1^2 - x2^2 to 4 x1 x2
    let split = [[1.0, 1.0], [1.0, -1.0]];
    let m1a = mat_mul(&rot, &mat_mul(&perm, &mat_mul(&scl, &split)));
    let m2a = [[0.25, 0.0], [0.0, 1.0]];
    let t = transform(a, &m1a, &m2a);
    // t = (x1 x2, aa x1^2 + 2bb x1 x2 + cc x2^2); drop the mixed part
    let (aa, bb, cc) = (t[1][0][0], t[1][0][1], t[1][1][1]);
    let m2b = [[1.0, -2.0 * bb], [0.0, 1.0]];
    if aa.abs() < 1e-12 || cc.abs() < 1e-12 || aa * cc > 0.0 {
        return Err(CoreError::ClassificationRefused(
            "second form does not split hyperbolically".into(),
        ));
    }
    // make the x1^2 coefficient positive via x1 <-> x2 if needed
    let (flip, paa, pcc) = if aa > 0.0 { (false, aa, cc) } else { (true, cc, aa) };
    let perm2 = if flip { [[0.0, 1.0], [1.0, 0.0]] } else { [[1.0, 0.0], [0.0, 1.0]] };
    let (al, be) = (1.0 / paa.sqrt(), 1.0 / (-pcc).sqrt());
    let scl2 = [[al, 0.0], [0.0, be]];
    // rescaling x1 x2 by al*be must be undone on the first form
    let m2c = [[1.0 / (al * be), 0.0], [0.0, 1.0]];
    let m1 = mat_mul(&m1a, &mat_mul(&perm2, &scl2));
    let m2 = mat_mul(&m2a, &mat_mul(&m2b, &m2c));
    Ok((Canonical2x2::HyperbolicPair, m1, m2))
}
