//! The d-invariants: minimal NV over rank-d' domain compositions and
//! rank-n' recombinations of the forms. The infimum ranges over non-compact
//! varieties, so exactness is only claimed where a proof exists:
//!
//! * d' = 0 or n' = 0: trivially 0.
//! * d' = d, n' = n: d minus the dimension of the common kernel (stacked rank).
//! * d' = d, n' = 1: the pencil minimum (exact for n <= 2).
//! * d' = 1, n' < n: always 0 (project the forms onto the orthogonal
//!   complement of Q(u) for any direction u).
//! * d' = 1, n' = n: common-real-zero decisions (d = 2 via gcd/Sturm; n = 1
//!   via the signature).
//! * d = 3, n = 2, (d', n') = (2, 2): the pencil-kernel isotropy decision.
//!
//! Everything else is a structured-plus-random search reported as an upper
//! bound with `exact = false` (unless it attains 0).

use super::cm::{d22_decision_3x2, Dim22Decision};
use super::pencil::{combinations, min_rank_pencil};
use crate::matrix::{vstack, RatMatrix};
use crate::quadform::QuadTuple;
use crate::rational::{rint, rzero, Rat};
use crate::unipoly::UniPoly;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SearchBudget {
    pub structured_cap: usize,
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { structured_cap: 20_000, random_samples: 64, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct DInvariantResult {
    pub d_prime: usize,
    pub n_prime: usize,
    /// Upper bound on the invariant, attained by the certificate when present.
    pub value: usize,
    pub exact: bool,
    /// Rational certificate (M1, M2) with NV((Q o M1) . M2) == value.
    pub certificate: Option<(RatMatrix, RatMatrix)>,
    pub search_log: Vec<String>,
}

impl DInvariantResult {
    fn plain(d_prime: usize, n_prime: usize, value: usize, exact: bool, log: String) -> Self {
        DInvariantResult { d_prime, n_prime, value, exact, certificate: None, search_log: vec![log] }
    }
}

/// NV after the change of variables, None if the certificate shapes are bad.
pub fn certified_nv(q: &QuadTuple, m1: &RatMatrix, m2: &RatMatrix) -> Option<usize> {
    q.change_of_variables(m1, m2).ok().map(|t| t.nv())
}

pub fn d_invariant(q: &QuadTuple, d_prime: usize, n_prime: usize, budget: &SearchBudget) -> DInvariantResult {
    let d = q.d();
    let n = q.n();
    assert!(d_prime <= d && n_prime <= n, "invariant parameters out of range");

    if d_prime == 0 || n_prime == 0 {
        return DInvariantResult::plain(d_prime, n_prime, 0, true, "empty composition has no variables".into());
    }

    if d_prime == d && n_prime == n {
        return stacked_kernel_case(q);
    }

    if d_prime == d && n_prime == 1 {
        return pencil_case(q);
    }

    if d_prime == 1 && n_prime < n {
        return project_out_case(q, n_prime);
    }

    if d_prime == 1 && n_prime == n {
        if n == 1 {
            return single_form_zero_case(q);
        }
        if d == 2 {
            return common_zero_d2_case(q);
        }
    }

    if d == 3 && n == 2 && d_prime == 2 && n_prime == 2 {
        match d22_decision_3x2(q) {
            Dim22Decision::ExactlyTwo => {
                // any rank-2 coordinate plane attains 2 when the minimum is 2
                let m1 = coordinate_projection(d, &[0, 1]);
                let m2 = RatMatrix::identity(2);
                let nv = certified_nv(q, &m1, &m2).unwrap();
                debug_assert_eq!(nv, 2);
                return DInvariantResult {
                    d_prime,
                    n_prime,
                    value: 2,
                    exact: true,
                    certificate: Some((m1, m2)),
                    search_log: vec!["pencil-kernel isotropy decision: no singular member has a common isotropic kernel vector".into()],
                };
            }
            Dim22Decision::AtMostOne { witness } => {
                if let Some((w, u)) = witness {
                    let m1 = plane_injection(d, &w, &u);
                    let m2 = RatMatrix::identity(2);
                    let nv = certified_nv(q, &m1, &m2).unwrap();
                    debug_assert!(nv <= 1);
                    return DInvariantResult {
                        d_prime,
                        n_prime,
                        value: nv,
                        exact: true,
                        certificate: Some((m1, m2)),
                        search_log: vec!["common isotropic kernel vector found; certificate plane attached".into()],
                    };
                }
                return DInvariantResult::plain(
                    d_prime,
                    n_prime,
                    1,
                    false,
                    "Sturm-certified < 2 at an irrational pencil root; no rational certificate, 0 not excluded".into(),
                );
            }
            Dim22Decision::Inconclusive(why) => {
                let mut res = search_case(q, d_prime, n_prime, budget);
                res.search_log.insert(0, format!("isotropy decision inconclusive: {why}"));
                return res;
            }
        }
    }

    search_case(q, d_prime, n_prime, budget)
}

fn stacked_kernel_case(q: &QuadTuple) -> DInvariantResult {
    let d = q.d();
    let n = q.n();
    let mats: Vec<&RatMatrix> = q.forms().iter().map(|f| f.as_matrix()).collect();
    let stacked = vstack(&mats);
    let value = stacked.rank();
    // Certificate: basis (complement | common kernel); the composed tuple
    // uses exactly the first `value` variables.
    let kernel = stacked.kernel();
    // greedily extend the kernel basis to a full basis by coordinate vectors
    let mut chosen: Vec<Vec<Rat>> = Vec::new();
    for cand in (0..d).map(|i| {
        let mut v = vec![rzero(); d];
        v[i] = rint(1);
        v
    }) {
        let mut test = chosen.clone();
        test.extend(kernel.iter().cloned());
        test.push(cand.clone());
        let m = RatMatrix::from_rows(test).transpose();
        if m.rank() == chosen.len() + kernel.len() + 1 {
            chosen.push(cand);
        }
        if chosen.len() + kernel.len() == d {
            break;
        }
    }
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    cols.extend(chosen);
    cols.extend(kernel.iter().cloned());
    let m1 = RatMatrix::from_rows(cols).transpose();
    let m2 = RatMatrix::identity(n);
    let nv = certified_nv(q, &m1, &m2).unwrap();
    debug_assert_eq!(nv, value);
    DInvariantResult {
        d_prime: d,
        n_prime: n,
        value,
        exact: true,
        certificate: Some((m1, m2)),
        search_log: vec![format!("full-rank case: stacked matrix rank {value} (d minus common kernel dimension)")],
    }
}

fn pencil_case(q: &QuadTuple) -> DInvariantResult {
    let d = q.d();
    let p = min_rank_pencil(q);
    let mut log = vec![format!("delegated to the matrix pencil: {}", p.log)];
    let certificate = if p.witness_exact {
        // B = sum y_j A_j, congruence-diagonalized so NV = rank(B)
        let mut b = RatMatrix::zeros(d, d);
        for (j, c) in p.witness.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = q.form(j).as_matrix();
            for i in 0..d {
                for k in 0..d {
                    let add = c * &m[(i, k)];
                    b[(i, k)] += add;
                }
            }
        }
        let (pmat, _) = b.congruence_diagonalize();
        let m2 = RatMatrix::from_fn(q.n(), 1, |j, _| p.witness[j].clone());
        let nv = certified_nv(q, &pmat, &m2).unwrap();
        debug_assert_eq!(nv, p.rank);
        Some((pmat, m2))
    } else {
        log.push("witness direction is irrational; value certified by Sturm, certificate omitted".into());
        None
    };
    DInvariantResult {
        d_prime: d,
        n_prime: 1,
        value: p.rank,
        exact: p.exact,
        certificate,
        search_log: log,
    }
}

fn project_out_case(q: &QuadTuple, n_prime: usize) -> DInvariantResult {
    let d = q.d();
    let n = q.n();
    // u = e1; M2 columns span a rational complement of v = Q(e1).
    let mut u = vec![rzero(); d];
    u[0] = rint(1);
    let v = q.evaluate(&u).unwrap();
    let vrow = RatMatrix::from_rows(vec![v]);
    let kernel = vrow.kernel(); // dim >= n-1 >= n'
    let m2 = RatMatrix::from_fn(n, n_prime, |i, j| kernel[j][i].clone());
    let m1 = RatMatrix::from_fn(d, d, |i, j| if i == 0 && j == 0 { rint(1) } else { rzero() });
    let nv = certified_nv(q, &m1, &m2).unwrap();
    debug_assert_eq!(nv, 0);
    DInvariantResult {
        d_prime: 1,
        n_prime,
        value: 0,
        exact: true,
        certificate: Some((m1, m2)),
        search_log: vec!["n' < n: recombine away the single direction's values".into()],
    }
}

fn single_form_zero_case(q: &QuadTuple) -> DInvariantResult {
    let a = q.form(0).as_matrix();
    let (pos, neg, zero) = a.signature();
    let definite = zero == 0 && (pos == 0 || neg == 0) && (pos + neg) > 0;
    if definite {
        let m1 = coordinate_line(q.d());
        let m2 = RatMatrix::identity(1);
        let nv = certified_nv(q, &m1, &m2).unwrap();
        debug_assert_eq!(nv, 1);
        return DInvariantResult {
            d_prime: 1,
            n_prime: 1,
            value: 1,
            exact: true,
            certificate: Some((m1, m2)),
            search_log: vec!["definite form: no real zero line".into()],
        };
    }
    // a real isotropic line exists; try for a rational one
    let witness = rational_isotropic_vector(a);
    let (certificate, mut log) = match witness {
        Some(w) => {
            let m1 = line_injection(q.d(), &w);
            let m2 = RatMatrix::identity(1);
            let nv = certified_nv(q, &m1, &m2).unwrap();
            debug_assert_eq!(nv, 0);
            (Some((m1, m2)), vec!["rational isotropic line".to_string()])
        }
        None => (None, vec!["isotropic line exists (signature) but is irrational; certificate omitted".to_string()]),
    };
    log.insert(0, "indefinite or singular form has a real zero line".into());
    DInvariantResult { d_prime: 1, n_prime: 1, value: 0, exact: true, certificate, search_log: log }
}

fn common_zero_d2_case(q: &QuadTuple) -> DInvariantResult {
    let (has_zero, witness) = common_real_zero_d2(q);
    if has_zero {
        let (certificate, log) = match witness {
            Some(w) => {
                let m1 = line_injection(2, &w);
                let m2 = RatMatrix::identity(q.n());
                let nv = certified_nv(q, &m1, &m2).unwrap();
                debug_assert_eq!(nv, 0);
                (Some((m1, m2)), "rational common zero".to_string())
            }
            None => (None, "common real zero exists (Sturm) but is irrational; certificate omitted".to_string()),
        };
        DInvariantResult { d_prime: 1, n_prime: q.n(), value: 0, exact: true, certificate, search_log: vec![log] }
    } else {
        let m1 = coordinate_line(2);
        let m2 = RatMatrix::identity(q.n());
        let nv = certified_nv(q, &m1, &m2).unwrap();
        debug_assert_eq!(nv, 1);
        DInvariantResult {
            d_prime: 1,
            n_prime: q.n(),
            value: 1,
            exact: true,
            certificate: Some((m1, m2)),
            search_log: vec!["no common real projective zero (gcd/Sturm)".into()],
        }
    }
}

/// Common nonzero real zero of all forms of a binary (d = 2) tuple, with a
/// rational witness when one exists among the gcd's rational roots.
pub fn common_real_zero_d2(q: &QuadTuple) -> (bool, Option<Vec<Rat>>) {
    assert_eq!(q.d(), 2);
    // the point at infinity (1, 0)
    if q.forms().iter().all(|f| f.entry(0, 0).is_zero()) {
        return (true, Some(vec![rint(1), rzero()]));
    }
    // dehomogenize at x2 = 1: p_j(s) = Q_j(s, 1)
    let mut g = UniPoly::zero();
    let mut all_zero = true;
    for f in q.forms() {
        let p = UniPoly::new(vec![
            f.entry(1, 1).clone(),
            f.entry(0, 1) * rint(2),
            f.entry(0, 0).clone(),
        ]);
        if p.is_zero() {
            continue;
        }
        all_zero = false;
        g = if g.is_zero() { p } else { g.gcd(&p) };
        if g.degree() == Some(0) {
            return (false, None);
        }
    }
    if all_zero {
        return (true, Some(vec![rint(1), rzero()]));
    }
    if g.is_zero() || g.degree() == Some(0) {
        return (false, None);
    }
    if let Some(r) = g.rational_roots().first() {
        return (true, Some(vec![r.clone(), rint(1)]));
    }
    if g.has_real_root() {
        return (true, None);
    }
    (false, None)
}

/// A rational nonzero vector with xᵀAx = 0, if easily available: kernel
/// vectors, zero-diagonal coordinates, or rational roots of the restriction
/// to coordinate planes.
pub fn rational_isotropic_vector(a: &RatMatrix) -> Option<Vec<Rat>> {
    let d = a.rows;
    if let Some(v) = a.kernel().into_iter().next() {
        return Some(v);
    }
    for i in 0..d {
        if a[(i, i)].is_zero() {
            let mut v = vec![rzero(); d];
            v[i] = rint(1);
            return Some(v);
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            // restrict to the (i, j) plane: a_ii s^2 + 2 a_ij s + a_jj
            let p = UniPoly::new(vec![a[(j, j)].clone(), &a[(i, j)] * rint(2), a[(i, i)].clone()]);
            if let Some(r) = p.rational_roots().first() {
                let mut v = vec![rzero(); d];
                v[i] = r.clone();
                v[j] = rint(1);
                return Some(v);
            }
        }
    }
    None
}

fn coordinate_line(d: usize) -> RatMatrix {
    RatMatrix::from_fn(d, d, |i, j| if i == 0 && j == 0 { rint(1) } else { rzero() })
}

fn line_injection(d: usize, w: &[Rat]) -> RatMatrix {
    RatMatrix::from_fn(d, d, |i, j| if j == 0 { w[i].clone() } else { rzero() })
}

pub(crate) fn plane_injection(d: usize, w: &[Rat], u: &[Rat]) -> RatMatrix {
    RatMatrix::from_fn(d, d, |i, j| match j {
        0 => w[i].clone(),
        1 => u[i].clone(),
        _ => rzero(),
    })
}

pub(crate) fn coordinate_projection(d: usize, coords: &[usize]) -> RatMatrix {
    RatMatrix::from_fn(d, d, |i, j| {
        if i == j && coords.contains(&i) {
            rint(1)
        } else {
            rzero()
        }
    })
}

fn search_case(q: &QuadTuple, d_prime: usize, n_prime: usize, budget: &SearchBudget) -> DInvariantResult {
    let d = q.d();
    let n = q.n();
    let mut best: Option<(usize, RatMatrix, RatMatrix)> = None;
    let mut evals = 0usize;
    let consider = |m1: &RatMatrix, m2: &RatMatrix, best: &mut Option<(usize, RatMatrix, RatMatrix)>| {
        if let Some(nv) = certified_nv(q, m1, m2) {
            match best {
                Some((v, _, _)) if *v <= nv => {}
                _ => *best = Some((nv, m1.clone(), m2.clone())),
            }
        }
    };

    // structured layer: coordinate subspaces x sign-pattern recombinations
    let m2_candidates = sign_pattern_columns(n, n_prime, budget.structured_cap);
    'outer: for coords in combinations(d, d_prime) {
        let m1 = coordinate_projection(d, &coords);
        for m2 in &m2_candidates {
            consider(&m1, m2, &mut best);
            evals += 1;
            if evals >= budget.structured_cap {
                break 'outer;
            }
        }
    }
    let structured_best = best.as_ref().map(|(v, _, _)| *v);

    // random layer
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut generic_min = usize::MAX;
    for _ in 0..budget.random_samples {
        let m1 = random_rank_matrix(&mut rng, d, d, d_prime);
        let m2 = random_rank_matrix(&mut rng, n, n_prime, n_prime);
        if let Some(nv) = certified_nv(q, &m1, &m2) {
            generic_min = generic_min.min(nv);
            match &best {
                Some((v, _, _)) if *v <= nv => {}
                _ => best = Some((nv, m1, m2)),
            }
        }
    }

    let (value, m1, m2) = best.expect("search produced at least one candidate");
    let exact = value == 0;
    DInvariantResult {
        d_prime,
        n_prime,
        value,
        exact,
        certificate: Some((m1, m2)),
        search_log: vec![format!(
            "structured search best {:?} over {} evaluations; random layer ({} samples, seed {}) generic min {}; upper bound{}",
            structured_best,
            evals,
            budget.random_samples,
            budget.seed,
            if generic_min == usize::MAX { "n/a".to_string() } else { generic_min.to_string() },
            if exact { ", exact since NV >= 0" } else { "" }
        )],
    }
}

/// All rank-n' matrices whose columns are distinct sign patterns in
/// {-1,0,1}^n with leading entry +1, up to `cap` candidates.
fn sign_pattern_columns(n: usize, n_prime: usize, cap: usize) -> Vec<RatMatrix> {
    let mut patterns: Vec<Vec<Rat>> = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 1..total {
        let mut v = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            let digit = c % 3;
            c /= 3;
            v.push(match digit {
                0 => rzero(),
                1 => rint(1),
                _ => rint(-1),
            });
        }
        // canonical: first nonzero entry +1
        if let Some(first) = v.iter().find(|x| !x.is_zero()) {
            if first < &rzero() {
                continue;
            }
        }
        patterns.push(v);
    }
    let mut out = Vec::new();
    for combo in combinations(patterns.len(), n_prime) {
        let m = RatMatrix::from_fn(n, n_prime, |i, j| patterns[combo[j]][i].clone());
        if m.rank() == n_prime {
            out.push(m);
        }
        if out.len() >= cap {
            break;
        }
    }
    out
}

fn random_rank_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> RatMatrix {
    loop {
        let a = RatMatrix::from_fn(rows, rank, |_, _| rint(rng.gen_range(-3i64..=3)));
        let b = if rank == cols {
            RatMatrix::identity(rank)
        } else {
            RatMatrix::from_fn(rank, cols, |_, _| rint(rng.gen_range(-3i64..=3)))
        };
        let m = a.mul(&b);
        if m.rank() == rank {
            return m;
        }
    }
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

    #[test]
    fn trivial_zero_cases() {
        let q = degenerate();
        let b = SearchBudget::default();
        assert_eq!(d_invariant(&q, 0, 1, &b).value, 0);
        assert!(d_invariant(&q, 0, 1, &b).exact);
        assert_eq!(d_invariant(&q, 3, 0, &b).value, 0);
    }

    #[test]
    fn pencil_delegation_matches_paper() {
        let q = degenerate();
        let b = SearchBudget::default();
        let r = d_invariant(&q, 3, 1, &b);
        assert_eq!(r.value, 1);
        assert!(r.exact);
        let (m1, m2) = r.certificate.as_ref().unwrap();
        assert_eq!(certified_nv(&q, m1, m2).unwrap(), 1);
    }

    #[test]
    fn generic_cm_family_has_d31_equal_two() {
        // (x1^2 + x2^2, x3^2 + x1^2 + 2 x2^2 + 2 x1 x2)
        let q = QuadTuple::from_monomials(
            3,
            vec![
                vec![(0, 0, rint(1)), (1, 1, rint(1))],
                vec![(2, 2, rint(1)), (0, 0, rint(1)), (1, 1, rint(2)), (0, 1, rint(2))],
            ],
        )
        .unwrap();
        let r = d_invariant(&q, 3, 1, &SearchBudget::default());
        assert_eq!(r.value, 2);
        assert!(r.exact);
    }

    #[test]
    fn full_rank_case_counts_used_variables() {
        let q = degenerate();
        let r = d_invariant(&q, 3, 2, &SearchBudget::default());
        assert_eq!(r.value, 3);
        assert!(r.exact);
        // a tuple not using x3
        let q2 = QuadTuple::from_monomials(
            3,
            vec![vec![(0, 0, rint(1))], vec![(0, 1, rint(1))]],
        )
        .unwrap();
        let r2 = d_invariant(&q2, 3, 2, &SearchBudget::default());
        assert_eq!(r2.value, 2);
        assert!(r2.exact);
    }

    #[test]
    fn monotone_in_d_prime() {
        let q = degenerate();
        let b = SearchBudget::default();
        let mut last = 0;
        for dp in 0..=3 {
            let r = d_invariant(&q, dp, 1, &b);
            assert!(r.value >= last, "value must be monotone in d'");
            last = r.value;
        }
    }

    #[test]
    fn d12_distinguishes_the_two_xisq_classes() {
        let b = SearchBudget::default();
        // (x1^2, x1 x2): common zero (0,1) -> 0
        let q1 = QuadTuple::from_monomials(2, vec![vec![(0, 0, rint(1))], vec![(0, 1, rint(1))]]).unwrap();
        let r1 = d_invariant(&q1, 1, 2, &b);
        assert_eq!(r1.value, 0);
        assert!(r1.exact);
        // (x1^2, x2^2): no common zero -> 1
        let q2 = QuadTuple::from_monomials(2, vec![vec![(0, 0, rint(1))], vec![(1, 1, rint(1))]]).unwrap();
        let r2 = d_invariant(&q2, 1, 2, &b);
        assert_eq!(r2.value, 1);
        assert!(r2.exact);
        // (x1 x2, x1^2 - x2^2): no common zero -> 1
        let q3 = QuadTuple::from_monomials(
            2,
            vec![vec![(0, 1, rint(1))], vec![(0, 0, rint(1)), (1, 1, rint(-1))]],
        )
        .unwrap();
        let r3 = d_invariant(&q3, 1, 2, &b);
        assert_eq!(r3.value, 1);
        assert!(r3.exact);
    }
}
