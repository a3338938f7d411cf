//! Predicted sharp exponent ranges for the structured families, and the
//! box-testing sharpness optimizer. Case detection is declaration-based:
//! the presentation metadata decides which formula applies, and the
//! hypothesis inequalities are checked here, never inferred.

use crate::error::{CoreError, Result};
use crate::quadform::{
    spec::{derived_theta, polynomial_case_residuals},
    CaseTag, SurfaceSpec, SymMatrix,
};
use crate::rational::{rat, rint, rzero, Rat};
use num_traits::Zero;

#[derive(Debug, Clone)]
pub struct CaseParameters {
    pub case: CaseTag,
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub eta: usize,
    pub lambda: Vec<usize>,
    /// Multiplicity vector w_j = #occurrences of j among the lambda indices
    /// (for the polynomial cases: w_1 at slot 1 and w_lambda at slot lambda).
    pub w: Vec<u32>,
    pub w1: u32,
    pub w_lambda: u32,
    pub theta: usize,
    pub validity: bool,
    pub violated: Vec<String>,
    /// Set for the lambda = 1 polynomial family whose expected range is
    /// conjectural only.
    pub conjecture_note: Option<String>,
}

/// One open constraint a*(1/p) + b*(1/q) < c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

#[derive(Debug, Clone)]
pub struct ExponentRange {
    /// Strict threshold q > q_critical.
    pub q_critical: Rat,
    pub constraints: Vec<LinearConstraint>,
    pub sharp_up_to_endpoint: bool,
}

fn multiplicities(lambda: &[usize], size: usize) -> Vec<u32> {
    let mut w = vec![0u32; size];
    for &l in lambda {
        w[l - 1] += 1;
    }
    w
}

fn has_mixed_terms(m: &SymMatrix) -> bool {
    let d = m.dim();
    (0..d).any(|i| (i + 1..d).any(|j| !m.entry(i, j).is_zero()))
}

fn depends_on(m: &SymMatrix, var0: usize) -> bool {
    let d = m.dim();
    (0..d).any(|l| !m.entry(var0, l).is_zero())
}

pub fn case_parameters(spec: &SurfaceSpec) -> Result<CaseParameters> {
    let meta = spec
        .meta
        .as_ref()
        .ok_or_else(|| CoreError::Precondition("case parameters require structural metadata".into()))?;
    let q = &spec.tuple;
    let d = q.d();
    let n = q.n();
    let k = d.saturating_sub(n);
    let mut violated: Vec<String> = Vec::new();
    let mut conjecture_note = None;

    let params = match meta.case {
        CaseTag::C1 => {
            let w = multiplicities(&meta.lambda, n);
            for (j, &l) in meta.lambda.iter().enumerate() {
                if l > j + 1 {
                    violated.push(format!("lambda_{} <= {} (got {})", j + 1, j + 1, l));
                }
            }
            CaseParameters {
                case: meta.case,
                d,
                n,
                k: 0,
                eta: 0,
                lambda: meta.lambda.clone(),
                w,
                w1: 0,
                w_lambda: 0,
                theta: 0,
                validity: violated.is_empty(),
                violated,
                conjecture_note,
            }
        }
        CaseTag::C3 => {
            let w = multiplicities(&meta.lambda, d);
            for (i, &l) in meta.lambda.iter().enumerate() {
                let j = k + i + 1;
                if l > j {
                    violated.push(format!("lambda_{j} <= {j} (got {l})"));
                }
            }
            for (j, &wj) in w.iter().enumerate().take(k) {
                if wj < 1 {
                    violated.push(format!("w_{} >= 1 for 1 <= j <= k", j + 1));
                }
            }
            CaseParameters {
                case: meta.case,
                d,
                n,
                k,
                eta: 0,
                lambda: meta.lambda.clone(),
                w,
                w1: 0,
                w_lambda: 0,
                theta: 0,
                validity: violated.is_empty(),
                violated,
                conjecture_note,
            }
        }
        CaseTag::C4 => {
            let eta = meta.eta.expect("validated at parse time");
            let w = multiplicities(&meta.lambda, d);
            for (i, &l) in meta.lambda.iter().enumerate() {
                let j = eta + k + i + 1;
                if l > j {
                    violated.push(format!("lambda_{j} <= {j} (got {l})"));
                }
            }
            for j in eta + 1..=eta + k {
                if w[j - 1] < 1 {
                    violated.push(format!("w_{j} >= 1 for eta+1 <= j <= eta+k"));
                }
            }
            CaseParameters {
                case: meta.case,
                d,
                n,
                k,
                eta,
                lambda: meta.lambda.clone(),
                w,
                w1: 0,
                w_lambda: 0,
                theta: 0,
                validity: violated.is_empty(),
                violated,
                conjecture_note,
            }
        }
        CaseTag::C2a | CaseTag::C2b | CaseTag::C2c | CaseTag::C5a | CaseTag::C5b
        | CaseTag::C5c | CaseTag::C5d => {
            let is5 = matches!(meta.case, CaseTag::C5a | CaseTag::C5b | CaseTag::C5c | CaseTag::C5d);
            let trailing = if is5 { k } else { 0 };
            let lambda = meta.lambda[0];
            let w1 = meta.w1.expect("validated at parse time") as u32;
            let w_lambda = (n as u32).saturating_sub(w1);
            let theta = derived_theta(q, w1 as usize, lambda, trailing);
            let residuals = polynomial_case_residuals(q, w1 as usize, lambda, trailing)?;

            // shared lambda-range hypothesis
            let lambda_lo = if matches!(meta.case, CaseTag::C5d) { 1 } else { 2 };
            if lambda < lambda_lo || lambda > w1 as usize + 1 {
                violated.push(format!("{lambda_lo} <= lambda <= w1+1 (got lambda = {lambda})"));
                if lambda == 1 && !matches!(meta.case, CaseTag::C5d) {
                    conjecture_note = Some(
                        "lambda = 1 family: the sharp range is only conjectured (p > n+2 expected); no prediction is made"
                            .into(),
                    );
                }
            }
            // weight hypotheses
            match meta.case {
                CaseTag::C2c | CaseTag::C5c => {
                    if 2 * w1 < 2 * w_lambda + theta as u32 {
                        violated.push("w1 >= w_lambda + theta/2".into());
                    }
                }
                CaseTag::C5d => {
                    if w1 < w_lambda {
                        violated.push("w1 >= w_lambda".into());
                    }
                }
                _ => {
                    if w1 < w_lambda + theta as u32 {
                        violated.push("w1 >= w_lambda + theta".into());
                    }
                }
            }
            if is5 && w_lambda == 0 {
                violated.push("w_lambda > 0".into());
            }
            // residual-shape hypotheses
            let upper = if is5 { d } else { n };
            for (off, r) in residuals.iter().enumerate() {
                let j = w1 as usize + off + 1; // 1-based form index
                match meta.case {
                    CaseTag::C2a | CaseTag::C5a => {
                        if depends_on(r, 0) {
                            violated.push(format!("P_{j} independent of x1"));
                        }
                        for v in j..=upper {
                            if depends_on(r, v - 1) {
                                violated.push(format!("P_{j} independent of x{v}..x{upper}"));
                                break;
                            }
                        }
                    }
                    CaseTag::C2b | CaseTag::C5b => {
                        if has_mixed_terms(r) {
                            violated.push(format!("P_{j} has no mixed terms"));
                        }
                        for v in j..=upper {
                            if depends_on(r, v - 1) {
                                violated.push(format!("P_{j} independent of x{v}..x{upper}"));
                                break;
                            }
                        }
                    }
                    CaseTag::C2c | CaseTag::C5c => { /* handled jointly below */ }
                    CaseTag::C5d => {
                        if !r.is_zero() {
                            violated.push(format!("P_{j} = 0"));
                        }
                    }
                    _ => unreachable!(),
                }
            }
            if matches!(meta.case, CaseTag::C2c | CaseTag::C5c) {
                let nonzero: Vec<usize> = residuals
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| !r.is_zero())
                    .map(|(off, _)| w1 as usize + off + 1)
                    .collect();
                if nonzero.len() > 1 {
                    violated.push("exactly one P_j may be nonzero".into());
                } else if let Some(&j) = nonzero.first() {
                    let r = &residuals[j - 1 - w1 as usize];
                    if has_mixed_terms(r) {
                        violated.push(format!("P_{j} has no mixed terms"));
                    }
                    for v in j..=upper {
                        if depends_on(r, v - 1) {
                            violated.push(format!("P_{j} independent of x{v}..x{upper}"));
                            break;
                        }
                    }
                }
            }
            let mut w = vec![0u32; n];
            w[0] += w1;
            w[lambda - 1] += w_lambda;
            CaseParameters {
                case: meta.case,
                d,
                n,
                k: trailing,
                eta: 0,
                lambda: meta.lambda.clone(),
                w,
                w1,
                w_lambda,
                theta,
                validity: violated.is_empty(),
                violated,
                conjecture_note,
            }
        }
    };
    Ok(params)
}

pub fn predicted_range(params: &CaseParameters) -> Result<ExponentRange> {
    if !params.validity {
        return Err(CoreError::Precondition(format!(
            "case hypotheses violated: {}",
            params.violated.join("; ")
        )));
    }
    let range = match params.case {
        CaseTag::C1 => {
            let m = *params.w.iter().max().unwrap_or(&0) as i64;
            ExponentRange {
                q_critical: rint(m + 3),
                constraints: vec![LinearConstraint { a: rint(1), b: rint(m + 2), c: rint(1) }],
                sharp_up_to_endpoint: true,
            }
        }
        CaseTag::C2a | CaseTag::C2b | CaseTag::C2c | CaseTag::C5a | CaseTag::C5b
        | CaseTag::C5c | CaseTag::C5d => {
            let w1 = params.w1 as i64;
            ExponentRange {
                q_critical: rint(w1 + 3),
                constraints: vec![LinearConstraint { a: rint(1), b: rint(w1 + 2), c: rint(1) }],
                sharp_up_to_endpoint: true,
            }
        }
        CaseTag::C3 => {
            let k = params.k;
            let head = params.w[..k].iter().max().copied().unwrap_or(0) as i64 + 2;
            let tail = params.w[k..].iter().max().copied().unwrap_or(0) as i64 + 3;
            let q1 = head.max(tail);
            ExponentRange {
                q_critical: rint(q1),
                constraints: vec![LinearConstraint { a: rint(1), b: rint(q1 - 1), c: rint(1) }],
                sharp_up_to_endpoint: true,
            }
        }
        CaseTag::C4 => {
            let (eta, k) = (params.eta, params.k);
            let a = params.w[..eta].iter().max().copied().unwrap_or(0) as i64 + 4;
            let b = params.w[eta..eta + k].iter().max().copied().unwrap_or(0) as i64 + 2;
            let c = params.w[eta + k..].iter().max().copied().unwrap_or(0) as i64 + 3;
            let q2 = a.max(b).max(c);
            ExponentRange {
                q_critical: rint(q2),
                constraints: vec![LinearConstraint { a: rint(1), b: rint(q2 - 1), c: rint(1) }],
                sharp_up_to_endpoint: true,
            }
        }
    };
    Ok(range)
}

/// The box-test bound (sum w_j t_j) / (sum t_j) + 3.
pub fn necessary_q_box(w: &[u32], t: &[Rat]) -> Result<Rat> {
    if w.len() != t.len() {
        return Err(CoreError::DimensionMismatch("w and t must have the same length".into()));
    }
    let denom: Rat = t.iter().fold(rzero(), |acc, x| acc + x.clone());
    if denom.is_zero() {
        return Err(CoreError::Precondition("t must not be the zero vector".into()));
    }
    let numer: Rat = w
        .iter()
        .zip(t)
        .fold(rzero(), |acc, (&wj, tj)| acc + rint(wj as i64) * tj.clone());
    Ok(numer / denom + rint(3))
}

/// Brute-force maximum of the box-test bound over the grid {0, 1/2, 1}^n
/// minus the origin. Ties prefer the simplest witness: fewest nonzero
/// entries, then earliest support, then larger values (the indicator of the
/// largest weight wins every time).
pub fn sharpness_optimizer(w: &[u32]) -> Result<(Rat, Vec<Rat>)> {
    sharpness_optimizer_grid(w, 2)
}

/// The same brute force over the finer grid {0, 1/m, ..., 1}^n.
pub fn sharpness_optimizer_grid(w: &[u32], m: u32) -> Result<(Rat, Vec<Rat>)> {
    let n = w.len();
    if n == 0 || w.iter().all(|&x| x == 0) {
        return Err(CoreError::Precondition("w must be nonzero".into()));
    }
    if n > 16 {
        return Err(CoreError::BudgetExceeded("sharpness optimizer limited to n <= 16".into()));
    }
    if m < 1 || m > 16 {
        return Err(CoreError::Precondition("grid refinement m must lie in 1..=16".into()));
    }
    let levels = m as u64 + 1;
    let total = (levels as u128).pow(n as u32);
    if total > 1u128 << 40 {
        return Err(CoreError::BudgetExceeded("sharpness grid too large".into()));
    }
    // integer arithmetic on tau = m * t in {0..m}
    let mut best: Option<(u64, u64, Vec<u64>)> = None; // (numer, denom, tau)
    let mut tau = vec![0u64; n];
    loop {
        // advance odometer
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            tau[i] += 1;
            if tau[i] < levels {
                break;
            }
            tau[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        let den: u64 = tau.iter().sum();
        if den == 0 {
            continue;
        }
        let num: u64 = w.iter().zip(&tau).map(|(&wj, &tj)| wj as u64 * tj).sum();
        let better = match &best {
            None => true,
            Some((bn, bd, bt)) => {
                // compare num/den vs bn/bd
                let lhs = (num as u128) * (*bd as u128);
                let rhs = (*bn as u128) * (den as u128);
                if lhs != rhs {
                    lhs > rhs
                } else {
                    simpler_witness(&tau, bt)
                }
            }
        };
        if better {
            best = Some((num, den, tau.clone()));
        }
    }
    let (num, den, tau) = best.expect("grid has nonzero points");
    let q = Rat::new((num as i64).into(), (den as i64).into()) + rint(3);
    let t = tau.iter().map(|&x| rat(x as i64, m as i64)).collect();
    Ok((q, t))
}

/// Witness preference: fewer nonzero entries, then earlier support, then
/// pointwise larger values.
fn simpler_witness(cand: &[u64], best: &[u64]) -> bool {
    let nz = |v: &[u64]| v.iter().filter(|&&x| x > 0).count();
    let (cn, bn) = (nz(cand), nz(best));
    if cn != bn {
        return cn < bn;
    }
    let support = |v: &[u64]| -> Vec<usize> {
        v.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i).collect()
    };
    let (cs, bs) = (support(cand), support(best));
    if cs != bs {
        return cs < bs;
    }
    cand > best
}

/// Vertices of the closure of the admissible region in the (1/p, 1/q)
/// square, clipped by the q-threshold and the range constraints.
pub fn admissible_region_vertices(range: &ExponentRange) -> Vec<(Rat, Rat)> {
    // start from the unit square, counterclockwise
    let mut poly: Vec<(Rat, Rat)> = vec![
        (rzero(), rzero()),
        (rint(1), rzero()),
        (rint(1), rint(1)),
        (rzero(), rint(1)),
    ];
    // y <= 1/q_critical
    let mut halfplanes = vec![(rzero(), rint(1), rint(1) / range.q_critical.clone())];
    for c in &range.constraints {
        halfplanes.push((c.a.clone(), c.b.clone(), c.c.clone()));
    }
    for (a, b, c) in halfplanes {
        poly = clip(&poly, &a, &b, &c);
        if poly.is_empty() {
            return vec![];
        }
    }
    // drop duplicate and collinear vertices
    dedupe(poly)
}

fn clip(poly: &[(Rat, Rat)], a: &Rat, b: &Rat, c: &Rat) -> Vec<(Rat, Rat)> {
    let inside = |p: &(Rat, Rat)| -> bool { &(a * &p.0 + b * &p.1) <= c };
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let p = &poly[i];
        let q = &poly[(i + 1) % poly.len()];
        let (pin, qin) = (inside(p), inside(q));
        if pin {
            out.push(p.clone());
        }
        if pin != qin {
            // intersection of segment pq with ax + by = c
            let fp = a * &p.0 + b * &p.1;
            let fq = a * &q.0 + b * &q.1;
            let t = (c - &fp) / (&fq - &fp);
            let x = &p.0 + &t * &(&q.0 - &p.0);
            let y = &p.1 + &t * &(&q.1 - &p.1);
            out.push((x, y));
        }
    }
    out
}

fn dedupe(poly: Vec<(Rat, Rat)>) -> Vec<(Rat, Rat)> {
    let mut out: Vec<(Rat, Rat)> = Vec::new();
    for p in poly {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    // remove collinear middles
    if out.len() >= 3 {
        let mut cleaned: Vec<(Rat, Rat)> = Vec::new();
        let n = out.len();
        for i in 0..n {
            let prev = &out[(i + n - 1) % n];
            let cur = &out[i];
            let next = &out[(i + 1) % n];
            let cross = (&cur.0 - &prev.0) * (&next.1 - &prev.1)
                - (&cur.1 - &prev.1) * (&next.0 - &prev.0);
            if !cross.is_zero() {
                cleaned.push(cur.clone());
            }
        }
        if cleaned.len() >= 3 {
            return cleaned;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::parse_surface;

    #[test]
    fn case1_multiplicities() {
        let s = parse_surface("d=3 n=3\nQ1=x1^2\nQ2=x2^2\nQ3=x3^2\nmeta case=1 lambda=[1,2,3]\n").unwrap();
        let p = case_parameters(&s).unwrap();
        assert_eq!(p.w, vec![1, 1, 1]);
        assert!(p.validity);

        let s = parse_surface("d=3 n=3\nQ1=x1^2\nQ2=x1*x2\nQ3=x1*x3\nmeta case=1 lambda=[1,1,1]\n").unwrap();
        let p = case_parameters(&s).unwrap();
        assert_eq!(p.w, vec![3, 0, 0]);
        assert!(p.validity);
    }

    #[test]
    fn case2_lambda_range_violation() {
        // lambda = 1 declared for case 2a: hypothesis fails, conjecture noted
        let s = parse_surface("d=2 n=2\nQ1=x1^2\nQ2=x1*x2\nmeta case=2a lambda=[1] w1=1\n").unwrap();
        let p = case_parameters(&s).unwrap();
        assert!(!p.validity);
        assert!(p.violated.iter().any(|v| v.contains("2 <= lambda <= w1+1")));
        assert!(p.conjecture_note.is_some());
        assert!(predicted_range(&p).is_err());
    }

    #[test]
    fn theorem_51_ranges() {
        // (x1^2, x1 x2): case 1, lambda = (1,1): q > 5, 1/p + 4/q < 1
        let s = parse_surface("d=2 n=2\nQ1=x1^2\nQ2=x1*x2\nmeta case=1 lambda=[1,1]\n").unwrap();
        let r = predicted_range(&case_parameters(&s).unwrap()).unwrap();
        assert_eq!(r.q_critical, rint(5));
        assert_eq!(r.constraints[0], LinearConstraint { a: rint(1), b: rint(4), c: rint(1) });

        // (x1^2, x2^2): q > 4, 1/p + 3/q < 1
        let s = parse_surface("d=2 n=2\nQ1=x1^2\nQ2=x2^2\nmeta case=1 lambda=[1,2]\n").unwrap();
        let r = predicted_range(&case_parameters(&s).unwrap()).unwrap();
        assert_eq!(r.q_critical, rint(4));
        assert_eq!(r.constraints[0], LinearConstraint { a: rint(1), b: rint(3), c: rint(1) });
    }

    #[test]
    fn case4_equal_maxima() {
        // eta=1, k=1, d=4, n=3: (x1^2, x_l3 x3, x_l4 x4) with all relevant
        // maxima equal: q2 = m + 4
        let s = parse_surface(
            "d=4 n=3\nQ1=x1^2\nQ2=x2*x3\nQ3=x3*x4\nmeta case=4 lambda=[2,3] eta=1 k=1\n",
        )
        .unwrap();
        let p = case_parameters(&s).unwrap();
        assert!(p.validity, "violations: {:?}", p.violated);
        // w = (0, 1, 1, 0): head max w_1 = 0 -> 4; mid (j=2): 1+2 = 3; tail (j>2): 1+3 = 4
        let r = predicted_range(&p).unwrap();
        assert_eq!(r.q_critical, rint(4));
    }

    #[test]
    fn box_bound_examples() {
        assert_eq!(necessary_q_box(&[2, 0], &[rint(1), rzero()]).unwrap(), rint(5));
        assert_eq!(necessary_q_box(&[1, 1], &[rint(1), rint(1)]).unwrap(), rint(4));
        assert!(necessary_q_box(&[1, 1], &[rzero(), rzero()]).is_err());
        // scale invariance in t
        let t1 = vec![rat(1, 2), rat(1, 2)];
        let t2 = vec![rint(1), rint(1)];
        assert_eq!(
            necessary_q_box(&[3, 1], &t1).unwrap(),
            necessary_q_box(&[3, 1], &t2).unwrap()
        );
    }

    #[test]
    fn optimizer_matches_closed_form() {
        let (q, t) = sharpness_optimizer(&[2, 0]).unwrap();
        assert_eq!(q, rint(5));
        assert_eq!(t, vec![rint(1), rzero()]);

        let (q, t) = sharpness_optimizer(&[1, 1, 1, 1]).unwrap();
        assert_eq!(q, rint(4));
        assert_eq!(t, vec![rint(1), rzero(), rzero(), rzero()]);

        // closed form max_j w_j + 3 on random vectors
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let w: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=5)).collect();
            if w.iter().all(|&x| x == 0) {
                continue;
            }
            let (q, _) = sharpness_optimizer(&w).unwrap();
            let m = *w.iter().max().unwrap() as i64;
            assert_eq!(q, rint(m + 3), "w = {w:?}");
        }
    }

    #[test]
    fn optimizer_monotone_in_w() {
        let w = [2u32, 1, 0];
        let (q0, _) = sharpness_optimizer(&w).unwrap();
        for j in 0..w.len() {
            let mut w2 = w;
            w2[j] += 1;
            let (q1, _) = sharpness_optimizer(&w2).unwrap();
            assert!(q1 >= q0);
        }
    }

    #[test]
    fn region_vertices_case1() {
        let range = ExponentRange {
            q_critical: rint(5),
            constraints: vec![LinearConstraint { a: rint(1), b: rint(4), c: rint(1) }],
            sharp_up_to_endpoint: true,
        };
        let v = admissible_region_vertices(&range);
        let expect = [
            (rzero(), rzero()),
            (rint(1), rzero()),
            (rat(1, 5), rat(1, 5)),
            (rzero(), rat(1, 5)),
        ];
        assert_eq!(v.len(), 4, "got {v:?}");
        for e in &expect {
            assert!(v.contains(e), "missing {e:?} in {v:?}");
        }
    }

    #[test]
    fn empty_region() {
        let range = ExponentRange {
            q_critical: rint(4),
            constraints: vec![LinearConstraint { a: rzero(), b: rzero(), c: rint(-1) }],
            sharp_up_to_endpoint: false,
        };
        assert!(admissible_region_vertices(&range).is_empty());
    }

    #[test]
    fn refusal_over_budget() {
        assert!(sharpness_optimizer(&[1; 17]).is_err());
    }
}
