//! Surface specifications: an expanded tuple plus optional structural
//! metadata (case tag, index vector, block sizes). Metadata is validated
//! against the expanded tuple, never inferred from it.

use super::QuadTuple;
use crate::error::{CoreError, Result};
use crate::rational::{rint, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    #[serde(rename = "1")]
    C1,
    #[serde(rename = "2a")]
    C2a,
    #[serde(rename = "2b")]
    C2b,
    #[serde(rename = "2c")]
    C2c,
    #[serde(rename = "3")]
    C3,
    #[serde(rename = "4")]
    C4,
    #[serde(rename = "5a")]
    C5a,
    #[serde(rename = "5b")]
    C5b,
    #[serde(rename = "5c")]
    C5c,
    #[serde(rename = "5d")]
    C5d,
}

impl CaseTag {
    pub fn parse(s: &str) -> Option<CaseTag> {
        Some(match s {
            "1" => CaseTag::C1,
            "2a" => CaseTag::C2a,
            "2b" => CaseTag::C2b,
            "2c" => CaseTag::C2c,
            "3" => CaseTag::C3,
            "4" => CaseTag::C4,
            "5a" => CaseTag::C5a,
            "5b" => CaseTag::C5b,
            "5c" => CaseTag::C5c,
            "5d" => CaseTag::C5d,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::C1 => "1",
            CaseTag::C2a => "2a",
            CaseTag::C2b => "2b",
            CaseTag::C2c => "2c",
            CaseTag::C3 => "3",
            CaseTag::C4 => "4",
            CaseTag::C5a => "5a",
            CaseTag::C5b => "5b",
            CaseTag::C5c => "5c",
            CaseTag::C5d => "5d",
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(
            self,
            CaseTag::C2a
                | CaseTag::C2b
                | CaseTag::C2c
                | CaseTag::C5a
                | CaseTag::C5b
                | CaseTag::C5c
                | CaseTag::C5d
        )
    }
}

/// User-declared presentation metadata. `lambda` uses 1-based variable
/// indices as in the surface grammar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralMeta {
    pub case: CaseTag,
    pub lambda: Vec<usize>,
    pub w1: Option<usize>,
    pub theta: Option<usize>,
    pub k: Option<usize>,
    pub eta: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub tuple: QuadTuple,
    pub meta: Option<StructuralMeta>,
    /// Set when a non-symmetric matrix body was symmetrized.
    pub symmetrized: bool,
}

impl SurfaceSpec {
    pub fn new(tuple: QuadTuple, meta: Option<StructuralMeta>, symmetrized: bool) -> Result<Self> {
        if let Some(m) = &meta {
            validate_meta(&tuple, m)?;
        }
        Ok(SurfaceSpec { tuple, meta, symmetrized })
    }

    pub fn canonical_text(&self) -> String {
        let mut s = self.tuple.canonical_text();
        if let Some(m) = &self.meta {
            let mut line = format!("meta case={}", m.case.as_str());
            if !m.lambda.is_empty() {
                let items: Vec<String> = m.lambda.iter().map(|x| x.to_string()).collect();
                line.push_str(&format!(" lambda=[{}]", items.join(",")));
            }
            if let Some(w1) = m.w1 {
                line.push_str(&format!(" w1={w1}"));
            }
            if let Some(theta) = m.theta {
                line.push_str(&format!(" theta={theta}"));
            }
            if let Some(k) = m.k {
                line.push_str(&format!(" k={k}"));
            }
            if let Some(eta) = m.eta {
                line.push_str(&format!(" eta={eta}"));
            }
            s.push_str(&line);
            s.push('\n');
        }
        s
    }
}

fn err(check: &str) -> CoreError {
    CoreError::MetaInconsistent { check: check.to_string() }
}

/// Builds the monomial tuple (x_{lambda_j} x_j)_{j in positions} on d vars.
/// `positions` are 1-based form variables (the second factor).
pub fn monomial_tuple(d: usize, pairs: &[(usize, usize)]) -> Result<QuadTuple> {
    let comps = pairs
        .iter()
        .map(|&(a, b)| vec![(a - 1, b - 1, rint(1))])
        .collect();
    QuadTuple::from_monomials(d, comps)
}

/// Variables (0-based) a form's residual polynomial depends on.
fn vars_of(m: &crate::quadform::SymMatrix) -> Vec<usize> {
    let d = m.dim();
    (0..d)
        .filter(|&k| (0..d).any(|l| !m.entry(k, l).is_zero()))
        .collect()
}

/// Subtracts the monomial c*x_i*x_j from a form matrix, returning the residual.
fn subtract_monomial(
    f: &crate::quadform::SymMatrix,
    i: usize,
    j: usize,
    c: Rat,
) -> crate::quadform::SymMatrix {
    let mut out = f.clone();
    out.add_monomial(i, j, &-c);
    out
}

/// The residual polynomials P_j of a polynomial-case presentation, 1-based
/// form index -> residual matrix. For case 5 the trailing square block is
/// also stripped from Q_n.
pub fn polynomial_case_residuals(
    q: &QuadTuple,
    w1: usize,
    lambda: usize,
    trailing_squares: usize,
) -> Result<Vec<crate::quadform::SymMatrix>> {
    let n = q.n();
    let mut residuals = Vec::new();
    for j in w1..n {
        let mut r = subtract_monomial(q.form(j), lambda - 1, j, rint(1));
        if j == n - 1 {
            for s in 0..trailing_squares {
                r = subtract_monomial(&r, n + s, n + s, rint(1));
            }
        }
        residuals.push(r);
    }
    Ok(residuals)
}

fn validate_meta(q: &QuadTuple, m: &StructuralMeta) -> Result<()> {
    let d = q.d();
    let n = q.n();
    match m.case {
        CaseTag::C1 => {
            if d != n {
                return Err(err("case 1 requires d = n"));
            }
            if m.lambda.len() != n {
                return Err(err("case 1 requires a lambda entry per form"));
            }
            if m.lambda.iter().any(|&l| l < 1 || l > n) {
                return Err(err("case 1 requires 1 <= lambda_j <= n"));
            }
            let pairs: Vec<(usize, usize)> =
                m.lambda.iter().enumerate().map(|(j, &l)| (l, j + 1)).collect();
            if monomial_tuple(d, &pairs)? != *q {
                return Err(err("tuple does not match (x_{lambda_j} x_j) for the declared lambda"));
            }
        }
        CaseTag::C3 => {
            let k = d.checked_sub(n).filter(|&k| k >= 1).ok_or_else(|| err("case 3 requires d = n + k with k >= 1"))?;
            if let Some(mk) = m.k {
                if mk != k {
                    return Err(err("declared k does not equal d - n"));
                }
            }
            if m.lambda.len() != n {
                return Err(err("case 3 requires a lambda entry per form"));
            }
            if m.lambda.iter().any(|&l| l < 1 || l > d) {
                return Err(err("case 3 requires 1 <= lambda_j <= n + k"));
            }
            let pairs: Vec<(usize, usize)> =
                m.lambda.iter().enumerate().map(|(i, &l)| (l, k + i + 1)).collect();
            if monomial_tuple(d, &pairs)? != *q {
                return Err(err("tuple does not match (x_{lambda_j} x_j), j = k+1..n+k"));
            }
        }
        CaseTag::C4 => {
            let k = d.checked_sub(n).filter(|&k| k >= 1).ok_or_else(|| err("case 4 requires d = n + k with k >= 1"))?;
            if let Some(mk) = m.k {
                if mk != k {
                    return Err(err("declared k does not equal d - n"));
                }
            }
            let eta = m.eta.ok_or_else(|| err("case 4 requires eta"))?;
            if eta < 1 || eta >= n {
                return Err(err("case 4 requires 1 <= eta < n"));
            }
            if m.lambda.len() != n - eta {
                return Err(err("case 4 requires n - eta lambda entries"));
            }
            if m.lambda.iter().any(|&l| l < 1 || l > d) {
                return Err(err("case 4 requires 1 <= lambda_j <= n + k"));
            }
            let mut pairs: Vec<(usize, usize)> = (1..=eta).map(|i| (i, i)).collect();
            pairs.extend(m.lambda.iter().enumerate().map(|(i, &l)| (l, eta + k + i + 1)));
            if monomial_tuple(d, &pairs)? != *q {
                return Err(err("tuple does not match (x_1^2..x_eta^2, x_{lambda_j} x_j)"));
            }
        }
        CaseTag::C2a | CaseTag::C2b | CaseTag::C2c | CaseTag::C5a | CaseTag::C5b
        | CaseTag::C5c | CaseTag::C5d => {
            let is5 = matches!(m.case, CaseTag::C5a | CaseTag::C5b | CaseTag::C5c | CaseTag::C5d);
            let k = if is5 {
                let k = d.checked_sub(n).filter(|&k| k >= 1).ok_or_else(|| err("case 5 requires d = n + k with k >= 1"))?;
                if let Some(mk) = m.k {
                    if mk != k {
                        return Err(err("declared k does not equal d - n"));
                    }
                }
                k
            } else {
                if d != n {
                    return Err(err("case 2 requires d = n"));
                }
                0
            };
            if m.lambda.len() != 1 {
                return Err(err("polynomial cases take a single lambda index"));
            }
            let lambda = m.lambda[0];
            if lambda < 1 || lambda > n {
                return Err(err("polynomial cases require 1 <= lambda <= n"));
            }
            let w1 = m.w1.ok_or_else(|| err("polynomial cases require w1"))?;
            if w1 < 1 || w1 > n {
                return Err(err("polynomial cases require 1 <= w1 <= n"));
            }
            // leading block (x1^2, x1 x2, ..., x1 x_{w1})
            for j in 0..w1 {
                let expect = {
                    let mut f = crate::quadform::SymMatrix::zeros(d);
                    f.add_monomial(0, j, &rint(1));
                    f
                };
                if q.form(j) != &expect {
                    return Err(err("leading block must be (x1^2, x1 x2, ..., x1 x_{w1})"));
                }
            }
            // every later form carries x_lambda x_j with coefficient exactly 1
            let trailing = if is5 { k } else { 0 };
            for j in w1..n {
                let f = q.form(j);
                let c = if lambda - 1 == j {
                    f.entry(j, j).clone()
                } else {
                    f.entry(lambda - 1, j) * rint(2)
                };
                if c != rint(1) {
                    return Err(err("form Q_j must carry the monomial x_lambda*x_j with coefficient 1"));
                }
            }
            // trailing squares of Q_n for case 5
            if is5 {
                for s in 0..k {
                    if q.form(n - 1).entry(n + s, n + s) != &rint(1) {
                        return Err(err("case 5 requires Q_n to end with x_{n+1}^2 + ... + x_{n+k}^2"));
                    }
                }
            }
            // theta consistency when declared
            if let Some(theta) = m.theta {
                let derived = derived_theta(q, w1, lambda, trailing);
                if theta != derived {
                    return Err(err("declared theta does not match the variables of the P_j"));
                }
            }
        }
    }
    Ok(())
}

/// Number of variables the residual polynomials depend on, excluding x1 and
/// x_lambda.
pub fn derived_theta(q: &QuadTuple, w1: usize, lambda: usize, trailing_squares: usize) -> usize {
    let residuals = polynomial_case_residuals(q, w1, lambda, trailing_squares).unwrap();
    let mut used = vec![false; q.d()];
    for r in &residuals {
        for v in vars_of(r) {
            used[v] = true;
        }
    }
    used[0] = false;
    used[lambda - 1] = false;
    used.iter().filter(|&&b| b).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case1_roundtrip_and_mismatch() {
        // (x1 x1, x1 x2) = case 1 with lambda = (1, 1)
        let q = monomial_tuple(2, &[(1, 1), (1, 2)]).unwrap();
        let meta = StructuralMeta {
            case: CaseTag::C1,
            lambda: vec![1, 1],
            w1: None,
            theta: None,
            k: None,
            eta: None,
        };
        assert!(SurfaceSpec::new(q.clone(), Some(meta.clone()), false).is_ok());
        let wrong = StructuralMeta { lambda: vec![1, 2], ..meta };
        assert!(SurfaceSpec::new(q, Some(wrong), false).is_err());
    }

    #[test]
    fn case4_structure() {
        // d=4, n=3, k=1, eta=1: (x1^2, x_{lambda_3} x_3, x_{lambda_4} x_4)
        // lambda entries for j = eta+k+1 .. n+k = 3..4
        let q = monomial_tuple(4, &[(1, 1), (2, 3), (3, 4)]).unwrap();
        let meta = StructuralMeta {
            case: CaseTag::C4,
            lambda: vec![2, 3],
            w1: None,
            theta: None,
            k: Some(1),
            eta: Some(1),
        };
        assert!(SurfaceSpec::new(q, Some(meta), false).is_ok());
    }
}
