//! Univariate polynomials over the rationals with Sturm-sequence real-root
//! machinery. This is the certification layer behind the pencil invariants:
//! rank drops happen exactly at real roots of minor gcds, and Sturm chains
//! decide real-root existence without leaving the rationals.

use crate::rational::{rat, rint, rzero, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    /// coeffs[k] multiplies t^k; no trailing zeros.
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// a + b t
    pub fn linear(a: Rat, b: Rat) -> Self {
        Self::new(vec![a, b])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(rzero)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = rzero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        UniPoly::new(coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![rzero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::new(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rint(k as i64))
            .collect();
        UniPoly::new(coeffs)
    }

    /// Monic rescaling (leading coefficient 1); zero stays zero.
    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(l) => {
                let inv = rint(1) / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Rescaling by a positive constant so |leading| = 1; keeps every sign,
    /// which Sturm chains depend on.
    pub fn normalize_positive(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(l) => {
                let inv = rint(1) / l.abs();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division: self = q*div + r with deg r < deg div.
    pub fn divrem(&self, div: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let dd = div.degree().unwrap();
        let dl = div.leading().unwrap().clone();
        let mut q = vec![rzero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap() / &dl;
            let shift = rd - dd;
            q[shift] = factor.clone();
            // rem -= factor * t^shift * div
            let mut coeffs = rem.coeffs.clone();
            for (k, c) in div.coeffs.iter().enumerate() {
                coeffs[k + shift] -= &factor * c;
            }
            rem = UniPoly::new(coeffs);
        }
        (UniPoly::new(q), rem)
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic(); // control coefficient growth
        }
        a.monic()
    }

    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) || g.is_zero() {
            return self.monic();
        }
        let (q, _) = self.divrem(&g);
        q.monic()
    }

    /// Number of distinct real roots (Sturm, on the squarefree part).
    pub fn count_real_roots(&self) -> usize {
        let p = self.squarefree_part();
        match p.degree() {
            None | Some(0) => 0,
            _ => {
                let chain = sturm_chain(&p);
                let neg = sign_variations_at_neg_inf(&chain);
                let pos = sign_variations_at_pos_inf(&chain);
                neg.saturating_sub(pos)
            }
        }
    }

    pub fn has_real_root(&self) -> bool {
        if self.is_zero() {
            return true; // identically zero: every t
        }
        self.count_real_roots() > 0
    }

    /// Distinct real roots in (a, b] of the squarefree part.
    pub fn count_real_roots_in(&self, a: &Rat, b: &Rat) -> usize {
        let p = self.squarefree_part();
        match p.degree() {
            None | Some(0) => 0,
            _ => {
                let chain = sturm_chain(&p);
                let va = sign_variations_at(&chain, a);
                let vb = sign_variations_at(&chain, b);
                va.saturating_sub(vb)
            }
        }
    }

    /// Cauchy bound: all real roots lie in [-B, B].
    pub fn root_bound(&self) -> Rat {
        let lead = match self.leading() {
            Some(l) => l.clone(),
            None => return rint(1),
        };
        let mut m = rzero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let a = (c / &lead).abs();
            if a > m {
                m = a;
            }
        }
        m + rint(1)
    }

    /// Isolates some real root to an interval of width <= 2^-precision_bits
    /// and returns the midpoint. None if there is no real root.
    pub fn isolate_real_root(&self, precision_bits: u32) -> Option<Rat> {
        let p = self.squarefree_part();
        p.degree()?;
        if p.degree() == Some(0) {
            return None;
        }
        let chain = sturm_chain(&p);
        let bound = p.root_bound();
        let mut lo = -bound.clone();
        let mut hi = bound;
        let count = |a: &Rat, b: &Rat| -> usize {
            sign_variations_at(&chain, a).saturating_sub(sign_variations_at(&chain, b))
        };
        if count(&lo, &hi) == 0 {
            return None;
        }
        let target = rat(1, 2).pow(precision_bits as i32);
        while (&hi - &lo) > target {
            let mid = (&lo + &hi) * rat(1, 2);
            if p.eval(&mid).is_zero() {
                return Some(mid);
            }
            if count(&lo, &mid) > 0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some((&lo + &hi) * rat(1, 2))
    }

    /// All rational roots (exact), via the rational root theorem on the
    /// primitive integer form.
    pub fn rational_roots(&self) -> Vec<Rat> {
        if self.is_zero() || self.degree() == Some(0) {
            return vec![];
        }
        // clear denominators
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        // strip powers of t dividing the polynomial (t = 0 root)
        let mut roots = Vec::new();
        let first_nonzero = ints.iter().position(|c| !c.is_zero()).unwrap();
        if first_nonzero > 0 {
            roots.push(rzero());
        }
        let ints = &ints[first_nonzero..];
        if ints.len() <= 1 {
            return roots;
        }
        let a0 = ints[0].clone();
        let an = ints.last().unwrap().clone();
        let p_divs = small_divisors(&a0);
        let q_divs = small_divisors(&an);
        let mut seen = std::collections::BTreeSet::new();
        for p in &p_divs {
            for q in &q_divs {
                for sign in [1i64, -1] {
                    let cand = Rat::new(p * BigInt::from(sign), q.clone());
                    if seen.insert(cand.to_string()) && self.eval(&cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    pub fn to_string_t(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let body = match k {
                0 => crate::rational::rat_string(c),
                1 if c.is_one() => "t".into(),
                1 => format!("{}*t", crate::rational::rat_string(c)),
                _ if c.is_one() => format!("t^{k}"),
                _ => format!("{}*t^{k}", crate::rational::rat_string(c)),
            };
            parts.push(body);
        }
        parts.join(" + ")
    }
}

fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    // Divisors of |n| up to a search cap; complete for |n| <= cap^2-ish.
    // Incomplete divisor lists only shrink the rational-root candidate set;
    // irrational/missed roots are still handled by Sturm isolation.
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let cap = BigInt::from(1_000_000u64);
    let mut divs = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n && i <= cap {
        if (&n % &i).is_zero() {
            divs.push(i.clone());
            divs.push(&n / &i);
        }
        i += BigInt::one();
    }
    divs.sort();
    divs.dedup();
    divs
}

fn sign(x: &Rat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let len = chain.len();
        if chain[len - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[len - 2].divrem(&chain[len - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg().normalize_positive());
    }
    chain
}

fn count_variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_variations_at(chain: &[UniPoly], t: &Rat) -> usize {
    count_variations(chain.iter().map(|p| sign(&p.eval(t))))
}

fn sign_variations_at_pos_inf(chain: &[UniPoly]) -> usize {
    count_variations(chain.iter().map(|p| p.leading().map(sign).unwrap_or(0)))
}

fn sign_variations_at_neg_inf(chain: &[UniPoly]) -> usize {
    count_variations(chain.iter().map(|p| {
        let s = p.leading().map(sign).unwrap_or(0);
        if p.degree().map(|d| d % 2 == 1).unwrap_or(false) {
            -s
        } else {
            s
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|&c| rint(c)).collect())
    }

    #[test]
    fn sturm_counts_real_roots() {
        // t^2 - 2: two real (irrational) roots
        assert_eq!(poly(&[-2, 0, 1]).count_real_roots(), 2);
        // t^2 + 1: none
        assert_eq!(poly(&[1, 0, 1]).count_real_roots(), 0);
        // t^3 - t = t(t-1)(t+1): three
        assert_eq!(poly(&[0, -1, 0, 1]).count_real_roots(), 3);
        // (t-1)^2: one distinct
        assert_eq!(poly(&[1, -2, 1]).count_real_roots(), 1);
    }

    #[test]
    fn roots_in_interval() {
        let p = poly(&[0, -1, 0, 1]); // roots -1, 0, 1
        assert_eq!(p.count_real_roots_in(&rat(-1, 2), &rint(2)), 2);
        assert_eq!(p.count_real_roots_in(&rint(-2), &rint(2)), 3);
    }

    #[test]
    fn isolates_sqrt2() {
        let p = poly(&[-2, 0, 1]);
        let r = p.isolate_real_root(50).unwrap();
        let x = crate::rational::to_f64(&r);
        assert!((x.abs() - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn rational_roots_found() {
        // (2t - 3)(t + 5) = 2t^2 + 7t - 15
        let p = poly(&[-15, 7, 2]);
        let roots = p.rational_roots();
        assert!(roots.contains(&rat(3, 2)));
        assert!(roots.contains(&rint(-5)));
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn gcd_and_squarefree() {
        let p = poly(&[1, -2, 1]); // (t-1)^2
        let q = poly(&[-1, 0, 1]); // (t-1)(t+1)
        let g = p.gcd(&q);
        assert_eq!(g, poly(&[-1, 1]).monic());
        assert_eq!(p.squarefree_part(), poly(&[-1, 1]).monic());
    }

    #[test]
    fn divrem_exact() {
        let p = poly(&[-15, 7, 2]);
        let d = poly(&[5, 1]);
        let (q, r) = p.divrem(&d);
        assert!(r.is_zero());
        assert_eq!(q.mul(&d), p);
    }
}
