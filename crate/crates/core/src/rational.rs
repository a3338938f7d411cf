//! Exact rational scalars. `Rat` is stored in lowest terms with a positive
//! denominator (maintained by `num-rational`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rzero() -> Rat {
    Rat::zero()
}

pub fn rone() -> Rat {
    rint(1)
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fallback for magnitudes outside f64 exponent range of the parts.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY * sign_f(x));
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

fn sign_f(x: &Rat) -> f64 {
    if x.is_negative() {
        -1.0
    } else {
        1.0
    }
}

/// Serialization form used in reports: "num/den", or "num" when den = 1.
pub fn rat_string(x: &Rat) -> String {
    x.to_string()
}

/// Parse "a", "a/b" or a decimal like "0.5" into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip_val: BigInt = if ip.is_empty() || ip == "-" { BigInt::zero() } else { ip.parse().ok()? };
        if !fp.chars().all(|c| c.is_ascii_digit()) || fp.is_empty() {
            return None;
        }
        let fp_val: BigInt = fp.parse().ok()?;
        let den = BigInt::from(10u32).pow(fp.len() as u32);
        let frac = Rat::new(fp_val, den);
        let whole = Rat::from_integer(ip_val);
        return Some(if neg { whole - frac } else { whole + frac });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}
