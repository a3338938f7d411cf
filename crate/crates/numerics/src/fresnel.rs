//! Fresnel integrals and closed forms for 1-D segments of quadratic phase:
//! seg(alpha, beta, L) = ∫_0^L e^{2πi (alpha u^2 + beta u)} du.
//! These are the innermost analytic steps of the box-extension evaluator.

use num_complex::Complex64;
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;

pub fn e2pi(b: f64) -> Complex64 {
    let (s, c) = (TWO_PI * b).sin_cos();
    Complex64::new(c, s)
}

/// Fresnel integrals C(x), S(x) with the standard normalization
/// C(x) + i S(x) = ∫_0^x e^{i π t^2 / 2} dt.
/// Series for small |x|, modified-Lentz continued fraction for large |x|.
pub fn fresnel_cs(x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-16;
    const MAXIT: usize = 300;
    const FPMIN: f64 = 1e-300;
    const XMIN: f64 = 1.5;
    let ax = x.abs();
    let (mut c, mut s);
    if ax * ax < 1e-20 {
        c = ax;
        s = PI / 6.0 * ax * ax * ax;
    } else if ax <= XMIN {
        // power series, alternating between the C and S partial sums
        let mut sum = 0.0f64;
        let mut sums = 0.0f64;
        let mut sumc = ax;
        let mut sign = 1.0f64;
        let fact = 0.5 * PI * ax * ax;
        let mut odd = true;
        let mut term = ax;
        let mut nterm = 3.0f64;
        for k in 1..=MAXIT {
            term *= fact / k as f64;
            sum += sign * term / nterm;
            let test = sum.abs() * EPS;
            if odd {
                sign = -sign;
                sums = sum;
                sum = sumc;
            } else {
                sumc = sum;
                sum = sums;
            }
            if term < test {
                break;
            }
            odd = !odd;
            nterm += 2.0;
        }
        s = sums;
        c = sumc;
    } else {
        // continued fraction for the complex auxiliary function
        let pix2 = PI * ax * ax;
        let mut b = Complex64::new(1.0, -pix2);
        let mut cc = Complex64::new(1.0 / FPMIN, 0.0);
        let mut d = Complex64::new(1.0, 0.0) / b;
        let mut h = d;
        let mut n = -1.0f64;
        for _ in 2..=MAXIT {
            n += 2.0;
            let a = -n * (n + 1.0);
            b += Complex64::new(4.0, 0.0);
            d = (a * d + b).finv();
            cc = b + Complex64::new(a, 0.0) / cc;
            let del = cc * d;
            h *= del;
            if (del.re - 1.0).abs() + del.im.abs() < EPS {
                break;
            }
        }
        h *= Complex64::new(ax, -ax);
        let phase = Complex64::new((0.5 * pix2).cos(), (0.5 * pix2).sin());
        let cs = Complex64::new(0.5, 0.5) * (Complex64::new(1.0, 0.0) - phase * h);
        c = cs.re;
        s = cs.im;
    }
    if x < 0.0 {
        c = -c;
        s = -s;
    }
    (c, s)
}

/// G(alpha, v) = ∫_0^v e^{2πi alpha t^2} dt for alpha != 0 (odd in v).
fn fresnel_g(alpha: f64, v: f64) -> Complex64 {
    let a = alpha.abs();
    let scale = 2.0 * a.sqrt();
    let (c, s) = fresnel_cs(scale * v);
    let g = Complex64::new(c, s) / scale;
    if alpha >= 0.0 {
        g
    } else {
        g.conj()
    }
}

/// ∫_0^L u^k e^{2πi beta u} du for k = 0, 1, 2 (closed forms; series near
/// beta = 0 to dodge cancellation).
fn moment(k: u32, beta: f64, l: f64) -> Complex64 {
    let z = TWO_PI * beta * l;
    if z.abs() < 1e-3 {
        // e^{izu/L} expansion: ∫ u^k Σ (iz/L)^m u^m / m! du
        let mut acc = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0); // (iz)^m / m!
        for m in 0..12u32 {
            let denom = (k + m + 1) as f64;
            acc += term / denom;
            term *= Complex64::new(0.0, z) / (m as f64 + 1.0);
        }
        return acc * l.powi(k as i32 + 1);
    }
    let il = Complex64::new(0.0, TWO_PI * beta);
    let el = e2pi(beta * l);
    match k {
        0 => (el - 1.0) / il,
        1 => (el * l - moment(0, beta, l)) / il,
        2 => (el * l * l - 2.0 * moment(1, beta, l)) / il,
        _ => unreachable!("only moments 0..=2 are used"),
    }
}

/// ∫_0^L e^{2πi (alpha u^2 + beta u)} du.
pub fn segment(alpha: f64, beta: f64, l: f64) -> Complex64 {
    debug_assert!(l >= 0.0);
    if l == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let quad_cycles = (alpha * l * l).abs();
    if quad_cycles < 1e-4 {
        // nearly linear phase: two-term Taylor in the chirp
        let i2pa = Complex64::new(0.0, TWO_PI * alpha);
        return moment(0, beta, l) + i2pa * moment(2, beta, l)
            + 0.5 * i2pa * i2pa * fourth_moment(beta, l);
    }
    // complete the square
    let h = beta / (2.0 * alpha);
    let phase = e2pi(-alpha * h * h);
    phase * (fresnel_g(alpha, l + h) - fresnel_g(alpha, h))
}

/// ∫_0^L u^4 e^{2πi beta u} du (only needed for the chirp Taylor tail).
fn fourth_moment(beta: f64, l: f64) -> Complex64 {
    let z = TWO_PI * beta * l;
    if z.abs() < 1e-3 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for m in 0..12u32 {
            acc += term / (5 + m) as f64;
            term *= Complex64::new(0.0, z) / (m as f64 + 1.0);
        }
        return acc * l.powi(5);
    }
    let il = Complex64::new(0.0, TWO_PI * beta);
    let el = e2pi(beta * l);
    let m3 = (el * l.powi(3) - 3.0 * moment(2, beta, l)) / il;
    (el * l.powi(4) - 4.0 * m3) / il
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad_reference(alpha: f64, beta: f64, l: f64) -> Complex64 {
        // brute midpoint rule with node count tied to the oscillation
        let cycles = (alpha * l * l).abs() + (beta * l).abs() + 1.0;
        let n = ((cycles * 200.0) as usize).clamp(1000, 4_000_000);
        let h = l / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let u = (i as f64 + 0.5) * h;
            acc += e2pi(alpha * u * u + beta * u);
        }
        acc * h
    }

    #[test]
    fn fresnel_known_values() {
        // C(1) = 0.7798934..., S(1) = 0.4382591...
        let (c, s) = fresnel_cs(1.0);
        assert!((c - 0.779893400376823).abs() < 1e-12, "C(1) = {c}");
        assert!((s - 0.438259147390355).abs() < 1e-12, "S(1) = {s}");
        // limits: C, S -> 1/2
        let (c, s) = fresnel_cs(50.0);
        assert!((c - 0.5).abs() < 0.01 && (s - 0.5).abs() < 0.01);
        // oddness
        let (c1, s1) = fresnel_cs(-1.3);
        let (c2, s2) = fresnel_cs(1.3);
        assert_eq!(c1, -c2);
        assert_eq!(s1, -s2);
    }

    #[test]
    fn segment_matches_quadrature() {
        for &(alpha, beta, l) in &[
            (0.0, 0.0, 1.0),
            (0.0, 3.5, 1.0),
            (1.0, 0.0, 1.0),
            (7.3, -4.2, 1.0),
            (-12.0, 25.0, 0.7),
            (30.0, 100.0, 0.3),
            (1e-6, 40.0, 1.0),
            (-1e-7, -3.0, 0.25),
            (250.0, -700.0, 1.0),
        ] {
            let got = segment(alpha, beta, l);
            let want = quad_reference(alpha, beta, l);
            let err = (got - want).norm();
            let scale = want.norm().max(1e-3);
            assert!(
                err / scale < 1e-6,
                "segment({alpha}, {beta}, {l}) = {got}, reference {want}, rel {}",
                err / scale
            );
        }
    }

    #[test]
    fn zero_frequency_is_length() {
        let s = segment(0.0, 0.0, 0.8);
        assert!((s - Complex64::new(0.8, 0.0)).norm() < 1e-14);
    }
}
