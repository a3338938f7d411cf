//! Hurwitz-Radon numbers: the maximal dimension of a subspace of invertible
//! d x d real matrices. Writing d = 2^{4a+b} c with c odd and 0 <= b <= 3,
//! the value is 8a + 2^b. A tuple with pencil minimum equal to d can only
//! exist when n <= rho(d), which rules out most (d, n) pairs.

/// rho(d) for d >= 1.
pub fn hurwitz_radon(d: u64) -> u64 {
    assert!(d >= 1, "hurwitz_radon requires d >= 1");
    let v = d.trailing_zeros() as u64; // d = 2^v * odd
    let a = v / 4;
    let b = v % 4;
    8 * a + (1u64 << b)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent brute evaluation: enumerate (a, b, c) with 2^{4a+b} c = d.
    fn rho_brute(d: u64) -> u64 {
        for a in 0..16u64 {
            for b in 0..4u64 {
                let pow = 1u64 << (4 * a + b);
                if pow > d {
                    continue;
                }
                if d % pow == 0 {
                    let c = d / pow;
                    if c % 2 == 1 && (4 * a + b) as u32 == d.trailing_zeros() {
                        return 8 * a + (1 << b);
                    }
                }
            }
        }
        unreachable!("every d has a 2-adic decomposition")
    }

    #[test]
    fn paper_values() {
        assert_eq!(hurwitz_radon(3), 1);
        assert_eq!(hurwitz_radon(8), 8);
        assert_eq!(hurwitz_radon(16), 9);
        assert_eq!(hurwitz_radon(1), 1);
        assert_eq!(hurwitz_radon(2), 2);
        assert_eq!(hurwitz_radon(4), 4);
    }

    #[test]
    fn matches_brute_and_satisfies_bounds() {
        for d in 1..=64 {
            let r = hurwitz_radon(d);
            assert_eq!(r, rho_brute(d), "d = {d}");
            assert!(r <= d, "rho(d) <= d fails at {d}");
            if d % 2 == 1 {
                assert_eq!(r, 1, "odd d must give 1");
            }
        }
    }
}
