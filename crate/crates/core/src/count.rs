//! Exact combinatorial counts.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn pow(base: &BigUint, exp: u64) -> BigUint {
    base.pow(u32::try_from(exp).expect("exponent fits in u32"))
}

/// Lossy conversion for reporting; saturates to infinity.
pub fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Natural logarithm, finite for any nonzero value.
pub fn ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return to_f64(x).ln();
    }
    let shift = bits - 64;
    to_f64(&(x >> shift)).ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(8, 2), BigUint::from(28u32));
        assert_eq!(binomial(10, 2), BigUint::from(45u32));
        assert_eq!(binomial(3, 5), BigUint::ZERO);
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(64, 6), BigUint::from(74_974_368u64));
    }

    #[test]
    fn logs_of_large_values() {
        let big = pow(&BigUint::from(10u32), 400);
        assert!((ln(&big) - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert_eq!(to_f64(&big), f64::INFINITY);
        assert!((ln(&BigUint::from(28u32)) - 28f64.ln()).abs() < 1e-15);
        assert_eq!(pow(&BigUint::from(3u32), 4), BigUint::from(81u32));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..40u64 {
            for k in 1..n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }
}
