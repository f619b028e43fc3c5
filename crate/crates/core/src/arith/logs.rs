//! Natural logarithms of exact big numbers, for report-time float views.
//!
//! Both routines keep a relative error near machine precision: the big
//! operands are reduced to a 64-bit mantissa plus a power-of-two exponent,
//! and ratios close to 1 go through `ln_1p` of an exactly computed
//! `(a - b) / b`.

use std::f64::consts::LN_2;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// `ln n` for `n > 0`. Returns `-inf` for zero.
pub fn ln_biguint(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap() as f64;
    top.ln() + shift as f64 * LN_2
}

/// `ln r` for a positive rational `r`.
pub fn ln_ratio(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "logarithm of a non-positive rational");
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let diff = BigInt::from_biguint(Sign::Plus, num.clone()) - BigInt::from_biguint(Sign::Plus, den.clone());
    if diff.is_zero() {
        return 0.0;
    }
    // |r - 1| < 1/2 exactly when 2|num - den| < den.
    if (diff.magnitude() << 1u32) < *den {
        let k = den.bits() as i64 - diff.magnitude().bits() as i64 + 64;
        let scaled: BigInt = (diff << k as u64) / BigInt::from_biguint(Sign::Plus, den.clone());
        let t = big_to_f64_scaled(&scaled, -k);
        return t.ln_1p();
    }
    // Otherwise take a 64-bit-accurate quotient first, so two huge
    // logarithms never cancel against each other.
    let k = (den.bits() as i64 - num.bits() as i64 + 64).max(0) as u64;
    let q = (num << k) / den;
    ln_biguint(&q) - k as f64 * LN_2
}

/// `x * 2^e` for an integer `x` that fits the f64 range after scaling.
fn big_to_f64_scaled(x: &BigInt, e: i64) -> f64 {
    let bits = x.bits() as i64;
    let (mant, e) = if bits > 62 {
        ((x >> (bits - 62) as u64).to_i64().unwrap(), e + bits - 62)
    } else {
        (x.to_i64().unwrap(), e)
    };
    mant as f64 * 2f64.powi(e.clamp(-1074, 1023) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_values_match_std() {
        for n in [1u64, 2, 9, 1000, u64::MAX] {
            let got = ln_biguint(&BigUint::from(n));
            let want = (n as f64).ln();
            assert!((got - want).abs() <= 1e-15 * want.abs().max(1.0));
        }
    }

    #[test]
    fn huge_power_of_ten() {
        let n = BigUint::from(10u32).pow(5000);
        let want = 5000.0 * 10f64.ln();
        assert!((ln_biguint(&n) - want).abs() / want < 1e-14);
    }

    #[test]
    fn ratios() {
        assert!((ln_ratio(&rat(9, 1)) - 9f64.ln()).abs() < 1e-14);
        assert!((ln_ratio(&rat(1, 9)) + 9f64.ln()).abs() < 1e-14);
        assert_eq!(ln_ratio(&rat(1, 1)), 0.0);
    }

    #[test]
    fn ratio_of_huge_numbers() {
        // r = 3 * 10^3000 / 10^3000 exactly 3 after reduction is too easy;
        // use coprime neighbours instead.
        let big = BigInt::from(10u32).pow(3000);
        let r = BigRational::new(&big * 3 + 1, big.clone());
        assert!((ln_ratio(&r) - 3f64.ln()).abs() / 3f64.ln() < 1e-14);
    }

    #[test]
    fn ratio_near_one_keeps_relative_precision() {
        // r = (10^40 + 1) / 10^40, ln r ~ 1e-40
        let big = BigInt::from(10u32).pow(40);
        let r = BigRational::new(&big + 1, big);
        let got = ln_ratio(&r);
        assert!((got - 1e-40).abs() / 1e-40 < 1e-12);
    }
}
