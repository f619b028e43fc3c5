//! Exact arithmetic: big rationals, univariate polynomials over `Q` and
//! `F_p`, and rational functions.

mod field;
mod logs;
mod poly;
mod ratfunc;

pub use field::{is_prime_u64, Field, PrimeField, Rationals};
pub use logs::{ln_biguint, ln_ratio};
pub use poly::Poly;
pub use ratfunc::{RatFunc, RatFuncField};

/// Reduced fraction with positive denominator; zero is `0/1`.
pub type BigRat = num_rational::BigRational;

/// The rational function field `F_p(u)`.
pub type FunctionField = RatFuncField<PrimeField>;

impl FunctionField {
    pub fn over_prime(p: u64) -> Result<Self, ArithError> {
        Ok(RatFuncField::new(PrimeField::new(p)?))
    }

    pub fn modulus(&self) -> u64 {
        self.base().modulus()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("operands live over different coefficient fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} unsupported: need a prime 5 <= p < 2^31")]
    UnsupportedModulus(u64),
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
}

/// Monic gcd of `f` and `g`; `gcd(0, 0) = 0`.
pub fn poly_gcd<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Result<Poly<F>, ArithError> {
    if f.field() != g.field() {
        return Err(ArithError::FieldMismatch);
    }
    Ok(f.field().poly_gcd(f, g))
}

pub fn ratfunc_normalize<F: Field>(n: Poly<F>, d: Poly<F>) -> Result<RatFunc<F>, ArithError> {
    RatFunc::normalize(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(cs: &[i64]) -> Poly<Rationals> {
        Poly::from_i64s(Rationals, cs)
    }

    fn f5(cs: &[i64]) -> Poly<PrimeField> {
        Poly::from_i64s(PrimeField::new(5).unwrap(), cs)
    }

    #[test]
    fn gcd_common_factor() {
        assert_eq!(poly_gcd(&q(&[-1, 0, 1]), &q(&[-1, 1])).unwrap(), q(&[-1, 1]));
    }

    #[test]
    fn gcd_with_zero_is_monic_input() {
        let f = q(&[2, 0, 4]);
        assert_eq!(poly_gcd(&f, &q(&[])).unwrap(), f.monic());
        assert!(poly_gcd(&q(&[]), &q(&[])).unwrap().is_zero());
    }

    #[test]
    fn gcd_over_f5_of_split_quadratics() {
        // u^2+1 = (u+2)(u+3), u^2+4 = (u+1)(u+4): no shared linear factor.
        assert!(poly_gcd(&f5(&[1, 0, 1]), &f5(&[4, 0, 1])).unwrap().is_one());
    }

    #[test]
    fn gcd_field_mismatch() {
        let a = Poly::from_i64s(PrimeField::new(5).unwrap(), &[1, 1]);
        let b = Poly::from_i64s(PrimeField::new(7).unwrap(), &[1, 1]);
        assert_eq!(poly_gcd(&a, &b), Err(ArithError::FieldMismatch));
    }

    #[test]
    fn normalize_examples() {
        let r = ratfunc_normalize(q(&[-1, 0, 1]), q(&[-1, 1])).unwrap();
        assert_eq!(r, RatFunc::from_poly(q(&[1, 1])));

        let r = ratfunc_normalize(q(&[0, 2]), q(&[4])).unwrap();
        let half = Poly::new(Rationals, vec![BigRat::new(0.into(), 1.into()), BigRat::new(1.into(), 2.into())]);
        assert_eq!(r, RatFunc::from_poly(half));

        let r = ratfunc_normalize(f5(&[0, 1, 0, 1]), f5(&[0, 0, 1])).unwrap();
        assert_eq!(r.numer(), &f5(&[1, 0, 1]));
        assert_eq!(r.denom(), &f5(&[0, 1]));

        assert_eq!(ratfunc_normalize(q(&[1]), q(&[])), Err(ArithError::DivisionByZero));
    }
}
