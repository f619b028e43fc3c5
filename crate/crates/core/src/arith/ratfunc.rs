//! Rational functions in one variable, kept in lowest terms with a monic
//! denominator.

use super::field::Field;
use super::poly::Poly;
use super::{poly_gcd, ArithError};

#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    /// Reduces `n/d` to lowest terms with a monic denominator.
    pub fn normalize(n: Poly<F>, d: Poly<F>) -> Result<Self, ArithError> {
        if n.field() != d.field() {
            return Err(ArithError::FieldMismatch);
        }
        if d.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let field = n.field().clone();
        if n.is_zero() {
            return Ok(Self::zero(field));
        }
        let g = poly_gcd(&n, &d)?;
        let (mut n, mut d) = if g.is_one() {
            (n, d)
        } else {
            (
                n.exact_div(&g).expect("gcd divides numerator"),
                d.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        if !d.is_monic() {
            let inv = field.inv(d.leading().unwrap()).unwrap();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(Self { num: n, den: d })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        let one = Poly::one(p.field().clone());
        Self { num: p, den: one }
    }

    pub fn zero(field: F) -> Self {
        Self {
            num: Poly::zero(field.clone()),
            den: Poly::one(field),
        }
    }

    pub fn one(field: F) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::from_poly(Poly::constant(field, c))
    }

    pub fn var(field: F) -> Self {
        Self::from_poly(Poly::var(field))
    }

    pub fn numer(&self) -> &Poly<F> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<F> {
        &self.den
    }

    pub fn field(&self) -> &F {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `deg(numerator) - deg(denominator)`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.num
            .degree()
            .map(|d| d as i64 - self.den.degree_or_zero() as i64)
    }

    /// Evaluates at `x` in a field `K` containing the coefficients. Returns
    /// `None` if `x` is a pole.
    pub fn eval_in<K: Field>(
        &self,
        target: &K,
        embed: impl Fn(&F::Elem) -> K::Elem + Copy,
        x: &K::Elem,
    ) -> Option<K::Elem> {
        let d = self.den.eval_in(target, embed, x);
        if target.is_zero(&d) {
            return None;
        }
        let n = self.num.eval_in(target, embed, x);
        target.div(&n, &d)
    }

    pub fn format_in(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.format_in(var)
        } else {
            format!("({})/({})", self.num.format_in(var), self.den.format_in(var))
        }
    }

    fn assemble(num: Poly<F>, den: Poly<F>) -> Self {
        debug_assert!(den.is_monic());
        Self { num, den }
    }
}

impl<F: Field> std::fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.format_in("u"))
    }
}

/// The field `F(t)` of rational functions over `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFuncField<F: Field> {
    base: F,
}

impl<F: Field> RatFuncField<F> {
    pub fn new(base: F) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn constant(&self, c: &F::Elem) -> RatFunc<F> {
        RatFunc::constant(self.base.clone(), c.clone())
    }

    pub fn var(&self) -> RatFunc<F> {
        RatFunc::var(self.base.clone())
    }

    fn gcd(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        if a.is_one() || b.is_one() {
            return Poly::one(self.base.clone());
        }
        self.base.poly_gcd(a, b)
    }

    fn div_exact(a: &Poly<F>, g: &Poly<F>) -> Poly<F> {
        if g.is_one() {
            a.clone()
        } else {
            a.exact_div(g).expect("exact division by a gcd")
        }
    }
}

impl<F: Field> Field for RatFuncField<F> {
    type Elem = RatFunc<F>;

    fn zero(&self) -> RatFunc<F> {
        RatFunc::zero(self.base.clone())
    }
    fn one(&self) -> RatFunc<F> {
        RatFunc::one(self.base.clone())
    }
    fn from_i64(&self, n: i64) -> RatFunc<F> {
        self.constant(&self.base.from_i64(n))
    }
    fn from_bigint(&self, n: &num_bigint::BigInt) -> RatFunc<F> {
        self.constant(&self.base.from_bigint(n))
    }
    fn is_zero(&self, a: &RatFunc<F>) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &RatFunc<F>) -> bool {
        a.num.is_one() && a.den.is_one()
    }

    // Henrici's trick: with both inputs reduced, only the gcd of the
    // denominators can survive in the sum.
    fn add(&self, a: &RatFunc<F>, b: &RatFunc<F>) -> RatFunc<F> {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.den.is_one() && b.den.is_one() {
            return RatFunc::from_poly(&a.num + &b.num);
        }
        let g = self.gcd(&a.den, &b.den);
        let ad = Self::div_exact(&a.den, &g);
        let bd = Self::div_exact(&b.den, &g);
        let num = &(&a.num * &bd) + &(&b.num * &ad);
        if num.is_zero() {
            return self.zero();
        }
        let den = &ad * &b.den;
        let g2 = self.gcd(&num, &g);
        RatFunc::assemble(Self::div_exact(&num, &g2), Self::div_exact(&den, &g2))
    }

    fn sub(&self, a: &RatFunc<F>, b: &RatFunc<F>) -> RatFunc<F> {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &RatFunc<F>, b: &RatFunc<F>) -> RatFunc<F> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let g1 = self.gcd(&a.num, &b.den);
        let g2 = self.gcd(&b.num, &a.den);
        let num = &Self::div_exact(&a.num, &g1) * &Self::div_exact(&b.num, &g2);
        let den = &Self::div_exact(&a.den, &g2) * &Self::div_exact(&b.den, &g1);
        RatFunc::assemble(num, den)
    }

    fn neg(&self, a: &RatFunc<F>) -> RatFunc<F> {
        RatFunc::assemble(-&a.num, a.den.clone())
    }

    fn inv(&self, a: &RatFunc<F>) -> Option<RatFunc<F>> {
        if a.is_zero() {
            return None;
        }
        let lc_inv = self.base.inv(a.num.leading().unwrap()).unwrap();
        Some(RatFunc::assemble(a.den.scale(&lc_inv), a.num.scale(&lc_inv)))
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn format(&self, a: &RatFunc<F>) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{PrimeField, Rationals};

    #[test]
    fn field_ops_stay_reduced() {
        let k = RatFuncField::new(PrimeField::new(7).unwrap());
        let t = k.var();
        let one = k.one();
        let a = k.div(&one, &k.add(&t, &one)).unwrap(); // 1/(t+1)
        let b = k.div(&t, &k.add(&t, &one)).unwrap(); // t/(t+1)
        assert_eq!(k.add(&a, &b), one);
        let c = k.mul(&k.add(&t, &one), &a);
        assert_eq!(c, one);
    }

    #[test]
    fn inverse_has_monic_denominator() {
        let k = RatFuncField::new(Rationals);
        let f = RatFunc::from_poly(Poly::from_i64s(Rationals, &[1, 2]));
        let g = k.inv(&f).unwrap();
        assert!(g.denom().is_monic());
        assert!(k.is_one(&k.mul(&f, &g)));
    }
}
