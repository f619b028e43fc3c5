#![allow(dead_code)]

use height_core::arith::{BigRat, Field, FunctionField, Poly, PrimeField, RatFunc, RatFuncField, Rationals};
use height_core::elliptic::{FiberPoint, WeierstrassFamily};
use height_core::heights::{normalize_point, ProjPoint};
use proptest::prelude::*;

pub fn q(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}

pub fn qpoly(cs: &[i64]) -> Poly<Rationals> {
    Poly::from_i64s(Rationals, cs)
}

pub fn f5() -> PrimeField {
    PrimeField::new(5).unwrap()
}

pub fn f5u() -> FunctionField {
    FunctionField::over_prime(5).unwrap()
}

pub fn f5poly(cs: &[i64]) -> Poly<PrimeField> {
    Poly::from_i64s(f5(), cs)
}

pub fn qpoint(cs: &[i64]) -> ProjPoint<Rationals> {
    let raw: Vec<BigRat> = cs.iter().map(|&c| q(c, 1)).collect();
    normalize_point(&Rationals, &raw).unwrap()
}

pub fn small_rational() -> impl Strategy<Value = BigRat> {
    (-60i64..=60, 1i64..=60).prop_map(|(n, d)| q(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = BigRat> {
    small_rational().prop_filter("nonzero", |r| *r != q(0, 1))
}

pub fn poly_coeffs(max_len: usize, range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(range, 0..=max_len)
}

pub fn f5u_elem() -> impl Strategy<Value = RatFunc<PrimeField>> {
    (poly_coeffs(5, 0..=4), poly_coeffs(4, 0..=4))
        .prop_filter_map("nonzero denominator", |(n, d)| {
            RatFunc::normalize(f5poly(&n), f5poly(&d)).ok()
        })
}

pub fn nonzero_f5u_elem() -> impl Strategy<Value = RatFunc<PrimeField>> {
    f5u_elem().prop_filter("nonzero", |r| !r.is_zero())
}

/// Two sections `(x_i(s), y_i(s))` with distinct `x`; the family
/// `y^2 = x^3 + a x + b` through both has
/// `a = ((y1^2 - x1^3) - (y2^2 - x2^3)) / (x1 - x2)` and `b = y1^2 - x1^3 - a x1`.
pub fn two_section_family<C: Field>(
    consts: C,
    x1: Poly<C>,
    y1: Poly<C>,
    x2: Poly<C>,
    y2: Poly<C>,
) -> Option<(RatFunc<C>, RatFunc<C>, [(RatFunc<C>, RatFunc<C>); 2])> {
    let rf = RatFuncField::new(consts);
    let (x1, y1, x2, y2) = (
        RatFunc::from_poly(x1),
        RatFunc::from_poly(y1),
        RatFunc::from_poly(x2),
        RatFunc::from_poly(y2),
    );
    let g = |x: &RatFunc<C>, y: &RatFunc<C>| rf.sub(&rf.square(y), &rf.pow(x, 3));
    let a = rf.div(&rf.sub(&g(&x1, &y1), &g(&x2, &y2)), &rf.sub(&x1, &x2))?;
    let b = rf.sub(&g(&x1, &y1), &rf.mul(&a, &x1));
    Some((a, b, [(x1, y1), (x2, y2)]))
}

/// A fiber with two rational points, over `Q`.
pub fn q_two_points() -> impl Strategy<Value = (FiberPoint<Rationals>, FiberPoint<Rationals>)> {
    (
        poly_coeffs(2, -3..=3),
        poly_coeffs(2, -3..=3),
        poly_coeffs(2, -3..=3),
        poly_coeffs(2, -3..=3),
        -6i64..=6,
        1i64..=4,
    )
        .prop_filter_map("smooth fiber with two points", |(x1, y1, x2, y2, n, d)| {
            let (a, b, secs) = two_section_family(Rationals, qpoly(&x1), qpoly(&y1), qpoly(&x2), qpoly(&y2))?;
            let fam = WeierstrassFamily::new(Rationals, a.clone(), b.clone(), Some(secs[0].clone())).ok()?;
            let e = fam.fiber_check(&q(n, d)).ok()?;
            let p = fam.section_point(&e).ok()?;
            let fam2 = WeierstrassFamily::new(Rationals, a, b, Some(secs[1].clone())).ok()?;
            let r = fam2.section_point(&e).ok()?;
            Some((p, r))
        })
}

/// A fiber with two rational points, over `F_5(u)`.
pub fn f5_two_points() -> impl Strategy<Value = (FiberPoint<FunctionField>, FiberPoint<FunctionField>)> {
    (
        poly_coeffs(2, 0..=4),
        poly_coeffs(2, 0..=4),
        poly_coeffs(2, 0..=4),
        poly_coeffs(2, 0..=4),
        poly_coeffs(3, 0..=4),
    )
        .prop_filter_map("smooth fiber with two points", |(x1, y1, x2, y2, s)| {
            let (a, b, secs) = two_section_family(f5(), f5poly(&x1), f5poly(&y1), f5poly(&x2), f5poly(&y2))?;
            let k = f5u();
            let fam = WeierstrassFamily::new(k.clone(), a.clone(), b.clone(), Some(secs[0].clone())).ok()?;
            let e = fam.fiber_check(&RatFunc::from_poly(f5poly(&s))).ok()?;
            let p = fam.section_point(&e).ok()?;
            let fam2 = WeierstrassFamily::new(k, a, b, Some(secs[1].clone())).ok()?;
            let r = fam2.section_point(&e).ok()?;
            Some((p, r))
        })
}
