mod common;

use common::*;
use height_core::arith::{BigRat, Field, Poly, RatFunc, Rationals};
use height_core::elliptic::{Body, FiberPoint, WeierstrassFamily};
use height_core::heights::HeightField;
use proptest::prelude::*;

fn check_group_laws<K: HeightField>(p: &FiberPoint<K>, r: &FiberPoint<K>) -> Result<(), TestCaseError> {
    let t = p.mul_n(2).unwrap().add(&r.neg()).unwrap();
    for x in [p, r, &t] {
        prop_assert!(x.is_on_curve());
    }
    let pr = p.add(r).unwrap();
    prop_assert!(pr.is_on_curve());
    prop_assert_eq!(&pr, &r.add(p).unwrap());
    prop_assert_eq!(pr.add(&t).unwrap(), p.add(&r.add(&t).unwrap()).unwrap());
    prop_assert!(p.add(&p.neg()).unwrap().is_identity());
    prop_assert_eq!(p.total_height(), p.neg().total_height());
    Ok(())
}

fn check_multiples<K: HeightField>(p: &FiberPoint<K>, m: i64, n: i64) -> Result<(), TestCaseError> {
    let lhs = p.mul_n(m + n).unwrap();
    let rhs = p.mul_n(m).unwrap().add(&p.mul_n(n).unwrap()).unwrap();
    prop_assert!(lhs.is_on_curve());
    prop_assert_eq!(&lhs, &rhs);
    prop_assert_eq!(p.mul_n(-m).unwrap(), p.mul_n(m).unwrap().neg());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn group_laws_over_q((p, r) in q_two_points()) {
        check_group_laws(&p, &r)?;
    }

    #[test]
    fn group_laws_over_f5u((p, r) in f5_two_points()) {
        check_group_laws(&p, &r)?;
    }

    #[test]
    fn multiples_add_over_q((p, _) in q_two_points(), m in -10i64..=10, n in -10i64..=10) {
        check_multiples(&p, m, n)?;
    }

    #[test]
    fn multiples_add_over_f5u((p, _) in f5_two_points(), m in -10i64..=10, n in -10i64..=10) {
        check_multiples(&p, m, n)?;
    }

    #[test]
    fn repeated_addition_oracle((p, _) in q_two_points(), n in 0i64..=12) {
        let mut acc = FiberPoint::identity(p.fiber());
        for _ in 0..n {
            acc = acc.add(&p).unwrap();
        }
        prop_assert_eq!(p.mul_n(n).unwrap(), acc);
    }
}

fn family_q(a: &[i64], b: &[i64]) -> WeierstrassFamily<Rationals> {
    WeierstrassFamily::new(
        Rationals,
        RatFunc::from_poly(qpoly(a)),
        RatFunc::from_poly(qpoly(b)),
        None,
    )
    .unwrap()
}

#[test]
fn doubling_matches_independent_slope_formula() {
    // On y^2 = x^3 + 1 the tangent at (2, 3) has slope 3 x^2 / 2 y = 2.
    let e = family_q(&[], &[1]).fiber_check(&q(0, 1)).unwrap();
    let p = FiberPoint::new(&e, q(2, 1), q(3, 1)).unwrap();
    let slope = q(2, 1);
    let x3 = &slope * &slope - q(4, 1);
    let y3 = &slope * (q(2, 1) - &x3) - q(3, 1);
    assert_eq!(p.double().unwrap().body(), &Body::Affine { x: x3, y: y3 });
    let mut acc = FiberPoint::identity(&e);
    for k in 1..=6 {
        acc = acc.add(&p).unwrap();
        assert_eq!(acc.is_identity(), k == 6);
    }
}

#[test]
fn doubling_examples() {
    let e = family_q(&[0, 1], &[1]).fiber_check(&q(1, 1)).unwrap();
    let p = FiberPoint::new(&e, q(0, 1), q(1, 1)).unwrap();
    let d = p.mul_n(2).unwrap();
    assert_eq!(d.body(), &Body::Affine { x: q(1, 4), y: q(-9, 8) });
    assert!(d.is_on_curve());

    let k = f5u();
    let c = |cs: &[i64]| RatFunc::from_poly(Poly::from_i64s(f5(), cs));
    let fam = WeierstrassFamily::new(k.clone(), c(&[0, 1]), c(&[1]), None).unwrap();
    let e = fam.fiber_check(&k.var()).unwrap();
    let p = FiberPoint::new(&e, k.zero(), k.one()).unwrap();
    // Tangent slope at x = 0 is u / 2 = 3u in F_5.
    let slope = k.mul(&k.from_i64(3), &k.var());
    let x3 = k.square(&slope);
    let y3 = k.sub(&k.mul(&slope, &k.neg(&x3)), &k.one());
    assert_eq!(p.double().unwrap().body(), &Body::Affine { x: x3, y: y3 });
}

#[test]
fn fibers_of_the_discriminant_are_rejected() {
    // y^2 = x^3 - 3x + s is singular exactly where 4(-3)^3 + 27 s^2 = 0, i.e. s = +-2.
    let fam = family_q(&[-3], &[0, 1]);
    let disc: Vec<BigRat> = fam.discriminant().numer().coeffs().to_vec();
    assert_eq!(disc, vec![q(1728, 1), q(0, 1), q(-432, 1)]);
    for s in -5..=5 {
        assert_eq!(fam.fiber_check(&q(s, 1)).is_err(), s == 2 || s == -2, "s = {s}");
    }
}
