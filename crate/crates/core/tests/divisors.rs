mod common;

use std::sync::Arc;

use common::*;
use height_core::arith::{Field, Poly, PrimeField, RatFunc, RatFuncField, Rationals};
use height_core::divisors::{FormRegistry, FormalDivisor};
use height_core::heights::Form;
use proptest::prelude::*;

const LINE_IDS: [&str; 6] = ["x", "y", "x+y", "x-y", "x^2+y^2", "x+2y"];

fn line_registry_q() -> Arc<FormRegistry<Rationals>> {
    let forms: [&[(i64, &[u32])]; 6] = [
        &[(1, &[1, 0])],
        &[(1, &[0, 1])],
        &[(1, &[1, 0]), (1, &[0, 1])],
        &[(1, &[1, 0]), (-1, &[0, 1])],
        &[(1, &[2, 0]), (1, &[0, 2])],
        &[(1, &[1, 0]), (2, &[0, 1])],
    ];
    let mut r = FormRegistry::new(Rationals, 1).unwrap();
    for (id, t) in LINE_IDS.iter().zip(forms) {
        r.register(*id, Form::from_i64_terms(2, t).unwrap()).unwrap();
    }
    Arc::new(r)
}

fn line_registry_f5() -> Arc<FormRegistry<PrimeField>> {
    // x^2+2y^2 is irreducible since -2 is not a square mod 5.
    let forms: [(&str, &[(i64, &[u32])]); 5] = [
        ("x", &[(1, &[1, 0])]),
        ("y", &[(1, &[0, 1])]),
        ("x+y", &[(1, &[1, 0]), (1, &[0, 1])]),
        ("x+2y", &[(1, &[1, 0]), (2, &[0, 1])]),
        ("x^2+2y^2", &[(1, &[2, 0]), (2, &[0, 2])]),
    ];
    let mut r = FormRegistry::new(f5(), 1).unwrap();
    for (id, t) in forms {
        r.register(id, Form::from_i64_terms(2, t).unwrap()).unwrap();
    }
    Arc::new(r)
}

fn divisor<C: Field>(r: &Arc<FormRegistry<C>>, mults: &[i64]) -> FormalDivisor<C> {
    let ids: Vec<String> = r.forms().iter().map(|f| f.id.clone()).collect();
    FormalDivisor::new(r, ids.into_iter().zip(mults.iter().copied())).unwrap()
}

fn mults(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, n)
}

/// Does `b * f` have no poles on the chart?
fn clears<C: Field>(b: &Poly<C>, f: &RatFunc<C>) -> bool {
    let k = RatFuncField::new(b.field().clone());
    k.mul(&RatFunc::from_poly(b.clone()), f).is_polynomial()
}

proptest! {
    #[test]
    fn split_reconstructs(m in mults(6)) {
        let d = divisor(&line_registry_q(), &m);
        let (c, e) = d.split_effective();
        prop_assert!(c.is_effective() && e.is_effective());
        prop_assert_eq!(c.try_sub(&e).unwrap(), d.clone());
        prop_assert!(c.terms().keys().all(|id| e.multiplicity(id) == 0));
        prop_assert_eq!(d.denominator_support().is_zero(), d.is_effective());
    }

    #[test]
    fn denominators_are_subadditive(m1 in mults(6), m2 in mults(6)) {
        let r = line_registry_q();
        let (d1, d2) = (divisor(&r, &m1), divisor(&r, &m2));
        let lhs = d1.try_add(&d2).unwrap().denominator_support();
        let rhs = d1.denominator_support().try_add(&d2.denominator_support()).unwrap();
        for id in LINE_IDS {
            prop_assert!(lhs.multiplicity(id) <= rhs.multiplicity(id));
        }
    }

    #[test]
    fn chart_denominator_is_minimal_over_q(m in mults(6)) {
        let r = line_registry_q();
        let d = divisor(&r, &m);
        let q = d.chart_denominator();
        prop_assume!(q.degree_or_zero() <= 6);
        let f = d.chart_function();
        prop_assert!(clears(&q, &f));
        // Divisors of q are products of the dehomogenized negative factors
        // with smaller exponents; none of the proper ones clears f.
        let neg: Vec<(Poly<Rationals>, i64)> = d
            .denominator_support()
            .terms()
            .iter()
            .map(|(id, &e)| (r.dehomogenize(&r.get(id).unwrap().form), e))
            .filter(|(p, _)| !p.is_constant())
            .collect();
        let mut exps = vec![0i64; neg.len()];
        loop {
            let b = neg
                .iter()
                .zip(&exps)
                .fold(Poly::one(Rationals), |acc, ((p, _), &k)| &acc * &p.pow(k as u32));
            let full = exps.iter().zip(&neg).all(|(k, (_, e))| k == e);
            prop_assert_eq!(clears(&b, &f), full);
            let Some(i) = (0..exps.len()).find(|&i| exps[i] < neg[i].1) else { break };
            exps[i] += 1;
            for e in exps.iter_mut().take(i) {
                *e = 0;
            }
        }
    }

    #[test]
    fn chart_denominator_by_brute_force_over_f5(m in mults(5)) {
        let d = divisor(&line_registry_f5(), &m);
        let q = d.chart_denominator();
        prop_assume!(q.degree_or_zero() <= 4);
        let f = d.chart_function();
        // Every monic polynomial up to degree deg q: it clears f exactly when q divides it.
        let deg = q.degree_or_zero();
        for len in 1..=deg + 1 {
            for code in 0..5u64.pow(len as u32 - 1) {
                let mut cs: Vec<i64> = (0..len - 1).map(|i| ((code / 5u64.pow(i as u32)) % 5) as i64).collect();
                cs.push(1);
                let b = f5poly(&cs);
                prop_assert_eq!(clears(&b, &f), q.divides(&b), "b = {}", b);
            }
        }
    }
}

#[test]
fn plane_denominator_by_monomial_membership() {
    let mut r = FormRegistry::new(Rationals, 2).unwrap();
    for (i, id) in ["x", "y", "z"].iter().enumerate() {
        r.register(*id, Form::var(3, i)).unwrap();
    }
    let r = Arc::new(r);
    let d = FormalDivisor::new(&r, [("x".into(), 2), ("y".into(), -1), ("z".into(), -1)]).unwrap();
    let gen = d.denominator_generator();
    // f = x^2 / (y z) as an exponent vector; b * f is a polynomial iff every
    // exponent is nonnegative. b = y z works, its proper divisors y, z, 1 do not.
    let f_exp = [2i64, -1, -1];
    let (exp, _) = gen.terms().next().unwrap();
    let clears = |b: &[u32]| f_exp.iter().zip(b).all(|(e, k)| e + *k as i64 >= 0);
    assert!(clears(exp));
    for proper in [[0u32, 1, 0], [0, 0, 1], [0, 0, 0]] {
        assert!(!clears(&proper));
    }
    assert_eq!(exp, &vec![0, 1, 1]);
}

#[test]
fn random_divisor_suite() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(11);
    let r = line_registry_q();
    for _ in 0..200 {
        let m: Vec<i64> = (0..6).map(|_| rng.random_range(-4..=4)).collect();
        let d = divisor(&r, &m);
        let (c, e) = d.split_effective();
        assert_eq!(c.try_sub(&e).unwrap(), d);
        assert_eq!(d.denominator_support().is_zero(), d.is_effective());
    }
}
