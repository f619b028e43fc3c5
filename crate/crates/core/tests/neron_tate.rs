mod common;

use common::*;
use height_core::arith::{Poly, RatFunc, Rationals};
use height_core::elliptic::{FiberPoint, WeierstrassFamily};
use height_core::heights::HeightField;
use height_core::neron_tate::{convergence_table, height_inequality_check, neron_tate, ConvergenceTable};
use proptest::prelude::*;

fn section_point(s: (i64, i64)) -> FiberPoint<Rationals> {
    let c = |cs: &[i64]| RatFunc::from_poly(qpoly(cs));
    let fam = WeierstrassFamily::new(Rationals, c(&[0, 1]), c(&[1]), Some((c(&[]), c(&[1])))).unwrap();
    let e = fam.fiber_check(&q(s.0, s.1)).unwrap();
    fam.section_point(&e).unwrap()
}

/// Geometric-series identity: per-step bounds `c lambda / 4^(l+1)` imply
/// `|q_l - q_m| <= c lambda / (3 * 4^m)`, so a table obeying the first must
/// obey `c lambda / 4^m` everywhere.
fn assert_telescoping<K: HeightField>(t: &ConvergenceTable<K>) {
    let c = t.max_step_ratio();
    for l in 0..t.depth() {
        assert!(t.gap(l + 1, l) <= c * t.lambda / 4f64.powi(l as i32 + 1) * (1.0 + 1e-9));
    }
    assert!(t.telescoping_violations(c, 0, 1e-9).is_empty());
    for m in 0..=t.depth() {
        for l in m..=t.depth() {
            assert!(t.gap(l, m) <= c * t.lambda / (3.0 * 4f64.powi(m as i32)) * (1.0 + 1e-9));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn telescoping_over_q(n in -6i64..=6, d in 1i64..=6) {
        prop_assume!(num_integer::Integer::gcd(&n, &d) == 1);
        assert_telescoping(&convergence_table(&section_point((n, d)), 6).unwrap());
    }

    #[test]
    fn telescoping_over_f5u((p, _) in f5_two_points()) {
        assert_telescoping(&convergence_table(&p, 5).unwrap());
    }

    #[test]
    fn quadraticity_probe(n in 1i64..=6, d in 1i64..=3, k in 2i64..=3) {
        prop_assume!(num_integer::Integer::gcd(&n, &d) == 1);
        let p = section_point((n, d));
        let m = 5;
        let c = 2.0 * convergence_table(&p, m).unwrap().max_step_ratio().max(1.0);
        let a = neron_tate(&p, m, c).unwrap();
        let b = neron_tate(&p.mul_n(k).unwrap(), m, c).unwrap();
        let kk = (k * k) as f64;
        let slack = 2.0 * c * a.table.lambda / 4f64.powi(m as i32) * (1.0 + kk);
        prop_assert!((b.estimate - kk * a.estimate).abs() <= slack);
    }
}

#[test]
fn torsion_points_have_zero_estimate_at_every_depth() {
    let c = |cs: &[i64]| RatFunc::from_poly(qpoly(cs));
    let fam = WeierstrassFamily::new(Rationals, c(&[]), c(&[1]), None).unwrap();
    let e = fam.fiber_check(&q(0, 1)).unwrap();
    let p = FiberPoint::new(&e, q(2, 1), q(3, 1)).unwrap();
    for m in 1..=10 {
        let nt = neron_tate(&p, m, 1.0).unwrap();
        assert_eq!(nt.estimate, 0.0);
        assert!(nt.error_bound > 0.0);
    }
    // (0, 1) has order 3 and height 0 on the fiber over s = 0.
    let r = FiberPoint::new(&e, q(0, 1), q(1, 1)).unwrap();
    let hi = height_inequality_check(&r, 6, 1.0).unwrap();
    assert!(hi.holds);
    assert_eq!(hi.residual, 0.0);
}

#[test]
fn values_for_the_section() {
    let t = convergence_table(&section_point((1, 1)), 7).unwrap();
    assert!((t.q(1) - 9f64.ln() / 4.0).abs() < 1e-15);
    let c = 3.0 * t.max_step_ratio();
    assert!(t.gap(7, 6) <= c * t.lambda / 4f64.powi(6));
}

#[test]
fn function_field_tables_are_exact_quarter_powers() {
    let k = f5u();
    let c = |cs: &[i64]| RatFunc::from_poly(Poly::from_i64s(f5(), cs));
    let fam = WeierstrassFamily::new(k.clone(), c(&[0, 1]), c(&[1]), Some((c(&[]), c(&[1])))).unwrap();
    let e = fam.fiber_check(&k.var()).unwrap();
    let p = fam.section_point(&e).unwrap();
    let t = convergence_table(&p, 6).unwrap();
    let degrees: Vec<i64> = t.rows.iter().map(|r| r.height.as_degree().unwrap()).collect();
    assert_eq!(degrees, vec![0, 3, 12, 48, 192, 768, 3072]);
    assert_eq!(t.rows[6].q_exact.as_ref().unwrap(), &q(3, 4));
    let hi = height_inequality_check(&p, 6, 1.0).unwrap();
    assert!(hi.holds);
    assert_eq!(hi.residual, 0.25);
}
