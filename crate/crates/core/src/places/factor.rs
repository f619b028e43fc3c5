//! Factoring helpers behind place supports: trial division over `Z` and
//! Cantor–Zassenhaus over `F_p`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{is_prime_u64, poly_gcd, Poly, PrimeField};

/// Trial-division bound for integer supports.
pub const TRIAL_DIVISION_CAP: u64 = 1_000_000;

/// Distinct prime factors of `n > 0`, ascending. Fails with the unfactored
/// cofactor if it exceeds `cap^2` and has no factor below `cap`.
pub fn prime_factors(n: &BigUint, cap: u64) -> Result<Vec<u64>, BigUint> {
    let mut out = Vec::new();
    let mut rest = n.clone();
    if rest.is_zero() {
        return Ok(out);
    }
    let mut d = 2u64;
    while d <= cap {
        if let Some(small) = rest.to_u64() {
            if small == 1 {
                return Ok(out);
            }
            if d.saturating_mul(d) > small {
                out.push(small);
                return Ok(out);
            }
            if small % d == 0 {
                out.push(d);
                let mut s = small;
                while s % d == 0 {
                    s /= d;
                }
                rest = BigUint::from(s);
            }
        } else if (&rest % d).is_zero() {
            out.push(d);
            while (&rest % d).is_zero() {
                rest /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Ok(out);
    }
    match rest.to_u64() {
        // No factor up to `cap` and below `cap^2`: prime.
        Some(r) if (r as u128) < (cap as u128 + 1) * (cap as u128 + 1) => {
            out.push(r);
            Ok(out)
        }
        _ => Err(rest),
    }
}

/// `p`-adic order of a nonzero integer.
pub fn int_order(n: &BigUint, p: u64) -> u32 {
    let mut k = 0;
    let mut rest = n.clone();
    while !rest.is_zero() && (&rest % p).is_zero() {
        rest /= p;
        k += 1;
    }
    k
}

/// Order of vanishing of `f != 0` at the irreducible `pi`.
pub fn poly_order(f: &Poly<PrimeField>, pi: &Poly<PrimeField>) -> u32 {
    let mut k = 0;
    let mut rest = f.clone();
    while let Some(q) = rest.exact_div(pi) {
        rest = q;
        k += 1;
    }
    k
}

/// `u^(p^k) mod m`, by `k` successive `p`-th powers.
fn frobenius_power(m: &Poly<PrimeField>, k: usize) -> Poly<PrimeField> {
    let field = *m.field();
    let p = BigUint::from(field.modulus());
    let mut h = Poly::var(field).rem(m);
    for _ in 0..k {
        h = h.pow_mod(&p, m);
    }
    h
}

fn distinct_prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: a monic `f` of degree `n` is irreducible iff `f` divides
/// `u^(p^n) - u` and is coprime to `u^(p^(n/r)) - u` for each prime `r | n`.
pub fn is_irreducible(f: &Poly<PrimeField>) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let field = *f.field();
    let u = Poly::var(field);
    if !(&frobenius_power(f, n) - &u).rem(f).is_zero() {
        return false;
    }
    distinct_prime_divisors(n).into_iter().all(|r| {
        let h = &frobenius_power(f, n / r) - &u;
        poly_gcd(&h, f).expect("same field").is_one()
    })
}

/// Squarefree polynomials whose product of powers is `f` (monic input).
fn squarefree_parts(f: &Poly<PrimeField>) -> Vec<Poly<PrimeField>> {
    let field = *f.field();
    let p = field.modulus() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let mut c = poly_gcd(f, &df).expect("same field");
    let mut w = f.exact_div(&c).expect("gcd divides");
    while !w.is_constant() {
        let y = poly_gcd(&w, &c).expect("same field");
        let z = w.exact_div(&y).expect("gcd divides");
        if !z.is_constant() {
            out.push(z);
        }
        w = y;
        c = c.exact_div(&w).expect("gcd divides");
    }
    if !c.is_constant() {
        // c' = 0, so c is a p-th power; a^(1/p) = a in F_p.
        let root: Vec<u64> = c.coeffs().iter().step_by(p).copied().collect();
        out.extend(squarefree_parts(&Poly::new(field, root)));
    }
    out
}

/// Deterministic stream of non-constant splitting candidates: the base-`p`
/// digits of 0, 1, 2, ... (skipping constants) read as coefficient lists.
fn candidate(field: PrimeField, index: u64) -> Poly<PrimeField> {
    let p = field.modulus();
    let mut n = index + p;
    let mut coeffs = Vec::new();
    while n > 0 {
        coeffs.push(n % p);
        n /= p;
    }
    Poly::new(field, coeffs)
}

/// Splits a squarefree monic product of irreducibles of common degree `d`.
fn equal_degree_split(f: &Poly<PrimeField>, d: usize, out: &mut Vec<Poly<PrimeField>>) {
    let n = f.degree().expect("nonzero");
    if n == d {
        out.push(f.clone());
        return;
    }
    let field = *f.field();
    let exp = (BigUint::from(field.modulus()).pow(d as u32) - 1u32) >> 1;
    let one = Poly::one(field);
    for i in 0.. {
        let a = candidate(field, i).rem(f);
        if a.is_constant() {
            continue;
        }
        let g = poly_gcd(&(&a.pow_mod(&exp, f) - &one), f).expect("same field");
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.exact_div(&g).expect("gcd divides");
            equal_degree_split(&g, d, out);
            equal_degree_split(&h.monic(), d, out);
            return;
        }
    }
}

/// Distinct monic irreducible factors of a nonzero polynomial, sorted by
/// degree then coefficients.
pub fn irreducible_factors(f: &Poly<PrimeField>) -> Vec<Poly<PrimeField>> {
    let field = *f.field();
    let u = Poly::var(field);
    let mut found: Vec<Poly<PrimeField>> = Vec::new();
    for part in squarefree_parts(&f.monic()) {
        let mut g = part.monic();
        let mut h = u.rem(&g);
        let mut d = 1;
        while 2 * d <= g.degree().unwrap_or(0) {
            h = h.pow_mod(&BigUint::from(field.modulus()), &g);
            let fac = poly_gcd(&(&h - &u), &g).expect("same field");
            if !fac.is_constant() {
                equal_degree_split(&fac, d, &mut found);
                g = g.exact_div(&fac).expect("gcd divides");
                h = h.rem(&g);
            }
            d += 1;
        }
        if !g.is_constant() {
            found.push(g.monic());
        }
    }
    found.sort_by(poly_order_key);
    found.dedup();
    found
}

pub(crate) fn poly_order_key(a: &Poly<PrimeField>, b: &Poly<PrimeField>) -> std::cmp::Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// Whether `n` is prime, certified by trial division.
pub fn certify_prime(n: u64) -> bool {
    is_prime_u64(n)
}
