//! The two base fields the lab runs over, with sampling and formatting.

use height_core::arith::{Field, FunctionField, Poly, PrimeField, RatFunc, Rationals};
use height_core::heights::{ExactHeight, HeightField};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use crate::expr::parse_expression;
use crate::LabError;

/// `Q` or `F_p(u)` as chosen on the command line or in the config.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Rationals,
    FunctionField(u64),
}

impl std::str::FromStr for FieldChoice {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, LabError> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldChoice::Rationals);
        }
        let p = s
            .strip_prefix("Fp(u):")
            .and_then(|p| p.trim().parse::<u64>().ok())
            .ok_or_else(|| LabError::Config(format!("field `{s}`: expected `Q` or `Fp(u):p`")))?;
        FunctionField::over_prime(p).map_err(|e| LabError::Config(format!("field `{s}`: {e}")))?;
        Ok(FieldChoice::FunctionField(p))
    }
}

impl std::fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldChoice::Rationals => f.write_str("Q"),
            FieldChoice::FunctionField(p) => write!(f, "Fp(u):{p}"),
        }
    }
}

/// What the lab needs from a height field beyond the core traits.
pub trait LabField: HeightField {
    /// Name of the field variable in element expressions, if any.
    const ELEM_VAR: Option<&'static str>;

    /// Parses an element: a rational over `Q`, a rational function in `u`
    /// over `F_p(u)`.
    fn parse_elem(&self, text: &str) -> Result<Self::Elem, LabError>;

    /// A uniform draw from the elements of height at most `bound`:
    /// `a/b` with `|a|, b <= bound` over `Q`, numerator and denominator of
    /// degree at most `bound` over `F_p(u)`.
    fn sample_elem(&self, rng: &mut ChaCha20Rng, bound: u64) -> Self::Elem;

    /// A projective coordinate: an integer in `[-bound, bound]` over `Q`, a
    /// polynomial of degree at most `bound` over `F_p(u)`.
    fn sample_coord(&self, rng: &mut ChaCha20Rng, bound: u64) -> Self::Elem;

    /// Exact height as a report cell: a log value, or an integer degree.
    fn height_cell(h: &ExactHeight) -> String {
        match h.as_degree() {
            Some(d) => d.to_string(),
            None => h.to_f64().to_string(),
        }
    }
}

impl LabField for Rationals {
    const ELEM_VAR: Option<&'static str> = None;

    fn parse_elem(&self, text: &str) -> Result<BigRational, LabError> {
        let r = parse_expression(text, "s", self)?;
        if !r.is_polynomial() || r.numer().degree_or_zero() > 0 {
            return Err(LabError::Config(format!("`{text}` is not a rational constant")));
        }
        Ok(r.numer().coeff(0))
    }

    fn sample_elem(&self, rng: &mut ChaCha20Rng, bound: u64) -> BigRational {
        let b = bound as i64;
        loop {
            let num: i64 = rng.random_range(-b..=b);
            let den: i64 = rng.random_range(1..=b);
            if num.gcd(&den) == 1 {
                return BigRational::new(BigInt::from(num), BigInt::from(den));
            }
        }
    }

    fn sample_coord(&self, rng: &mut ChaCha20Rng, bound: u64) -> BigRational {
        let b = bound as i64;
        self.from_i64(rng.random_range(-b..=b))
    }
}

type BigRational = height_core::arith::BigRat;

impl LabField for FunctionField {
    const ELEM_VAR: Option<&'static str> = Some("u");

    fn parse_elem(&self, text: &str) -> Result<RatFunc<PrimeField>, LabError> {
        Ok(parse_expression(text, "u", self.base())?)
    }

    fn sample_elem(&self, rng: &mut ChaCha20Rng, bound: u64) -> RatFunc<PrimeField> {
        let p = self.modulus();
        let k = *self.base();
        loop {
            let num = random_poly(k, p, rng, bound);
            let den = random_poly(k, p, rng, bound);
            if let Ok(r) = RatFunc::normalize(num, den) {
                return r;
            }
        }
    }

    fn sample_coord(&self, rng: &mut ChaCha20Rng, bound: u64) -> RatFunc<PrimeField> {
        RatFunc::from_poly(random_poly(*self.base(), self.modulus(), rng, bound))
    }
}

fn random_poly(k: PrimeField, p: u64, rng: &mut ChaCha20Rng, bound: u64) -> Poly<PrimeField> {
    let cs: Vec<u64> = (0..=bound).map(|_| rng.random_range(0..p)).collect();
    Poly::new(k, cs.iter().map(|&c| k.from_i64(c as i64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use height_core::heights::{normalize_point, weil_height};
    use rand::SeedableRng;

    #[test]
    fn field_choice_round_trips() {
        for s in ["Q", "Fp(u):5", "Fp(u):7"] {
            assert_eq!(s.parse::<FieldChoice>().unwrap().to_string(), s);
        }
        for bad in ["R", "Fp(u):4", "Fp(u):3", "Fp(u):x", "F5"] {
            assert!(bad.parse::<FieldChoice>().is_err(), "{bad}");
        }
    }

    #[test]
    fn samples_respect_the_height_bound() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..500 {
            let s = Rationals.sample_elem(&mut rng, 100);
            let h = weil_height(&normalize_point(&Rationals, &[s, Rationals.one()]).unwrap());
            assert!(h.to_f64() <= 100f64.ln() + 1e-12);
        }
        let k = FunctionField::over_prime(5).unwrap();
        for _ in 0..500 {
            let s = k.sample_elem(&mut rng, 3);
            let h = weil_height(&normalize_point(&k, &[s, k.one()]).unwrap());
            assert!(h.as_degree().unwrap() <= 3);
        }
    }

    #[test]
    fn elements_parse() {
        assert_eq!(Rationals.parse_elem("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(Rationals.parse_elem("s").is_err());
        let k = FunctionField::over_prime(5).unwrap();
        assert_eq!(k.parse_elem("u^2/u").unwrap(), k.var());
    }
}
