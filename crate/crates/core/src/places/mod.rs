//! Places and normalized absolute values of the product-formula fields `Q`
//! and `F_p(u)`.
//!
//! Over `Q` local values are multiplicative and exact (`|x|_p = p^-ord_p x`
//! as a rational). Over `F_p(u)` they are additive integers in units of
//! `log p`: `-ord_v(x) * deg v`, with the degree place contributing
//! `deg(num) - deg(den)`. Neither representation involves floats, so the
//! product formula is checked with no tolerance.

mod factor;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::arith::{BigRat, Field, FunctionField, Poly, PrimeField, RatFunc, Rationals};

pub use factor::{
    int_order, irreducible_factors, is_irreducible, poly_order, prime_factors, TRIAL_DIVISION_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlaceError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a monic irreducible polynomial")]
    NotIrreducible(String),
    #[error("place {place} does not belong to the field {field}")]
    WrongField { place: String, field: String },
    #[error("the zero element has no finite support")]
    ZeroInput,
    #[error("cofactor {0} has no prime factor below the trial-division cap; composite residual place")]
    CompositeResidual(BigUint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum PlaceKind {
    Archimedean,
    Prime(u64),
    Irreducible(Poly<PrimeField>),
    Degree,
}

/// A place of `Q` (archimedean or a prime) or of `F_p(u)` (a monic
/// irreducible polynomial or the degree place at infinity). Finite places
/// are certified at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Place(PlaceKind);

impl Place {
    pub fn archimedean() -> Self {
        Place(PlaceKind::Archimedean)
    }

    pub fn degree() -> Self {
        Place(PlaceKind::Degree)
    }

    pub fn prime(p: u64) -> Result<Self, PlaceError> {
        if factor::certify_prime(p) {
            Ok(Place(PlaceKind::Prime(p)))
        } else {
            Err(PlaceError::NotPrime(p))
        }
    }

    pub fn irreducible(pi: Poly<PrimeField>) -> Result<Self, PlaceError> {
        if pi.is_monic() && is_irreducible(&pi) {
            Ok(Place(PlaceKind::Irreducible(pi)))
        } else {
            Err(PlaceError::NotIrreducible(pi.to_string()))
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self.0, PlaceKind::Archimedean)
    }

    pub fn is_degree_place(&self) -> bool {
        matches!(self.0, PlaceKind::Degree)
    }

    pub fn as_prime(&self) -> Option<u64> {
        match self.0 {
            PlaceKind::Prime(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_irreducible(&self) -> Option<&Poly<PrimeField>> {
        match &self.0 {
            PlaceKind::Irreducible(pi) => Some(pi),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self.0 {
            PlaceKind::Archimedean => 0,
            PlaceKind::Prime(_) => 1,
            PlaceKind::Irreducible(_) => 2,
            PlaceKind::Degree => 3,
        }
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (PlaceKind::Prime(a), PlaceKind::Prime(b)) => a.cmp(b),
            (PlaceKind::Irreducible(a), PlaceKind::Irreducible(b)) => factor::poly_order_key(a, b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            PlaceKind::Archimedean => f.write_str("inf"),
            PlaceKind::Prime(p) => write!(f, "{p}"),
            PlaceKind::Irreducible(pi) => write!(f, "{pi}"),
            PlaceKind::Degree => f.write_str("deg"),
        }
    }
}

/// The value of a field element at one place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    /// `|x|_v` over `Q`; zero for `x = 0`.
    Absolute(BigRational),
    /// `-ord_v(x) * deg v` over `F_p(u)`.
    Additive(i64),
    /// The additive value of zero.
    NegInfinity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalValue {
    pub place: Place,
    pub value: Valuation,
}

/// The combination of all local values of an element: their product over
/// `Q` (must be 1) or their sum over `F_p(u)` (must be 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residual {
    Multiplicative(BigRational),
    Additive(i64),
}

impl Residual {
    pub fn is_trivial(&self) -> bool {
        match self {
            Residual::Multiplicative(r) => r.is_one(),
            Residual::Additive(s) => *s == 0,
        }
    }
}

/// A field with a product formula, together with its field of constants
/// (the coefficients of the families that live over it).
pub trait ProductFormulaField: Field {
    type Constants: Field;

    fn constants(&self) -> Self::Constants;
    fn embed_constant(&self, c: &<Self::Constants as Field>::Elem) -> Self::Elem;
    /// Short name used in reports, e.g. `Q` or `F5(u)`.
    fn label(&self) -> String;
    /// Units in which heights over this field are reported.
    fn height_convention(&self) -> &'static str;

    /// Local value of `x` at `v`. Zero is allowed and maps to the zero
    /// (resp. `-inf`) marker.
    fn local_value(&self, v: &Place, x: &Self::Elem) -> Result<LocalValue, PlaceError>;

    /// The places where a nonzero `x` has nonzero valuation, together with
    /// the archimedean (resp. degree) place, in ascending order.
    fn support(&self, x: &Self::Elem) -> Result<Vec<Place>, PlaceError>;

    fn verify_product_formula(&self, x: &Self::Elem) -> Result<Residual, PlaceError> {
        let mut acc: Option<Residual> = None;
        for v in self.support(x)? {
            let lv = self.local_value(&v, x)?;
            acc = Some(match (acc, lv.value) {
                (None, Valuation::Absolute(a)) => Residual::Multiplicative(a),
                (None, Valuation::Additive(a)) => Residual::Additive(a),
                (Some(Residual::Multiplicative(r)), Valuation::Absolute(a)) => {
                    Residual::Multiplicative(r * a)
                }
                (Some(Residual::Additive(r)), Valuation::Additive(a)) => Residual::Additive(r + a),
                _ => unreachable!("support of a nonzero element mixes value kinds"),
            });
        }
        Ok(acc.expect("support always contains the infinite place"))
    }
}

fn wrong_field<K: ProductFormulaField>(k: &K, v: &Place) -> PlaceError {
    PlaceError::WrongField {
        place: v.to_string(),
        field: k.label(),
    }
}

impl ProductFormulaField for Rationals {
    type Constants = Rationals;

    fn constants(&self) -> Rationals {
        Rationals
    }
    fn embed_constant(&self, c: &BigRat) -> BigRat {
        c.clone()
    }
    fn label(&self) -> String {
        "Q".to_string()
    }
    fn height_convention(&self) -> &'static str {
        "natural logarithm of the multiplicative height"
    }

    fn local_value(&self, v: &Place, x: &BigRat) -> Result<LocalValue, PlaceError> {
        let value = match &v.0 {
            _ if x.is_zero() && !matches!(v.0, PlaceKind::Irreducible(_) | PlaceKind::Degree) => {
                BigRational::zero()
            }
            PlaceKind::Archimedean => x.abs(),
            PlaceKind::Prime(p) => {
                let ord = int_order(x.numer().magnitude(), *p) as i64
                    - int_order(x.denom().magnitude(), *p) as i64;
                let base = BigRational::from_integer(BigInt::from(*p));
                if ord >= 0 {
                    Pow::pow(base, ord as u64).recip()
                } else {
                    Pow::pow(base, (-ord) as u64)
                }
            }
            _ => return Err(wrong_field(self, v)),
        };
        Ok(LocalValue {
            place: v.clone(),
            value: Valuation::Absolute(value),
        })
    }

    fn support(&self, x: &BigRat) -> Result<Vec<Place>, PlaceError> {
        if x.is_zero() {
            return Err(PlaceError::ZeroInput);
        }
        let mut primes = prime_factors(x.numer().magnitude(), TRIAL_DIVISION_CAP)
            .map_err(PlaceError::CompositeResidual)?;
        primes.extend(
            prime_factors(x.denom().magnitude(), TRIAL_DIVISION_CAP)
                .map_err(PlaceError::CompositeResidual)?,
        );
        primes.sort_unstable();
        let mut out = vec![Place::archimedean()];
        out.extend(primes.into_iter().map(|p| Place(PlaceKind::Prime(p))));
        Ok(out)
    }
}

impl ProductFormulaField for FunctionField {
    type Constants = PrimeField;

    fn constants(&self) -> PrimeField {
        *self.base()
    }
    fn embed_constant(&self, c: &u64) -> RatFunc<PrimeField> {
        self.constant(c)
    }
    fn label(&self) -> String {
        format!("F{}(u)", self.modulus())
    }
    fn height_convention(&self) -> &'static str {
        "degree units (multiples of log q)"
    }

    fn local_value(&self, v: &Place, x: &RatFunc<PrimeField>) -> Result<LocalValue, PlaceError> {
        let value = match &v.0 {
            PlaceKind::Irreducible(pi) if pi.field() == self.base() => {
                if x.is_zero() {
                    Valuation::NegInfinity
                } else {
                    let ord = poly_order(x.numer(), pi) as i64 - poly_order(x.denom(), pi) as i64;
                    Valuation::Additive(-ord * pi.degree().unwrap() as i64)
                }
            }
            PlaceKind::Degree => match x.degree() {
                None => Valuation::NegInfinity,
                Some(d) => Valuation::Additive(d),
            },
            _ => return Err(wrong_field(self, v)),
        };
        Ok(LocalValue {
            place: v.clone(),
            value,
        })
    }

    fn support(&self, x: &RatFunc<PrimeField>) -> Result<Vec<Place>, PlaceError> {
        if x.is_zero() {
            return Err(PlaceError::ZeroInput);
        }
        let mut polys = irreducible_factors(x.numer());
        polys.extend(irreducible_factors(x.denom()));
        polys.sort_by(factor::poly_order_key);
        polys.dedup();
        let mut out: Vec<Place> = polys
            .into_iter()
            .map(|pi| Place(PlaceKind::Irreducible(pi)))
            .collect();
        out.push(Place::degree());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    fn f5() -> FunctionField {
        FunctionField::over_prime(5).unwrap()
    }

    fn f5poly(cs: &[i64]) -> Poly<PrimeField> {
        Poly::from_i64s(PrimeField::new(5).unwrap(), cs)
    }

    fn ratio(n: &[i64], d: &[i64]) -> RatFunc<PrimeField> {
        RatFunc::normalize(f5poly(n), f5poly(d)).unwrap()
    }

    #[test]
    fn rational_local_values() {
        let two = Place::prime(2).unwrap();
        let lv = Rationals.local_value(&two, &q(6, 1)).unwrap();
        assert_eq!(lv.value, Valuation::Absolute(q(1, 2)));
        let lv = Rationals.local_value(&Place::archimedean(), &q(6, 1)).unwrap();
        assert_eq!(lv.value, Valuation::Absolute(q(6, 1)));
        let lv = Rationals.local_value(&two, &q(3, 8)).unwrap();
        assert_eq!(lv.value, Valuation::Absolute(q(8, 1)));
        let lv = Rationals.local_value(&two, &q(0, 1)).unwrap();
        assert_eq!(lv.value, Valuation::Absolute(q(0, 1)));
    }

    #[test]
    fn degree_place_value() {
        let x = ratio(&[0, 0, 1], &[1, 1]);
        let lv = f5().local_value(&Place::degree(), &x).unwrap();
        assert_eq!(lv.value, Valuation::Additive(1));
    }

    #[test]
    fn rational_support() {
        assert_eq!(
            Rationals.support(&q(6, 1)).unwrap(),
            vec![Place::archimedean(), Place::prime(2).unwrap(), Place::prime(3).unwrap()]
        );
        assert_eq!(Rationals.support(&q(1, 1)).unwrap(), vec![Place::archimedean()]);
        assert_eq!(Rationals.support(&q(0, 1)), Err(PlaceError::ZeroInput));
    }

    #[test]
    fn function_field_support() {
        let x = RatFunc::from_poly(f5poly(&[1, 0, 1]));
        let places = f5().support(&x).unwrap();
        assert_eq!(
            places,
            vec![
                Place::irreducible(f5poly(&[2, 1])).unwrap(),
                Place::irreducible(f5poly(&[3, 1])).unwrap(),
                Place::degree()
            ]
        );
    }

    #[test]
    fn product_formula_examples() {
        assert_eq!(
            Rationals.verify_product_formula(&q(6, 1)).unwrap(),
            Residual::Multiplicative(q(1, 1))
        );
        assert!(Rationals.verify_product_formula(&q(1, 1)).unwrap().is_trivial());
        let x = ratio(&[0, 0, 1], &[1, 1]);
        assert_eq!(f5().verify_product_formula(&x).unwrap(), Residual::Additive(0));
    }

    #[test]
    fn place_certification() {
        assert_eq!(Place::prime(9), Err(PlaceError::NotPrime(9)));
        assert!(Place::irreducible(f5poly(&[1, 0, 1])).is_err());
        assert!(Place::irreducible(f5poly(&[2, 0, 1])).is_ok());
    }

    #[test]
    fn wrong_field_places_rejected() {
        let pi = Place::irreducible(f5poly(&[0, 1])).unwrap();
        assert!(matches!(
            Rationals.local_value(&pi, &q(2, 1)),
            Err(PlaceError::WrongField { .. })
        ));
        assert!(matches!(
            f5().local_value(&Place::prime(2).unwrap(), &f5().one()),
            Err(PlaceError::WrongField { .. })
        ));
    }
}
