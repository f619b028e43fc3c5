//! Projective points in canonical form and their exact Weil heights.
//!
//! A point of `P^n(Q)` is stored as coprime integers with the first nonzero
//! coordinate positive, so its multiplicative height is simply the largest
//! coordinate in absolute value. Over `F_p(u)` coordinates are coprime
//! polynomials with the first nonzero one monic and the height is the
//! largest degree. Logarithms only appear when a height is turned into a
//! float for reporting.

mod morphism;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::arith::{ln_ratio, poly_gcd, BigRat, Field, FunctionField, Poly, PrimeField, RatFunc, Rationals};
use crate::places::ProductFormulaField;

pub use morphism::{
    blowup_of_plane, fit_linear_height_bound, identity, segre, verify_two_sided_bound, veronese,
    BlowupPair, DomainCondition, Form, HeightMorphism, LinearFit, MorphismError, MorphismSpec,
    ProductMorphism, TwoSidedFit,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeightError {
    #[error("all coordinates are zero")]
    AllZero,
    #[error("components live over different fields")]
    FieldMismatch,
    #[error("a multiprojective point needs at least one factor")]
    NoFactors,
}

/// An exact height-scale quantity.
///
/// Over `Q` this is a positive rational `H` standing for `log H`; over
/// `F_p(u)` an integer count of `log q` units. Heights of points are always
/// `H >= 1` resp. `>= 0`, but differences of heights (the offsets fitted by
/// by the height comparisons, the excess `h([2]P) - 4 h(P)`) use the same type
/// and may be negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactHeight {
    Multiplicative(BigRational),
    Degree(i64),
}

impl ExactHeight {
    pub fn zero_like(&self) -> Self {
        match self {
            ExactHeight::Multiplicative(_) => ExactHeight::Multiplicative(BigRational::one()),
            ExactHeight::Degree(_) => ExactHeight::Degree(0),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactHeight::Multiplicative(r) => r.is_one(),
            ExactHeight::Degree(d) => *d == 0,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        match (self, other) {
            (ExactHeight::Multiplicative(a), ExactHeight::Multiplicative(b)) => {
                ExactHeight::Multiplicative(a * b)
            }
            (ExactHeight::Degree(a), ExactHeight::Degree(b)) => ExactHeight::Degree(a + b),
            _ => panic!("heights in different conventions"),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    pub fn negated(&self) -> Self {
        match self {
            ExactHeight::Multiplicative(a) => ExactHeight::Multiplicative(a.recip()),
            ExactHeight::Degree(a) => ExactHeight::Degree(-a),
        }
    }

    pub fn times(&self, k: u32) -> Self {
        match self {
            ExactHeight::Multiplicative(a) => ExactHeight::Multiplicative(Pow::pow(a, k)),
            ExactHeight::Degree(a) => ExactHeight::Degree(a * k as i64),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.negated()
        } else {
            self.clone()
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            ExactHeight::Multiplicative(a) => *a < BigRational::one(),
            ExactHeight::Degree(a) => *a < 0,
        }
    }

    /// The real number this stands for: `ln H` or the degree count.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactHeight::Multiplicative(a) => ln_ratio(a),
            ExactHeight::Degree(d) => *d as f64,
        }
    }

    /// Exact comparison. Panics on mixed conventions.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExactHeight::Multiplicative(a), ExactHeight::Multiplicative(b)) => a.cmp(b),
            (ExactHeight::Degree(a), ExactHeight::Degree(b)) => a.cmp(b),
            _ => panic!("heights in different conventions"),
        }
    }

    pub fn max_exact(self, other: Self) -> Self {
        if other.cmp_exact(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn as_degree(&self) -> Option<i64> {
        match self {
            ExactHeight::Degree(d) => Some(*d),
            _ => None,
        }
    }

    pub fn as_multiplicative(&self) -> Option<&BigRational> {
        match self {
            ExactHeight::Multiplicative(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for ExactHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactHeight::Multiplicative(a) => write!(f, "log({a})"),
            ExactHeight::Degree(d) => write!(f, "{d}"),
        }
    }
}

/// A product-formula field on whose projective spaces heights are exact.
pub trait HeightField: ProductFormulaField {
    /// The canonical representative of the projective point with the given
    /// coordinates, or `None` if every coordinate is zero.
    fn canonical_coords(&self, raw: &[Self::Elem]) -> Option<Vec<Self::Elem>>;
    /// Weil height of coordinates already in canonical form.
    fn canonical_height(&self, canon: &[Self::Elem]) -> ExactHeight;
    fn zero_height(&self) -> ExactHeight;
    /// Decimal digits (over `Q`) or degree (over `F_p(u)`) of an element;
    /// used by resource guards.
    fn size_of(&self, x: &Self::Elem) -> u64;
}

impl HeightField for Rationals {
    fn canonical_coords(&self, raw: &[BigRat]) -> Option<Vec<BigRat>> {
        if raw.iter().all(|c| c.is_zero()) {
            return None;
        }
        let lcm = raw.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = raw.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign_flip = ints.iter().find(|c| !c.is_zero()).unwrap().is_negative();
        Some(
            ints.into_iter()
                .map(|c| {
                    let q = c / &g;
                    BigRational::from_integer(if sign_flip { -q } else { q })
                })
                .collect(),
        )
    }

    fn canonical_height(&self, canon: &[BigRat]) -> ExactHeight {
        let h = canon.iter().map(|c| c.numer().abs()).max().unwrap_or_else(BigInt::one);
        ExactHeight::Multiplicative(BigRational::from_integer(h))
    }

    fn zero_height(&self) -> ExactHeight {
        ExactHeight::Multiplicative(BigRational::one())
    }

    fn size_of(&self, x: &BigRat) -> u64 {
        let bits = x.numer().bits().max(x.denom().bits());
        (bits as f64 * std::f64::consts::LOG10_2).ceil() as u64
    }
}

impl HeightField for FunctionField {
    fn canonical_coords(&self, raw: &[RatFunc<PrimeField>]) -> Option<Vec<RatFunc<PrimeField>>> {
        if raw.iter().all(|c| c.is_zero()) {
            return None;
        }
        let base = *self.base();
        let mut lcm = Poly::one(base);
        for c in raw {
            let g = poly_gcd(&lcm, c.denom()).expect("same field");
            lcm = &lcm * &c.denom().exact_div(&g).expect("gcd divides");
        }
        let polys: Vec<Poly<PrimeField>> = raw
            .iter()
            .map(|c| c.numer() * &lcm.exact_div(c.denom()).expect("lcm is a multiple"))
            .collect();
        let g = polys
            .iter()
            .fold(Poly::zero(base), |acc, c| poly_gcd(&acc, c).expect("same field"));
        let first = polys.iter().find(|c| !c.is_zero()).unwrap();
        let lead = base
            .inv(&first.exact_div(&g).unwrap().leading().copied().unwrap())
            .unwrap();
        Some(
            polys
                .iter()
                .map(|c| RatFunc::from_poly(c.exact_div(&g).expect("gcd divides").scale(&lead)))
                .collect(),
        )
    }

    fn canonical_height(&self, canon: &[RatFunc<PrimeField>]) -> ExactHeight {
        let d = canon
            .iter()
            .filter_map(|c| c.numer().degree())
            .max()
            .unwrap_or(0);
        ExactHeight::Degree(d as i64)
    }

    fn zero_height(&self) -> ExactHeight {
        ExactHeight::Degree(0)
    }

    fn size_of(&self, x: &RatFunc<PrimeField>) -> u64 {
        x.numer().degree_or_zero().max(x.denom().degree_or_zero()) as u64
    }
}

/// A point of `P^n(k)` in canonical form.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjPoint<K: HeightField> {
    field: K,
    coords: Vec<K::Elem>,
}

impl<K: HeightField> ProjPoint<K> {
    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn coords(&self) -> &[K::Elem] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }
}

impl<K: HeightField> fmt::Display for ProjPoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| self.field.format(c)).collect();
        write!(f, "({})", parts.join(" : "))
    }
}

pub fn normalize_point<K: HeightField>(field: &K, raw: &[K::Elem]) -> Result<ProjPoint<K>, HeightError> {
    let coords = field.canonical_coords(raw).ok_or(HeightError::AllZero)?;
    Ok(ProjPoint {
        field: field.clone(),
        coords,
    })
}

pub fn weil_height<K: HeightField>(p: &ProjPoint<K>) -> ExactHeight {
    p.field.canonical_height(&p.coords)
}

/// A point of `P^m x P^n x ...`, one canonical point per factor.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiProjPoint<K: HeightField> {
    factors: Vec<ProjPoint<K>>,
}

impl<K: HeightField> MultiProjPoint<K> {
    pub fn new(factors: Vec<ProjPoint<K>>) -> Self {
        Self { factors }
    }

    pub fn pair(first: ProjPoint<K>, second: ProjPoint<K>) -> Self {
        Self {
            factors: vec![first, second],
        }
    }

    pub fn factors(&self) -> &[ProjPoint<K>] {
        &self.factors
    }

    pub fn first(&self) -> &ProjPoint<K> {
        &self.factors[0]
    }

    pub fn second(&self) -> &ProjPoint<K> {
        &self.factors[1]
    }
}

impl<K: HeightField> fmt::Display for MultiProjPoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The height attached to `O(1, ..., 1)`: the sum of the factor heights
/// (the product of multiplicative heights over `Q`).
pub fn multiprojective_height<K: HeightField>(q: &MultiProjPoint<K>) -> Result<ExactHeight, HeightError> {
    let first = q.factors.first().ok_or(HeightError::NoFactors)?;
    if q.factors.iter().any(|p| p.field != first.field) {
        return Err(HeightError::FieldMismatch);
    }
    Ok(q.factors
        .iter()
        .map(weil_height)
        .fold(first.field.zero_height(), |acc, h| acc.plus(&h)))
}
