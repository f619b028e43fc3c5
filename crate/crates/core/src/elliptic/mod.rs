//! Families of elliptic curves `y^2 = x^3 + a(s) x + b(s)` over a punctured
//! line, their smooth fibers, and the chord-tangent group law on each fiber.

use std::fmt;
use std::sync::Arc;

use crate::arith::{Field, RatFunc, RatFuncField};
use crate::heights::{multiprojective_height, normalize_point, weil_height, ExactHeight, HeightField, MultiProjPoint};

/// Coordinates larger than this (decimal digits over `Q`, degree over
/// `F_p(u)`) abort the computation.
pub const MAX_COORDINATE_SIZE: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EllipticError {
    #[error("discriminant of the family vanishes identically")]
    SingularFamily,
    #[error("coefficients and section must have the same constant field")]
    FieldMismatch,
    #[error("declared section does not satisfy the curve equation")]
    SectionNotOnCurve,
    #[error("fiber at s = {s} is singular: {reason}")]
    SingularFiber { s: String, reason: FiberDefect },
    #[error("section has a pole at s = {0}")]
    SectionPole(String),
    #[error("family has no declared section")]
    NoSection,
    #[error("point is not on the fiber")]
    NotOnCurve,
    #[error("points lie on different fibers")]
    FiberMismatch,
    #[error("coordinate size {size} exceeds the guard of {MAX_COORDINATE_SIZE}")]
    ResourceGuard { size: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberDefect {
    PoleOfA,
    PoleOfB,
    DiscriminantVanishes,
}

impl fmt::Display for FiberDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FiberDefect::PoleOfA => "s is a pole of a",
            FiberDefect::PoleOfB => "s is a pole of b",
            FiberDefect::DiscriminantVanishes => "discriminant vanishes",
        })
    }
}

type Coeff<K> = RatFunc<<K as crate::places::ProductFormulaField>::Constants>;

/// `y^2 = x^3 + a(s) x + b(s)` with `a, b` rational functions in `s` over
/// the constant field of `K`, and an optional section `(x(s), y(s))`.
#[derive(Clone, Debug)]
pub struct WeierstrassFamily<K: HeightField> {
    field: K,
    a: Coeff<K>,
    b: Coeff<K>,
    section: Option<(Coeff<K>, Coeff<K>)>,
}

impl<K: HeightField> WeierstrassFamily<K> {
    pub fn new(
        field: K,
        a: Coeff<K>,
        b: Coeff<K>,
        section: Option<(Coeff<K>, Coeff<K>)>,
    ) -> Result<Self, EllipticError> {
        let consts = field.constants();
        let same = |r: &Coeff<K>| *r.field() == consts;
        if !same(&a) || !same(&b) || section.as_ref().is_some_and(|(x, y)| !same(x) || !same(y)) {
            return Err(EllipticError::FieldMismatch);
        }
        let rf = RatFuncField::new(consts);
        let a3 = rf.pow(&a, 3);
        let b2 = rf.square(&b);
        let core = rf.add(&rf.scale_int(&a3, 4), &rf.scale_int(&b2, 27));
        if rf.is_zero(&core) {
            return Err(EllipticError::SingularFamily);
        }
        if let Some((x, y)) = &section {
            let rhs = rf.add(&rf.add(&rf.pow(x, 3), &rf.mul(&a, x)), &b);
            if rf.square(y) != rhs {
                return Err(EllipticError::SectionNotOnCurve);
            }
        }
        Ok(Self { field, a, b, section })
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn a(&self) -> &Coeff<K> {
        &self.a
    }

    pub fn b(&self) -> &Coeff<K> {
        &self.b
    }

    pub fn section(&self) -> Option<&(Coeff<K>, Coeff<K>)> {
        self.section.as_ref()
    }

    /// `Delta(s) = -16 (4 a^3 + 27 b^2)` as a rational function.
    pub fn discriminant(&self) -> Coeff<K> {
        let rf = RatFuncField::new(self.field.constants());
        let core = rf.add(
            &rf.scale_int(&rf.pow(&self.a, 3), 4),
            &rf.scale_int(&rf.square(&self.b), 27),
        );
        rf.scale_int(&core, -16)
    }

    fn eval(&self, r: &Coeff<K>, s: &K::Elem) -> Option<K::Elem> {
        let k = &self.field;
        r.eval_in(k, |c| k.embed_constant(c), s)
    }

    /// The smooth fiber over `s`, or the reason it is not smooth.
    pub fn fiber_check(&self, s: &K::Elem) -> Result<Arc<Fiber<K>>, EllipticError> {
        let k = &self.field;
        let fail = |reason| EllipticError::SingularFiber { s: k.format(s), reason };
        let a = self.eval(&self.a, s).ok_or_else(|| fail(FiberDefect::PoleOfA))?;
        let b = self.eval(&self.b, s).ok_or_else(|| fail(FiberDefect::PoleOfB))?;
        let core = k.add(&k.scale_int(&k.pow(&a, 3), 4), &k.scale_int(&k.square(&b), 27));
        if k.is_zero(&core) {
            return Err(fail(FiberDefect::DiscriminantVanishes));
        }
        Ok(Arc::new(Fiber {
            field: k.clone(),
            s: s.clone(),
            a,
            b,
        }))
    }

    /// The declared section evaluated on a fiber of this family.
    pub fn section_point(&self, fiber: &Arc<Fiber<K>>) -> Result<FiberPoint<K>, EllipticError> {
        let (x, y) = self.section.as_ref().ok_or(EllipticError::NoSection)?;
        let pole = || EllipticError::SectionPole(self.field.format(&fiber.s));
        let x = self.eval(x, &fiber.s).ok_or_else(pole)?;
        let y = self.eval(y, &fiber.s).ok_or_else(pole)?;
        FiberPoint::new(fiber, x, y)
    }
}

impl<K: HeightField> fmt::Display for WeierstrassFamily<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y^2 = x^3 + ({})*x + ({}) over {}",
            self.a.format_in("s"),
            self.b.format_in("s"),
            self.field.label()
        )
    }
}

/// A smooth fiber `E_s : y^2 = x^3 + A x + B` with `A = a(s)`, `B = b(s)`.
/// Only obtainable through [`WeierstrassFamily::fiber_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct Fiber<K: HeightField> {
    field: K,
    s: K::Elem,
    a: K::Elem,
    b: K::Elem,
}

impl<K: HeightField> Fiber<K> {
    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn s(&self) -> &K::Elem {
        &self.s
    }

    pub fn a(&self) -> &K::Elem {
        &self.a
    }

    pub fn b(&self) -> &K::Elem {
        &self.b
    }

    pub fn contains(&self, x: &K::Elem, y: &K::Elem) -> bool {
        let k = &self.field;
        let rhs = k.add(&k.add(&k.pow(x, 3), &k.mul(&self.a, x)), &self.b);
        k.square(y) == rhs
    }

    pub fn base_point(&self) -> crate::heights::ProjPoint<K> {
        normalize_point(&self.field, &[self.s.clone(), self.field.one()]).expect("1 is nonzero")
    }

    /// `h(s)` for the base point `(s : 1)`.
    pub fn base_height(&self) -> ExactHeight {
        weil_height(&self.base_point())
    }

    /// `lambda = max(1, h(s))`.
    pub fn lambda(&self) -> f64 {
        self.base_height().to_f64().max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body<E> {
    Identity,
    Affine { x: E, y: E },
}

#[derive(Clone, Debug)]
pub struct FiberPoint<K: HeightField> {
    fiber: Arc<Fiber<K>>,
    body: Body<K::Elem>,
}

impl<K: HeightField> PartialEq for FiberPoint<K> {
    fn eq(&self, other: &Self) -> bool {
        same_fiber(&self.fiber, &other.fiber) && self.body == other.body
    }
}

fn same_fiber<K: HeightField>(a: &Arc<Fiber<K>>, b: &Arc<Fiber<K>>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl<K: HeightField> FiberPoint<K> {
    pub fn new(fiber: &Arc<Fiber<K>>, x: K::Elem, y: K::Elem) -> Result<Self, EllipticError> {
        if !fiber.contains(&x, &y) {
            return Err(EllipticError::NotOnCurve);
        }
        Ok(Self {
            fiber: fiber.clone(),
            body: Body::Affine { x, y },
        })
    }

    pub fn identity(fiber: &Arc<Fiber<K>>) -> Self {
        Self {
            fiber: fiber.clone(),
            body: Body::Identity,
        }
    }

    pub fn fiber(&self) -> &Arc<Fiber<K>> {
        &self.fiber
    }

    pub fn body(&self) -> &Body<K::Elem> {
        &self.body
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.body, Body::Identity)
    }

    pub fn is_on_curve(&self) -> bool {
        match &self.body {
            Body::Identity => true,
            Body::Affine { x, y } => self.fiber.contains(x, y),
        }
    }

    fn with_body(&self, body: Body<K::Elem>) -> Result<Self, EllipticError> {
        if let Body::Affine { x, y } = &body {
            let k = &self.fiber.field;
            let size = k.size_of(x).max(k.size_of(y));
            if size > MAX_COORDINATE_SIZE {
                return Err(EllipticError::ResourceGuard { size });
            }
        }
        let p = Self {
            fiber: self.fiber.clone(),
            body,
        };
        debug_assert!(p.is_on_curve());
        Ok(p)
    }

    pub fn neg(&self) -> Self {
        let k = &self.fiber.field;
        let body = match &self.body {
            Body::Identity => Body::Identity,
            Body::Affine { x, y } => Body::Affine {
                x: x.clone(),
                y: k.neg(y),
            },
        };
        Self {
            fiber: self.fiber.clone(),
            body,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, EllipticError> {
        if !same_fiber(&self.fiber, &other.fiber) {
            return Err(EllipticError::FiberMismatch);
        }
        let k = &self.fiber.field;
        let (x1, y1, x2, y2) = match (&self.body, &other.body) {
            (Body::Identity, _) => return Ok(other.clone()),
            (_, Body::Identity) => return Ok(self.clone()),
            (Body::Affine { x: x1, y: y1 }, Body::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if k.is_zero(&k.add(y1, y2)) {
                return self.with_body(Body::Identity);
            }
            // Tangent: (3x^2 + A) / 2y.
            let num = k.add(&k.scale_int(&k.square(x1), 3), &self.fiber.a);
            k.div(&num, &k.scale_int(y1, 2)).expect("y != 0 off the 2-torsion")
        } else {
            k.div(&k.sub(y2, y1), &k.sub(x2, x1)).expect("distinct x")
        };
        let x3 = k.sub(&k.sub(&k.square(&slope), x1), x2);
        let y3 = k.sub(&k.mul(&slope, &k.sub(x1, &x3)), y1);
        self.with_body(Body::Affine { x: x3, y: y3 })
    }

    pub fn double(&self) -> Result<Self, EllipticError> {
        self.add(self)
    }

    /// `[n]P` by double-and-add; `[-n]P = -[n]P`.
    pub fn mul_n(&self, n: i64) -> Result<Self, EllipticError> {
        let mut acc = Self::identity(&self.fiber);
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.add(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.double()?;
            }
        }
        Ok(if n < 0 { acc.neg() } else { acc })
    }

    /// `((x : y : 1), (s : 1))`, or `((0 : 1 : 0), (s : 1))` for the identity.
    pub fn embed(&self) -> MultiProjPoint<K> {
        let k = &self.fiber.field;
        let raw = match &self.body {
            Body::Identity => vec![k.zero(), k.one(), k.zero()],
            Body::Affine { x, y } => vec![x.clone(), y.clone(), k.one()],
        };
        let p = normalize_point(k, &raw).expect("third or second coordinate is 1");
        MultiProjPoint::pair(p, self.fiber.base_point())
    }

    /// Height of the point in the fiber's `P^2`.
    pub fn fiber_height(&self) -> ExactHeight {
        weil_height(self.embed().first())
    }

    /// Height of the embedded point in `P^2 x P^1`.
    pub fn total_height(&self) -> ExactHeight {
        multiprojective_height(&self.embed()).expect("both factors over one field")
    }
}

impl<K: HeightField> fmt::Display for FiberPoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = &self.fiber.field;
        match &self.body {
            Body::Identity => f.write_str("O"),
            Body::Affine { x, y } => write!(f, "({}, {})", k.format(x), k.format(y)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{BigRat, FunctionField, Poly, PrimeField, Rationals};

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    fn qs(cs: &[i64]) -> RatFunc<Rationals> {
        RatFunc::from_poly(Poly::from_i64s(Rationals, cs))
    }

    fn family(a: &[i64], b: &[i64]) -> WeierstrassFamily<Rationals> {
        WeierstrassFamily::new(Rationals, qs(a), qs(b), None).unwrap()
    }

    #[test]
    fn fiber_check_examples() {
        assert!(family(&[0, 1], &[1]).fiber_check(&q(1, 1)).is_ok());
        assert!(matches!(
            family(&[], &[0, 1]).fiber_check(&q(0, 1)),
            Err(EllipticError::SingularFiber { reason: FiberDefect::DiscriminantVanishes, .. })
        ));
        let inv_s = RatFunc::normalize(Poly::from_i64s(Rationals, &[1]), Poly::from_i64s(Rationals, &[0, 1])).unwrap();
        let fam = WeierstrassFamily::new(Rationals, inv_s, qs(&[]), None).unwrap();
        assert!(matches!(
            fam.fiber_check(&q(0, 1)),
            Err(EllipticError::SingularFiber { reason: FiberDefect::PoleOfA, .. })
        ));
    }

    #[test]
    fn singular_family_and_bad_section() {
        assert_eq!(
            WeierstrassFamily::new(Rationals, qs(&[]), qs(&[]), None).err(),
            Some(EllipticError::SingularFamily)
        );
        assert_eq!(
            WeierstrassFamily::new(Rationals, qs(&[0, 1]), qs(&[1]), Some((qs(&[1]), qs(&[1])))).err(),
            Some(EllipticError::SectionNotOnCurve)
        );
        assert!(WeierstrassFamily::new(Rationals, qs(&[0, 1]), qs(&[1]), Some((qs(&[]), qs(&[1])))).is_ok());
    }

    #[test]
    fn group_law_examples() {
        let e = family(&[], &[1]).fiber_check(&q(0, 1)).unwrap();
        let p = FiberPoint::new(&e, q(2, 1), q(3, 1)).unwrap();
        assert_eq!(p.add(&p).unwrap(), FiberPoint::new(&e, q(0, 1), q(1, 1)).unwrap());
        assert_eq!(p.add(&FiberPoint::identity(&e)).unwrap(), p);
        assert!(p.mul_n(6).unwrap().is_identity());
        assert_eq!(p.mul_n(1).unwrap(), p);
        assert_eq!(p.mul_n(-1).unwrap(), p.neg());

        let e = family(&[-1], &[]).fiber_check(&q(0, 1)).unwrap();
        let t = FiberPoint::new(&e, q(0, 1), q(0, 1)).unwrap();
        assert!(t.add(&t).unwrap().is_identity());
    }

    #[test]
    fn doubling_and_embedding_over_q() {
        let fam = WeierstrassFamily::new(Rationals, qs(&[0, 1]), qs(&[1]), Some((qs(&[]), qs(&[1])))).unwrap();
        let e = fam.fiber_check(&q(1, 1)).unwrap();
        let p = fam.section_point(&e).unwrap();
        assert!(p.total_height().is_zero());
        let d = p.mul_n(2).unwrap();
        assert_eq!(d, FiberPoint::new(&e, q(1, 4), q(-9, 8)).unwrap());
        let emb = d.embed();
        assert_eq!(emb.first().coords(), &[q(2, 1), q(-9, 1), q(8, 1)]);
        assert_eq!(emb.second().coords(), &[q(1, 1), q(1, 1)]);
        assert_eq!(d.total_height(), ExactHeight::Multiplicative(q(9, 1)));
    }

    #[test]
    fn doubling_over_f5u() {
        let k = FunctionField::over_prime(5).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        let c = |cs: &[i64]| RatFunc::from_poly(Poly::from_i64s(f5, cs));
        let fam = WeierstrassFamily::new(k.clone(), c(&[0, 1]), c(&[1]), Some((c(&[]), c(&[1])))).unwrap();
        let e = fam.fiber_check(&k.var()).unwrap();
        let p = fam.section_point(&e).unwrap();
        let d = p.mul_n(2).unwrap();
        let kp = |cs: &[i64]| RatFunc::from_poly(Poly::from_i64s(f5, cs));
        assert_eq!(d, FiberPoint::new(&e, kp(&[0, 0, 4]), kp(&[4, 0, 0, 3])).unwrap());
        assert_eq!(d.total_height(), ExactHeight::Degree(4));
        assert_eq!(d.fiber_height(), ExactHeight::Degree(3));
        let o = FiberPoint::identity(&e).embed();
        assert_eq!(o.first().coords(), &[k.zero(), k.one(), k.zero()]);
        assert_eq!(o.second().coords(), &[k.var(), k.one()]);
    }

    #[test]
    fn mismatched_fibers() {
        let fam = family(&[0, 1], &[1]);
        let e1 = fam.fiber_check(&q(0, 1)).unwrap();
        let e2 = fam.fiber_check(&q(2, 1)).unwrap();
        let p = FiberPoint::new(&e1, q(0, 1), q(1, 1)).unwrap();
        let r = FiberPoint::identity(&e2);
        assert_eq!(p.add(&r), Err(EllipticError::FiberMismatch));
        assert_eq!(FiberPoint::new(&e1, q(1, 1), q(1, 1)), Err(EllipticError::NotOnCurve));
    }
}
