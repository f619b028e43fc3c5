//! Divisors on `P^1` and `P^2` in factored form: integer combinations of
//! registered, pairwise coprime forms.
//!
//! With coprime factors the local equation on a chart is `p/q` in lowest
//! terms, so the ideal of denominators is generated by `q` and its divisor
//! is exactly the negative part of `D`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::arith::{poly_gcd, Field, Poly, RatFunc};
use crate::heights::Form;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DivisorError {
    #[error("only P^1 and P^2 are supported, got P^{0}")]
    UnsupportedAmbient(usize),
    #[error("form `{0}`: {1}")]
    BadForm(String, String),
    #[error("identifier `{0}` registered twice")]
    Duplicate(String),
    #[error("forms `{0}` and `{1}` share a factor")]
    NotCoprime(String, String),
    #[error("identifier `{0}` is not registered")]
    Unknown(String),
    #[error("divisors come from different registries")]
    RegistryMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coprimality {
    /// Checked by gcd (on `P^1`).
    Certified,
    /// Taken on trust from the caller (on `P^2`).
    Asserted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegisteredForm {
    pub id: String,
    pub form: Form,
    pub degree: u32,
}

/// Forms on `P^n`, `n <= 2`, over the constant field `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormRegistry<C: Field> {
    field: C,
    dim: usize,
    forms: Vec<RegisteredForm>,
}

impl<C: Field> FormRegistry<C> {
    pub fn new(field: C, dim: usize) -> Result<Self, DivisorError> {
        if !(1..=2).contains(&dim) {
            return Err(DivisorError::UnsupportedAmbient(dim));
        }
        Ok(Self {
            field,
            dim,
            forms: Vec::new(),
        })
    }

    pub fn field(&self) -> &C {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coprimality(&self) -> Coprimality {
        if self.dim == 1 {
            Coprimality::Certified
        } else {
            Coprimality::Asserted
        }
    }

    pub fn forms(&self) -> &[RegisteredForm] {
        &self.forms
    }

    pub fn get(&self, id: &str) -> Option<&RegisteredForm> {
        self.forms.iter().find(|f| f.id == id)
    }

    pub fn register(&mut self, id: impl Into<String>, form: Form) -> Result<(), DivisorError> {
        let id = id.into();
        let bad = |why: &str| DivisorError::BadForm(id.clone(), why.to_string());
        if form.nvars() != self.dim + 1 {
            return Err(bad("wrong number of variables"));
        }
        let reduced = self.reduce(&form);
        if reduced.iter().all(|(_, c)| self.field.is_zero(c)) {
            return Err(bad("zero form"));
        }
        let degree = match form.multidegree(&[self.dim + 1]).as_deref() {
            Some([d]) => *d,
            _ => return Err(bad("not homogeneous")),
        };
        if degree == 0 {
            return Err(bad("constant forms are units"));
        }
        if self.get(&id).is_some() {
            return Err(DivisorError::Duplicate(id));
        }
        if self.dim == 1 {
            for other in &self.forms {
                if !self.coprime_on_line(&form, &other.form) {
                    return Err(DivisorError::NotCoprime(other.id.clone(), id));
                }
            }
        }
        self.forms.push(RegisteredForm { id, form, degree });
        Ok(())
    }

    fn reduce(&self, form: &Form) -> Vec<(Vec<u32>, C::Elem)> {
        form.terms()
            .map(|(e, c)| (e.clone(), self.field.from_bigint(c)))
            .collect()
    }

    /// `f(x, 1)` for a binary form `f(x, y)`.
    pub fn dehomogenize(&self, form: &Form) -> Poly<C> {
        assert_eq!(self.dim, 1, "dehomogenization is for binary forms");
        let mut coeffs = vec![self.field.zero(); form.multidegree(&[2]).and_then(|d| d.first().copied()).unwrap_or(0) as usize + 1];
        for (e, c) in self.reduce(form) {
            coeffs[e[0] as usize] = self.field.add(&coeffs[e[0] as usize], &c);
        }
        Poly::new(self.field.clone(), coeffs)
    }

    fn divisible_by_y(&self, form: &Form) -> bool {
        let d = form.multidegree(&[2]).and_then(|d| d.first().copied()).unwrap_or(0);
        self.dehomogenize(form).degree().is_none_or(|deg| deg < d as usize)
    }

    fn coprime_on_line(&self, f: &Form, g: &Form) -> bool {
        let (a, b) = (self.dehomogenize(f), self.dehomogenize(g));
        poly_gcd(&a, &b).expect("one field").is_one() && !(self.divisible_by_y(f) && self.divisible_by_y(g))
    }
}

/// `sum m_i div(f_i)` over a registry; multiplicities are never zero.
#[derive(Clone, Debug)]
pub struct FormalDivisor<C: Field> {
    registry: Arc<FormRegistry<C>>,
    terms: BTreeMap<String, i64>,
}

impl<C: Field> PartialEq for FormalDivisor<C> {
    fn eq(&self, other: &Self) -> bool {
        self.same_registry(other) && self.terms == other.terms
    }
}

impl<C: Field> FormalDivisor<C> {
    pub fn new(
        registry: &Arc<FormRegistry<C>>,
        terms: impl IntoIterator<Item = (String, i64)>,
    ) -> Result<Self, DivisorError> {
        let mut map = BTreeMap::new();
        for (id, m) in terms {
            if registry.get(&id).is_none() {
                return Err(DivisorError::Unknown(id));
            }
            *map.entry(id).or_insert(0) += m;
        }
        map.retain(|_, m| *m != 0);
        Ok(Self {
            registry: registry.clone(),
            terms: map,
        })
    }

    pub fn zero(registry: &Arc<FormRegistry<C>>) -> Self {
        Self {
            registry: registry.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn registry(&self) -> &Arc<FormRegistry<C>> {
        &self.registry
    }

    pub fn terms(&self) -> &BTreeMap<String, i64> {
        &self.terms
    }

    pub fn multiplicity(&self, id: &str) -> i64 {
        self.terms.get(id).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms
            .iter()
            .map(|(id, m)| m * self.registry.get(id).expect("registered").degree as i64)
            .sum()
    }

    fn same_registry(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.registry, &other.registry) || self.registry == other.registry
    }

    fn filtered(&self, keep: impl Fn(i64) -> Option<i64>) -> Self {
        Self {
            registry: self.registry.clone(),
            terms: self
                .terms
                .iter()
                .filter_map(|(id, &m)| keep(m).map(|k| (id.clone(), k)))
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, DivisorError> {
        if !self.same_registry(other) {
            return Err(DivisorError::RegistryMismatch);
        }
        let mut terms = self.terms.clone();
        for (id, m) in &other.terms {
            *terms.entry(id.clone()).or_insert(0) += m;
        }
        terms.retain(|_, m| *m != 0);
        Ok(Self {
            registry: self.registry.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, DivisorError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.filtered(|m| Some(-m))
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&m| m >= 0)
    }

    /// `D = C - E` with `C, E` effective and of disjoint support.
    pub fn split_effective(&self) -> (Self, Self) {
        (
            self.filtered(|m| (m > 0).then_some(m)),
            self.filtered(|m| (m < 0).then_some(-m)),
        )
    }

    /// Divisor of the ideal of denominators: the negative part `E`.
    pub fn denominator_support(&self) -> Self {
        self.split_effective().1
    }

    /// `prod f_i^{-m_i}` over negative multiplicities, as one form.
    pub fn denominator_generator(&self) -> Form {
        let n = self.registry.dim + 1;
        let one = Form::new(n, [(1.into(), vec![0; n])]).expect("constant form");
        self.denominator_support()
            .terms
            .iter()
            .fold(one, |acc, (id, &m)| {
                let f = &self.registry.get(id).expect("registered").form;
                (0..m).fold(acc, |a, _| form_mul(&a, f))
            })
    }

    /// On `P^1`, the function `prod f_i(x, 1)^{m_i}` on the chart `y = 1`.
    pub fn chart_function(&self) -> RatFunc<C> {
        let r = &self.registry;
        let k = r.field().clone();
        let (c, e) = self.split_effective();
        let product = |d: &Self| {
            d.terms.iter().fold(Poly::one(k.clone()), |acc, (id, &m)| {
                &acc * &r.dehomogenize(&r.get(id).expect("registered").form).pow(m as u32)
            })
        };
        RatFunc::normalize(product(&c), product(&e)).expect("nonzero forms")
    }

    /// On `P^1`, the monic generator of the denominator ideal on `y = 1`.
    pub fn chart_denominator(&self) -> Poly<C> {
        self.registry.dehomogenize(&self.denominator_generator()).monic()
    }
}

fn form_mul(a: &Form, b: &Form) -> Form {
    let terms = a.terms().flat_map(|(ea, ca)| {
        b.terms().map(move |(eb, cb)| {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            (ca * cb, e)
        })
    });
    Form::new(a.nvars(), terms.collect::<Vec<_>>()).expect("same arity")
}

impl<C: Field> fmt::Display for FormalDivisor<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(id, m)| format!("{id}^{m}")).collect();
        f.write_str(&parts.join(" * "))
    }
}
