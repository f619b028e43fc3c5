//! Morphisms between (multi)projective spaces given by forms, and the
//! empirical fitting of linear height bounds along them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{normalize_point, weil_height, ExactHeight, HeightError, HeightField, MultiProjPoint, ProjPoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphismError {
    #[error("morphism `{name}`: {reason}")]
    Malformed { name: String, reason: String },
    #[error("point does not match the source of `{0}`")]
    ShapeMismatch(String),
    #[error("point lies outside the declared domain of `{0}`")]
    OutsideDomain(String),
    #[error("every coordinate form of `{0}` vanishes at the point")]
    BaseLocus(String),
    #[error("no samples supplied")]
    EmptySamples,
    #[error("sample {index}: {source}")]
    Sample {
        index: usize,
        #[source]
        source: Box<MorphismError>,
    },
    #[error("sample {0}: forward map does not undo the section")]
    RoundTripFailed(usize),
    #[error(transparent)]
    Height(#[from] HeightError),
}

/// A polynomial with integer coefficients in `nvars` variables, stored as
/// exponent vector -> coefficient with zero terms dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Form {
    pub fn new(nvars: usize, terms: impl IntoIterator<Item = (BigInt, Vec<u32>)>) -> Result<Self, String> {
        let mut map: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(format!("exponent vector {e:?} has length {}, expected {nvars}", e.len()));
            }
            *map.entry(e).or_insert_with(BigInt::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { nvars, terms: map })
    }

    pub fn from_i64_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Result<Self, String> {
        Self::new(nvars, terms.iter().map(|(c, e)| (BigInt::from(*c), e.to_vec())))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self {
            nvars,
            terms: BTreeMap::from([(e, BigInt::one())]),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    /// Degrees in each variable group, if the form is homogeneous in every
    /// group. `None` for a non-multihomogeneous form; the zero form has
    /// every multidegree and reports `Some(vec![])`.
    pub fn multidegree(&self, groups: &[usize]) -> Option<Vec<u32>> {
        let mut out: Option<Vec<u32>> = None;
        for e in self.terms.keys() {
            let mut start = 0;
            let mut d = Vec::with_capacity(groups.len());
            for &g in groups {
                d.push(e[start..start + g].iter().sum());
                start += g;
            }
            match &out {
                None => out = Some(d),
                Some(prev) if *prev != d => return None,
                _ => {}
            }
        }
        Some(out.unwrap_or_default())
    }

    pub fn eval<K: crate::arith::Field>(&self, field: &K, x: &[K::Elem]) -> K::Elem {
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let mut t = field.from_bigint(c);
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = field.mul(&t, &field.pow(xi, k));
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainCondition {
    Vanishes(Form),
    NotAllVanish(Vec<Form>),
}

/// A morphism `P^{n_1} x ... x P^{n_r} -> P^l` on a locally closed domain,
/// given by `l + 1` multihomogeneous forms of a common multidegree.
#[derive(Clone, Debug, PartialEq)]
pub struct MorphismSpec {
    name: String,
    source: Vec<usize>,
    target: usize,
    forms: Vec<Form>,
    domain: Vec<DomainCondition>,
    multidegree: Vec<u32>,
}

impl MorphismSpec {
    pub fn new(
        name: impl Into<String>,
        source: Vec<usize>,
        forms: Vec<Form>,
        domain: Vec<DomainCondition>,
    ) -> Result<Self, MorphismError> {
        let name = name.into();
        let bad = |reason: String| MorphismError::Malformed {
            name: name.clone(),
            reason,
        };
        if source.is_empty() {
            return Err(bad("empty source".into()));
        }
        if forms.len() < 2 {
            return Err(bad("need at least two coordinate forms".into()));
        }
        let groups: Vec<usize> = source.iter().map(|n| n + 1).collect();
        let nvars: usize = groups.iter().sum();
        let check = |f: &Form| -> Result<Vec<u32>, MorphismError> {
            if f.nvars() != nvars {
                return Err(bad(format!("form `{f}` has {} variables, expected {nvars}", f.nvars())));
            }
            f.multidegree(&groups)
                .ok_or_else(|| bad(format!("form `{f}` is not multihomogeneous")))
        };
        let mut multidegree: Option<Vec<u32>> = None;
        for f in &forms {
            let d = check(f)?;
            if d.is_empty() {
                continue;
            }
            match &multidegree {
                None => multidegree = Some(d),
                Some(prev) if *prev != d => {
                    return Err(bad("coordinate forms have different degrees".into()))
                }
                _ => {}
            }
        }
        let multidegree = multidegree.ok_or_else(|| bad("every coordinate form is zero".into()))?;
        for c in &domain {
            match c {
                DomainCondition::Vanishes(f) => {
                    check(f)?;
                }
                DomainCondition::NotAllVanish(fs) => {
                    for f in fs {
                        check(f)?;
                    }
                }
            }
        }
        Ok(Self {
            name,
            source,
            target: forms.len() - 1,
            forms,
            domain,
            multidegree,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    pub fn multidegree(&self) -> &[u32] {
        &self.multidegree
    }

    fn flatten<K: HeightField>(&self, src: &[ProjPoint<K>]) -> Result<(K, Vec<K::Elem>), MorphismError> {
        let shape_ok = src.len() == self.source.len()
            && src.iter().zip(&self.source).all(|(p, &n)| p.dimension() == n)
            && src.windows(2).all(|w| w[0].field() == w[1].field());
        if !shape_ok {
            return Err(MorphismError::ShapeMismatch(self.name.clone()));
        }
        let field = src[0].field().clone();
        let x = src.iter().flat_map(|p| p.coords().iter().cloned()).collect();
        Ok((field, x))
    }

    pub fn in_domain<K: HeightField>(&self, src: &[ProjPoint<K>]) -> Result<bool, MorphismError> {
        let (k, x) = self.flatten(src)?;
        Ok(self.domain.iter().all(|c| match c {
            DomainCondition::Vanishes(f) => k.is_zero(&f.eval(&k, &x)),
            DomainCondition::NotAllVanish(fs) => fs.iter().any(|f| !k.is_zero(&f.eval(&k, &x))),
        }))
    }

    pub fn apply<K: HeightField>(&self, src: &[ProjPoint<K>]) -> Result<ProjPoint<K>, MorphismError> {
        if !self.in_domain(src)? {
            return Err(MorphismError::OutsideDomain(self.name.clone()));
        }
        let (k, x) = self.flatten(src)?;
        let image: Vec<K::Elem> = self.forms.iter().map(|f| f.eval(&k, &x)).collect();
        normalize_point(&k, &image).map_err(|_| MorphismError::BaseLocus(self.name.clone()))
    }

    pub fn apply_point<K: HeightField>(&self, p: &ProjPoint<K>) -> Result<ProjPoint<K>, MorphismError> {
        self.apply(std::slice::from_ref(p))
    }
}

/// `(f_1, ..., f_r)` from a common source into a product of projective
/// spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductMorphism {
    name: String,
    components: Vec<MorphismSpec>,
}

impl ProductMorphism {
    pub fn new(name: impl Into<String>, components: Vec<MorphismSpec>) -> Result<Self, MorphismError> {
        let name = name.into();
        if components.is_empty() || components.iter().any(|c| c.source != components[0].source) {
            return Err(MorphismError::Malformed {
                name,
                reason: "components need one common source".into(),
            });
        }
        Ok(Self { name, components })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> &[MorphismSpec] {
        &self.components
    }

    pub fn apply<K: HeightField>(&self, src: &[ProjPoint<K>]) -> Result<MultiProjPoint<K>, MorphismError> {
        let factors = self
            .components
            .iter()
            .map(|c| c.apply(src))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MultiProjPoint::new(factors))
    }
}

/// Anything with a degree-based slope and an image height: lets one fitter
/// serve maps into `P^l` and into products.
pub trait HeightMorphism {
    /// Slope `c1` such that `h(f(P)) <= c1 h(P) + O(1)` on the domain.
    fn slope(&self) -> u32;
    fn image_height<K: HeightField>(&self, src: &[ProjPoint<K>]) -> Result<ExactHeight, MorphismError>;
}

impl HeightMorphism for MorphismSpec {
    fn slope(&self) -> u32 {
        self.multidegree.iter().copied().max().unwrap_or(0)
    }

    fn image_height<K: HeightField>(&self, src: &[ProjPoint<K>]) -> Result<ExactHeight, MorphismError> {
        Ok(weil_height(&self.apply(src)?))
    }
}

impl HeightMorphism for ProductMorphism {
    fn slope(&self) -> u32 {
        self.components.iter().map(HeightMorphism::slope).sum()
    }

    fn image_height<K: HeightField>(&self, src: &[ProjPoint<K>]) -> Result<ExactHeight, MorphismError> {
        Ok(super::multiprojective_height(&self.apply(src)?)?)
    }
}

/// Outcome of fitting `h(f(P)) <= c1 h(P) + c2` on a sample set.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: u32,
    /// Exact `c2`; may be negative when no sample attains the slope.
    pub offset: ExactHeight,
    /// Index of a sample attaining the offset.
    pub attained_at: usize,
    pub all_satisfied: bool,
}

impl LinearFit {
    pub fn c1(&self) -> f64 {
        self.slope as f64
    }

    pub fn c2(&self) -> f64 {
        self.offset.to_f64()
    }
}

fn source_height<K: HeightField>(src: &[ProjPoint<K>]) -> ExactHeight {
    src.iter()
        .map(weil_height)
        .reduce(|a, b| a.plus(&b))
        .expect("nonempty source")
}

fn fit_excesses<K: HeightField, M: HeightMorphism>(
    f: &M,
    samples: &[Vec<ProjPoint<K>>],
) -> Result<Vec<(ExactHeight, ExactHeight)>, MorphismError> {
    if samples.is_empty() {
        return Err(MorphismError::EmptySamples);
    }
    samples
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let image = f.image_height(s).map_err(|e| MorphismError::Sample {
                index,
                source: Box::new(e),
            })?;
            Ok((image, source_height(s).times(f.slope())))
        })
        .collect()
}

fn fit_from(slope: u32, pairs: &[(ExactHeight, ExactHeight)]) -> LinearFit {
    let mut best: Option<(usize, ExactHeight)> = None;
    for (i, (img, scaled)) in pairs.iter().enumerate() {
        let excess = img.minus(scaled);
        if best.as_ref().is_none_or(|(_, b)| excess.cmp_exact(b).is_gt()) {
            best = Some((i, excess));
        }
    }
    let (attained_at, offset) = best.expect("nonempty samples");
    let all_satisfied = pairs
        .iter()
        .all(|(img, scaled)| img.cmp_exact(&scaled.plus(&offset)).is_le());
    LinearFit {
        slope,
        offset,
        attained_at,
        all_satisfied,
    }
}

/// Fits `h(f(P)) <= c1 h(P) + c2` with `c1` the degree slope and `c2` the
/// least offset that covers every sample. Each sample is a point of the
/// (multiprojective) source, one `ProjPoint` per factor.
pub fn fit_linear_height_bound<K: HeightField, M: HeightMorphism>(
    f: &M,
    samples: &[Vec<ProjPoint<K>>],
) -> Result<LinearFit, MorphismError> {
    let pairs = fit_excesses(f, samples)?;
    Ok(fit_from(f.slope(), &pairs))
}

/// Constants for `c1 h_n(P) - d1 <= h_m(P) <= c2 h_n(P) + d2`, where `h_n`
/// is the height in the ambient space of the model and `h_m` the height
/// after embedding through the section.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoSidedFit {
    /// `h_n(P) <= a h_m(P) + b` along the forward map; `c1 = 1/a`,
    /// `d1 = b/a`.
    pub forward: LinearFit,
    /// `h_m(P) <= c2 h_n(P) + d2` along the section.
    pub section: LinearFit,
    pub verdict: bool,
    /// Per-sample `(h_n, h_m)`.
    pub heights: Vec<(ExactHeight, ExactHeight)>,
}

impl TwoSidedFit {
    pub fn c1(&self) -> f64 {
        1.0 / self.forward.slope as f64
    }

    pub fn d1(&self) -> f64 {
        self.forward.c2() / self.forward.slope as f64
    }

    pub fn c2(&self) -> f64 {
        self.section.c1()
    }

    pub fn d2(&self) -> f64 {
        self.section.c2()
    }

    /// `c1` as an exact rational.
    pub fn c1_exact(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.forward.slope))
    }
}

/// Compares the height on an open set `S` of `P^n` with the height after
/// moving to a model through a section `sigma`, checking on every sample
/// that `pi(sigma(P)) = P` exactly.
pub fn verify_two_sided_bound<K: HeightField>(
    forward: &MorphismSpec,
    section: &ProductMorphism,
    samples: &[ProjPoint<K>],
) -> Result<TwoSidedFit, MorphismError> {
    if samples.is_empty() {
        return Err(MorphismError::EmptySamples);
    }
    let mut lifted = Vec::with_capacity(samples.len());
    for (index, p) in samples.iter().enumerate() {
        let q = section.apply(std::slice::from_ref(p)).map_err(|e| MorphismError::Sample {
            index,
            source: Box::new(e),
        })?;
        let back = forward.apply(q.factors()).map_err(|e| MorphismError::Sample {
            index,
            source: Box::new(e),
        })?;
        if back != *p {
            return Err(MorphismError::RoundTripFailed(index));
        }
        lifted.push(q.factors().to_vec());
    }
    let fwd = fit_from(forward.slope(), &fit_excesses(forward, &lifted)?);
    let singles: Vec<Vec<ProjPoint<K>>> = samples.iter().map(|p| vec![p.clone()]).collect();
    let sec = fit_from(section.slope(), &fit_excesses(section, &singles)?);
    let heights = samples
        .iter()
        .zip(&lifted)
        .map(|(p, q)| (weil_height(p), source_height(q)))
        .collect();
    let verdict = fwd.all_satisfied && sec.all_satisfied;
    Ok(TwoSidedFit {
        forward: fwd,
        section: sec,
        verdict,
        heights,
    })
}

pub fn identity(n: usize) -> MorphismSpec {
    let forms = (0..=n).map(|i| Form::var(n + 1, i)).collect();
    MorphismSpec::new(format!("identity P^{n}"), vec![n], forms, vec![]).expect("well formed")
}

/// The `d`-uple embedding `P^1 -> P^d`, `(x:y) -> (x^d : x^{d-1} y : ... : y^d)`.
pub fn veronese(d: u32) -> MorphismSpec {
    let forms = (0..=d)
        .map(|i| Form::from_i64_terms(2, &[(1, &[d - i, i])]).expect("two variables"))
        .collect();
    MorphismSpec::new(format!("veronese {d}"), vec![1], forms, vec![]).expect("well formed")
}

/// `P^1 x P^1 -> P^3`, `((x0:x1),(y0:y1)) -> (x0 y0 : x0 y1 : x1 y0 : x1 y1)`.
pub fn segre() -> MorphismSpec {
    let forms = [[1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1]]
        .iter()
        .map(|e| Form::from_i64_terms(4, &[(1, e)]).expect("four variables"))
        .collect();
    MorphismSpec::new("segre P1xP1", vec![1, 1], forms, vec![]).expect("well formed")
}

/// The blow-up of `P^2` at `(0:0:1)` as the incidence variety
/// `{((x:y:z),(u:v)) : xv = yu}` with its projection and the section over
/// the complement of the centre.
#[derive(Clone, Debug)]
pub struct BlowupPair {
    pub projection: MorphismSpec,
    pub section: ProductMorphism,
}

pub fn blowup_of_plane() -> BlowupPair {
    let incidence = Form::from_i64_terms(5, &[(1, &[1, 0, 0, 0, 1]), (-1, &[0, 1, 0, 1, 0])])
        .expect("five variables");
    let projection = MorphismSpec::new(
        "blow-up projection",
        vec![2, 1],
        (0..3).map(|i| Form::var(5, i)).collect(),
        vec![DomainCondition::Vanishes(incidence)],
    )
    .expect("well formed");
    let off_centre = DomainCondition::NotAllVanish(vec![Form::var(3, 0), Form::var(3, 1)]);
    let keep = MorphismSpec::new(
        "blow-up section (plane)",
        vec![2],
        (0..3).map(|i| Form::var(3, i)).collect(),
        vec![off_centre.clone()],
    )
    .expect("well formed");
    let line = MorphismSpec::new(
        "blow-up section (line)",
        vec![2],
        (0..2).map(|i| Form::var(3, i)).collect(),
        vec![off_centre],
    )
    .expect("well formed");
    let section = ProductMorphism::new("blow-up section", vec![keep, line]).expect("common source");
    BlowupPair { projection, section }
}
