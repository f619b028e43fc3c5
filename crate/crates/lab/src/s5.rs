//! Height comparisons along morphisms: one-sided fits `h(f(P)) <= c1 h(P) + c2`
//! and the two-sided bound through a model and its section.

use height_core::heights::{
    blowup_of_plane, fit_linear_height_bound, identity, normalize_point, segre, veronese, verify_two_sided_bound,
    DomainCondition, ExactHeight, Form, MorphismError, MorphismSpec, ProjPoint,
};
use num_bigint::BigInt;
use num_traits::One;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, MorphismConfig, TermSpec};
use crate::field::LabField;
use crate::sampling::{candidate_rng, sample_coords, PRNG_ID};
use crate::LabError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct S5Entry {
    pub name: String,
    pub kind: String,
    pub samples: usize,
    /// Sample indices outside the domain or on the base locus.
    pub base_locus_hits: Vec<usize>,
    /// Degree slope of the forward map.
    pub slope: u32,
    /// Exact offset of the forward fit.
    pub offset: String,
    pub c1: f64,
    pub c2: f64,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    pub round_trip_ok: Option<bool>,
    pub verdict: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct S5Report {
    pub field: String,
    pub height_units: String,
    pub config_hash: String,
    pub seed: u64,
    pub prng: String,
    pub coord_bound: u64,
    pub entries: Vec<S5Entry>,
    pub all_true: bool,
}

/// `0` for a zero offset, `log(r)` or an integer degree otherwise.
pub fn exact_cell(h: &ExactHeight) -> String {
    match h {
        ExactHeight::Degree(d) => d.to_string(),
        ExactHeight::Multiplicative(r) if r.is_one() => "0".to_string(),
        ExactHeight::Multiplicative(r) => format!("log({r})"),
    }
}

fn sample_point<K: LabField>(field: &K, rng: &mut ChaCha20Rng, dim: usize, bound: u64, avoid_centre: bool) -> ProjPoint<K> {
    loop {
        let cs = sample_coords(field, rng, dim + 1, bound);
        if avoid_centre && cs[..2].iter().all(|c| field.is_zero(c)) {
            continue;
        }
        if let Ok(p) = normalize_point(field, &cs) {
            return p;
        }
    }
}

fn sample_source<K: LabField>(field: &K, seed: u64, stream: u64, source: &[usize], count: usize, bound: u64) -> Vec<Vec<ProjPoint<K>>> {
    let mut rng = candidate_rng(seed, stream);
    (0..count)
        .map(|_| source.iter().map(|&d| sample_point(field, &mut rng, d, bound, false)).collect())
        .collect()
}

fn is_domain_miss(e: &MorphismError) -> bool {
    matches!(e, MorphismError::BaseLocus(_) | MorphismError::OutsideDomain(_))
}

fn empty_entry(name: &str, kind: &str, samples: usize) -> S5Entry {
    S5Entry {
        name: name.to_string(),
        kind: kind.to_string(),
        samples,
        base_locus_hits: Vec::new(),
        slope: 0,
        offset: String::new(),
        c1: 0.0,
        c2: 0.0,
        d1: None,
        d2: None,
        round_trip_ok: None,
        verdict: false,
        error: None,
    }
}

pub fn one_sided_entry<K: LabField>(f: &MorphismSpec, samples: &[Vec<ProjPoint<K>>]) -> S5Entry {
    let mut entry = empty_entry(f.name(), "one-sided", samples.len());
    let mut kept = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        match f.apply(s) {
            Ok(_) => kept.push(s.clone()),
            Err(e) if is_domain_miss(&e) => entry.base_locus_hits.push(i),
            Err(e) => {
                entry.error = Some(format!("sample {i}: {e}"));
                return entry;
            }
        }
    }
    match fit_linear_height_bound(f, &kept) {
        Ok(fit) => {
            entry.slope = fit.slope;
            entry.offset = exact_cell(&fit.offset);
            entry.c1 = fit.c1();
            entry.c2 = fit.c2();
            entry.verdict = fit.all_satisfied;
        }
        Err(e) => entry.error = Some(e.to_string()),
    }
    entry
}

pub fn blowup_entry<K: LabField>(field: &K, seed: u64, stream: u64, count: usize, bound: u64) -> S5Entry {
    let b = blowup_of_plane();
    let mut rng = candidate_rng(seed, stream);
    let samples: Vec<ProjPoint<K>> = (0..count).map(|_| sample_point(field, &mut rng, 2, bound, true)).collect();
    let mut entry = empty_entry("blow-up of P^2 at (0:0:1)", "two-sided", count);
    match verify_two_sided_bound(&b.projection, &b.section, &samples) {
        Ok(fit) => {
            entry.slope = fit.forward.slope;
            entry.offset = exact_cell(&fit.forward.offset);
            entry.c1 = fit.c1();
            entry.d1 = Some(fit.d1());
            entry.c2 = fit.c2();
            entry.d2 = Some(fit.d2());
            entry.round_trip_ok = Some(true);
            entry.verdict = fit.verdict && [fit.c1(), fit.d1(), fit.c2(), fit.d2()].iter().all(|x| x.is_finite());
        }
        Err(MorphismError::RoundTripFailed(i)) => {
            entry.round_trip_ok = Some(false);
            entry.error = Some(format!("round trip fails at sample {i}"));
        }
        Err(e) => entry.error = Some(e.to_string()),
    }
    entry
}

fn form_from_terms(nvars: usize, terms: &[TermSpec], name: &str) -> Result<Form, LabError> {
    Form::new(nvars, terms.iter().map(|(c, e)| (BigInt::from(*c), e.clone())))
        .map_err(|e| LabError::Config(format!("morphism `{name}`: {e}")))
}

pub fn morphism_from_config(m: &MorphismConfig) -> Result<MorphismSpec, LabError> {
    let nvars: usize = m.source.iter().map(|d| d + 1).sum();
    let forms = m
        .forms
        .iter()
        .map(|t| form_from_terms(nvars, t, &m.name))
        .collect::<Result<Vec<_>, _>>()?;
    let mut domain = Vec::new();
    for t in &m.vanishes {
        domain.push(DomainCondition::Vanishes(form_from_terms(nvars, t, &m.name)?));
    }
    for set in &m.not_all_vanish {
        let fs = set
            .iter()
            .map(|t| form_from_terms(nvars, t, &m.name))
            .collect::<Result<Vec<_>, _>>()?;
        domain.push(DomainCondition::NotAllVanish(fs));
    }
    MorphismSpec::new(m.name.clone(), m.source.clone(), forms, domain).map_err(|e| LabError::Config(e.to_string()))
}

pub fn run_s5<K: LabField>(field: &K, cfg: &ExperimentConfig) -> Result<S5Report, LabError> {
    let spec = &cfg.s5;
    let (seed, n, bound) = (cfg.sampling.seed, spec.samples, spec.coord_bound);
    let mut maps: Vec<MorphismSpec> = Vec::new();
    if spec.identity {
        maps.push(identity(1));
    }
    for &d in &spec.veronese {
        if d == 0 {
            return Err(LabError::Config("veronese degree must be positive".into()));
        }
        maps.push(veronese(d));
    }
    if spec.segre {
        maps.push(segre());
    }
    for m in &spec.morphisms {
        maps.push(morphism_from_config(m)?);
    }
    let mut entries: Vec<S5Entry> = maps
        .iter()
        .enumerate()
        .map(|(i, f)| one_sided_entry(f, &sample_source(field, seed, i as u64, f.source(), n, bound)))
        .collect();
    if spec.blowup {
        entries.push(blowup_entry(field, seed, maps.len() as u64, n, bound));
    }
    Ok(S5Report {
        field: field.label(),
        height_units: field.height_convention().to_string(),
        config_hash: cfg.hash(),
        seed,
        prng: PRNG_ID.to_string(),
        coord_bound: bound,
        all_true: entries.iter().all(|e| e.verdict),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use height_core::arith::{Field, FunctionField, Rationals};

    fn small(field: &str) -> ExperimentConfig {
        let mut c = ExperimentConfig::bare(field.parse().unwrap());
        c.s5.samples = 60;
        c
    }

    #[test]
    fn builtins_over_q() {
        let r = run_s5(&Rationals, &small("Q")).unwrap();
        assert!(r.all_true);
        let by_name = |n: &str| r.entries.iter().find(|e| e.name.contains(n)).unwrap();
        assert_eq!((by_name("identity").slope, by_name("identity").offset.as_str()), (1, "0"));
        let v2 = &r.entries[1];
        assert_eq!((v2.slope, v2.offset.as_str(), v2.c2), (2, "0", 0.0));
        let b = by_name("blow-up");
        assert_eq!(b.round_trip_ok, Some(true));
        assert!(b.d1.unwrap().is_finite() && b.d2.unwrap().is_finite());
    }

    #[test]
    fn builtins_over_f5u() {
        let k = FunctionField::over_prime(5).unwrap();
        let mut c = small("Fp(u):5");
        c.s5.coord_bound = 3;
        let r = run_s5(&k, &c).unwrap();
        assert!(r.all_true, "{:?}", r.entries);
    }

    #[test]
    fn base_locus_hits_are_reported() {
        // (x^2 : x y) vanishes entirely at (0 : 1).
        let m = MorphismConfig {
            name: "degenerate".into(),
            source: vec![1],
            forms: vec![vec![(1, vec![2, 0])], vec![(1, vec![1, 1])]],
            vanishes: vec![],
            not_all_vanish: vec![],
        };
        let f = morphism_from_config(&m).unwrap();
        let samples: Vec<Vec<ProjPoint<Rationals>>> = [[0i64, 1], [1, 1], [2, 3]]
            .iter()
            .map(|c| vec![normalize_point(&Rationals, &c.map(|x| Rationals.from_i64(x))).unwrap()])
            .collect();
        let e = one_sided_entry(&f, &samples);
        assert_eq!(e.base_locus_hits, vec![0]);
        assert!(e.verdict);
    }

    #[test]
    fn malformed_config_morphisms_are_config_errors() {
        let m = MorphismConfig {
            name: "mixed".into(),
            source: vec![1],
            forms: vec![vec![(1, vec![2, 0])], vec![(1, vec![1, 0])]],
            vanishes: vec![],
            not_all_vanish: vec![],
        };
        assert!(matches!(morphism_from_config(&m), Err(LabError::Config(_))));
    }
}
