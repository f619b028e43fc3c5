//! Divisor bookkeeping on registered forms: the effective split and the
//! denominator ideal.

use std::sync::Arc;

use height_core::arith::Field;
use height_core::divisors::{Coprimality, FormRegistry, FormalDivisor};
use height_core::heights::Form;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::config::DivisorSpec;
use crate::LabError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RegistryEntry {
    pub id: String,
    pub form: String,
    pub degree: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DivisorReport {
    pub ambient: usize,
    pub coprimality: String,
    pub registry: Vec<RegistryEntry>,
    pub divisor: String,
    pub degree: i64,
    pub effective: bool,
    pub positive_part: String,
    pub negative_part: String,
    pub denominator_support: String,
    pub denominator_generator: String,
    /// On `P^1`: the function on the chart `y = 1` and its monic denominator.
    pub chart_function: Option<String>,
    pub chart_denominator: Option<String>,
}

pub fn build_registry<C: Field>(consts: &C, spec: &DivisorSpec) -> Result<Arc<FormRegistry<C>>, LabError> {
    let mut r = FormRegistry::new(consts.clone(), spec.ambient).map_err(|e| LabError::Config(e.to_string()))?;
    let nvars = spec.ambient + 1;
    for f in &spec.forms {
        let form = Form::new(nvars, f.terms.iter().map(|(c, e)| (BigInt::from(*c), e.clone())))
            .map_err(|e| LabError::Config(format!("form `{}`: {e}", f.id)))?;
        r.register(f.id.clone(), form).map_err(|e| LabError::Config(e.to_string()))?;
    }
    Ok(Arc::new(r))
}

pub fn run_divisor<C: Field>(consts: &C, spec: &DivisorSpec) -> Result<DivisorReport, LabError> {
    let reg = build_registry(consts, spec)?;
    let d = FormalDivisor::new(&reg, spec.divisor.iter().map(|(k, v)| (k.clone(), *v)))
        .map_err(|e| LabError::Config(e.to_string()))?;
    let (c, e) = d.split_effective();
    let on_line = spec.ambient == 1;
    Ok(DivisorReport {
        ambient: spec.ambient,
        coprimality: match reg.coprimality() {
            Coprimality::Certified => "certified".into(),
            Coprimality::Asserted => "asserted".into(),
        },
        registry: reg
            .forms()
            .iter()
            .map(|f| RegistryEntry {
                id: f.id.clone(),
                form: f.form.to_string(),
                degree: f.degree,
            })
            .collect(),
        divisor: d.to_string(),
        degree: d.degree(),
        effective: d.is_effective(),
        positive_part: c.to_string(),
        negative_part: e.to_string(),
        denominator_support: d.denominator_support().to_string(),
        denominator_generator: d.denominator_generator().to_string(),
        chart_function: on_line.then(|| d.chart_function().format_in("x")),
        chart_denominator: on_line.then(|| d.chart_denominator().format_in("x")),
    })
}
