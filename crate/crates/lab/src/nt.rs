//! Canonical-height certificates: convergence tables with the telescoping
//! bound, and the height inequality against `h_L`.

use height_core::elliptic::FiberPoint;
use height_core::neron_tate::{convergence_table, height_inequality_check, ConvergenceTable};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibrate::CalibrationFixture;
use crate::config::ExperimentConfig;
use crate::family::build_family;
use crate::field::LabField;
use crate::scan::{sampled_points, Header};
use crate::LabError;

/// Relative tolerance for float comparisons against bounds.
pub const REL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TelescopingCertificate {
    pub s: String,
    pub n: i64,
    pub point: String,
    pub lambda: f64,
    pub depth: u32,
    /// `q_l = h([2^l] P) / 4^l` for `0 <= l <= depth`.
    pub q: Vec<f64>,
    /// Exact `q_l` over `F_p(u)`.
    pub q_exact: Option<Vec<String>>,
    /// `c_cal lambda / 4^m` for `0 <= m <= depth`.
    pub bound: Vec<f64>,
    /// `(m, l)` with `1 <= m <= l` and `|q_l - q_m|` above the bound.
    pub violations: Vec<(u32, u32)>,
    pub verdict: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HeightInequalityCertificate {
    pub s: String,
    pub n: i64,
    pub point: String,
    pub lambda: f64,
    pub depth: u32,
    pub q: Vec<f64>,
    pub estimate: f64,
    pub estimate_exact: Option<String>,
    pub h_l: String,
    pub residual: f64,
    /// `c_cal lambda + c_cal lambda / 4^m`.
    pub bound: f64,
    pub verdict: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CertificateReport<T> {
    pub header: Header,
    pub calibration_hash: String,
    pub c_cal: f64,
    pub depth: u32,
    pub count: usize,
    pub verdicts_true: usize,
    pub all_true: bool,
    pub certificates: Vec<T>,
}

fn q_exact<K: LabField>(t: &ConvergenceTable<K>) -> Option<Vec<String>> {
    t.rows.iter().map(|r| r.q_exact.as_ref().map(|q| q.to_string())).collect()
}

fn finish<T>(
    header: Header,
    fx: &CalibrationFixture,
    depth: u32,
    certificates: Vec<T>,
    verdict: impl Fn(&T) -> bool,
) -> CertificateReport<T> {
    let verdicts_true = certificates.iter().filter(|c| verdict(c)).count();
    CertificateReport {
        header,
        calibration_hash: fx.config_hash.clone(),
        c_cal: fx.c_cal,
        depth,
        count: certificates.len(),
        all_true: verdicts_true == certificates.len(),
        verdicts_true,
        certificates,
    }
}

pub fn telescoping_certificate<K: LabField>(
    n: i64,
    p: &FiberPoint<K>,
    l_max: u32,
    c_cal: f64,
) -> Result<TelescopingCertificate, LabError> {
    let t = convergence_table(p, l_max)?;
    let violations = t.telescoping_violations(c_cal, 1, REL_TOL);
    Ok(TelescopingCertificate {
        s: p.fiber().field().format(p.fiber().s()),
        n,
        point: p.to_string(),
        lambda: t.lambda,
        depth: l_max,
        q: t.rows.iter().map(|r| r.q).collect(),
        q_exact: q_exact(&t),
        bound: (0..=l_max).map(|m| c_cal * t.lambda / 4f64.powi(m as i32)).collect(),
        verdict: violations.is_empty(),
        violations,
    })
}

pub fn height_inequality_certificate<K: LabField>(
    n: i64,
    p: &FiberPoint<K>,
    m: u32,
    c_cal: f64,
) -> Result<HeightInequalityCertificate, LabError> {
    let v = height_inequality_check(p, m, c_cal)?;
    let t = &v.estimate.table;
    Ok(HeightInequalityCertificate {
        s: p.fiber().field().format(p.fiber().s()),
        n,
        point: p.to_string(),
        lambda: t.lambda,
        depth: m,
        q: t.rows.iter().map(|r| r.q).collect(),
        estimate: v.estimate.estimate,
        estimate_exact: v.estimate.estimate_exact.as_ref().map(|q| q.to_string()),
        h_l: K::height_cell(&v.total_height),
        residual: v.residual,
        bound: v.bound,
        verdict: v.holds,
    })
}

pub fn run_telescoping<K: LabField>(
    field: &K,
    cfg: &ExperimentConfig,
    fx: &CalibrationFixture,
) -> Result<CertificateReport<TelescopingCertificate>, LabError> {
    let family = build_family(field, cfg.family()?)?;
    let points = sampled_points(&family, cfg)?;
    let l_max = cfg.depth.l_max;
    let certs: Vec<_> = points
        .par_iter()
        .map(|(n, p)| telescoping_certificate(*n, p, l_max, fx.c_cal))
        .collect::<Result<_, _>>()?;
    Ok(finish(Header::new(field, cfg)?, fx, l_max, certs, |c| c.verdict))
}

pub fn run_height_inequality<K: LabField>(
    field: &K,
    cfg: &ExperimentConfig,
    fx: &CalibrationFixture,
) -> Result<CertificateReport<HeightInequalityCertificate>, LabError> {
    let family = build_family(field, cfg.family()?)?;
    let points = sampled_points(&family, cfg)?;
    let m = cfg.depth.m;
    let certs: Vec<_> = points
        .par_iter()
        .map(|(n, p)| height_inequality_certificate(*n, p, m, fx.c_cal))
        .collect::<Result<_, _>>()?;
    Ok(finish(Header::new(field, cfg)?, fx, m, certs, |c| c.verdict))
}
