//! Fiber scans: the doubling defect `delta(P) = |h_L([2]P) - 4 h_L(P)|`
//! against `lambda = max(1, h(s))`.

use std::sync::Arc;

use height_core::elliptic::{Fiber, FiberPoint, WeierstrassFamily};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, FamilySpec};
use crate::family::build_family;
use crate::field::LabField;
use crate::sampling::{sample_fibers, POINT_SCHEME, PRNG_ID};
use crate::LabError;

/// One sampled point. Every field is a function of `(family, s, n)`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ScanRow {
    pub s: String,
    pub h_s: String,
    pub lambda: f64,
    pub n: i64,
    pub point: String,
    pub h_l_point: String,
    pub h_l_double: String,
    /// Exact: an integer over `F_p(u)`.
    pub delta: String,
    pub delta_value: f64,
    pub ratio: f64,
}

/// Conventions every report states up front.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Header {
    pub field: String,
    pub height_units: String,
    pub family: FamilySpec,
    pub config_hash: String,
    pub seed: u64,
    pub prng: String,
    pub point_scheme: String,
    pub h_l: String,
    pub lambda: String,
}

impl Header {
    pub fn new<K: LabField>(field: &K, cfg: &ExperimentConfig) -> Result<Self, LabError> {
        Ok(Self {
            field: field.label(),
            height_units: field.height_convention().to_string(),
            family: cfg.family()?.clone(),
            config_hash: cfg.hash(),
            seed: cfg.sampling.seed,
            prng: PRNG_ID.to_string(),
            point_scheme: POINT_SCHEME.to_string(),
            h_l: "h(P in P^2) + h(s in P^1)".to_string(),
            lambda: "max(1, h(s))".to_string(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SampleRef {
    pub s: String,
    pub n: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ScanSummary {
    pub header: Header,
    pub fibers: usize,
    pub points: usize,
    pub empirical_c: f64,
    pub attained_at: SampleRef,
    pub all_heights_integer: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

/// `(h(s), delta)` pairs for external plotting.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PlotPoint {
    pub h_s: f64,
    pub delta: f64,
}

impl ScanReport {
    pub fn plot_data(&self) -> Vec<PlotPoint> {
        self.rows
            .iter()
            .map(|r| PlotPoint {
                h_s: r.h_s.parse().expect("numeric cell"),
                delta: r.delta_value,
            })
            .collect()
    }
}

pub fn scan_point<K: LabField>(
    family: &WeierstrassFamily<K>,
    fiber: &Arc<Fiber<K>>,
    n: i64,
) -> Result<ScanRow, LabError> {
    let field = family.field();
    let p = family.section_point(fiber)?.mul_n(n)?;
    let d = p.double()?;
    let (h1, h2) = (p.total_height(), d.total_height());
    let delta = h2.minus(&h1.times(4)).abs();
    let lambda = fiber.lambda();
    let delta_value = delta.to_f64();
    Ok(ScanRow {
        s: field.format(fiber.s()),
        h_s: K::height_cell(&fiber.base_height()),
        lambda,
        n,
        point: p.to_string(),
        h_l_point: K::height_cell(&h1),
        h_l_double: K::height_cell(&h2),
        delta: K::height_cell(&delta),
        delta_value,
        ratio: delta_value / lambda,
    })
}

pub fn scan_fiber<K: LabField>(
    family: &WeierstrassFamily<K>,
    fiber: &Arc<Fiber<K>>,
    n_max: i64,
) -> Result<Vec<ScanRow>, LabError> {
    (1..=n_max).map(|n| scan_point(family, fiber, n)).collect()
}

/// Largest ratio and the first row attaining it.
pub fn empirical_c(rows: &[ScanRow]) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (i, r) in rows.iter().enumerate() {
        if best.is_none_or(|(b, _)| r.ratio > b) {
            best = Some((r.ratio, i));
        }
    }
    best
}

pub fn summarize<K: LabField>(
    field: &K,
    cfg: &ExperimentConfig,
    fibers: usize,
    rows: Vec<ScanRow>,
) -> Result<ScanReport, LabError> {
    let (c, at) = empirical_c(&rows).ok_or(LabError::EmptyScan)?;
    let all_heights_integer = rows.iter().all(|r| {
        [&r.h_s, &r.h_l_point, &r.h_l_double, &r.delta]
            .iter()
            .all(|c| c.parse::<i64>().is_ok())
    });
    Ok(ScanReport {
        summary: ScanSummary {
            header: Header::new(field, cfg)?,
            fibers,
            points: rows.len(),
            empirical_c: c,
            attained_at: SampleRef {
                s: rows[at].s.clone(),
                n: rows[at].n,
            },
            all_heights_integer,
        },
        rows,
    })
}

pub fn scan_family<K: LabField>(field: &K, cfg: &ExperimentConfig) -> Result<ScanReport, LabError> {
    let family = build_family(field, cfg.family()?)?;
    if family.section().is_none() {
        return Err(LabError::Config("scans need a section in [family]".into()));
    }
    let fibers = sample_fibers(&family, &cfg.sampling)?;
    let per_fiber: Vec<Vec<ScanRow>> = fibers
        .par_iter()
        .map(|f| scan_fiber(&family, f, cfg.sampling.n_max))
        .collect::<Result<_, _>>()?;
    summarize(field, cfg, fibers.len(), per_fiber.into_iter().flatten().collect())
}

/// Points `[n] section` on the sampled fibers, in report order.
pub fn sampled_points<K: LabField>(
    family: &WeierstrassFamily<K>,
    cfg: &ExperimentConfig,
) -> Result<Vec<(i64, FiberPoint<K>)>, LabError> {
    let mut out = Vec::new();
    for f in sample_fibers(family, &cfg.sampling)? {
        let p = family.section_point(&f)?;
        for n in 1..=cfg.sampling.n_max {
            out.push((n, p.mul_n(n)?));
        }
    }
    Ok(out)
}
