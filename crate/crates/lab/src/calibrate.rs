//! Freezing the empirical doubling constant into a fixtures file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, FamilySpec};
use crate::field::LabField;
use crate::scan::{SampleRef, ScanReport};
use crate::LabError;

pub const SAFETY_FACTOR: f64 = 1.5;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CalibrationFixture {
    pub config_hash: String,
    pub field: String,
    pub family: FamilySpec,
    pub seed: u64,
    pub fibers: usize,
    pub points: usize,
    pub empirical_c: f64,
    pub attained_at: SampleRef,
    pub safety_factor: f64,
    pub c_cal: f64,
}

pub fn calibrate(report: &ScanReport) -> Result<CalibrationFixture, LabError> {
    if report.rows.is_empty() {
        return Err(LabError::EmptyScan);
    }
    let s = &report.summary;
    Ok(CalibrationFixture {
        config_hash: s.header.config_hash.clone(),
        field: s.header.field.clone(),
        family: s.header.family.clone(),
        seed: s.header.seed,
        fibers: s.fibers,
        points: s.points,
        empirical_c: s.empirical_c,
        attained_at: s.attained_at.clone(),
        safety_factor: SAFETY_FACTOR,
        c_cal: SAFETY_FACTOR * s.empirical_c,
    })
}

/// Reads a fixture and checks it was measured on this field and family.
pub fn load_fixture<K: LabField>(field: &K, cfg: &ExperimentConfig, path: &Path) -> Result<CalibrationFixture, LabError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LabError::Calibration(format!("{}: {e}; run `calibrate` first", path.display())))?;
    let fx: CalibrationFixture =
        serde_json::from_str(&text).map_err(|e| LabError::Calibration(format!("{}: {e}", path.display())))?;
    if fx.field != field.label() {
        return Err(LabError::Calibration(format!("fixture is for {}, not {}", fx.field, field.label())));
    }
    if &fx.family != cfg.family()? {
        return Err(LabError::Calibration("fixture was measured on a different family".into()));
    }
    if !(fx.c_cal > 0.0 && fx.c_cal.is_finite()) {
        return Err(LabError::Calibration(format!("c_cal = {} is not positive", fx.c_cal)));
    }
    Ok(fx)
}
