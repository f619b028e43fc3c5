//! Desk-scale experiments on heights of elliptic families: fiber scans,
//! calibration of the doubling constant, canonical-height certificates,
//! morphism height fits and divisor bookkeeping, with seeded sampling and
//! deterministic CSV/JSON reports.

pub mod calibrate;
pub mod cli;
pub mod config;
pub mod divisor;
pub mod expr;
pub mod family;
pub mod field;
pub mod nt;
pub mod report;
pub mod s5;
pub mod sampling;
pub mod scan;

use height_core::elliptic::EllipticError;
use height_core::neron_tate::NeronTateError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("config: {0}")]
    Config(String),
    #[error("expression: {0}")]
    Expr(#[from] expr::ExprError),
    #[error("family: {0}")]
    Family(EllipticError),
    #[error("no valid fibers found after {0} candidates")]
    NoFibers(usize),
    #[error("scan produced no samples")]
    EmptyScan,
    #[error("calibration: {0}")]
    Calibration(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("resource guard: {0}")]
    ResourceGuard(String),
    #[error("computation: {0}")]
    Compute(String),
}

impl LabError {
    /// 2 for usage, config and setup errors, 3 for the resource guard.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::ResourceGuard(_) => 3,
            _ => 2,
        }
    }
}

impl From<EllipticError> for LabError {
    fn from(e: EllipticError) -> Self {
        match e {
            EllipticError::ResourceGuard { .. } => LabError::ResourceGuard(e.to_string()),
            other => LabError::Compute(other.to_string()),
        }
    }
}

impl From<NeronTateError> for LabError {
    fn from(e: NeronTateError) -> Self {
        match e {
            NeronTateError::Elliptic(inner) => inner.into(),
            NeronTateError::Calibration => LabError::Calibration(e.to_string()),
            NeronTateError::Depth(_) => LabError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}
