//! Néron-Tate heights on fibers by repeated doubling, with the telescoping
//! error bound `c lambda / 4^m`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::elliptic::{EllipticError, FiberPoint};
use crate::heights::{ExactHeight, HeightField};

pub const MAX_DEPTH: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NeronTateError {
    #[error("depth {0} outside 1..={MAX_DEPTH}")]
    Depth(u32),
    #[error("calibration constant must be positive and finite")]
    Calibration,
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

/// One row `q_l = h([2^l] P) / 4^l`.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub level: u32,
    /// Fiber height of `[2^l] P` in `P^2`.
    pub height: ExactHeight,
    pub q: f64,
    /// `deg / 4^l` when heights are integers (function fields).
    pub q_exact: Option<BigRational>,
}

#[derive(Clone, Debug)]
pub struct ConvergenceTable<K: HeightField> {
    pub point: FiberPoint<K>,
    pub rows: Vec<TableRow>,
    pub lambda: f64,
}

fn pow4(l: u32) -> f64 {
    4f64.powi(l as i32)
}

pub fn convergence_table<K: HeightField>(p: &FiberPoint<K>, l_max: u32) -> Result<ConvergenceTable<K>, NeronTateError> {
    if !(1..=MAX_DEPTH).contains(&l_max) {
        return Err(NeronTateError::Depth(l_max));
    }
    let mut rows = Vec::with_capacity(l_max as usize + 1);
    let mut cur = p.clone();
    let mut seen: Vec<FiberPoint<K>> = Vec::new();
    for level in 0..=l_max {
        if level > 0 {
            // Torsion cycles are cheap to follow: reuse an earlier double.
            let next = seen
                .iter()
                .position(|q| *q == cur)
                .and_then(|i| seen.get(i + 1).cloned());
            cur = match next {
                Some(q) => q,
                None => cur.double()?,
            };
        }
        let height = cur.fiber_height();
        let q_exact = height
            .as_degree()
            .map(|d| BigRational::new(BigInt::from(d), BigInt::from(4).pow(level)));
        rows.push(TableRow {
            level,
            q: height.to_f64() / pow4(level),
            height,
            q_exact,
        });
        seen.push(cur.clone());
    }
    Ok(ConvergenceTable {
        lambda: p.fiber().lambda(),
        point: p.clone(),
        rows,
    })
}

impl<K: HeightField> ConvergenceTable<K> {
    pub fn depth(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    pub fn q(&self, l: u32) -> f64 {
        self.rows[l as usize].q
    }

    /// `|q_l - q_m|`, exactly when the table has exact rows.
    pub fn gap(&self, l: u32, m: u32) -> f64 {
        let (a, b) = (&self.rows[l as usize], &self.rows[m as usize]);
        match (&a.q_exact, &b.q_exact) {
            (Some(x), Some(y)) => rational_to_f64(&(x - y).abs()),
            _ => (a.q - b.q).abs(),
        }
    }

    /// Pairs `(m, l)` with `m <= l` violating `|q_l - q_m| <= c lambda / 4^m`
    /// beyond relative tolerance `rel_tol`. Levels below `from` are skipped.
    pub fn telescoping_violations(&self, c_cal: f64, from: u32, rel_tol: f64) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for m in from..=self.depth() {
            let bound = c_cal * self.lambda / pow4(m);
            for l in m..=self.depth() {
                if self.gap(l, m) > bound * (1.0 + rel_tol) {
                    out.push((m, l));
                }
            }
        }
        out
    }

    /// Largest `|h([2]Q) - 4 h(Q)| / lambda` along the doubling chain.
    pub fn max_step_ratio(&self) -> f64 {
        self.rows
            .windows(2)
            .map(|w| w[1].height.minus(&w[0].height.times(4)).abs().to_f64() / self.lambda)
            .fold(0.0, f64::max)
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("finite rational")
}

#[derive(Clone, Debug)]
pub struct NTEstimate<K: HeightField> {
    pub estimate: f64,
    pub estimate_exact: Option<BigRational>,
    pub depth: u32,
    pub error_bound: f64,
    pub table: ConvergenceTable<K>,
}

/// `q_m` as an estimate of the canonical height, with error bound
/// `c_cal lambda / 4^m` conditional on `c_cal` bounding the doubling defect.
pub fn neron_tate<K: HeightField>(p: &FiberPoint<K>, m: u32, c_cal: f64) -> Result<NTEstimate<K>, NeronTateError> {
    if !(c_cal > 0.0 && c_cal.is_finite()) {
        return Err(NeronTateError::Calibration);
    }
    let table = convergence_table(p, m)?;
    let last = &table.rows[m as usize];
    Ok(NTEstimate {
        estimate: last.q,
        estimate_exact: last.q_exact.clone(),
        depth: m,
        error_bound: c_cal * table.lambda / pow4(m),
        table,
    })
}

#[derive(Clone, Debug)]
pub struct HeightInequalityVerdict<K: HeightField> {
    pub estimate: NTEstimate<K>,
    /// `h_L(P) = h(P) + h(s)`.
    pub total_height: ExactHeight,
    pub residual: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Checks `|q_m - h_L(P)| <= c_cal lambda + c_cal lambda / 4^m`.
pub fn height_inequality_check<K: HeightField>(
    p: &FiberPoint<K>,
    m: u32,
    c_cal: f64,
) -> Result<HeightInequalityVerdict<K>, NeronTateError> {
    let estimate = neron_tate(p, m, c_cal)?;
    let total_height = p.total_height();
    let residual = match (&estimate.estimate_exact, total_height.as_degree()) {
        (Some(q), Some(d)) => rational_to_f64(&(q - BigRational::from_integer(d.into())).abs()),
        _ => (estimate.estimate - total_height.to_f64()).abs(),
    };
    let bound = c_cal * estimate.table.lambda + estimate.error_bound;
    Ok(HeightInequalityVerdict {
        holds: residual <= bound,
        residual,
        bound,
        total_height,
        estimate,
    })
}
