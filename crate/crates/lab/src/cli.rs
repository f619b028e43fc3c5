//! Command-line front end.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use height_core::arith::{FunctionField, Rationals};
use height_core::heights::{normalize_point, weil_height};
use serde::Serialize;

use crate::calibrate::{calibrate, load_fixture};
use crate::config::ExperimentConfig;
use crate::divisor::run_divisor;
use crate::family::build_family;
use crate::field::{FieldChoice, LabField};
use crate::nt::{run_height_inequality, run_telescoping, CertificateReport};
use crate::report::{write_csv, write_json};
use crate::s5::run_s5;
use crate::scan::{scan_family, scan_point};
use crate::LabError;

#[derive(Debug, Parser)]
#[command(name = "height-lab", version, about = "Exact height experiments on elliptic families")]
pub struct Cli {
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides `sampling.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides `output.dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `Q` or `Fp(u):p`; overrides the config.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Calibration fixtures; defaults to the config's `output.calibration`.
    #[arg(long, global = true)]
    pub calibration: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Height of a projective point, or the scan row of `[n] section` on a fiber.
    Height {
        /// Comma-separated coordinates.
        #[arg(long, conflicts_with = "s")]
        point: Option<String>,
        /// Fiber parameter.
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: i64,
    },
    /// Doubling defects over sampled fibers.
    Scan {
        #[arg(long)]
        plot_data: bool,
    },
    /// Scan and freeze `c_cal = 1.5 * empirical c`.
    Calibrate {
        #[arg(long)]
        plot_data: bool,
    },
    /// Néron-Tate convergence tables with the telescoping bound.
    Nt,
    /// The height inequality at depth `depth.m`.
    CheckHi,
    /// Morphism height fits and the blow-up two-sided bound.
    CheckS5,
    /// Effective split and denominator of the configured divisor.
    Divisor,
}

impl Cli {
    fn load_config(&self) -> Result<ExperimentConfig, LabError> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::bare(self.field.as_deref().unwrap_or("Q").parse()?),
        };
        if let Some(f) = &self.field {
            cfg.field = f.parse::<FieldChoice>()?.to_string();
        }
        if let Some(s) = self.seed {
            cfg.sampling.seed = s;
        }
        if let Some(o) = &self.out {
            cfg.output.dir = o.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs a command. `Ok(false)` means some verdict came out false.
pub fn run(cli: &Cli) -> Result<bool, LabError> {
    let cfg = cli.load_config()?;
    match cfg.field_choice()? {
        FieldChoice::Rationals => run_in(&Rationals, cli, &cfg),
        FieldChoice::FunctionField(p) => {
            let k = FunctionField::over_prime(p).map_err(|e| LabError::Config(e.to_string()))?;
            run_in(&k, cli, &cfg)
        }
    }
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn certificate_rows<T, R: Serialize>(rep: &CertificateReport<T>, f: impl Fn(&T) -> R) -> Vec<R> {
    rep.certificates.iter().map(f).collect()
}

#[derive(Serialize)]
struct CertificateRow {
    s: String,
    n: i64,
    lambda: f64,
    depth: u32,
    q_final: f64,
    residual: Option<f64>,
    bound: f64,
    verdict: bool,
}

#[derive(Serialize)]
struct HeightOut {
    field: String,
    point: String,
    height: String,
    log_height: f64,
}

fn run_in<K: LabField>(field: &K, cli: &Cli, cfg: &ExperimentConfig) -> Result<bool, LabError> {
    let out = &cfg.output.dir;
    let cal_path = cli.calibration.clone().unwrap_or_else(|| cfg.calibration_path());
    match &cli.command {
        Command::Height { point: Some(text), .. } => {
            let coords = text.split(',').map(|c| field.parse_elem(c)).collect::<Result<Vec<_>, _>>()?;
            let p = normalize_point(field, &coords).map_err(|e| LabError::Config(e.to_string()))?;
            let h = weil_height(&p);
            print_json(&HeightOut {
                field: field.label(),
                point: p.to_string(),
                height: K::height_cell(&h),
                log_height: h.to_f64(),
            });
            Ok(true)
        }
        Command::Height { s: Some(s), n, .. } => {
            let family = build_family(field, cfg.family()?)?;
            let fiber = family.fiber_check(&field.parse_elem(s)?).map_err(LabError::Family)?;
            print_json(&scan_point(&family, &fiber, *n)?);
            Ok(true)
        }
        Command::Height { .. } => Err(LabError::Config("height needs --point or --s".into())),
        Command::Scan { plot_data } | Command::Calibrate { plot_data } => {
            let report = scan_family(field, cfg)?;
            write_csv(&out.join("scan.csv"), &report.rows)?;
            if *plot_data {
                write_csv(&out.join("scan_plot.csv"), &report.plot_data())?;
            }
            println!(
                "scanned {} points on {} fibers; empirical c = {}",
                report.summary.points, report.summary.fibers, report.summary.empirical_c
            );
            if matches!(cli.command, Command::Calibrate { .. }) {
                write_json(&out.join("scan.json"), &report.summary)?;
                let fx = calibrate(&report)?;
                write_json(&cal_path, &fx)?;
                println!("c_cal = {} written to {}", fx.c_cal, cal_path.display());
                return Ok(true);
            }
            // With a fixture, every row is checked against the frozen constant.
            let within = match &cli.calibration {
                Some(p) => Some(check_against(field, cfg, p, &report.rows)?),
                None => None,
            };
            write_json(
                &out.join("scan.json"),
                &ScanJson {
                    summary: &report.summary,
                    within_calibration: within,
                },
            )?;
            if let Some(ok) = within {
                println!("all delta within c_cal * lambda: {ok}");
            }
            Ok(within.unwrap_or(true))
        }
        Command::Nt => {
            let fx = load_fixture(field, cfg, &cal_path)?;
            let rep = run_telescoping(field, cfg, &fx)?;
            write_json(&out.join("nt.json"), &rep)?;
            write_csv(
                &out.join("nt.csv"),
                &certificate_rows(&rep, |c| CertificateRow {
                    s: c.s.clone(),
                    n: c.n,
                    lambda: c.lambda,
                    depth: c.depth,
                    q_final: *c.q.last().expect("depth >= 1"),
                    residual: None,
                    bound: c.bound[1],
                    verdict: c.verdict,
                }),
            )?;
            println!("telescoping: {}/{} certificates hold", rep.verdicts_true, rep.count);
            Ok(rep.all_true)
        }
        Command::CheckHi => {
            let fx = load_fixture(field, cfg, &cal_path)?;
            let rep = run_height_inequality(field, cfg, &fx)?;
            write_json(&out.join("hi.json"), &rep)?;
            write_csv(
                &out.join("hi.csv"),
                &certificate_rows(&rep, |c| CertificateRow {
                    s: c.s.clone(),
                    n: c.n,
                    lambda: c.lambda,
                    depth: c.depth,
                    q_final: c.estimate,
                    residual: Some(c.residual),
                    bound: c.bound,
                    verdict: c.verdict,
                }),
            )?;
            println!("height inequality: {}/{} certificates hold", rep.verdicts_true, rep.count);
            Ok(rep.all_true)
        }
        Command::CheckS5 => {
            let rep = run_s5(field, cfg)?;
            write_json(&out.join("s5.json"), &rep)?;
            for e in &rep.entries {
                println!(
                    "{}: c1 = {}, c2 = {}, verdict {}",
                    e.name, e.c1, e.c2, e.verdict
                );
            }
            Ok(rep.all_true)
        }
        Command::Divisor => {
            let spec = cfg
                .divisors
                .as_ref()
                .ok_or_else(|| LabError::Config("config has no [divisors] section".into()))?;
            let rep = run_divisor(&field.constants(), spec)?;
            write_json(&out.join("divisor.json"), &rep)?;
            print_json(&rep);
            Ok(true)
        }
    }
}

#[derive(Serialize)]
struct ScanJson<'a> {
    #[serde(flatten)]
    summary: &'a crate::scan::ScanSummary,
    within_calibration: Option<bool>,
}

fn check_against<K: LabField>(
    field: &K,
    cfg: &ExperimentConfig,
    path: &Path,
    rows: &[crate::scan::ScanRow],
) -> Result<bool, LabError> {
    let fx = load_fixture(field, cfg, path)?;
    Ok(rows.iter().all(|r| r.delta_value <= fx.c_cal * r.lambda))
}
