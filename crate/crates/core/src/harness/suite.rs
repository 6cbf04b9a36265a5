use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::run::{run_experiment_with, RunReport, Verdict};
use super::{output, THRESHOLDS};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::solver::Grid1D;

/// Parameter sets of the reference figures.
pub fn default_m_grid(id: u8) -> Vec<f64> {
    match id {
        1 => vec![0.5, 0.3, 0.1, 0.05],
        2 => vec![0.2],
        3 => vec![0.6, 0.8, 0.9],
        _ => vec![0.5],
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub out_dir: Option<PathBuf>,
    /// Policy for distributing runs; each run itself steps sequentially.
    pub exec: Exec,
    pub grid: Option<Grid1D>,
    pub t_end: Option<f64>,
    pub cadence: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub example: u8,
    pub m: f64,
    pub report: Option<RunReport>,
    pub error: Option<String>,
}

impl SuiteEntry {
    pub fn passed(&self) -> bool {
        self.report.as_ref().is_some_and(RunReport::passed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub entries: Vec<SuiteEntry>,
    pub cross_checks: Vec<Verdict>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(SuiteEntry::passed) && self.cross_checks.iter().all(Verdict::is_ok)
    }
}

/// Runs every `(id, m)` pair, `m` from `m_grid` or the per-example default.
/// Failed runs are recorded in their entry.
pub fn run_suite(
    ids: &[u8],
    m_grid: Option<&[f64]>,
    options: &SuiteOptions,
) -> Result<SuiteReport> {
    if ids.is_empty() {
        return Err(Error::Usage("suite needs at least one example id".into()));
    }
    let mut jobs = Vec::new();
    for &id in ids {
        let ms = m_grid.map_or_else(|| default_m_grid(id), <[f64]>::to_vec);
        jobs.extend(ms.into_iter().map(|m| (id, m)));
    }
    let entries = par::map_jobs(options.exec, jobs, |(id, m)| {
        let result = ExperimentConfig::builtin(id, m).and_then(|mut config| {
            if let Some(grid) = options.grid {
                config.grid = grid;
            }
            if let Some(t) = options.t_end {
                config.t_end = t;
            }
            if let Some(c) = options.cadence {
                config.cadence = c;
            }
            config.out_dir = options.out_dir.as_ref().map(|d| d.join(&config.name));
            run_experiment_with(&config, Exec::Sequential)
        });
        match result {
            Ok(report) => SuiteEntry {
                example: id,
                m,
                report: Some(report),
                error: None,
            },
            Err(e) => SuiteEntry {
                example: id,
                m,
                report: None,
                error: Some(e.to_string()),
            },
        }
    });
    let report = SuiteReport {
        cross_checks: vec![steepening(&entries)],
        entries,
    };
    if let Some(dir) = &options.out_dir {
        std::fs::create_dir_all(dir)?;
        output::write_json(&dir.join("suite_report.json"), &report)?;
    }
    Ok(report)
}

/// Example 1 fronts at the steepening time: `max_slope` must fall strictly
/// as `m` grows.
pub fn steepening(entries: &[SuiteEntry]) -> Verdict {
    const NAME: &str = "steepening";
    let t = THRESHOLDS.steepening_time;
    let mut slopes: Vec<(f64, f64)> = entries
        .iter()
        .filter(|e| e.example == 1)
        .filter_map(|e| {
            let r = e.report.as_ref()?.diagnostics.at(t)?;
            ((r.t - t).abs() <= 1e-9 * t.max(1.0)).then_some((e.m, r.max_slope))
        })
        .collect();
    if slopes.len() < 2 {
        return Verdict::skipped(
            NAME,
            format!("needs two example 1 runs observed at t = {t}"),
        );
    }
    slopes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ok = slopes
        .windows(2)
        .all(|w| w[1].0 > w[0].0 && w[1].1 < w[0].1);
    let listing: Vec<String> = slopes
        .iter()
        .map(|(m, s)| format!("m = {m}: {s:.4}"))
        .collect();
    Verdict::check(
        NAME,
        ok,
        format!("max slope at t = {t}: {}", listing.join(", ")),
    )
}
