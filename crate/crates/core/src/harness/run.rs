use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, InitialSpec};
use super::{output, svg, THRESHOLDS};
use crate::analysis::{
    observe, representation_error, DiagnosticsSeries, Frame, NKind, ZeroMassShift,
};
use crate::error::Result;
use crate::flux::{
    check_entropy, check_k_convexity, classify, ConvexityReport, EntropyReport, FluxModel,
    ShockClassification,
};
use crate::initial::InitialData;
use crate::par::Exec;
use crate::profile::{build_profile_with, verify_decay, DecayReport, DecayWindows, ShockProfile};
use crate::solver::{init_state, Grid1D, RunStats};

const ENTROPY_SAMPLES: usize = 2000;
const CONVEXITY_SAMPLES: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: String,
    pub status: VerdictStatus,
    pub detail: String,
}

impl Verdict {
    pub fn check(criterion: &str, ok: bool, detail: String) -> Self {
        Verdict {
            criterion: criterion.into(),
            status: if ok {
                VerdictStatus::Pass
            } else {
                VerdictStatus::Fail
            },
            detail,
        }
    }

    pub fn skipped(criterion: &str, reason: impl Into<String>) -> Self {
        Verdict {
            criterion: criterion.into(),
            status: VerdictStatus::Skipped,
            detail: reason.into(),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status != VerdictStatus::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub model: FluxModel,
    pub initial: InitialSpec,
    pub grid: Grid1D,
    pub t_end: f64,
    pub cadence: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesSummary {
    pub observations: usize,
    pub n_kind: NKind,
    pub sup_error_initial: f64,
    pub sup_error_final: f64,
    pub sup_error_max: f64,
    pub n_initial: f64,
    pub n_ratio_max: Option<f64>,
    /// Range of `N / N_bracket` over observations where both are positive.
    pub weight_ratio_range: Option<(f64, f64)>,
    pub max_slope_final: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub config: ConfigEcho,
    pub classification: ShockClassification,
    pub entropy: EntropyReport,
    pub convexity: Option<ConvexityReport>,
    pub decay: DecayReport,
    pub shift: ZeroMassShift,
    pub representation_error: f64,
    pub initial_mass: f64,
    pub summary: SeriesSummary,
    pub diagnostics: DiagnosticsSeries,
    pub solver: RunStats,
    pub verdicts: Vec<Verdict>,
    pub files: Vec<PathBuf>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(Verdict::is_ok)
    }

    pub fn verdict(&self, criterion: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.criterion == criterion)
    }
}

/// Runs with the default execution policy and writes artifacts to
/// `config.out_dir` when set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport> {
    run_experiment_with(config, Exec::Auto)
}

/// classify → profile → decay fit → initialize → zero-mass shift → advance
/// with diagnostics at every observation → verdicts and artifacts.
pub fn run_experiment_with(config: &ExperimentConfig, exec: Exec) -> Result<RunReport> {
    let model = &config.model;
    let classification = classify(model)?;
    let s = classification.speed;
    let entropy = check_entropy(model, s, ENTROPY_SAMPLES, exec);
    let convexity = (!classification.is_degenerate())
        .then(|| check_k_convexity(model, s, CONVEXITY_SAMPLES, exec));

    let profile = Arc::new(build_profile_with(
        model,
        classification.clone(),
        &config.profile_options(),
    )?);
    let decay = verify_decay(&profile, DecayWindows::default_for(&profile))?;

    let data = initial_data(config, &profile);
    let mut state = init_state(config.grid, &data, model)?.with_exec(exec);
    let shift = crate::analysis::zero_mass_shift(&state, &data, &profile);
    let x0 = shift.x0;
    let rep_error = representation_error(&state, &Frame::new(&profile, state.time(), x0));
    let initial_mass = state.mass();

    let keep_snapshots = config.out_dir.is_some();
    let mut snapshots: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut series = DiagnosticsSeries::new();
    let mut min_margin = f64::INFINITY;
    {
        let mut record = |st: &crate::solver::SolverState| -> Result<()> {
            if series.last().is_some_and(|r| r.t >= st.time()) {
                return Ok(());
            }
            series.push(observe(st, &profile, x0, &classification)?)?;
            let low = st.values().iter().copied().fold(f64::INFINITY, f64::min);
            min_margin = min_margin.min(low - st.floor());
            if keep_snapshots {
                snapshots.push((st.time(), st.values().to_vec()));
            }
            Ok(())
        };
        record(&state)?;
        state.advance_to(config.t_end, Some(config.cadence), &mut record)?;
    }

    let summary = summarize(&series);
    let verdicts = verdicts(
        config,
        convexity.as_ref(),
        &decay,
        &series,
        &summary,
        rep_error,
        initial_mass,
        state.stats(),
        min_margin,
    );

    let mut report = RunReport {
        name: config.name.clone(),
        config: ConfigEcho {
            model: model.clone(),
            initial: config.initial.clone(),
            grid: config.grid,
            t_end: config.t_end,
            cadence: config.cadence,
        },
        classification,
        entropy,
        convexity,
        decay,
        shift,
        representation_error: rep_error,
        initial_mass,
        summary,
        diagnostics: series,
        solver: *state.stats(),
        verdicts,
        files: Vec::new(),
    };
    if let Some(dir) = &config.out_dir {
        report.files = write_artifacts(dir, &report, &profile, &snapshots)?;
    }
    Ok(report)
}

fn initial_data(config: &ExperimentConfig, profile: &Arc<ShockProfile>) -> InitialData {
    match config.initial {
        InitialSpec::Example(_) => InitialData::AlgebraicExponential(
            config
                .initial_data_formula()
                .expect("validated example data"),
        ),
        InitialSpec::Profile { shift } => InitialData::Profile {
            profile: Arc::clone(profile),
            shift,
        },
        InitialSpec::Constant(c) => InitialData::Constant(c),
    }
}

fn summarize(series: &DiagnosticsSeries) -> SeriesSummary {
    let records = series.records();
    let first = &records[0];
    let last = &records[records.len() - 1];
    let ratios: Vec<f64> = records
        .iter()
        .filter_map(|r| r.n.equivalence_ratio().filter(|q| *q > 0.0))
        .collect();
    SeriesSummary {
        observations: records.len(),
        n_kind: first.n.kind,
        sup_error_initial: first.sup_error,
        sup_error_final: last.sup_error,
        sup_error_max: records.iter().map(|r| r.sup_error).fold(0.0, f64::max),
        n_initial: first.n.value,
        n_ratio_max: series.n_ratio_max(),
        weight_ratio_range: (!ratios.is_empty()).then(|| {
            ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &q| {
                (lo.min(q), hi.max(q))
            })
        }),
        max_slope_final: last.max_slope,
    }
}

#[allow(clippy::too_many_arguments)]
fn verdicts(
    config: &ExperimentConfig,
    convexity: Option<&ConvexityReport>,
    decay: &DecayReport,
    series: &DiagnosticsSeries,
    summary: &SeriesSummary,
    rep_error: f64,
    initial_mass: f64,
    stats: &RunStats,
    min_margin: f64,
) -> Vec<Verdict> {
    let th = THRESHOLDS;
    let mut out = Vec::new();

    out.push(Verdict::check(
        "decay_fit",
        decay.rel_err_q <= th.decay_rel_err && decay.rel_err_lambda <= th.decay_rel_err,
        format!(
            "right exponent {:.5} vs {:.5} ({:.2e}), left rate {:.5} vs {:.5} ({:.2e})",
            decay.q_fit,
            decay.q_theory,
            decay.rel_err_q,
            decay.lambda_fit,
            decay.lambda_theory,
            decay.rel_err_lambda
        ),
    ));

    out.push(match convexity {
        Some(c) => Verdict::check(
            "k_convexity",
            c.holds,
            format!("min K'' = {:.3e} at u = {:.3e}", c.min_k2, c.argmin),
        ),
        None => Verdict::skipped("k_convexity", "degenerate shock"),
    });

    let profile_data = matches!(config.initial, InitialSpec::Profile { .. });
    out.push(if config.t_end <= 0.0 {
        Verdict::skipped("sup_error_decay", "no time evolution")
    } else if profile_data {
        Verdict::skipped("sup_error_decay", "profile data starts on the wave")
    } else if !(summary.sup_error_initial > 0.0) {
        Verdict::skipped("sup_error_decay", "zero initial error")
    } else {
        let ratio = summary.sup_error_final / summary.sup_error_initial;
        Verdict::check(
            "sup_error_decay",
            ratio <= th.sup_error_ratio,
            format!(
                "sup error {:.3e} -> {:.3e}, ratio {ratio:.3} (cap {})",
                summary.sup_error_initial, summary.sup_error_final, th.sup_error_ratio
            ),
        )
    });

    out.push(match summary.n_ratio_max {
        Some(r) => Verdict::check(
            "n_ratio",
            r <= th.n_ratio_cap,
            format!(
                "max {:?}(t)/{:?}(0) = {r:.3} (cap {})",
                summary.n_kind, summary.n_kind, th.n_ratio_cap
            ),
        ),
        None => Verdict::skipped("n_ratio", "N(0) = 0"),
    });

    out.push(if profile_data {
        let worst = series
            .records()
            .iter()
            .filter(|r| r.t <= th.tracking_horizon * (1.0 + 1e-12))
            .map(|r| r.sup_error)
            .fold(0.0, f64::max);
        Verdict::check(
            "tracking",
            worst <= th.tracking_factor * rep_error,
            format!(
                "sup error up to t = {} is {worst:.3e}, representation error {rep_error:.3e}",
                th.tracking_horizon
            ),
        )
    } else {
        Verdict::skipped("tracking", "data is not a traveling wave")
    });

    let clip_rel = stats.clip_total / initial_mass;
    out.push(Verdict::check(
        "clip_mass",
        clip_rel <= th.clip_mass_rel,
        format!(
            "clipped mass {:.3e} ({} events), relative {clip_rel:.3e}",
            stats.clip_total, stats.clip_events
        ),
    ));
    out.push(Verdict::check(
        "positivity",
        min_margin >= 0.0,
        format!("smallest observed u - floor = {min_margin:.3e}"),
    ));
    out
}

fn write_artifacts(
    dir: &Path,
    report: &RunReport,
    profile: &ShockProfile,
    snapshots: &[(f64, Vec<f64>)],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let grid = report.config.grid;
    let x = grid.centers();
    let mut files = Vec::new();

    let path = dir.join("snapshots.csv");
    output::write_snapshots_csv(&path, &x, snapshots)?;
    files.push(path);
    let path = dir.join("diagnostics.csv");
    output::write_diagnostics_csv(&path, &report.diagnostics)?;
    files.push(path);
    let path = dir.join("profile.csv");
    output::write_profile_csv(&path, profile)?;
    files.push(path);

    if let Some((t_last, _)) = snapshots.last() {
        let frame = Frame::new(profile, *t_last, report.shift.x0);
        let wave: Vec<f64> = x.iter().map(|&xj| frame.target(xj)).collect();
        files.extend(svg::emit_svg(
            &x,
            snapshots,
            (*t_last, &wave),
            &report.diagnostics,
            dir,
        )?);
    }

    let path = dir.join("run_meta.json");
    output::write_json(
        &path,
        &serde_json::json!({
            "name": report.name,
            "grid": grid,
            "dt": {
                "steps": report.solver.n_steps,
                "min": report.solver.dt_min,
                "max": report.solver.dt_max,
            },
            "clip": {
                "total": report.solver.clip_total,
                "events": report.solver.clip_events,
            },
            "boundary_flux_total": report.solver.boundary_flux_total,
            "observations": report.diagnostics.records().iter().map(|r| r.t).collect::<Vec<_>>(),
        }),
    )?;
    files.push(path);

    let path = dir.join("report.json");
    files.push(path.clone());
    let mut with_files = report.clone();
    with_files.files = files.clone();
    output::write_json(&path, &with_files)?;
    Ok(files)
}
