//! Experiment configuration files.
//!
//! ```json
//! {"example": 1, "m": 0.3}
//! {"terms": [[1, 2]], "m": 0.3, "initial": "profile", "grid": {"x_left": -20, "x_right": 60, "n_cells": 4000}}
//! ```
//!
//! `initial` accepts `"example"`, an example id `1`–`4`, `"profile"`,
//! `"shifted-profile <a>"`, `{"shifted_profile": a}` or `{"constant": c}`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::initial::AlgebraicExponentialData;
use crate::profile::ProfileOptions;
use crate::solver::Grid1D;

pub const DEFAULT_X_LEFT: f64 = -20.0;
pub const DEFAULT_X_RIGHT: f64 = 60.0;
pub const DEFAULT_N_CELLS: usize = 4000;
pub const DEFAULT_T_END: f64 = 10.0;
pub const DEFAULT_CADENCE: f64 = 1.0;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    example: Option<u8>,
    terms: Option<Vec<(f64, f64)>>,
    m: Option<f64>,
    mu: Option<f64>,
    u_minus: Option<f64>,
    initial: Option<RawInitial>,
    grid: Option<RawGrid>,
    t_end: Option<f64>,
    cadence: Option<f64>,
    out_dir: Option<PathBuf>,
    n_nodes: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    x_left: Option<f64>,
    x_right: Option<f64>,
    n_cells: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawInitial {
    Id(u8),
    Name(String),
    Shifted { shifted_profile: f64 },
    Constant { constant: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialSpec {
    /// Closed-form data of a reference example, evaluated with the model's `m`.
    Example(u8),
    /// `U(x − shift)` from the model's own profile.
    Profile {
        shift: f64,
    },
    Constant(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub example: Option<u8>,
    pub model: FluxModel,
    pub initial: InitialSpec,
    pub grid: Grid1D,
    pub t_end: f64,
    pub cadence: f64,
    pub out_dir: Option<PathBuf>,
    pub n_nodes: usize,
}

fn invalid(path: &str, message: impl Into<String>) -> Error {
    Error::Validation {
        path: path.into(),
        message: message.into(),
    }
}

/// Flux terms of the four reference examples.
pub fn example_terms(id: u8, m: f64) -> Option<Vec<(f64, f64)>> {
    match id {
        1 => Some(vec![(1.0, 2.0)]),
        2 => Some(vec![(2.0, 3.0 + 2.0 * m), (-1.0, 1.0 + 2.0 * m)]),
        3 => Some(vec![(1.0, 2.0 + 2.0 * m), (-1.0, 2.0 * m)]),
        4 => Some(vec![(1.0, 3.0), (-1.0, 2.0)]),
        _ => None,
    }
}

/// Admissible `m` of each reference example.
pub fn example_m_in_range(id: u8, m: f64) -> bool {
    match id {
        1 | 2 => m > 0.0 && m <= 0.5,
        3 => m > 0.5 && m < 1.0,
        4 => m == 0.5,
        _ => false,
    }
}

fn example_m_range_text(id: u8) -> &'static str {
    match id {
        1 | 2 => "0 < m <= 1/2",
        3 => "1/2 < m < 1",
        _ => "m = 1/2",
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    validate(raw)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

impl ExperimentConfig {
    /// A reference example with the default grid and horizon.
    pub fn builtin(id: u8, m: f64) -> Result<Self> {
        parse_config(&format!("{{\"example\": {id}, \"m\": {m:?}}}"))
    }

    pub fn profile_options(&self) -> ProfileOptions {
        ProfileOptions {
            n_nodes: self.n_nodes,
            ..ProfileOptions::default()
        }
    }

    pub fn initial_data_formula(&self) -> Option<AlgebraicExponentialData> {
        match self.initial {
            InitialSpec::Example(id) => {
                AlgebraicExponentialData::example(id, self.model.m(), self.model.u_minus())
            }
            _ => None,
        }
    }
}

fn validate(raw: RawConfig) -> Result<ExperimentConfig> {
    let mu = raw.mu.unwrap_or(1.0);
    let u_minus = raw.u_minus.unwrap_or(1.0);

    let (terms, m) = match raw.example {
        Some(id) => {
            if !(1..=4).contains(&id) {
                return Err(invalid(
                    "example",
                    format!("unknown example {id}, expected 1-4"),
                ));
            }
            if raw.terms.is_some() {
                return Err(invalid(
                    "terms",
                    "cannot be combined with a builtin example",
                ));
            }
            let m = match (id, raw.m) {
                (4, None) => 0.5,
                (_, Some(m)) => m,
                (_, None) => return Err(invalid("m", format!("example {id} needs m"))),
            };
            if !example_m_in_range(id, m) {
                return Err(invalid(
                    "m",
                    format!(
                        "m = {m} outside {} required by example {id}",
                        example_m_range_text(id)
                    ),
                ));
            }
            (example_terms(id, m).expect("known example"), m)
        }
        None => {
            let terms = raw
                .terms
                .ok_or_else(|| invalid("terms", "required without an example"))?;
            let m = raw.m.ok_or_else(|| invalid("m", "required"))?;
            (terms, m)
        }
    };
    let model = FluxModel::new(terms, m, mu, u_minus).map_err(|e| invalid("m", e.to_string()))?;

    let initial = match raw.initial {
        None => match raw.example {
            Some(id) => InitialSpec::Example(id),
            None => InitialSpec::Profile { shift: 0.0 },
        },
        Some(RawInitial::Id(id)) => InitialSpec::Example(id),
        Some(RawInitial::Shifted { shifted_profile }) => InitialSpec::Profile {
            shift: shifted_profile,
        },
        Some(RawInitial::Constant { constant }) => InitialSpec::Constant(constant),
        Some(RawInitial::Name(name)) => parse_initial_name(&name, raw.example)?,
    };
    match initial {
        InitialSpec::Example(id) => {
            let data = AlgebraicExponentialData::example(id, m, u_minus)
                .ok_or_else(|| invalid("initial", format!("unknown example data {id}")))?;
            let jump = (data.eval(0.0) - data.eval(-1e-12)).abs();
            if jump > 1e-9 * u_minus {
                return Err(invalid(
                    "initial",
                    format!("example data jumps by {jump} at x = 0"),
                ));
            }
        }
        InitialSpec::Profile { shift } if !shift.is_finite() => {
            return Err(invalid("initial", "shift must be finite"));
        }
        InitialSpec::Constant(c) if !(c > 0.0) => {
            return Err(invalid("initial", "constant data must be positive"));
        }
        _ => {}
    }

    let g = raw.grid.unwrap_or(RawGrid {
        x_left: None,
        x_right: None,
        n_cells: None,
    });
    let grid = Grid1D::new(
        g.x_left.unwrap_or(DEFAULT_X_LEFT),
        g.x_right.unwrap_or(DEFAULT_X_RIGHT),
        g.n_cells.unwrap_or(DEFAULT_N_CELLS),
    )
    .map_err(|e| invalid("grid", e.to_string()))?;

    let t_end = raw.t_end.unwrap_or(DEFAULT_T_END);
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(invalid("t_end", "must be finite and non-negative"));
    }
    let cadence = raw.cadence.unwrap_or(DEFAULT_CADENCE);
    if !(cadence > 0.0) {
        return Err(invalid("cadence", "must be positive"));
    }
    let n_nodes = raw.n_nodes.unwrap_or(ProfileOptions::default().n_nodes);
    if n_nodes < 16 {
        return Err(invalid("n_nodes", "need at least 16 nodes per side"));
    }

    let name = raw.name.unwrap_or_else(|| match raw.example {
        Some(id) => format!("ex{id}_m{m}"),
        None => format!("custom_m{m}"),
    });
    Ok(ExperimentConfig {
        name,
        example: raw.example,
        model,
        initial,
        grid,
        t_end,
        cadence,
        out_dir: raw.out_dir,
        n_nodes,
    })
}

fn parse_initial_name(name: &str, example: Option<u8>) -> Result<InitialSpec> {
    let name = name.trim();
    if name == "profile" {
        return Ok(InitialSpec::Profile { shift: 0.0 });
    }
    if name == "example" {
        return example
            .map(InitialSpec::Example)
            .ok_or_else(|| invalid("initial", "\"example\" needs an example id"));
    }
    if let Some(rest) = name.strip_prefix("shifted-profile") {
        let shift: f64 = rest
            .trim()
            .parse()
            .map_err(|_| invalid("initial", format!("bad shift in {name:?}")))?;
        return Ok(InitialSpec::Profile { shift });
    }
    Err(invalid("initial", format!("unknown initial data {name:?}")))
}
