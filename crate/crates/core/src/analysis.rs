//! Stability diagnostics measured against the shifted traveling wave.
//!
//! All comparisons use the moving, shifted profile `U(x − st + x₀)` where
//! `x₀` is fixed once from the initial data by the zero-mass condition.
//! Norms are discrete weighted L² norms `(Σ w(ξ_j) v_j² dx)^{1/2}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::{g_eval, ShockClassification};
use crate::initial::InitialData;
use crate::profile::ShockProfile;
use crate::solver::SolverState;

/// `⟨ξ⟩₊^α`: `1` for `ξ ≤ 0`, `(1 + ξ²)^{α/2}` for `ξ > 0`.
#[inline]
pub fn bracket_plus(xi: f64, alpha: f64) -> f64 {
    if xi <= 0.0 {
        1.0
    } else {
        (1.0 + xi * xi).powf(0.5 * alpha)
    }
}

/// `w(U) = U(U − u₋) / g(U)`, positive on `(u₊, u₋)` under the entropy condition.
/// Within `1e-6·u₋` of `u₋` the limit `u₋ / (f'(u₋) − s)` is used.
pub fn profile_w(profile: &ShockProfile, u: f64) -> f64 {
    let model = profile.model();
    let um = model.u_minus();
    let s = profile.speed();
    if um - u <= 1e-6 * um {
        return um / (model.f_prime(um) - s);
    }
    u * (u - um) / g_eval(model, s, u)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Weight {
    BracketPlus(f64),
    ProfileW,
    InverseU(f64),
}

/// Weight exponents matched to the profile's right-tail decay.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum WeightExponents {
    /// `α₁ = 2/(1−m)`, `α₂ = 2m/(1−m)`, `α₃ = (3−m)/(1−m)`, `α₄ = (1+m)/(1−m)`.
    NonDegenerate { alpha: [f64; 4] },
    /// `βᵢ` with `k = k_eff`: `β₁ = 2/(k+1−m)`, `β₂ = k/(k+1−m)`, `β₃ = (3−m)/(k+1−m)`.
    Degenerate { beta: [f64; 3] },
}

impl WeightExponents {
    pub fn new(classification: &ShockClassification, m: f64) -> Self {
        match classification.k_eff {
            None => {
                let d = 1.0 - m;
                WeightExponents::NonDegenerate {
                    alpha: [2.0 / d, 2.0 * m / d, (3.0 - m) / d, (1.0 + m) / d],
                }
            }
            Some(k) => {
                let d = k + 1.0 - m;
                WeightExponents::Degenerate {
                    beta: [2.0 / d, k / d, (3.0 - m) / d],
                }
            }
        }
    }

    /// Exponents on `(φ_ξξ, φ_ξ, φ)` in the initial-data smallness quantity.
    pub fn energy_exponents(&self) -> [f64; 3] {
        match *self {
            WeightExponents::NonDegenerate { alpha } => [alpha[0], alpha[0], alpha[1]],
            WeightExponents::Degenerate { beta } => [beta[0], beta[0], beta[1]],
        }
    }
}

/// The target wave `U(x − st + x₀)` at a given time.
#[derive(Clone, Copy, Debug)]
pub struct Frame<'a> {
    pub profile: &'a ShockProfile,
    pub s: f64,
    pub t: f64,
    pub x0: f64,
}

impl<'a> Frame<'a> {
    pub fn new(profile: &'a ShockProfile, t: f64, x0: f64) -> Self {
        Frame {
            profile,
            s: profile.speed(),
            t,
            x0,
        }
    }

    #[inline]
    pub fn xi(&self, x: f64) -> f64 {
        x - self.s * self.t + self.x0
    }

    #[inline]
    pub fn target(&self, x: f64) -> f64 {
        self.profile.eval(self.xi(x))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroMassShift {
    pub x0: f64,
    /// `∫_{x_L}^{x_R} (u₀ − U)` on the grid.
    pub interior: f64,
    pub left_tail: f64,
    pub right_tail: f64,
    /// Tail contributions that diverge and were left out.
    pub dropped: Vec<String>,
}

/// `x₀ = (u₊ − u₋)^{-1} ∫ (u₀ − U)`: midpoint sum over the grid plus the
/// analytic tails of the data and of the profile.
pub fn zero_mass_shift(
    state0: &SolverState,
    data: &InitialData,
    profile: &ShockProfile,
) -> ZeroMassShift {
    let grid = state0.grid();
    let dx = grid.dx();
    let interior: f64 = state0
        .values()
        .iter()
        .enumerate()
        .map(|(j, &u)| u - profile.eval(grid.center(j)))
        .sum::<f64>()
        * dx;
    let um = profile.model().u_minus();
    let mut dropped = Vec::new();

    let left_tail = match data.defect_left(grid.x_left, um) {
        Some(d) => profile.defect_left(grid.x_left) - d,
        None => {
            dropped.push(format!("left tail beyond x = {} diverges", grid.x_left));
            0.0
        }
    };
    let x_r = grid.x_right;
    let right_tail = match (data.mass_right(x_r), profile.mass_right(x_r), data) {
        (Some(a), Some(b), _) => a - b,
        // Translates of one profile: the tails cancel up to a finite slab.
        (_, _, InitialData::Profile { profile: p, shift }) if p.model() == profile.model() => {
            profile.integral(x_r - shift, x_r)
        }
        _ => {
            dropped.push(format!("right tail beyond x = {} diverges", grid.x_right));
            0.0
        }
    };
    let total = interior + left_tail + right_tail;
    ZeroMassShift {
        x0: total / (profile.model().u_plus() - um),
        interior,
        left_tail,
        right_tail,
        dropped,
    }
}

/// `u_j − U(x_j − st + x₀)`.
pub fn perturbation(state: &SolverState, frame: &Frame) -> Vec<f64> {
    let grid = state.grid();
    state
        .values()
        .iter()
        .enumerate()
        .map(|(j, &u)| u - frame.target(grid.center(j)))
        .collect()
}

/// `φ(x_j) = ∫_{−∞}^{x_j} (u − U)` by cumulative trapezoid from the left
/// boundary, with `u ≡ u₋` assumed beyond it.
pub fn phi_field(state: &SolverState, frame: &Frame) -> Vec<f64> {
    let d = perturbation(state, frame);
    let grid = state.grid();
    let dx = grid.dx();
    let mut phi = Vec::with_capacity(d.len());
    let mut acc = frame.profile.defect_left(frame.xi(grid.x_left)) + 0.5 * dx * d[0];
    phi.push(acc);
    for j in 1..d.len() {
        acc += 0.5 * dx * (d[j - 1] + d[j]);
        phi.push(acc);
    }
    phi
}

/// Central differences inside, one-sided at the two end cells.
pub fn derivative(values: &[f64], dx: f64) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|j| {
            if j == 0 {
                (values[1] - values[0]) / dx
            } else if j == n - 1 {
                (values[n - 1] - values[n - 2]) / dx
            } else {
                (values[j + 1] - values[j - 1]) / (2.0 * dx)
            }
        })
        .collect()
}

pub fn weighted_norm(
    values: &[f64],
    weight: Weight,
    state: &SolverState,
    frame: &Frame,
) -> Result<f64> {
    Ok(weighted_norm_sq(values, weight, state, frame)?.sqrt())
}

fn weighted_norm_sq(
    values: &[f64],
    weight: Weight,
    state: &SolverState,
    frame: &Frame,
) -> Result<f64> {
    let grid = state.grid();
    let mut acc = 0.0;
    for (j, &v) in values.iter().enumerate() {
        let xi = frame.xi(grid.center(j));
        let w = match weight {
            Weight::BracketPlus(alpha) => bracket_plus(xi, alpha),
            Weight::InverseU(p) => frame.profile.eval(xi).powf(-p),
            Weight::ProfileW => profile_w(frame.profile, frame.profile.eval(xi)),
        };
        if !w.is_finite() {
            return Err(Error::NonFiniteWeight { xi });
        }
        acc += w * v * v;
    }
    Ok(acc * grid.dx())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NKind {
    N1,
    N2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NRecord {
    pub kind: NKind,
    pub value: f64,
    /// Squared norms of `φ_ξξ`, `φ_ξ`, `φ` in the `1/U`-power (or `w`) form.
    pub terms: [f64; 3],
    /// The same functional with `⟨ξ⟩₊`-power weights.
    pub bracket_value: f64,
    pub bracket_terms: [f64; 3],
}

impl NRecord {
    /// `N / N_bracket`; `None` if the bracket form vanishes.
    pub fn equivalence_ratio(&self) -> Option<f64> {
        (self.bracket_value > 0.0).then(|| self.value / self.bracket_value)
    }
}

/// `N₁ = ‖φ_ξξ/U‖² + ‖φ_ξ/U‖² + ‖φ/U^m‖²` (non-degenerate) or
/// `N₂ = ‖φ_ξξ/U‖² + ‖φ_ξ/U‖² + ‖φ‖²_w` (degenerate).
pub fn compute_n(
    state: &SolverState,
    frame: &Frame,
    classification: &ShockClassification,
) -> Result<NRecord> {
    let m = frame.profile.model().m();
    let d = perturbation(state, frame);
    let dd = derivative(&d, state.grid().dx());
    let phi = phi_field(state, frame);
    let (kind, phi_weight) = if classification.is_degenerate() {
        (NKind::N2, Weight::ProfileW)
    } else {
        (NKind::N1, Weight::InverseU(2.0 * m))
    };
    let terms = [
        weighted_norm_sq(&dd, Weight::InverseU(2.0), state, frame)?,
        weighted_norm_sq(&d, Weight::InverseU(2.0), state, frame)?,
        weighted_norm_sq(&phi, phi_weight, state, frame)?,
    ];
    let e = WeightExponents::new(classification, m).energy_exponents();
    let bracket_terms = [
        weighted_norm_sq(&dd, Weight::BracketPlus(e[0]), state, frame)?,
        weighted_norm_sq(&d, Weight::BracketPlus(e[1]), state, frame)?,
        weighted_norm_sq(&phi, Weight::BracketPlus(e[2]), state, frame)?,
    ];
    Ok(NRecord {
        kind,
        value: terms.iter().sum(),
        terms,
        bracket_value: bracket_terms.iter().sum(),
        bracket_terms,
    })
}

/// `max_j |u_j − U(x_j − st + x₀)|`.
pub fn sup_error(state: &SolverState, frame: &Frame) -> f64 {
    perturbation(state, frame)
        .into_iter()
        .fold(0.0, |a, d| a.max(d.abs()))
}

/// Largest gap between a cell value and the target wave at the cell's two
/// faces: the error of representing `U` by piecewise constants on this grid.
pub fn representation_error(state: &SolverState, frame: &Frame) -> f64 {
    let grid = state.grid();
    let half = 0.5 * grid.dx();
    state
        .values()
        .iter()
        .enumerate()
        .map(|(j, &u)| {
            let x = grid.center(j);
            (u - frame.target(x - half))
                .abs()
                .max((u - frame.target(x + half)).abs())
        })
        .fold(0.0, f64::max)
}

/// `max |u_{j+1} − u_{j−1}| / (2dx)` over interior cells.
pub fn max_slope(state: &SolverState) -> f64 {
    let u = state.values();
    let dx = state.grid().dx();
    u.windows(3)
        .map(|w| (w[2] - w[0]).abs() / (2.0 * dx))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub sup_error: f64,
    pub n: NRecord,
    pub mass: f64,
    pub max_slope: f64,
    pub x0: f64,
    pub clip_total: f64,
    pub boundary_flux_total: f64,
}

pub fn observe(
    state: &SolverState,
    profile: &ShockProfile,
    x0: f64,
    classification: &ShockClassification,
) -> Result<DiagnosticsRecord> {
    let frame = Frame::new(profile, state.time(), x0);
    Ok(DiagnosticsRecord {
        t: state.time(),
        sup_error: sup_error(state, &frame),
        n: compute_n(state, &frame, classification)?,
        mass: state.mass(),
        max_slope: max_slope(state),
        x0,
        clip_total: state.stats().clip_total,
        boundary_flux_total: state.stats().boundary_flux_total,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSeries {
    records: Vec<DiagnosticsRecord>,
}

impl DiagnosticsSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a record; times must increase strictly.
    pub fn push(&mut self, record: DiagnosticsRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if !(record.t > last.t) {
                return Err(Error::Usage(format!(
                    "diagnostics time {} does not follow {}",
                    record.t, last.t
                )));
            }
        }
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[DiagnosticsRecord] {
        &self.records
    }

    pub fn first(&self) -> Option<&DiagnosticsRecord> {
        self.records.first()
    }

    pub fn last(&self) -> Option<&DiagnosticsRecord> {
        self.records.last()
    }

    /// Record closest to time `t`.
    pub fn at(&self, t: f64) -> Option<&DiagnosticsRecord> {
        self.records
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
    }

    /// `max_t N(t) / N(0)`, `None` when `N(0) = 0`.
    pub fn n_ratio_max(&self) -> Option<f64> {
        let n0 = self.first()?.n.value;
        (n0 > 0.0).then(|| {
            self.records
                .iter()
                .map(|r| r.n.value / n0)
                .fold(0.0, f64::max)
        })
    }
}
