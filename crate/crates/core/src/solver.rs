//! Explicit finite-volume solver for `u_t + f(u)_x = μ (u^m)_xx`.
//!
//! Cell-centred grid, local Lax–Friedrichs convective flux, centred
//! conservative differencing of `v = u^m` for the diffusion, forward Euler in
//! time, frozen Dirichlet ghost cells, and a positivity floor whose clipping is
//! logged. The scheme is monotone under [`SAFETY`]-scaled steps, so clipping
//! only fires when the floor sits above the data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::initial::InitialData;
use crate::par::{self, Exec};

/// Safety factor applied to both the convective and the diffusive limits.
pub const SAFETY: f64 = 0.4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_left: f64,
    pub x_right: f64,
    pub n_cells: usize,
}

impl Grid1D {
    pub fn new(x_left: f64, x_right: f64, n_cells: usize) -> Result<Self> {
        if !(x_left < x_right) || !x_left.is_finite() || !x_right.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "need finite x_left < x_right, got [{x_left}, {x_right}]"
            )));
        }
        if n_cells < 16 {
            return Err(Error::InvalidGrid(format!(
                "need at least 16 cells, got {n_cells}"
            )));
        }
        Ok(Grid1D {
            x_left,
            x_right,
            n_cells,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / self.n_cells as f64
    }

    #[inline]
    pub fn center(&self, j: usize) -> f64 {
        self.x_left + (j as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|j| self.center(j)).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub dt_used: f64,
    /// `dt·max|f'|/dx`.
    pub cfl_adv: f64,
    /// `dt·2μm·max u^{m−1}/dx²`.
    pub cfl_diff: f64,
    /// `Σ (u_new − u_old)·dx`, clipping included.
    pub mass_change: f64,
    /// `dt·(F_left − F_right)` through the two boundary faces.
    pub boundary_flux_integral: f64,
    pub clip_mass: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub n_steps: u64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub clip_total: f64,
    pub clip_events: u64,
    pub boundary_flux_total: f64,
    pub max_cfl_adv: f64,
    pub max_cfl_diff: f64,
}

impl Default for RunStats {
    fn default() -> Self {
        RunStats {
            n_steps: 0,
            dt_min: f64::INFINITY,
            dt_max: 0.0,
            clip_total: 0.0,
            clip_events: 0,
            boundary_flux_total: 0.0,
            max_cfl_adv: 0.0,
            max_cfl_diff: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct CellEval {
    f: f64,
    df: f64,
    v: f64,
}

/// Both explicit limits before the safety factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DtLimits {
    pub advective: f64,
    pub diffusive: f64,
}

impl DtLimits {
    pub fn stable_dt(&self) -> f64 {
        SAFETY * self.advective.min(self.diffusive)
    }
}

#[derive(Clone, Debug)]
pub struct SolverState {
    grid: Grid1D,
    u: Vec<f64>,
    t: f64,
    bc: (f64, f64),
    floor: f64,
    model: FluxModel,
    exec: Exec,
    stats: RunStats,
    // Scratch; `eval` is current while `limits` is `Some`.
    eval: Vec<CellEval>,
    face_flux: Vec<f64>,
    next: Vec<f64>,
    limits: Option<DtLimits>,
}

/// Samples `data` at cell centres; ghosts take `u₀` at the domain ends and
/// the floor is `u₀(x_right)/2`.
pub fn init_state(grid: Grid1D, data: &InitialData, model: &FluxModel) -> Result<SolverState> {
    let u = grid.centers().into_iter().map(|x| data.eval(x)).collect();
    let bc = (data.eval(grid.x_left), data.eval(grid.x_right));
    for (x, v) in [(grid.x_left, bc.0), (grid.x_right, bc.1)] {
        if !(v > 0.0) {
            return Err(Error::NonPositiveData { x, value: v });
        }
    }
    SolverState::from_values(grid, u, bc, 0.5 * bc.1, model.clone())
}

impl SolverState {
    pub fn from_values(
        grid: Grid1D,
        u: Vec<f64>,
        bc: (f64, f64),
        floor: f64,
        model: FluxModel,
    ) -> Result<Self> {
        if u.len() != grid.n_cells {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} cells",
                u.len(),
                grid.n_cells
            )));
        }
        for (j, &v) in u.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::NonPositiveData {
                    x: grid.center(j),
                    value: v,
                });
            }
        }
        if !(floor > 0.0) {
            return Err(Error::NonPositiveData {
                x: grid.x_right,
                value: floor,
            });
        }
        let n = grid.n_cells;
        Ok(SolverState {
            grid,
            u,
            t: 0.0,
            bc,
            floor,
            model,
            exec: Exec::default(),
            stats: RunStats::default(),
            eval: vec![CellEval::default(); n + 2],
            face_flux: vec![0.0; n + 1],
            next: vec![0.0; n],
            limits: None,
        })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn bc(&self) -> (f64, f64) {
        self.bc
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn model(&self) -> &FluxModel {
        &self.model
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    /// `Σ u_j·dx` over the domain.
    pub fn mass(&self) -> f64 {
        self.u.iter().sum::<f64>() * self.grid.dx()
    }

    fn refresh(&mut self) -> DtLimits {
        if let Some(limits) = self.limits {
            return limits;
        }
        let n = self.grid.n_cells;
        let (model, u, bc) = (&self.model, &self.u, self.bc);
        par::fill_indexed(self.exec, &mut self.eval, |i| {
            let x = if i == 0 {
                bc.0
            } else if i == n + 1 {
                bc.1
            } else {
                u[i - 1]
            };
            let (f, df) = model.f_and_prime(x);
            CellEval {
                f,
                df,
                v: model.potential(x),
            }
        });
        let max_df = self.eval.iter().fold(0.0f64, |a, e| a.max(e.df.abs()));
        let min_u = self
            .u
            .iter()
            .fold(self.bc.0.min(self.bc.1), |a, &x| a.min(x));
        let limits = self.limits_from(max_df, min_u);
        self.limits = Some(limits);
        limits
    }

    fn limits_from(&self, max_df: f64, min_u: f64) -> DtLimits {
        let dx = self.grid.dx();
        let m = self.model.m();
        DtLimits {
            advective: if max_df > 0.0 {
                dx / max_df
            } else {
                f64::INFINITY
            },
            diffusive: dx * dx / (2.0 * self.model.mu() * m * min_u.powf(m - 1.0)),
        }
    }

    pub fn dt_limits(&mut self) -> DtLimits {
        self.refresh()
    }

    /// `0.4·min(dx / max|f'(u)|, dx² / (2μm·max u^{m−1}))` over cells and ghosts.
    pub fn stable_dt(&mut self) -> f64 {
        self.refresh().stable_dt()
    }

    /// One forward-Euler step of size `dt ≤ stable_dt`.
    pub fn step(&mut self, dt: f64) -> Result<StepReport> {
        let limits = self.refresh();
        let limit = limits.stable_dt();
        if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
            return Err(Error::CflViolation { dt, limit });
        }
        let n = self.grid.n_cells;
        let (mass_change, clip, boundary_flux) = if self.exec.is_parallel(n) {
            self.update_parallel(dt)?
        } else {
            self.update_fused(dt)?
        };
        let report = StepReport {
            dt_used: dt,
            cfl_adv: dt / limits.advective,
            cfl_diff: dt / limits.diffusive,
            mass_change,
            boundary_flux_integral: dt * boundary_flux,
            clip_mass: clip,
        };
        self.t += dt;
        let s = &mut self.stats;
        s.n_steps += 1;
        s.dt_min = s.dt_min.min(dt);
        s.dt_max = s.dt_max.max(dt);
        s.clip_total += clip;
        s.boundary_flux_total += report.boundary_flux_integral;
        s.max_cfl_adv = s.max_cfl_adv.max(report.cfl_adv);
        s.max_cfl_diff = s.max_cfl_diff.max(report.cfl_diff);
        Ok(report)
    }

    /// LLF plus centred `v`-diffusion flux through the face between `l` and `r`.
    #[inline]
    fn face(l: &CellEval, r: &CellEval, ul: f64, ur: f64, mu: f64, dx: f64) -> f64 {
        let a = l.df.abs().max(r.df.abs());
        0.5 * (l.f + r.f) - 0.5 * a * (ur - ul) - mu * (r.v - l.v) / dx
    }

    /// Applies the floor to `next[j]`; returns (new value, clipped mass).
    #[inline]
    fn floored(&mut self, j: usize, v: f64, dx: f64) -> Result<(f64, f64)> {
        if !v.is_finite() {
            return Err(Error::BlowUp { cell: j, t: self.t });
        }
        if v < self.floor {
            self.stats.clip_events += 1;
            return Ok((self.floor, (self.floor - v) * dx));
        }
        Ok((v, 0.0))
    }

    /// One sweep: face fluxes, update, floor, and the flux evaluation of the
    /// new values together with the next step's limits.
    fn update_fused(&mut self, dt: f64) -> Result<(f64, f64, f64)> {
        let n = self.grid.n_cells;
        let dx = self.grid.dx();
        let mu = self.model.mu();
        let ratio = dt / dx;
        let (ul, ur) = self.bc;
        let mut max_df = self.eval[0].df.abs().max(self.eval[n + 1].df.abs());
        let mut min_u = ul.min(ur);
        let mut mass_change = 0.0;
        let mut clip = 0.0;
        self.limits = None;

        let first_flux = Self::face(&self.eval[0], &self.eval[1], ul, self.u[0], mu, dx);
        let mut left_flux = first_flux;
        for j in 0..n {
            let old = self.u[j];
            let right_u = if j + 1 < n { self.u[j + 1] } else { ur };
            let right_flux = Self::face(&self.eval[j + 1], &self.eval[j + 2], old, right_u, mu, dx);
            let (v, c) = self.floored(j, old - ratio * (right_flux - left_flux), dx)?;
            clip += c;
            mass_change += (v - old) * dx;
            self.u[j] = v;
            let (f, df) = self.model.f_and_prime(v);
            self.eval[j + 1] = CellEval {
                f,
                df,
                v: self.model.potential(v),
            };
            max_df = max_df.max(df.abs());
            min_u = min_u.min(v);
            left_flux = right_flux;
        }
        self.limits = Some(self.limits_from(max_df, min_u));
        Ok((mass_change, clip, first_flux - left_flux))
    }

    fn update_parallel(&mut self, dt: f64) -> Result<(f64, f64, f64)> {
        let n = self.grid.n_cells;
        let dx = self.grid.dx();
        let mu = self.model.mu();
        {
            let (eval, u, bc) = (&self.eval, &self.u, self.bc);
            let ext = |i: usize| {
                if i == 0 {
                    bc.0
                } else if i == n + 1 {
                    bc.1
                } else {
                    u[i - 1]
                }
            };
            par::fill_indexed(self.exec, &mut self.face_flux, |i| {
                Self::face(&eval[i], &eval[i + 1], ext(i), ext(i + 1), mu, dx)
            });
        }
        let ratio = dt / dx;
        {
            let (u, flux) = (&self.u, &self.face_flux);
            par::fill_indexed(self.exec, &mut self.next, |j| {
                u[j] - ratio * (flux[j + 1] - flux[j])
            });
        }
        let mut mass_change = 0.0;
        let mut clip = 0.0;
        for j in 0..n {
            let (v, c) = self.floored(j, self.next[j], dx)?;
            clip += c;
            mass_change += (v - self.u[j]) * dx;
            self.u[j] = v;
        }
        self.limits = None;
        Ok((mass_change, clip, self.face_flux[0] - self.face_flux[n]))
    }

    /// Steps until `t_end`, landing exactly on every observation time
    /// `t₀ + k·cadence` and on `t_end`; `observer` runs at each of them.
    pub fn advance_to<F>(
        &mut self,
        t_end: f64,
        cadence: Option<f64>,
        mut observer: F,
    ) -> Result<Vec<f64>>
    where
        F: FnMut(&SolverState) -> Result<()>,
    {
        if !(t_end >= self.t) {
            return Err(Error::Usage(format!(
                "t_end = {t_end} precedes the current time {}",
                self.t
            )));
        }
        let t0 = self.t;
        let mut targets = Vec::new();
        if let Some(c) = cadence.filter(|c| *c > 0.0) {
            let eps = 1e-12 * t_end.abs().max(1.0);
            let mut k = 1u64;
            loop {
                let target = t0 + k as f64 * c;
                if target >= t_end - eps {
                    break;
                }
                targets.push(target);
                k += 1;
            }
        }
        targets.push(t_end);

        for &target in &targets {
            while self.t < target {
                let gap = target - self.t;
                let dt = self.stable_dt().min(gap);
                self.step(dt)?;
                if dt == gap {
                    self.t = target;
                }
            }
            observer(self)?;
        }
        Ok(targets)
    }

    /// Value at index `i` of the ghost-extended array (`0` and `n + 1` are ghosts).
    pub fn extended(&self, i: usize) -> f64 {
        if i == 0 {
            self.bc.0
        } else if i == self.grid.n_cells + 1 {
            self.bc.1
        } else {
            self.u[i - 1]
        }
    }
}
