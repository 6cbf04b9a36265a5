//! Traveling-wave profiles `U(ξ)`, `ξ = x − st`.
//!
//! The profile solves `U_ξ = h(U)` with `h(U) = U^{1−m} g(U) / (μm)`. It is
//! built in the `U` variable: `ξ(U) = ξ₀ + ∫_{u*}^{U} dτ / h(τ)` with
//! `u* = (u₊ + u₋)/2`, tabulated on nodes clustered geometrically toward
//! both end states and inverted by monotone cubic Hermite interpolation.
//! Outside the table the closed asymptotic tails take over:
//! `U ≈ A (ξ − ξ₀)^q` on the right and `U ≈ u₋ − B e^{λ(ξ − ξ₀)}` on the left.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::{classify, g_eval, FluxModel, ShockClassification};
use crate::quad;

/// `h(u) = u^{1−m} g(u) / (μm)`, the profile slope as a function of state.
#[inline]
pub fn h_eval(model: &FluxModel, s: f64, u: f64) -> f64 {
    let m = model.m();
    u.powf(1.0 - m) * g_eval(model, s, u) / (model.mu() * m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileOptions {
    /// Right stopping value of `U`; defaults to `1e-4·u₋`.
    pub u_tail_lo: Option<f64>,
    /// Left stopping distance `u₋ − U`; defaults to `1e-4·u₋`.
    pub u_tail_hi: Option<f64>,
    /// Table nodes per side.
    pub n_nodes: usize,
    /// Relative tolerance of each node-to-node quadrature.
    pub quad_tol: f64,
    /// Panel budget per node interval before giving up.
    pub quad_budget: usize,
    /// Position `ξ₀` where `U(ξ₀) = u*`.
    pub origin: f64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            u_tail_lo: None,
            u_tail_hi: None,
            n_nodes: 4096,
            quad_tol: 1e-10,
            quad_budget: 512,
            origin: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RightTail {
    pub a: f64,
    pub q: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeftTail {
    pub b: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug)]
pub struct ShockProfile {
    model: FluxModel,
    classification: ShockClassification,
    u_star: f64,
    origin: f64,
    xi: Vec<f64>,
    u: Vec<f64>,
    /// Hermite slopes after the monotonicity limiter.
    d: Vec<f64>,
    /// `∫_{xi[0]}^{xi[i]} U` of the interpolant.
    cum: Vec<f64>,
    right_tail: RightTail,
    left_tail: LeftTail,
}

/// Classifies `model` and builds its profile.
pub fn build_profile(model: &FluxModel, options: &ProfileOptions) -> Result<ShockProfile> {
    let classification = classify(model)?;
    build_profile_with(model, classification, options)
}

pub fn build_profile_with(
    model: &FluxModel,
    classification: ShockClassification,
    options: &ProfileOptions,
) -> Result<ShockProfile> {
    let um = model.u_minus();
    let up = model.u_plus();
    let quarter = 0.25 * (um - up);
    let lo = options.u_tail_lo.unwrap_or(1e-4 * um);
    let hi = options.u_tail_hi.unwrap_or(1e-4 * um);
    if !(lo > 0.0 && lo < quarter) || !(hi > 0.0 && hi < quarter) {
        return Err(Error::InvalidModel(format!(
            "tail thresholds ({lo}, {hi}) must lie in (0, {quarter})"
        )));
    }
    let n = options.n_nodes.max(16);
    let s = classification.speed;
    let u_star = 0.5 * (up + um);

    // Right branch: U from u* down to lo, geometric in U.
    let right_u: Vec<f64> = (0..=n)
        .map(|k| u_star * (lo / u_star).powf(k as f64 / n as f64))
        .collect();
    // Left branch: u₋ − U from u₋ − u* down to hi, geometric in the gap.
    let gap = um - u_star;
    let left_u: Vec<f64> = (0..=n)
        .map(|k| um - gap * (hi / gap).powf(k as f64 / n as f64))
        .collect();

    let right_xi = integrate_branch(model, s, &right_u, options)?;
    let left_xi = integrate_branch(model, s, &left_u, options)?;

    let mut xi = Vec::with_capacity(2 * n + 1);
    let mut u = Vec::with_capacity(2 * n + 1);
    for k in (1..=n).rev() {
        xi.push(options.origin + left_xi[k]);
        u.push(left_u[k]);
    }
    for k in 0..=n {
        xi.push(options.origin + right_xi[k]);
        u.push(right_u[k]);
    }
    if !xi.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::QuadratureFailure(
            "table abscissae are not strictly increasing".into(),
        ));
    }

    let mut d: Vec<f64> = u.iter().map(|&v| h_eval(model, s, v)).collect();
    limit_slopes(&xi, &u, &mut d);

    let mut cum = vec![0.0; xi.len()];
    for i in 1..xi.len() {
        let dx = xi[i] - xi[i - 1];
        cum[i] = cum[i - 1] + 0.5 * dx * (u[i - 1] + u[i]) + dx * dx * (d[i - 1] - d[i]) / 12.0;
    }

    let q = classification.right_tail_exponent;
    let z_right = xi[xi.len() - 1] - options.origin;
    let right_tail = RightTail {
        a: u[u.len() - 1] / z_right.powf(q),
        q,
    };
    let lambda = classification.lambda_minus;
    let z_left = xi[0] - options.origin;
    let left_tail = LeftTail {
        b: (um - u[0]) * (-lambda * z_left).exp(),
        lambda,
    };

    Ok(ShockProfile {
        model: model.clone(),
        classification,
        u_star,
        origin: options.origin,
        xi,
        u,
        d,
        cum,
        right_tail,
        left_tail,
    })
}

/// `ξ(U_k) − ξ(U_0)` for consecutive nodes `U_k`.
fn integrate_branch(
    model: &FluxModel,
    s: f64,
    nodes: &[f64],
    options: &ProfileOptions,
) -> Result<Vec<f64>> {
    let inv_h = |tau: f64| 1.0 / h_eval(model, s, tau);
    let mut xi = Vec::with_capacity(nodes.len());
    xi.push(0.0);
    for pair in nodes.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let hb = h_eval(model, s, b);
        if !(hb < 0.0) {
            return Err(Error::QuadratureFailure(format!(
                "h({b:.6e}) = {hb:.3e} is not negative inside (u+, u-)"
            )));
        }
        let (estimate, _) = quad::gk15(&inv_h, a, b);
        let tol = options.quad_tol * estimate.abs().max(1e-300);
        let step = quad::adaptive(&inv_h, a, b, tol, options.quad_budget).ok_or_else(|| {
            Error::QuadratureFailure(format!("refinement budget exhausted on [{a:.6e}, {b:.6e}]"))
        })?;
        xi.push(xi[xi.len() - 1] + step);
    }
    Ok(xi)
}

/// Fritsch–Carlson limiter: keeps every Hermite segment monotone.
fn limit_slopes(x: &[f64], y: &[f64], d: &mut [f64]) {
    for i in 0..x.len() - 1 {
        let delta = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        if delta == 0.0 {
            d[i] = 0.0;
            d[i + 1] = 0.0;
            continue;
        }
        let mut alpha = d[i] / delta;
        let mut beta = d[i + 1] / delta;
        if alpha < 0.0 {
            alpha = 0.0;
            d[i] = 0.0;
        }
        if beta < 0.0 {
            beta = 0.0;
            d[i + 1] = 0.0;
        }
        let r2 = alpha * alpha + beta * beta;
        if r2 > 9.0 {
            let tau = 3.0 / r2.sqrt();
            d[i] = tau * alpha * delta;
            d[i + 1] = tau * beta * delta;
        }
    }
}

impl ShockProfile {
    pub fn model(&self) -> &FluxModel {
        &self.model
    }

    pub fn classification(&self) -> &ShockClassification {
        &self.classification
    }

    pub fn speed(&self) -> f64 {
        self.classification.speed
    }

    pub fn u_star(&self) -> f64 {
        self.u_star
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn right_tail(&self) -> RightTail {
        self.right_tail
    }

    pub fn left_tail(&self) -> LeftTail {
        self.left_tail
    }

    /// Tabulated `(ξᵢ, Uᵢ)`, increasing in `ξ`.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xi.iter().copied().zip(self.u.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// `(ξ_left, ξ_right)`, the tabulated range.
    pub fn table_range(&self) -> (f64, f64) {
        (self.xi[0], self.xi[self.xi.len() - 1])
    }

    fn segment(&self, xi: f64) -> usize {
        let i = self.xi.partition_point(|&x| x <= xi);
        i.clamp(1, self.xi.len() - 1) - 1
    }

    /// `U(ξ)` anywhere on the real line.
    pub fn eval(&self, xi: f64) -> f64 {
        let (xl, xr) = self.table_range();
        if xi >= xr {
            let z = xi - self.origin;
            return self.right_tail.a * z.powf(self.right_tail.q);
        }
        if xi <= xl {
            let z = xi - self.origin;
            return self.model.u_minus() - self.left_tail.b * (self.left_tail.lambda * z).exp();
        }
        let i = self.segment(xi);
        let h = self.xi[i + 1] - self.xi[i];
        let t = (xi - self.xi[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.u[i]
            + (t3 - 2.0 * t2 + t) * h * self.d[i]
            + (-2.0 * t3 + 3.0 * t2) * self.u[i + 1]
            + (t3 - t2) * h * self.d[i + 1]
    }

    /// `U_ξ = h(U(ξ))`.
    pub fn slope(&self, xi: f64) -> f64 {
        h_eval(&self.model, self.speed(), self.eval(xi))
    }

    /// `∫_{xi[0]}^{x} U` for `x` inside the table.
    fn table_primitive(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xi[i + 1] - self.xi[i];
        let t = ((x - self.xi[i]) / h).clamp(0.0, 1.0);
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        self.cum[i]
            + h * (self.u[i] * (0.5 * t4 - t3 + t)
                + h * self.d[i] * (0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2)
                + self.u[i + 1] * (-0.5 * t4 + t3)
                + h * self.d[i + 1] * (0.25 * t4 - t3 / 3.0))
    }

    fn right_tail_integral(&self, a: f64, b: f64) -> f64 {
        let RightTail { a: amp, q } = self.right_tail;
        let (za, zb) = (a - self.origin, b - self.origin);
        if (q + 1.0).abs() < 1e-14 {
            amp * (zb / za).ln()
        } else {
            amp * (zb.powf(q + 1.0) - za.powf(q + 1.0)) / (q + 1.0)
        }
    }

    fn left_tail_integral(&self, a: f64, b: f64) -> f64 {
        let LeftTail { b: amp, lambda } = self.left_tail;
        let (za, zb) = (a - self.origin, b - self.origin);
        self.model.u_minus() * (b - a) - amp * ((lambda * zb).exp() - (lambda * za).exp()) / lambda
    }

    /// `∫_a^b U(ξ) dξ` for finite `a ≤ b`, exact for the piecewise evaluator.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b < a {
            return -self.integral(b, a);
        }
        let (xl, xr) = self.table_range();
        let mut total = 0.0;
        if a < xl {
            total += self.left_tail_integral(a, b.min(xl));
        }
        let (ta, tb) = (a.max(xl), b.min(xr));
        if ta < tb {
            total += self.table_primitive(tb) - self.table_primitive(ta);
        }
        if b > xr {
            total += self.right_tail_integral(a.max(xr), b);
        }
        total
    }

    /// `∫_x^∞ U`, or `None` when the right tail is not integrable (`q ≥ −1`).
    pub fn mass_right(&self, x: f64) -> Option<f64> {
        let q = self.right_tail.q;
        if q >= -1.0 {
            return None;
        }
        let xr = self.table_range().1;
        let start = x.max(xr);
        let z = start - self.origin;
        let tail = self.right_tail.a * z.powf(q + 1.0) / (-q - 1.0);
        Some(tail + if x < xr { self.integral(x, xr) } else { 0.0 })
    }

    /// `∫_{−∞}^x (u₋ − U)`.
    pub fn defect_left(&self, x: f64) -> f64 {
        let xl = self.table_range().0;
        let LeftTail { b, lambda } = self.left_tail;
        let end = x.min(xl);
        let tail = b * (lambda * (end - self.origin)).exp() / lambda;
        if x <= xl {
            tail
        } else {
            tail + self.model.u_minus() * (x - xl) - self.integral(xl, x)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayWindows {
    /// `[ξ_a, ξ_b]` on the algebraic (right) side.
    pub right: (f64, f64),
    /// `[ξ_a, ξ_b]` on the exponential (left) side.
    pub left: (f64, f64),
}

impl DecayWindows {
    /// Far quarter of the right table and far half of the left table.
    pub fn default_for(profile: &ShockProfile) -> Self {
        let (xl, xr) = profile.table_range();
        let o = profile.origin();
        DecayWindows {
            right: (o + 0.25 * (xr - o), xr),
            left: (xl, o + 0.5 * (xl - o)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub q_fit: f64,
    pub q_theory: f64,
    pub lambda_fit: f64,
    pub lambda_theory: f64,
    pub rel_err_q: f64,
    pub rel_err_lambda: f64,
    pub right_nodes: usize,
    pub left_nodes: usize,
    pub windows: DecayWindows,
}

/// Minimum table nodes inside each fit window.
pub const MIN_WINDOW_NODES: usize = 16;

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (sxy, sxx) = xs.iter().zip(ys).fold((0.0, 0.0), |(sxy, sxx), (&x, &y)| {
        (sxy + (x - mx) * (y - my), sxx + (x - mx) * (x - mx))
    });
    sxy / sxx
}

/// Fits the tail rates on table data only (never the tail formulas).
pub fn verify_decay(profile: &ShockProfile, windows: DecayWindows) -> Result<DecayReport> {
    let o = profile.origin();
    let um = profile.model().u_minus();
    let in_window = |(a, b): (f64, f64), x: f64| x >= a.min(b) && x <= a.max(b);

    let (rx, ry): (Vec<f64>, Vec<f64>) = profile
        .nodes()
        .filter(|&(x, _)| x > o && in_window(windows.right, x))
        .map(|(x, u)| ((x - o).ln(), u.ln()))
        .unzip();
    if rx.len() < MIN_WINDOW_NODES {
        return Err(Error::WindowTooNarrow {
            side: "right",
            nodes: rx.len(),
            required: MIN_WINDOW_NODES,
        });
    }
    let (lx, ly): (Vec<f64>, Vec<f64>) = profile
        .nodes()
        .filter(|&(x, _)| in_window(windows.left, x))
        .map(|(x, u)| (x, (um - u).ln()))
        .unzip();
    if lx.len() < MIN_WINDOW_NODES {
        return Err(Error::WindowTooNarrow {
            side: "left",
            nodes: lx.len(),
            required: MIN_WINDOW_NODES,
        });
    }

    let q_fit = ls_slope(&rx, &ry);
    let lambda_fit = ls_slope(&lx, &ly);
    let c = profile.classification();
    Ok(DecayReport {
        q_fit,
        q_theory: c.right_tail_exponent,
        lambda_fit,
        lambda_theory: c.lambda_minus,
        rel_err_q: ((q_fit - c.right_tail_exponent) / c.right_tail_exponent).abs(),
        rel_err_lambda: ((lambda_fit - c.lambda_minus) / c.lambda_minus).abs(),
        right_nodes: rx.len(),
        left_nodes: lx.len(),
        windows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1(m: f64) -> FluxModel {
        FluxModel::new(vec![(1.0, 2.0)], m, 1.0, 1.0).unwrap()
    }

    fn small_options() -> ProfileOptions {
        ProfileOptions {
            n_nodes: 512,
            ..ProfileOptions::default()
        }
    }

    #[test]
    fn h_vanishes_at_end_states() {
        let model = ex1(0.5);
        assert_eq!(h_eval(&model, 1.0, 0.0), 0.0);
        assert_eq!(h_eval(&model, 1.0, 1.0), 0.0);
        assert!((h_eval(&model, 1.0, 0.25) + 0.1875).abs() < 1e-15);
    }

    #[test]
    fn normalization_and_range() {
        let p = build_profile(&ex1(0.5), &small_options()).unwrap();
        assert_eq!(p.eval(0.0), 0.5);
        let far = p.eval(1e6);
        assert!(far > 0.0 && far < 1e-4);
        let near = p.eval(-5.0);
        assert!(near < 1.0 && near > 0.99);
        assert!(p.eval(-1e3) <= 1.0);
    }

    #[test]
    fn tails_are_continuous_with_table() {
        let p = build_profile(&ex1(0.3), &small_options()).unwrap();
        let (xl, xr) = p.table_range();
        let eps = 1e-9;
        assert!((p.eval(xr + eps) - p.eval(xr - eps)).abs() < 1e-6);
        assert!((p.eval(xl + eps) - p.eval(xl - eps)).abs() < 1e-6);
    }

    #[test]
    fn integral_matches_riemann_sum() {
        let p = build_profile(&ex1(0.5), &small_options()).unwrap();
        let (a, b) = (-30.0, 150.0);
        let n = 400_000;
        let dx = (b - a) / n as f64;
        let riemann: f64 = (0..n)
            .map(|j| p.eval(a + (j as f64 + 0.5) * dx))
            .sum::<f64>()
            * dx;
        assert!((p.integral(a, b) - riemann).abs() < 1e-7);
    }

    #[test]
    fn interior_sign_change_is_a_quadrature_failure() {
        // g changes sign inside (0, 1): classification must not be bypassed.
        let model = FluxModel::new(vec![(1.0, 2.0)], 0.5, 1.0, 1.0).unwrap();
        let mut c = classify(&model).unwrap();
        c.speed = 0.5;
        assert!(matches!(
            build_profile_with(&model, c, &small_options()),
            Err(Error::QuadratureFailure(_))
        ));
    }

    #[test]
    fn narrow_window_is_rejected() {
        let p = build_profile(&ex1(0.5), &small_options()).unwrap();
        let w = DecayWindows {
            right: (10.0, 10.001),
            left: (-5.0, -4.0),
        };
        assert!(matches!(
            verify_decay(&p, w),
            Err(Error::WindowTooNarrow { side: "right", .. })
        ));
    }

    #[test]
    fn ls_slope_of_a_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        assert!((ls_slope(&xs, &ys) - 2.0).abs() < 1e-15);
    }
}
