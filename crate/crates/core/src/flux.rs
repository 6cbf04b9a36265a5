//! Power-sum flux functions and the algebraic shock conditions.
//!
//! The flux is `f(u) = Σ cᵢ u^{pᵢ}` with real exponents `pᵢ ≥ 0`. The right
//! state is pinned at `u₊ = 0`, where the fast diffusion `μ (u^m)_xx` is
//! singular, and the left state is `u₋ > 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Integer exponents up to this value are evaluated with `powi`.
const MAX_POWI: f64 = 16.0;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Power {
    Zero,
    Int(i32),
    Half,
    Real(f64),
}

impl Power {
    fn new(p: f64) -> Self {
        if p == 0.0 {
            Power::Zero
        } else if p.fract() == 0.0 && p <= MAX_POWI {
            Power::Int(p as i32)
        } else if p == 0.5 {
            Power::Half
        } else {
            Power::Real(p)
        }
    }

    #[inline]
    fn eval(self, u: f64) -> f64 {
        match self {
            Power::Zero => 1.0,
            Power::Int(1) => u,
            Power::Int(2) => u * u,
            Power::Int(3) => u * u * u,
            Power::Int(k) => u.powi(k),
            Power::Half => u.sqrt(),
            Power::Real(p) => u.powf(p),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Term {
    coef: f64,
    exp: f64,
    pow: Power,
    /// Power for the derivative, `u^{p-1}`.
    dpow: Power,
}

impl Term {
    fn new(coef: f64, exp: f64) -> Self {
        Term {
            coef,
            exp,
            pow: Power::new(exp),
            dpow: if exp == 0.0 {
                Power::Zero
            } else {
                Power::new(exp - 1.0)
            },
        }
    }
}

/// Wire form of a [`FluxModel`]: `{"terms": [[c, p], ...], "m", "mu", "u_minus"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxSpec {
    pub terms: Vec<(f64, f64)>,
    pub m: f64,
    #[serde(default = "default_one")]
    pub mu: f64,
    #[serde(default = "default_one")]
    pub u_minus: f64,
}

fn default_one() -> f64 {
    1.0
}

/// Flux `f`, fast-diffusion index `m`, viscosity `μ` and end states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FluxSpec", into = "FluxSpec")]
pub struct FluxModel {
    terms: Vec<Term>,
    m: f64,
    m_pow: Power,
    mu: f64,
    u_minus: f64,
}

impl TryFrom<FluxSpec> for FluxModel {
    type Error = Error;

    fn try_from(spec: FluxSpec) -> Result<Self> {
        FluxModel::new(spec.terms, spec.m, spec.mu, spec.u_minus)
    }
}

impl From<FluxModel> for FluxSpec {
    fn from(model: FluxModel) -> Self {
        FluxSpec {
            terms: model.terms(),
            m: model.m,
            mu: model.mu,
            u_minus: model.u_minus,
        }
    }
}

impl FluxModel {
    pub fn new(terms: Vec<(f64, f64)>, m: f64, mu: f64, u_minus: f64) -> Result<Self> {
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::InvalidModel(format!("m = {m} must lie in (0, 1)")));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidModel(format!("mu = {mu} must be positive")));
        }
        if !(u_minus > 0.0 && u_minus.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "u_minus = {u_minus} must be positive"
            )));
        }
        if terms.is_empty() {
            return Err(Error::InvalidModel("flux needs at least one term".into()));
        }
        for &(c, p) in &terms {
            if !c.is_finite() || !(p >= 0.0 && p.is_finite()) {
                return Err(Error::InvalidModel(format!(
                    "term ({c}, {p}) needs a finite coefficient and exponent >= 0"
                )));
            }
        }
        Ok(FluxModel {
            terms: terms.into_iter().map(|(c, p)| Term::new(c, p)).collect(),
            m,
            m_pow: Power::new(m),
            mu,
            u_minus,
        })
    }

    pub fn terms(&self) -> Vec<(f64, f64)> {
        self.terms.iter().map(|t| (t.coef, t.exp)).collect()
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn u_minus(&self) -> f64 {
        self.u_minus
    }

    pub fn u_plus(&self) -> f64 {
        0.0
    }

    /// Diffusion potential `v = u^m`.
    #[inline]
    pub fn potential(&self, u: f64) -> f64 {
        self.m_pow.eval(u)
    }

    /// `f(u)`. At `u = 0` this is the limit: the sum of the constant terms.
    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        self.terms.iter().map(|t| t.coef * t.pow.eval(u)).sum()
    }

    /// `f'(u)`. At `u = 0` terms with `0 < p < 1` give `±∞`.
    #[inline]
    pub fn f_prime(&self, u: f64) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.exp != 0.0)
            .map(|t| t.coef * t.exp * t.dpow.eval(u))
            .sum()
    }

    pub fn f_second(&self, u: f64) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.exp != 0.0 && t.exp != 1.0)
            .map(|t| t.coef * t.exp * (t.exp - 1.0) * u.powf(t.exp - 2.0))
            .sum()
    }

    /// `(f(u), f'(u))` in one pass; the solver's inner loop.
    #[inline]
    pub fn f_and_prime(&self, u: f64) -> (f64, f64) {
        let mut f = 0.0;
        let mut df = 0.0;
        for t in &self.terms {
            f += t.coef * t.pow.eval(u);
            if t.exp != 0.0 {
                df += t.coef * t.exp * t.dpow.eval(u);
            }
        }
        (f, df)
    }

    /// `f'(u₊)` taken as the one-sided limit at zero.
    pub fn f_prime_plus(&self) -> f64 {
        self.f_prime(0.0)
    }

    /// Same flux with `c·u` added.
    pub fn with_linear_term(&self, c: f64) -> Self {
        let mut terms = self.terms();
        terms.push((c, 1.0));
        FluxModel::new(terms, self.m, self.mu, self.u_minus).expect("valid base model")
    }
}

/// Rankine–Hugoniot speed `s = (f(u₊) − f(u₋)) / (u₊ − u₋)`.
pub fn shock_speed(model: &FluxModel) -> f64 {
    let up = model.u_plus();
    let um = model.u_minus();
    (model.f(up) - model.f(um)) / (up - um)
}

/// `g(u) = −s(u − u₊) + f(u) − f(u₊)`.
#[inline]
pub fn g_eval(model: &FluxModel, s: f64, u: f64) -> f64 {
    let up = model.u_plus();
    -s * (u - up) + model.f(u) - model.f(up)
}

/// The same function written relative to `u₋`; agrees with [`g_eval`] when
/// `s` is the Rankine–Hugoniot speed.
pub fn g_eval_minus(model: &FluxModel, s: f64, u: f64) -> f64 {
    let um = model.u_minus();
    -s * (u - um) + model.f(u) - model.f(um)
}

/// Interior sample points of `(0, u₋)`: a uniform grid of `n` points plus
/// geometric refinement toward both ends down to `floor_rel·u₋`.
pub(crate) fn interior_samples(u_minus: f64, n: usize, floor_rel: f64) -> Vec<f64> {
    let mut out: Vec<f64> = (1..=n)
        .map(|k| u_minus * k as f64 / (n + 1) as f64)
        .collect();
    let levels = (floor_rel.log2().abs().ceil() as i32).max(1);
    for j in 1..=levels {
        let d = u_minus * 2f64.powi(-j);
        if d < u_minus * floor_rel {
            break;
        }
        out.push(d);
        out.push(u_minus - d);
    }
    out.push(u_minus * floor_rel);
    out.push(u_minus * (1.0 - floor_rel));
    out.retain(|&u| u > 0.0 && u < u_minus);
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub holds: bool,
    pub worst_u: f64,
    pub worst_g: f64,
}

/// Samples `g` on `(u₊, u₋)` and reports the largest value found.
pub fn check_entropy(model: &FluxModel, s: f64, n_samples: usize, exec: Exec) -> EntropyReport {
    let samples = interior_samples(model.u_minus(), n_samples.max(100), 1e-8);
    let values = par::map(exec, &samples, |&u| g_eval(model, s, u));
    let (worst_u, worst_g) =
        samples
            .iter()
            .zip(&values)
            .fold((f64::NAN, f64::NEG_INFINITY), |acc, (&u, &g)| {
                if g > acc.1 || g.is_nan() {
                    (u, g)
                } else {
                    acc
                }
            });
    EntropyReport {
        holds: worst_g < 0.0,
        worst_u,
        worst_g,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShockKind {
    NonDegenerate,
    DegeneratePlus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShockClassification {
    pub speed: f64,
    pub kind: ShockKind,
    /// Effective order of degeneracy at `u₊`, present for `DegeneratePlus`.
    pub k_eff: Option<f64>,
    pub lambda_minus: f64,
    pub right_tail_exponent: f64,
}

impl ShockClassification {
    pub fn is_degenerate(&self) -> bool {
        self.kind == ShockKind::DegeneratePlus
    }
}

/// Relative tolerance separating Lax shocks from `s = f'(u₊)`.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Vanishing order `p` of `|g|` at `u₊`, averaged from doubling ratios at
/// `ε ∈ {1e-4, 1e-5, 1e-6}·u₋`.
pub fn vanishing_order(model: &FluxModel, s: f64) -> f64 {
    let um = model.u_minus();
    let slopes: Vec<f64> = [1e-4, 1e-5, 1e-6]
        .iter()
        .map(|&r| {
            let eps = r * um;
            let lo = g_eval(model, s, eps).abs();
            let hi = g_eval(model, s, 2.0 * eps).abs();
            (hi.ln() - lo.ln()) / std::f64::consts::LN_2
        })
        .collect();
    slopes.iter().sum::<f64>() / slopes.len() as f64
}

pub fn classify(model: &FluxModel) -> Result<ShockClassification> {
    let s = shock_speed(model);
    let entropy = check_entropy(model, s, 1000, Exec::Auto);
    if !entropy.holds {
        return Err(Error::InvalidShock {
            worst_u: entropy.worst_u,
            worst_g: entropy.worst_g,
        });
    }
    let fp_plus = model.f_prime_plus();
    let fp_minus = model.f_prime(model.u_minus());
    let tol = DEGENERACY_TOL * fp_minus.abs().max(1.0);
    if fp_minus - s <= tol {
        return Err(Error::DegenerateMinus);
    }
    let m = model.m();
    let lambda_minus = model.u_minus().powf(1.0 - m) * (fp_minus - s) / (model.mu() * m);

    if (s - fp_plus).abs() <= tol {
        let k_eff = vanishing_order(model, s) - 1.0;
        if !(k_eff > 0.0 && k_eff.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "degenerate shock with non-positive effective order {k_eff}"
            )));
        }
        Ok(ShockClassification {
            speed: s,
            kind: ShockKind::DegeneratePlus,
            k_eff: Some(k_eff),
            lambda_minus,
            right_tail_exponent: -1.0 / (k_eff + 1.0 - m),
        })
    } else if fp_plus < s {
        Ok(ShockClassification {
            speed: s,
            kind: ShockKind::NonDegenerate,
            k_eff: None,
            lambda_minus,
            right_tail_exponent: -1.0 / (1.0 - m),
        })
    } else {
        Err(Error::InvalidShock {
            worst_u: 0.0,
            worst_g: fp_plus - s,
        })
    }
}

/// `K(u) = g(u)/u^{2m}` kept as a power sum `Σ aᵢ u^{eᵢ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KFunction {
    terms: Vec<(f64, f64)>,
}

impl KFunction {
    pub fn new(model: &FluxModel, s: f64) -> Self {
        let two_m = 2.0 * model.m();
        let mut raw: Vec<(f64, f64)> = model
            .terms()
            .into_iter()
            .filter(|&(_, p)| p != 0.0)
            .map(|(c, p)| (c, p - two_m))
            .collect();
        raw.push((-s, 1.0 - two_m));
        let mut terms: Vec<(f64, f64)> = Vec::new();
        for (c, e) in raw {
            match terms.iter_mut().find(|(_, e2)| (e - *e2).abs() < 1e-14) {
                Some(slot) => slot.0 += c,
                None => terms.push((c, e)),
            }
        }
        terms.sort_by(|a, b| a.1.total_cmp(&b.1));
        KFunction { terms }
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.terms.iter().map(|&(a, e)| a * u.powf(e)).sum()
    }

    /// `(K''(u), Σ|termᵢ|)`; the second entry scales the tolerance.
    pub fn second_derivative(&self, u: f64) -> (f64, f64) {
        self.terms.iter().fold((0.0, 0.0), |(sum, scale), &(a, e)| {
            let v = a * e * (e - 1.0) * u.powf(e - 2.0);
            (sum + v, scale + v.abs())
        })
    }

    /// Coefficient and exponent of the most singular non-vanishing term of
    /// `K''` at `u → 0⁺`, if `K''` is singular there.
    pub fn leading_singular_term(&self) -> Option<(f64, f64)> {
        self.terms
            .iter()
            .map(|&(a, e)| (a * e * (e - 1.0), e - 2.0))
            .filter(|&(c, p)| c != 0.0 && p < 0.0)
            .min_by(|x, y| x.1.total_cmp(&y.1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub holds: bool,
    pub min_k2: f64,
    pub argmin: f64,
    /// Sign check of the dominant `u → 0⁺` term of `K''`.
    pub singular_term_ok: bool,
}

/// Sampled check of `K''(u) ≥ 0` on `(u₊, u₋)` using the analytic
/// term-by-term second derivative.
pub fn check_k_convexity(
    model: &FluxModel,
    s: f64,
    n_samples: usize,
    exec: Exec,
) -> ConvexityReport {
    let k = KFunction::new(model, s);
    let samples = interior_samples(model.u_minus(), n_samples.max(100), 1e-8);
    let values = par::map(exec, &samples, |&u| k.second_derivative(u));
    let mut min_k2 = f64::INFINITY;
    let mut argmin = f64::NAN;
    let mut sampled_ok = true;
    for (&u, &(k2, scale)) in samples.iter().zip(&values) {
        if k2 < min_k2 {
            min_k2 = k2;
            argmin = u;
        }
        if k2 < -1e-12 * scale || k2.is_nan() {
            sampled_ok = false;
        }
    }
    let singular_term_ok = k.leading_singular_term().is_none_or(|(coef, _)| coef > 0.0);
    ConvexityReport {
        holds: sampled_ok && singular_term_ok,
        min_k2,
        argmin,
        singular_term_ok,
    }
}
