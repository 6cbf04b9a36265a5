//! Initial data `u₀(x)` with known far-field behaviour.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::profile::ShockProfile;

/// `u₀(x) = u₋·½(a x + 1)^{−r}` for `x ≥ 0` and `u₋(1 − ½e^{κx})` for `x < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicExponentialData {
    pub u_minus: f64,
    pub a: f64,
    pub r: f64,
    pub kappa: f64,
}

impl AlgebraicExponentialData {
    /// Initial data of the four reference examples (`μ = 1`).
    ///
    /// Example 1 `f = u²`, 2 `f = 2u^{3+2m} − u^{1+2m}`, 3 `f = u^{2+2m} − u^{2m}`,
    /// 4 `f = u³ − u²` (with `m = ½`).
    pub fn example(id: u8, m: f64, u_minus: f64) -> Option<Self> {
        let (a, r, kappa) = match id {
            1 => ((1.0 - m) / m, 1.0 / (1.0 - m), 1.0 / m),
            2 => (
                (4.0 + 2.0 * m) * (1.0 - m) / m,
                1.0 / (1.0 - m),
                (4.0 + 2.0 * m) / m,
            ),
            3 => ((4.0 - 2.0 * m) / m, 1.0 / (2.0 - m), 2.0 / m),
            4 => (3.0, 2.0 / 3.0, 2.0),
            _ => return None,
        };
        Some(AlgebraicExponentialData {
            u_minus,
            a,
            r,
            kappa,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x >= 0.0 {
            0.5 * self.u_minus * (self.a * x + 1.0).powf(-self.r)
        } else {
            self.u_minus * (1.0 - 0.5 * (self.kappa * x).exp())
        }
    }
}

#[derive(Clone, Debug)]
pub enum InitialData {
    Constant(f64),
    AlgebraicExponential(AlgebraicExponentialData),
    /// `u₀(x) = U(x − shift)`.
    Profile {
        profile: Arc<ShockProfile>,
        shift: f64,
    },
}

impl InitialData {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            InitialData::Constant(c) => *c,
            InitialData::AlgebraicExponential(d) => d.eval(x),
            InitialData::Profile { profile, shift } => profile.eval(x - shift),
        }
    }

    /// `∫_{−∞}^{x} (u₋ − u₀)`, `None` when divergent.
    pub fn defect_left(&self, x: f64, u_minus: f64) -> Option<f64> {
        match self {
            InitialData::Constant(c) => (*c == u_minus).then_some(0.0),
            InitialData::AlgebraicExponential(d) => {
                if x > 0.0 || d.u_minus != u_minus {
                    return None;
                }
                Some(0.5 * d.u_minus * (d.kappa * x).exp() / d.kappa)
            }
            InitialData::Profile { profile, shift } => Some(profile.defect_left(x - shift)),
        }
    }

    /// `∫_{x}^{∞} u₀`, `None` when divergent.
    pub fn mass_right(&self, x: f64) -> Option<f64> {
        match self {
            InitialData::Constant(c) => (*c == 0.0).then_some(0.0),
            InitialData::AlgebraicExponential(d) => {
                if x < 0.0 || d.r <= 1.0 {
                    return None;
                }
                Some(0.5 * d.u_minus * (d.a * x + 1.0).powf(1.0 - d.r) / (d.a * (d.r - 1.0)))
            }
            InitialData::Profile { profile, shift } => profile.mass_right(x - shift),
        }
    }
}
