//! Viscous shock waves of Burgers' equation with singular fast diffusion,
//!
//! ```text
//! u_t + f(u)_x = μ (u^m)_xx,   0 < m < 1,   u₋ > u₊ = 0.
//! ```
//!
//! The crate classifies shocks for power-sum fluxes ([`flux`]), builds the
//! traveling-wave profile by quadrature ([`profile`]), integrates the Cauchy
//! problem with a positivity-preserving explicit finite-volume scheme
//! ([`solver`]), measures weighted stability diagnostics against the shifted
//! wave ([`analysis`]) and wires everything into reproducible experiments
//! ([`harness`]).

// `!(a < b)` is used on purpose to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod flux;
pub mod harness;
pub mod initial;
pub mod par;
pub mod profile;
mod quad;
pub mod solver;

pub use error::{Error, Result};
pub use flux::{FluxModel, ShockClassification, ShockKind};
pub use par::Exec;
pub use profile::{build_profile, ProfileOptions, ShockProfile};
pub use solver::{init_state, Grid1D, SolverState};
