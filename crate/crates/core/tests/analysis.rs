mod common;

use std::sync::Arc;

use common::{example_model, simpson};
use fastshock::analysis::{
    bracket_plus, compute_n, derivative, max_slope, perturbation, phi_field, profile_w, sup_error,
    weighted_norm, zero_mass_shift, Frame, NKind, Weight, WeightExponents,
};
use fastshock::flux::classify;
use fastshock::initial::{AlgebraicExponentialData, InitialData};
use fastshock::profile::{build_profile, ProfileOptions, ShockProfile};
use fastshock::solver::{init_state, Grid1D, SolverState};
use proptest::prelude::*;

fn default_grid() -> Grid1D {
    Grid1D::new(-20.0, 60.0, 4000).unwrap()
}

fn profile(id: u8, m: f64) -> Arc<ShockProfile> {
    Arc::new(build_profile(&example_model(id, m), &ProfileOptions::default()).unwrap())
}

fn shifted_state(p: &Arc<ShockProfile>, a: f64, grid: Grid1D) -> (SolverState, InitialData) {
    let data = InitialData::Profile {
        profile: Arc::clone(p),
        shift: a,
    };
    (init_state(grid, &data, p.model()).unwrap(), data)
}

#[test]
fn exact_profile_data_has_zero_shift() {
    for (id, m) in [(1, 0.3), (2, 0.2), (3, 0.7), (4, 0.5)] {
        let p = profile(id, m);
        let (st, data) = shifted_state(&p, 0.0, default_grid());
        let z = zero_mass_shift(&st, &data, &p);
        assert!(z.x0.abs() < 1e-8, "example {id}: x0 = {}", z.x0);
    }
}

#[test]
fn translated_profile_data_recovers_the_translation() {
    for (id, m) in [(1, 0.3), (4, 0.5)] {
        let p = profile(id, m);
        for a in [-3.0, -1.0, 1.0, 3.0] {
            let (st, data) = shifted_state(&p, a, default_grid());
            let z = zero_mass_shift(&st, &data, &p);
            assert!(
                (z.x0 + a).abs() < 1e-6,
                "example {id}, a = {a}: x0 = {}",
                z.x0
            );
            assert!(z.dropped.is_empty());
        }
    }
}

#[test]
fn example_one_shift_matches_brute_force_quadrature() {
    let m = 0.5;
    let p = profile(1, m);
    let d = AlgebraicExponentialData::example(1, m, 1.0).unwrap();
    let data = InitialData::AlgebraicExponential(d);
    let st = init_state(default_grid(), &data, p.model()).unwrap();
    let z = zero_mass_shift(&st, &data, &p);

    // ∫(u₀ − U) on a wide window in pieces, plus the closed-form far tails:
    // u₀ − U ~ ½(x+1)^{-2} − A x^{-2} beyond the window.
    let diff = |x: f64| d.eval(x) - p.eval(x);
    let cuts = [-40.0, -5.0, 0.0, 5.0, 50.0, 500.0, 5000.0, 50000.0];
    let mut total: f64 = cuts
        .windows(2)
        .map(|w| simpson(diff, w[0], w[1], 200_000))
        .sum();
    let x_end = *cuts.last().unwrap();
    let tail = p.right_tail();
    total += 0.5 / (x_end + 1.0) - tail.a * x_end.powf(tail.q + 1.0) / (-tail.q - 1.0);
    let x0 = total / (0.0 - 1.0);
    assert!((z.x0 - x0).abs() < 1e-5, "x0 {} vs oracle {x0}", z.x0);
    assert!(z.dropped.is_empty());
}

#[test]
fn divergent_tails_are_reported() {
    let p = profile(4, 0.5);
    let data =
        InitialData::AlgebraicExponential(AlgebraicExponentialData::example(4, 0.5, 1.0).unwrap());
    let st = init_state(default_grid(), &data, p.model()).unwrap();
    let z = zero_mass_shift(&st, &data, &p);
    assert_eq!(z.dropped.len(), 1);
    assert!(z.x0.is_finite());
}

#[test]
fn phi_closes_the_zero_mass_balance() {
    let m = 0.5;
    let p = profile(1, m);
    let data =
        InitialData::AlgebraicExponential(AlgebraicExponentialData::example(1, m, 1.0).unwrap());
    let grid = default_grid();
    let st = init_state(grid, &data, p.model()).unwrap();
    let z = zero_mass_shift(&st, &data, &p);
    let frame = Frame::new(&p, 0.0, z.x0);
    let phi = phi_field(&st, &frame);
    let d = perturbation(&st, &frame);
    let n = phi.len();
    // φ(x_R) plus the defect beyond the last cell centre is the total defect.
    let x_r = grid.x_right;
    let beyond = data.mass_right(x_r).unwrap() - p.mass_right(x_r + z.x0).unwrap();
    let total = phi[n - 1] + 0.5 * grid.dx() * d[n - 1] + beyond;
    assert!(total.abs() < 1e-6, "total defect {total:e}");

    let back = derivative(&phi, grid.dx());
    for j in 1..n - 1 {
        let mid = 0.5 * (d[j - 1] + 2.0 * d[j] + d[j + 1]) / 2.0;
        assert!((back[j] - mid).abs() < 1e-12);
        assert!((back[j] - d[j]).abs() < 1e-3);
    }
}

#[test]
fn n_vanishes_on_the_wave() {
    for (id, m) in [(1, 0.3), (4, 0.5)] {
        let p = profile(id, m);
        let c = classify(p.model()).unwrap();
        let (st, _) = shifted_state(&p, 0.0, default_grid());
        let r = compute_n(&st, &Frame::new(&p, 0.0, 0.0), &c).unwrap();
        assert!(r.value < 1e-10);
        assert_eq!(r.kind, if id == 4 { NKind::N2 } else { NKind::N1 });
        assert!(sup_error(&st, &Frame::new(&p, 0.0, 0.0)) < 1e-6);
    }
}

#[test]
fn bracket_norm_converges_under_refinement() {
    let m = 0.5;
    let p = profile(1, m);
    let data =
        InitialData::AlgebraicExponential(AlgebraicExponentialData::example(1, m, 1.0).unwrap());
    let c = classify(p.model()).unwrap();
    let alpha2 = match WeightExponents::new(&c, m) {
        WeightExponents::NonDegenerate { alpha } => alpha[1],
        _ => unreachable!(),
    };
    let norm = |n: usize| {
        let st = init_state(Grid1D::new(-20.0, 60.0, n).unwrap(), &data, p.model()).unwrap();
        let z = zero_mass_shift(&st, &data, &p);
        let frame = Frame::new(&p, 0.0, z.x0);
        weighted_norm(
            &phi_field(&st, &frame),
            Weight::BracketPlus(alpha2),
            &st,
            &frame,
        )
        .unwrap()
    };
    let (coarse, fine) = (norm(4000), norm(64_000));
    assert!((coarse - fine).abs() / fine < 1e-3, "{coarse} vs {fine}");
}

#[test]
fn constant_data_error_is_the_profile_gap() {
    let p = profile(1, 0.5);
    let grid = default_grid();
    let st = init_state(grid, &InitialData::Constant(1.0), p.model()).unwrap();
    let frame = Frame::new(&p, 0.0, 0.0);
    let expect = 1.0 - p.eval(grid.center(grid.n_cells - 1));
    assert_eq!(sup_error(&st, &frame), expect);
    assert_eq!(max_slope(&st), 0.0);
}

/// `max/min` of `weight(U)/⟨ξ⟩₊^α` over the tabulated range.
fn spread(p: &ShockProfile, weight: impl Fn(f64) -> f64, alpha: f64) -> (f64, f64) {
    let ratios: Vec<f64> = p
        .nodes()
        .map(|(xi, u)| weight(u) / bracket_plus(xi, alpha))
        .collect();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    (lo, hi)
}

/// Bounded both ways, and settled to a constant in the far right tail.
#[test]
fn inverse_powers_of_u_match_bracket_weights() {
    let cap = 100.0;
    for (id, m) in [(1, 0.2), (1, 0.4), (1, 0.5), (2, 0.2), (2, 0.4), (2, 0.5)] {
        let p = profile(id, m);
        let c = classify(p.model()).unwrap();
        let WeightExponents::NonDegenerate { alpha } = WeightExponents::new(&c, m) else {
            unreachable!()
        };
        for (power, a) in [(2.0, alpha[0]), (2.0 * m, alpha[1])] {
            let (lo, hi) = spread(&p, |u| u.powf(-power), a);
            assert!(
                lo > 1.0 / cap && hi < cap,
                "example {id}, m = {m}, 1/U^{power}: [{lo}, {hi}]"
            );
            let (_, xr) = p.table_range();
            let r = |xi: f64| p.eval(xi).powf(-power) / bracket_plus(xi, a);
            assert!((r(xr) / r(0.5 * xr) - 1.0).abs() < 0.1);
        }
    }
}

#[test]
fn degenerate_weight_grows_like_bracket_power() {
    for (id, m) in [(3, 0.8), (3, 0.9), (4, 0.5)] {
        let p = profile(id, m);
        let c = classify(p.model()).unwrap();
        let WeightExponents::Degenerate { beta } = WeightExponents::new(&c, m) else {
            unreachable!()
        };
        let (_, xr) = p.table_range();
        let (a, b) = (0.5 * xr, xr);
        let w = |xi: f64| profile_w(&p, p.eval(xi));
        let slope =
            (w(b).ln() - w(a).ln()) / (bracket_plus(b, 1.0).ln() - bracket_plus(a, 1.0).ln());
        assert!(
            (slope - beta[1]).abs() / beta[1] < 0.1,
            "example {id}, m = {m}: {slope} vs {}",
            beta[1]
        );
        for (_, u) in p.nodes() {
            assert!(profile_w(&p, u) > 0.0);
        }
    }
}

#[test]
fn bracket_weight_shape() {
    assert_eq!(bracket_plus(-3.0, 2.5), 1.0);
    assert_eq!(bracket_plus(0.0, 2.5), 1.0);
    assert!((bracket_plus(2.0, 2.0) - 5.0).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norms_are_absolutely_homogeneous(c in -10.0f64..10.0, seed in 0u64..1000, alpha in 0.0f64..6.0) {
        use rand::{Rng, SeedableRng};
        let p = profile(1, 0.4);
        let grid = Grid1D::new(-10.0, 30.0, 200).unwrap();
        let st = init_state(grid, &InitialData::Constant(0.7), p.model()).unwrap();
        let frame = Frame::new(&p, 0.3, 0.1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<f64> = (0..grid.n_cells).map(|_| rng.random_range(-1.0..1.0)).collect();
        let cv: Vec<f64> = v.iter().map(|x| c * x).collect();
        for w in [Weight::BracketPlus(alpha), Weight::InverseU(0.8), Weight::ProfileW] {
            let a = weighted_norm(&cv, w, &st, &frame).unwrap();
            let b = c.abs() * weighted_norm(&v, w, &st, &frame).unwrap();
            prop_assert!((a - b).abs() <= 1e-13 * b.max(1e-300));
        }
        let zeros = vec![0.0; grid.n_cells];
        prop_assert_eq!(weighted_norm(&zeros, Weight::ProfileW, &st, &frame).unwrap(), 0.0);
    }

    #[test]
    fn bracket_weight_is_monotone(a in 0.0f64..50.0, b in 0.0f64..50.0, alpha in 0.0f64..8.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(bracket_plus(lo, alpha) <= bracket_plus(hi, alpha));
    }

    #[test]
    fn shift_is_covariant(a in -3.0f64..3.0) {
        let p = profile(2, 0.3);
        let (st, data) = shifted_state(&p, a, default_grid());
        let z = zero_mass_shift(&st, &data, &p);
        prop_assert!((z.x0 + a).abs() < 1e-6);
    }
}
