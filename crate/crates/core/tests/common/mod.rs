#![allow(dead_code)]

use fastshock::flux::FluxModel;

/// Closed-form flux of reference example `id` (μ = 1, u₋ = 1).
pub fn example_flux(id: u8, m: f64) -> impl Fn(f64) -> f64 {
    move |u: f64| match id {
        1 => u * u,
        2 => 2.0 * u.powf(3.0 + 2.0 * m) - u.powf(1.0 + 2.0 * m),
        3 => u.powf(2.0 + 2.0 * m) - u.powf(2.0 * m),
        _ => u * u * u - u * u,
    }
}

pub fn example_model(id: u8, m: f64) -> FluxModel {
    let terms = match id {
        1 => vec![(1.0, 2.0)],
        2 => vec![(2.0, 3.0 + 2.0 * m), (-1.0, 1.0 + 2.0 * m)],
        3 => vec![(1.0, 2.0 + 2.0 * m), (-1.0, 2.0 * m)],
        _ => vec![(1.0, 3.0), (-1.0, 2.0)],
    };
    FluxModel::new(terms, m, 1.0, 1.0).unwrap()
}

/// `U' = U^{1−m}(f(U) − f(0) − sU)/m` with `s = f(1) − f(0)`, written out
/// from the flux alone.
pub fn example_rhs(id: u8, m: f64) -> impl Fn(f64) -> f64 {
    let f = example_flux(id, m);
    let f0 = f(0.0);
    let s = f(1.0) - f0;
    move |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        u.powf(1.0 - m) * (f(u) - f0 - s * u) / m
    }
}

/// Dormand–Prince 5(4) for the autonomous scalar ODE `y' = rhs(y)` from
/// `(0, y0)` to `x_end`; returns every accepted `(x, y)`.
pub fn dopri45<F: Fn(f64) -> f64>(
    rhs: F,
    y0: f64,
    x_end: f64,
    rtol: f64,
    atol: f64,
) -> Vec<(f64, f64)> {
    const C: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let dir = x_end.signum();
    let mut x = 0.0;
    let mut y = y0;
    let mut h = 1e-3 * dir;
    let mut out = vec![(x, y)];
    let mut k = [0.0; 7];
    k[0] = rhs(y);
    while (x_end - x) * dir > 0.0 {
        if (x + h - x_end) * dir > 0.0 {
            h = x_end - x;
        }
        for i in 0..6 {
            let yi = y + h * (0..=i).map(|j| C[i][j] * k[j]).sum::<f64>();
            k[i + 1] = rhs(yi);
        }
        let y_new = y + h * (0..6).map(|j| C[5][j] * k[j]).sum::<f64>();
        let err = (h * (0..7).map(|j| E[j] * k[j]).sum::<f64>()).abs();
        let scale = atol + rtol * y.abs().max(y_new.abs());
        let ratio = err / scale;
        if ratio <= 1.0 {
            x += h;
            y = y_new;
            k[0] = k[6];
            out.push((x, y));
        }
        let factor = if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    out
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Closed-form `K''` of example 1.
pub fn k2_example_one(m: f64, u: f64) -> f64 {
    2.0 * (1.0 - m) * (1.0 - 2.0 * m) * u.powf(-2.0 * m)
        + 2.0 * m * (1.0 - 2.0 * m) * u.powf(-2.0 * m - 1.0)
}

pub fn k2_example_two(m: f64, u: f64) -> f64 {
    12.0 * u + 2.0 * m * (1.0 - 2.0 * m) * u.powf(-2.0 * m - 1.0)
}

/// Central second difference of `K = g/u^{2m}` built straight from the flux.
pub fn k2_finite_difference(id: u8, m: f64, u: f64) -> f64 {
    let f = example_flux(id, m);
    let s = f(1.0) - f(0.0);
    let k = |v: f64| (f(v) - f(0.0) - s * v) / v.powf(2.0 * m);
    let h = 1e-4 * u;
    (k(u + h) - 2.0 * k(u) + k(u - h)) / (h * h)
}
