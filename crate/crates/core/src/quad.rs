//! Adaptive Gauss–Kronrod (7, 15) quadrature.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One G7/K15 panel: `(kronrod estimate, |kronrod − gauss|)`.
pub(crate) fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Integrates `f` over `[a, b]` by recursive bisection until the local error
/// estimate drops below `tol` (absolute, split between halves). Returns
/// `None` if `budget` panels are exhausted or a non-finite value appears.
pub(crate) fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> Option<f64> {
    let mut remaining = budget;
    let (value, err) = gk15(f, a, b);
    recurse(f, a, b, value, err, tol, &mut remaining, 0)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    tol: f64,
    remaining: &mut usize,
    depth: u32,
) -> Option<f64> {
    if !value.is_finite() {
        return None;
    }
    if err <= tol.max(1e-15 * value.abs()) {
        return Some(value);
    }
    if *remaining < 2 || depth > 60 {
        return None;
    }
    *remaining -= 2;
    let mid = 0.5 * (a + b);
    let (lv, le) = gk15(f, a, mid);
    let (rv, re) = gk15(f, mid, b);
    let left = recurse(f, a, mid, lv, le, 0.5 * tol, remaining, depth + 1)?;
    let right = recurse(f, mid, b, rv, re, 0.5 * tol, remaining, depth + 1)?;
    Some(left + right)
}
