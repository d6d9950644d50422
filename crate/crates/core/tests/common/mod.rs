#![allow(dead_code)]

use eigeninterval::hp_math::{big, inc_beta, reg_lower_gamma, Precision};

/// Adaptive Gauss-Kronrod (7/15) quadrature of `f` on `[a, b]` to relative
/// accuracy `rel`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    const XK: [f64; 8] = [
        0.991_455_371_120_812_6,
        0.949_107_912_342_758_5,
        0.864_864_423_359_769_1,
        0.741_531_185_599_394_4,
        0.586_087_235_467_691_1,
        0.405_845_151_377_397_2,
        0.207_784_955_007_898_5,
        0.0,
    ];
    const WK: [f64; 8] = [
        0.022_935_322_010_529_22,
        0.063_092_092_629_978_55,
        0.104_790_010_322_250_2,
        0.140_653_259_715_525_9,
        0.169_004_726_639_267_9,
        0.190_350_578_064_785_4,
        0.204_432_940_075_298_9,
        0.209_482_141_084_728_8,
    ];
    const WG: [f64; 4] = [
        0.129_484_966_168_869_7,
        0.279_705_391_489_276_7,
        0.381_830_050_505_118_9,
        0.417_959_183_673_469_4,
    ];
    fn gk(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let fc = f(c);
        let mut k = WK[7] * fc;
        let mut g = WG[3] * fc;
        for i in 0..7 {
            let x = h * XK[i];
            let s = f(c - x) + f(c + x);
            k += WK[i] * s;
            if i % 2 == 1 {
                g += WG[i / 2] * s;
            }
        }
        (k * h, (k - g).abs() * h)
    }
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, e) = gk(f, a, b);
        if e <= tol || depth >= 18 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol / 2.0, depth + 1) + rec(f, m, b, tol / 2.0, depth + 1)
    }
    let (whole, _) = gk(f, a, b);
    rec(f, a, b, (rel * whole.abs()).max(1e-300), 0)
}

pub fn p_lower(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    reg_lower_gamma(&big(160, a), &big(160, x), Precision::new(160).unwrap())
        .unwrap()
        .to_f64()
}

/// Unregularized `int_x^y t^{a-1} (1-t)^{b-1} dt`.
pub fn beta_between(x: f64, y: f64, a: f64, b: f64) -> f64 {
    inc_beta(&big(160, x), &big(160, y), &big(160, a), &big(160, b), Precision::new(160).unwrap())
        .unwrap()
        .to_f64()
}

pub fn ln_gamma(x: f64) -> f64 {
    big(128, x).ln_gamma().to_f64()
}

pub fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs()
}

/// `psi` of the GOE on `(-inf, 0]` for n = 1..5, in closed form.
pub fn goe_negative_closed_forms() -> [f64; 5] {
    use std::f64::consts::{PI, SQRT_2 as S2};
    [
        0.5,
        (2.0 - S2) / 4.0,
        (PI - 2.0 * S2) / (4.0 * PI),
        (0.5 * (9.0 - 4.0 * S2)).sqrt() * (-16.0 - 4.0 * S2 + 7.0 * PI) / (56.0 * PI),
        (-8.0 - S2 + 3.0 * PI) / (24.0 * PI),
    ]
}

pub mod kernels;
