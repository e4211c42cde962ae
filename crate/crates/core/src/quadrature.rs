//! Adaptive Gauss-Kronrod (7-15) quadrature on finite intervals.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Kronrod estimate on `[a, b]` and `|K15 - G7|` as its error.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// Bisects subintervals until each meets its length-proportional share of `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    const MAX_INTERVALS: usize = 20_000;
    if !(tol > 0.0) {
        return Err(Error::Validation(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let length = (b - a).abs();
    let mut stack = vec![(a, b)];
    let mut value = 0.0;
    let mut error = 0.0;
    let mut intervals = 0;
    while let Some((lo, hi)) = stack.pop() {
        let (v, e) = gauss_kronrod_15(f, lo, hi);
        let share = tol * (hi - lo).abs() / length;
        let mid = 0.5 * (lo + hi);
        if e <= share || mid <= lo.min(hi) || mid >= lo.max(hi) {
            value += v;
            error += e;
            intervals += 1;
            if intervals > MAX_INTERVALS {
                return Err(Error::NumericFailure {
                    context: "adaptive quadrature".into(),
                    iterations: intervals,
                    residual: error,
                });
            }
        } else {
            stack.push((mid, hi));
            stack.push((lo, mid));
        }
        if !v.is_finite() {
            return Err(Error::NumericFailure {
                context: format!("non-finite integrand on [{lo}, {hi}]"),
                iterations: intervals,
                residual: f64::INFINITY,
            });
        }
    }
    Ok(QuadResult {
        value,
        error,
        intervals,
    })
}
