//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use alloc::vec::Vec;

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
    0.209_482_141_084_728,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-14,
            rel: 1e-12,
            max_intervals: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * half, libm::fabs((kron - gauss) * half))
}

/// Integrates `f` over `[a, b]` by global adaptive bisection, always
/// splitting the subinterval with the largest error estimate.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Integral {
    if a == b {
        return Integral {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        };
    }
    let (v, e) = kronrod(&mut f, a, b);
    let mut pieces: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    while err > tol.abs.max(tol.rel * libm::fabs(total)) && pieces.len() < tol.max_intervals {
        let (idx, _) =
            pieces.iter().enumerate().fold(
                (0, -1.0),
                |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best },
            );
        let (lo, hi, pv, pe) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval exhausted at machine resolution
            pieces.push((lo, hi, pv, 0.0));
            continue;
        }
        let (lv, le) = kronrod(&mut f, lo, mid);
        let (rv, re) = kronrod(&mut f, mid, hi);
        total += lv + rv - pv;
        err += le + re - pe;
        pieces.push((lo, mid, lv, le));
        pieces.push((mid, hi, rv, re));
    }
    // re-sum to shed accumulated cancellation in the running totals
    let value = pieces.iter().map(|p| p.2).sum();
    let error = pieces.iter().map(|p| p.3).sum();
    Integral {
        value,
        error,
        intervals: pieces.len(),
    }
}

/// Integrates over consecutive breakpoints, e.g. the jump times of a
/// piecewise-smooth integrand.
pub fn integrate_piecewise<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Integral {
    let mut out = Integral {
        value: 0.0,
        error: 0.0,
        intervals: 0,
    };
    for w in breakpoints.windows(2) {
        let r = integrate(&mut f, w[0], w[1], tol);
        out.value += r.value;
        out.error += r.error;
        out.intervals += r.intervals;
    }
    out
}
