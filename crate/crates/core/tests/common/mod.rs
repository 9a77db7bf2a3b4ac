#![allow(dead_code)]

use ou_levy_core::levy::{JumpLaw, LevyConfig};
use ou_levy_core::SpectralModel;

/// Adaptive Simpson with Richardson extrapolation. Deliberately unrelated
/// to the Gauss–Kronrod rule used inside the crate.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

pub fn simpson_piecewise<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], tol: f64) -> f64 {
    breaks.windows(2).map(|w| simpson(f, w[0], w[1], tol)).sum()
}

/// Drift and Gaussian jump scales used with M1 throughout the tests.
pub fn m1_levy(dim: usize, rate: f64) -> LevyConfig {
    LevyConfig {
        drift: (1..=dim).map(|n| 1.0 / n as f64).collect(),
        gaussian: true,
        rate,
        jump_law: JumpLaw::DiagonalGaussian {
            sigma: (1..=dim).map(|n| 1.0 / n as f64).collect(),
        },
    }
}

pub fn m1() -> SpectralModel {
    SpectralModel::m1(8)
}
