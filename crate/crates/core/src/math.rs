//! Scalar helpers shared by the closed forms and the simulator.

/// Below this value of `rate * t` the decay integral switches to its Taylor
/// branch.
pub const SMALL_RATE_TIME: f64 = 1e-8;

/// `(1 - e^{-rate t}) / rate`, i.e. `∫_0^t e^{-rate s} ds`, with the
/// analytic limit `t` as `rate -> 0`.
#[inline]
pub fn decay_integral(rate: f64, t: f64) -> f64 {
    let x = rate * t;
    if x.abs() < SMALL_RATE_TIME {
        t * (1.0 - 0.5 * x)
    } else {
        -libm::expm1(-x) / rate
    }
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

/// Euclidean norm.
pub fn norm(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|x| x * x).sum())
}

/// Sup norm of the difference of two equally long vectors.
pub fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| libm::fabs(a - b))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_integral_matches_closed_form() {
        let v = decay_integral(2.0, 0.5);
        assert!((v - (1.0 - (-1.0f64).exp()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn decay_integral_small_rate_branch() {
        assert_eq!(decay_integral(0.0, 3.0), 3.0);
        let v = decay_integral(1e-12, 2.0);
        assert!((v - 2.0).abs() < 1e-11);
        // the Taylor branch agrees with expm1 where it takes over
        let x = 0.99e-8;
        assert!((decay_integral(x, 1.0) + libm::expm1(-x) / x).abs() < 1e-15);
    }
}
