//! Running moments and Monte Carlo summaries.

use serde::{Deserialize, Serialize};

use crate::math::sqrt;

/// Welford accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Running {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Running {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            sqrt(self.variance() / self.count as f64)
        }
    }

    pub fn estimate(&self) -> Estimate {
        Estimate {
            mean: self.mean(),
            se: self.std_error(),
        }
    }
}

impl FromIterator<f64> for Running {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut r = Running::new();
        for x in iter {
            r.push(x);
        }
        r
    }
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    /// Number of standard errors separating the mean from `target`.
    pub fn z_against(&self, target: f64) -> f64 {
        (self.mean - target) / self.se
    }
}

/// z-score of the difference of two independent estimates.
pub fn two_sample_z(x: Estimate, y: Estimate) -> f64 {
    let se = sqrt(x.se * x.se + y.se * y.se);
    if se == 0.0 {
        if x.mean == y.mean {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (x.mean - y.mean) / se
    }
}

/// Kish effective sample size `(Σw)² / Σw²`.
pub fn effective_sample_size(weights: &[f64]) -> f64 {
    let s: f64 = weights.iter().sum();
    let s2: f64 = weights.iter().map(|w| w * w).sum();
    if s2 == 0.0 {
        0.0
    } else {
        s * s / s2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_matches_two_pass() {
        let xs = [1.0, 4.0, -2.0, 8.5, 3.25];
        let r: Running = xs.iter().copied().collect();
        let mean = xs.iter().sum::<f64>() / 5.0;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 4.0;
        assert!((r.mean() - mean).abs() < 1e-14);
        assert!((r.variance() - var).abs() < 1e-12);
    }

    #[test]
    fn ess_bounds() {
        assert_eq!(effective_sample_size(&[1.0; 10]), 10.0);
        let e = effective_sample_size(&[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(e, 1.0);
    }

    #[test]
    fn z_scores() {
        let a = Estimate { mean: 1.0, se: 0.3 };
        let b = Estimate { mean: 0.0, se: 0.4 };
        assert!((two_sample_z(a, b) - 2.0).abs() < 1e-12);
        assert_eq!(two_sample_z(b, b), 0.0);
    }
}
