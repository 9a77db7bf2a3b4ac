//! Jump laws, marked point sets and exact compound Poisson sampling.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{exp, sqrt};
use crate::series::ExtendedReal;

/// Law of a single jump vector on the truncated space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JumpLaw {
    /// Independent centred normals with standard deviation `sigma[n]` on
    /// mode `n`.
    DiagonalGaussian {
        sigma: Vec<f64>,
    },
    /// The same profile `xi` fired at every jump.
    DeterministicProfile {
        xi: Vec<f64>,
    },
    /// Scalar Student-t with `nu > 2` degrees of freedom on the first mode.
    StudentT {
        nu: f64,
    },
    PointMass {
        v: Vec<f64>,
    },
}

impl JumpLaw {
    pub fn student_t(nu: f64) -> Result<Self> {
        let law = JumpLaw::StudentT { nu };
        law.validate(1)?;
        Ok(law)
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let check_len = |v: &[f64]| {
            if v.len() != dim {
                Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                })
            } else if v.iter().any(|x| !x.is_finite()) {
                Err(Error::invalid("jump law parameters must be finite"))
            } else {
                Ok(())
            }
        };
        match self {
            JumpLaw::DiagonalGaussian { sigma } => {
                check_len(sigma)?;
                if sigma.iter().any(|s| *s < 0.0) {
                    return Err(Error::invalid("gaussian jump scales must be nonnegative"));
                }
                Ok(())
            }
            JumpLaw::DeterministicProfile { xi } => check_len(xi),
            JumpLaw::PointMass { v } => check_len(v),
            JumpLaw::StudentT { nu } => {
                if !(*nu > 2.0 && nu.is_finite()) {
                    return Err(Error::invalid(
                        "student-t jumps need nu > 2 (finite variance)",
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            JumpLaw::DiagonalGaussian { .. } => "diagonal_gaussian",
            JumpLaw::DeterministicProfile { .. } => "deterministic_profile",
            JumpLaw::StudentT { .. } => "student_t",
            JumpLaw::PointMass { .. } => "point_mass",
        }
    }

    /// Draws one jump vector of length `dim`.
    pub fn sample<R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> Vec<f64> {
        match self {
            JumpLaw::DiagonalGaussian { sigma } => sigma
                .iter()
                .map(|s| s * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng))
                .collect(),
            JumpLaw::DeterministicProfile { xi } => xi.clone(),
            JumpLaw::PointMass { v } => v.clone(),
            JumpLaw::StudentT { nu } => {
                let mut out = alloc::vec![0.0; dim];
                let t = StudentT::new(*nu).expect("validated nu");
                out[0] = t.sample(rng);
                out
            }
        }
    }

    /// Per-mode means `E ξ_n`.
    pub fn mean(&self, dim: usize) -> Vec<f64> {
        match self {
            JumpLaw::DeterministicProfile { xi: v } | JumpLaw::PointMass { v } => v.clone(),
            JumpLaw::DiagonalGaussian { .. } | JumpLaw::StudentT { .. } => alloc::vec![0.0; dim],
        }
    }

    /// Per-mode second moments `E ξ_n²`.
    pub fn mean_square(&self, dim: usize) -> Vec<f64> {
        match self {
            JumpLaw::DiagonalGaussian { sigma } => sigma.iter().map(|s| s * s).collect(),
            JumpLaw::DeterministicProfile { xi } => xi.iter().map(|x| x * x).collect(),
            JumpLaw::PointMass { v } => v.iter().map(|x| x * x).collect(),
            JumpLaw::StudentT { nu } => {
                let mut out = alloc::vec![0.0; dim];
                out[0] = nu / (nu - 2.0);
                out
            }
        }
    }

    /// Supremum of the `c` for which `E e^{c ‖Q^{1/2} ξ‖²}` is finite
    /// (the moment is finite for every `c` strictly below it).
    pub fn exp_moment_threshold(&self, q: &[f64]) -> ExtendedReal {
        match self {
            JumpLaw::DiagonalGaussian { sigma } => {
                let worst = q
                    .iter()
                    .zip(sigma)
                    .map(|(q, s)| q * s * s)
                    .fold(0.0, f64::max);
                if worst == 0.0 {
                    ExtendedReal::Infinite
                } else {
                    ExtendedReal::Finite(0.5 / worst)
                }
            }
            JumpLaw::DeterministicProfile { .. } | JumpLaw::PointMass { .. } => {
                ExtendedReal::Infinite
            }
            JumpLaw::StudentT { .. } => ExtendedReal::Finite(0.0),
        }
    }

    /// `‖Q^{1/2} ξ‖²` for a drawn jump.
    pub fn quadratic_form(q: &[f64], xi: &[f64]) -> f64 {
        q.iter().zip(xi).map(|(q, x)| q * x * x).sum()
    }
}

/// `E e^{c ‖Q^{1/2} ξ‖²}` in closed form, or `Infinite` when the moment
/// diverges.
pub fn exp_moment(law: &JumpLaw, c: f64, q: &[f64]) -> Result<ExtendedReal> {
    if !(c >= 0.0) {
        return Err(Error::invalid(
            "exponential-moment order must be nonnegative",
        ));
    }
    if c == 0.0 {
        return Ok(ExtendedReal::Finite(1.0));
    }
    let check = |v: &[f64]| {
        if v.len() != q.len() {
            Err(Error::DimensionMismatch {
                expected: q.len(),
                got: v.len(),
            })
        } else {
            Ok(())
        }
    };
    Ok(match law {
        JumpLaw::DiagonalGaussian { sigma } => {
            check(sigma)?;
            let mut prod = 1.0;
            for (qn, s) in q.iter().zip(sigma) {
                let f = 1.0 - 2.0 * c * qn * s * s;
                if f <= 0.0 {
                    return Ok(ExtendedReal::Infinite);
                }
                prod /= sqrt(f);
            }
            ExtendedReal::from_f64(prod)
        }
        JumpLaw::DeterministicProfile { xi: v } | JumpLaw::PointMass { v } => {
            check(v)?;
            ExtendedReal::from_f64(exp(c * JumpLaw::quadratic_form(q, v)))
        }
        // heavier than any Gaussian tail
        JumpLaw::StudentT { .. } => ExtendedReal::Infinite,
    })
}

/// Jump times in `(0, T]` with one mark vector each.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MarkedPointSet {
    times: Vec<f64>,
    marks: Vec<Vec<f64>>,
}

impl MarkedPointSet {
    pub fn new(times: Vec<f64>, marks: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() != marks.len() {
            return Err(Error::invalid("each jump time needs exactly one mark"));
        }
        if times.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::invalid("jump times must be positive and finite"));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("jump times must be strictly increasing"));
        }
        if let Some(first) = marks.first() {
            if marks.iter().any(|m| m.len() != first.len()) {
                return Err(Error::invalid("marks must share one dimension"));
            }
        }
        Ok(Self { times, marks })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// One jump of size `mark` at `time`.
    pub fn single(time: f64, mark: Vec<f64>) -> Result<Self> {
        Self::new(alloc::vec![time], alloc::vec![mark])
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn marks(&self) -> &[Vec<f64>] {
        &self.marks
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.times
            .iter()
            .copied()
            .zip(self.marks.iter().map(Vec::as_slice))
    }

    /// Checks marks have `dim` components and times lie in `(0, horizon]`.
    pub fn check(&self, dim: usize, horizon: f64) -> Result<()> {
        if let Some(m) = self.marks.iter().find(|m| m.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: m.len(),
            });
        }
        if self.times.last().is_some_and(|t| *t > horizon) {
            return Err(Error::invalid("jump time beyond the horizon"));
        }
        Ok(())
    }
}

/// Drift, Gaussian switch and compound Poisson channel of the driving noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyConfig {
    pub drift: Vec<f64>,
    pub gaussian: bool,
    pub rate: f64,
    pub jump_law: JumpLaw,
}

impl LevyConfig {
    /// No drift, no Gaussian part, no jumps.
    pub fn silent(dim: usize) -> Self {
        Self {
            drift: alloc::vec![0.0; dim],
            gaussian: false,
            rate: 0.0,
            jump_law: JumpLaw::PointMass {
                v: alloc::vec![0.0; dim],
            },
        }
    }

    pub fn pure_jump(rate: f64, jump_law: JumpLaw, dim: usize) -> Self {
        Self {
            drift: alloc::vec![0.0; dim],
            gaussian: false,
            rate,
            jump_law,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.drift.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: self.drift.len(),
            });
        }
        if !(self.rate >= 0.0 && self.rate.is_finite()) {
            return Err(Error::invalid("jump rate must be finite and nonnegative"));
        }
        self.jump_law.validate(dim)
    }

    pub fn jumps_active(&self) -> bool {
        self.rate > 0.0
    }

    pub fn has_drift(&self) -> bool {
        self.drift.iter().any(|b| *b != 0.0)
    }

    /// No Brownian part and no drift.
    pub fn is_pure_jump(&self) -> bool {
        !self.gaussian && !self.has_drift()
    }
}

/// Exact compound Poisson sample on `(0, horizon]`: a Poisson(`rate · T`)
/// count, sorted uniform times, i.i.d. marks. Draws in that order from
/// `rng`. A zero rate yields the empty set.
pub fn sample_compound_poisson<R: Rng + ?Sized>(
    rate: f64,
    law: &JumpLaw,
    horizon: f64,
    dim: usize,
    rng: &mut R,
) -> Result<MarkedPointSet> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::invalid("horizon must be positive and finite"));
    }
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(Error::invalid("jump rate must be finite and nonnegative"));
    }
    law.validate(dim)?;
    if rate == 0.0 {
        return Ok(MarkedPointSet::empty());
    }
    let count = Poisson::new(rate * horizon)
        .map_err(|_| Error::invalid("invalid Poisson mean"))?
        .sample(rng) as usize;
    let mut times: Vec<f64> = Vec::with_capacity(count);
    while times.len() < count {
        // 1 - U maps [0, 1) onto (0, 1]
        let t = horizon * (1.0 - rng.random::<f64>());
        if !times.contains(&t) {
            times.push(t);
        }
    }
    times.sort_by(f64::total_cmp);
    let marks = (0..count).map(|_| law.sample(dim, rng)).collect();
    MarkedPointSet::new(times, marks)
}
