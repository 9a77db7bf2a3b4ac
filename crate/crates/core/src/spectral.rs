//! Diagonal operator model and the deterministic equivalence criteria.
//!
//! Mode `n` (0-based index `n - 1` in the API) of the semigroup generated
//! by `A` acts as `e^{-a_n t}`, that of `Ã` as `e^{-ã_n t}`, and `Q` has
//! eigenvalue `q_n`. The perturbation `K = Ã - A` is diagonal with
//! eigenvalue `a_n - ã_n`; every criterion below only needs its square or
//! modulus.

use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::math::{decay_integral, exp, powf};
use crate::quad::{self, Tolerance};
use crate::series::SeriesVerdict;

/// Which of the two generators a computation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    A,
    ATilde,
}

impl Generator {
    pub fn other(self) -> Self {
        match self {
            Generator::A => Generator::ATilde,
            Generator::ATilde => Generator::A,
        }
    }
}

/// Direction of a Cameron–Martin statement. For `AToATilde` the
/// representative decays with `A` and lives on the `Ã` channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AToATilde,
    ATildeToA,
}

impl Direction {
    /// Generator whose semigroup carries the decay of the representative.
    pub fn decay(self) -> Generator {
        match self {
            Direction::AToATilde => Generator::A,
            Direction::ATildeToA => Generator::ATilde,
        }
    }

    /// Generator whose Gaussian channel absorbs the discrepancy.
    pub fn target(self) -> Generator {
        self.decay().other()
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::AToATilde => Direction::ATildeToA,
            Direction::ATildeToA => Direction::AToATilde,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::AToATilde => "A->Atilde",
            Direction::ATildeToA => "Atilde->A",
        }
    }
}

/// A per-mode sequence, stored or given by a formula in `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sequence {
    Explicit(Vec<f64>),
    Symbolic(Expr),
}

impl Sequence {
    pub fn constant(v: f64, len: usize) -> Self {
        Sequence::Explicit(alloc::vec![v; len])
    }

    /// Value at 0-based `index` (mode number `index + 1`).
    pub fn at(&self, index: usize) -> f64 {
        match self {
            Sequence::Explicit(v) => v[index],
            Sequence::Symbolic(e) => e.eval(index + 1),
        }
    }

    pub fn explicit_len(&self) -> Option<usize> {
        match self {
            Sequence::Explicit(v) => Some(v.len()),
            Sequence::Symbolic(_) => None,
        }
    }

    pub fn materialize(&self, len: usize) -> Vec<f64> {
        (0..len).map(|i| self.at(i)).collect()
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Sequence::Symbolic(_))
    }
}

/// Paired diagonal generators and noise covariance on `dim` modes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralModel {
    dim: usize,
    a: Sequence,
    a_tilde: Sequence,
    q: Sequence,
}

impl SpectralModel {
    pub fn new(a: Vec<f64>, a_tilde: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let dim = a.len();
        Self::from_sequences(
            dim,
            Sequence::Explicit(a),
            Sequence::Explicit(a_tilde),
            Sequence::Explicit(q),
        )
    }

    /// Builds a model from explicit or symbolic sequences truncated at
    /// `dim` modes. Every mode is checked: `a_n, ã_n > 0`, `q_n > 0` for
    /// stored covariances. A symbolic covariance may evaluate to exactly
    /// zero once it underflows (e.g. `exp(-n^2)` past `n = 27`).
    pub fn from_sequences(dim: usize, a: Sequence, a_tilde: Sequence, q: Sequence) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("model needs at least one mode"));
        }
        for (name, s) in [("a", &a), ("a_tilde", &a_tilde), ("q", &q)] {
            if let Some(len) = s.explicit_len() {
                if len != dim {
                    return Err(Error::invalid(alloc::format!(
                        "sequence {name} has {len} entries, model has {dim} modes"
                    )));
                }
            }
        }
        for i in 0..dim {
            let (ai, ati, qi) = (a.at(i), a_tilde.at(i), q.at(i));
            if !(ai.is_finite() && ai > 0.0) || !(ati.is_finite() && ati > 0.0) {
                return Err(Error::invalid(alloc::format!(
                    "mode {}: decay rates must be finite and positive (a = {ai}, a_tilde = {ati})",
                    i + 1
                )));
            }
            let q_ok = match q {
                Sequence::Explicit(_) => qi.is_finite() && qi > 0.0,
                Sequence::Symbolic(_) => qi.is_finite() && qi >= 0.0,
            };
            if !q_ok {
                return Err(Error::invalid(alloc::format!(
                    "mode {}: covariance eigenvalue must be positive (q = {qi})",
                    i + 1
                )));
            }
        }
        Ok(Self { dim, a, a_tilde, q })
    }

    /// The reference model used throughout the tests: `a_n = n²`,
    /// `ã_n = n² + 1`, `q_n = n⁻²`.
    pub fn m1(dim: usize) -> Self {
        let n = |i: usize| (i + 1) as f64;
        Self::new(
            (0..dim).map(|i| n(i) * n(i)).collect(),
            (0..dim).map(|i| n(i) * n(i) + 1.0).collect(),
            (0..dim).map(|i| 1.0 / (n(i) * n(i))).collect(),
        )
        .expect("m1 is a valid model")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_symbolic(&self) -> bool {
        self.a.is_symbolic() || self.a_tilde.is_symbolic() || self.q.is_symbolic()
    }

    pub fn a(&self, mode: usize) -> f64 {
        self.a.at(mode)
    }

    pub fn a_tilde(&self, mode: usize) -> f64 {
        self.a_tilde.at(mode)
    }

    pub fn q(&self, mode: usize) -> f64 {
        self.q.at(mode)
    }

    pub fn rate(&self, which: Generator, mode: usize) -> f64 {
        match which {
            Generator::A => self.a(mode),
            Generator::ATilde => self.a_tilde(mode),
        }
    }

    pub fn rates(&self, which: Generator) -> Vec<f64> {
        (0..self.dim).map(|i| self.rate(which, i)).collect()
    }

    pub fn covariances(&self) -> Vec<f64> {
        self.q.materialize(self.dim)
    }

    pub fn sequences(&self) -> (&Sequence, &Sequence, &Sequence) {
        (&self.a, &self.a_tilde, &self.q)
    }

    /// `ã_n - a_n`.
    pub fn rate_gap(&self, mode: usize) -> f64 {
        self.a_tilde(mode) - self.a(mode)
    }

    pub fn has_perturbation(&self) -> bool {
        (0..self.dim).any(|i| self.rate_gap(i) != 0.0)
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.dim {
            return Err(Error::invalid(alloc::format!(
                "mode index {mode} out of range for {} modes",
                self.dim
            )));
        }
        Ok(())
    }

    pub fn check_len(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }

    /// Smallest decay rate of `which` over the stored modes.
    pub fn min_rate(&self, which: Generator) -> f64 {
        (0..self.dim)
            .map(|i| self.rate(which, i))
            .fold(f64::INFINITY, f64::min)
    }
}

impl<'de> Deserialize<'de> for SpectralModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            a: Sequence,
            a_tilde: Sequence,
            q: Sequence,
        }
        let r = Raw::deserialize(d)?;
        SpectralModel::from_sequences(r.dim, r.a, r.a_tilde, r.q).map_err(serde::de::Error::custom)
    }
}

/// `S_B(t) x`.
pub fn semigroup_apply(
    model: &SpectralModel,
    which: Generator,
    t: f64,
    x: &[f64],
) -> Result<Vec<f64>> {
    model.check_len(x.len())?;
    if !(t >= 0.0) {
        return Err(Error::invalid("semigroup time must be nonnegative"));
    }
    Ok(x.iter()
        .enumerate()
        .map(|(i, xi)| exp(-model.rate(which, i) * t) * xi)
        .collect())
}

fn check_horizon(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("time horizon must be positive and finite"));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::invalid("beta must lie in (0, 1)"));
    }
    Ok(())
}

/// `∫_0^T ‖K S(t) Q^{1/2}‖²_HS dt` in closed form:
/// `Σ_n (ã_n - a_n)² q_n (1 - e^{-2 a_n T}) / (2 a_n)`.
pub fn hs_perturbation_integral(model: &SpectralModel, horizon: f64) -> Result<SeriesVerdict> {
    check_horizon(horizon)?;
    Ok(SeriesVerdict::sum((0..model.dim()).map(|i| {
        let gap = model.rate_gap(i);
        gap * gap * model.q(i) * decay_integral(2.0 * model.a(i), horizon)
    })))
}

/// `sup_n |ã_n - a_n| a_n^{-β}`, the diagonal norm of `K A^{-β}`.
pub fn fractional_bound(model: &SpectralModel, beta: f64) -> Result<SeriesVerdict> {
    check_beta(beta)?;
    Ok(SeriesVerdict::sup((0..model.dim()).map(|i| {
        libm::fabs(model.rate_gap(i)) * powf(model.a(i), -beta)
    })))
}

/// Log-spaced sample of the sector `{λ ≠ 0 : |arg λ| < θ}`: `rays` rays at
/// angles strictly inside `(-θ, θ)` and `points` moduli from `r_min` to
/// `r_max` on each.
pub fn sector_grid(
    theta: f64,
    r_min: f64,
    r_max: f64,
    points: usize,
    rays: usize,
) -> Result<Vec<Complex64>> {
    if !(theta > 0.0 && theta < core::f64::consts::FRAC_PI_2) {
        return Err(Error::invalid("sector angle must lie in (0, pi/2)"));
    }
    if !(r_min > 0.0 && r_max >= r_min) || points == 0 || rays == 0 {
        return Err(Error::invalid(
            "sector grid needs 0 < r_min <= r_max and nonzero counts",
        ));
    }
    let mut grid = Vec::with_capacity(points * rays);
    let (lo, hi) = (libm::log(r_min), libm::log(r_max));
    for j in 0..rays {
        let phi = theta * (-1.0 + (2 * j + 1) as f64 / rays as f64);
        for k in 0..points {
            let s = if points == 1 {
                0.0
            } else {
                k as f64 / (points - 1) as f64
            };
            let r = exp(lo + s * (hi - lo));
            grid.push(Complex64::from_polar(r, phi));
        }
    }
    Ok(grid)
}

/// `max_{λ ∈ grid} |λ|^β ‖K (λ + A)^{-1}‖`. The continuum supremum over the
/// sector is only sampled.
pub fn resolvent_criterion(
    model: &SpectralModel,
    beta: f64,
    theta: f64,
    lambda_grid: &[Complex64],
) -> Result<f64> {
    check_beta(beta)?;
    if lambda_grid.is_empty() {
        return Err(Error::invalid("resolvent grid is empty"));
    }
    let mut sup = 0.0f64;
    for lambda in lambda_grid {
        if lambda.norm() == 0.0 || libm::fabs(lambda.arg()) >= theta {
            return Err(Error::invalid(alloc::format!(
                "grid point {lambda} lies outside the open sector of angle {theta}"
            )));
        }
        let op_norm = (0..model.dim())
            .map(|i| libm::fabs(model.rate_gap(i)) / (lambda + model.a(i)).norm())
            .fold(0.0, f64::max);
        sup = sup.max(powf(lambda.norm(), beta) * op_norm);
    }
    Ok(sup)
}

/// `max_{t ∈ grid} t^β ‖A^β S(t)‖`. Bounded by `(β/e)^β` for any diagonal
/// model.
pub fn smoothing_constant(model: &SpectralModel, beta: f64, t_grid: &[f64]) -> Result<f64> {
    check_beta(beta)?;
    if t_grid.is_empty() {
        return Err(Error::invalid("time grid is empty"));
    }
    let mut sup = 0.0f64;
    for &t in t_grid {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::invalid("smoothing times must lie in (0, 1]"));
        }
        let op_norm = (0..model.dim())
            .map(|i| {
                let a = model.a(i);
                powf(a, beta) * exp(-a * t)
            })
            .fold(0.0, f64::max);
        sup = sup.max(powf(t, beta) * op_norm);
    }
    Ok(sup)
}

/// Supremum of `x^β e^{-x}` over `x > 0`.
pub fn smoothing_extremum(beta: f64) -> f64 {
    powf(beta / core::f64::consts::E, beta)
}

/// Mode-`mode` defect of the variation-of-constants identity
/// `S̃(t) - S(t) = ∫_0^t S̃(t-s) K S(s) ds`, integral by adaptive quadrature.
pub fn duhamel_residual(model: &SpectralModel, mode: usize, t: f64) -> Result<f64> {
    model.check_mode(mode)?;
    check_horizon(t)?;
    let (a, at) = (model.a(mode), model.a_tilde(mode));
    if a == at {
        return Ok(0.0);
    }
    let lhs = exp(-at * t) - exp(-a * t);
    let k = a - at;
    // substitute so the sharper layer (width 1/max(a, ã)) sits at zero,
    // where the integration variable is exact, and refine geometrically
    let (near, far) = if a >= at { (a, at) } else { (at, a) };
    let mut breaks = alloc::vec![0.0];
    let mut h = 1.0 / near;
    while h < t {
        breaks.push(h);
        h *= 2.0;
    }
    breaks.push(t);
    let rhs = quad::integrate_piecewise(
        |r| exp(-near * r) * k * exp(-far * (t - r)),
        &breaks,
        Tolerance {
            abs: 1e-16,
            rel: 1e-14,
            ..Tolerance::default()
        },
    );
    Ok(libm::fabs(lhs - rhs.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn scalar(a: f64, at: f64, q: f64) -> SpectralModel {
        SpectralModel::new(vec![a], vec![at], vec![q]).unwrap()
    }

    #[test]
    fn rejects_invalid_models() {
        assert!(SpectralModel::new(vec![], vec![], vec![]).is_err());
        assert!(SpectralModel::new(vec![0.0], vec![1.0], vec![1.0]).is_err());
        assert!(SpectralModel::new(vec![1.0], vec![-1.0], vec![1.0]).is_err());
        assert!(SpectralModel::new(vec![1.0], vec![1.0], vec![0.0]).is_err());
        assert!(SpectralModel::new(vec![1.0, 2.0], vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn semigroup_examples() {
        let m = SpectralModel::new(vec![1.0, 4.0], vec![1.0, 4.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(
            semigroup_apply(&m, Generator::A, 0.0, &[3.0, -2.0]).unwrap(),
            vec![3.0, -2.0]
        );
        let y = semigroup_apply(&m, Generator::A, 1.0, &[1.0, 1.0]).unwrap();
        assert_eq!(y, vec![(-1.0f64).exp(), (-4.0f64).exp()]);
        let y = semigroup_apply(&scalar(2.0, 2.0, 1.0), Generator::A, 0.5, &[3.0]).unwrap();
        assert!((y[0] - 1.103_638_323_514_327).abs() < 1e-14);
        assert!(matches!(
            semigroup_apply(&m, Generator::A, 1.0, &[1.0]),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn hs_zero_without_perturbation() {
        let m = scalar(3.0, 3.0, 0.5);
        let v = hs_perturbation_integral(&m, 2.0).unwrap();
        assert_eq!(v.value(), Some(0.0));
        assert!(hs_perturbation_integral(&m, 0.0).is_err());
    }

    #[test]
    fn hs_asymmetric_under_swap() {
        let m = SpectralModel::m1(8);
        let (a, at, q) = m.sequences();
        let swapped = SpectralModel::from_sequences(8, at.clone(), a.clone(), q.clone()).unwrap();
        let v1 = hs_perturbation_integral(&m, 1.0).unwrap().value().unwrap();
        let v2 = hs_perturbation_integral(&swapped, 1.0)
            .unwrap()
            .value()
            .unwrap();
        assert!((v1 - v2).abs() > 1e-3, "{v1} vs {v2}");
    }

    #[test]
    fn fractional_bound_examples() {
        let v = fractional_bound(&SpectralModel::m1(8), 0.25).unwrap();
        assert_eq!(v.value(), Some(1.0));
        assert!(!v.tail_increasing);

        let seq = |s: &str| Sequence::Symbolic(Expr::parse(s).unwrap());
        let m = SpectralModel::from_sequences(256, seq("1"), seq("1 + n^2"), seq("n^-2")).unwrap();
        let v = fractional_bound(&m, 0.3).unwrap();
        assert!(!v.converged);
        assert!(v.divergence_witness.is_some());
        assert!(fractional_bound(&m, 1.0).is_err());
    }

    #[test]
    fn resolvent_scalar_example() {
        let m = scalar(1.0, 2.0, 1.0);
        let v = resolvent_criterion(&m, 0.5, 1.0, &[Complex64::new(1.0, 0.0)]).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        assert!(resolvent_criterion(&m, 0.5, 1.0, &[]).is_err());
        assert!(resolvent_criterion(&m, 0.5, 0.5, &[Complex64::new(0.0, 1.0)]).is_err());
        assert_eq!(
            resolvent_criterion(
                &scalar(1.0, 1.0, 1.0),
                0.5,
                1.0,
                &[Complex64::new(2.0, 0.0)]
            )
            .unwrap(),
            0.0
        );
    }

    #[test]
    fn sector_grid_stays_inside() {
        let g = sector_grid(1.2, 1e-3, 1e3, 25, 4).unwrap();
        assert_eq!(g.len(), 100);
        assert!(g.iter().all(|z| z.arg().abs() < 1.2 && z.norm() > 0.0));
        assert!(sector_grid(2.0, 1.0, 2.0, 3, 3).is_err());
    }

    #[test]
    fn smoothing_examples() {
        let v = smoothing_constant(&scalar(1.0, 1.0, 1.0), 0.5, &[1.0]).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        // extremal mode a = β / t
        let (beta, t) = (0.3, 0.4);
        let v = smoothing_constant(&scalar(beta / t, 1.0, 1.0), beta, &[t]).unwrap();
        assert!((v - smoothing_extremum(beta)).abs() < 1e-15);
        assert!(smoothing_constant(&scalar(1.0, 1.0, 1.0), 0.5, &[1.5]).is_err());
    }

    #[test]
    fn duhamel_examples() {
        assert_eq!(
            duhamel_residual(&scalar(2.0, 2.0, 1.0), 0, 1.0).unwrap(),
            0.0
        );
        assert!(duhamel_residual(&scalar(1.0, 2.0, 1.0), 0, 1.0).unwrap() < 1e-10);
        assert!(duhamel_residual(&SpectralModel::m1(8), 2, 0.5).unwrap() < 1e-10);
        assert!(duhamel_residual(&SpectralModel::m1(8), 8, 0.5).is_err());
    }

    #[test]
    fn symbolic_q_may_underflow() {
        let seq = |s: &str| Sequence::Symbolic(Expr::parse(s).unwrap());
        let m =
            SpectralModel::from_sequences(32, seq("1"), seq("1 + n^2"), seq("exp(-n^2)")).unwrap();
        assert_eq!(m.q(31), 0.0);
        assert!(hs_perturbation_integral(&m, 1.0).unwrap().converged);
    }
}
