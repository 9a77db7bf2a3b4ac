//! Doléans exponentials along simulated paths and the importance-sampling
//! test that reweights `X^Ã` samples into `X^A` expectations.
//!
//! Weights integrate against the standard per-mode Brownian coordinates
//! `β_n = q_n^{-1/2} W_n`, evaluating the integrand at the left end of
//! each step. With that pairing the discrete weight is an exact mean-one
//! martingale and the induced shift of `W` is `∫ Q^{1/2} U ds`.
//!
//! The integrand has two channels. The Cameron–Martin representative
//! moves the jump-drift part of the target process onto the decay
//! generator's, and the Gaussian-channel term moves the target's Gaussian
//! convolution onto the decay generator's. Their sum is
//! `(r_target - r_decay) X^{target} / √q` mode by mode.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::cameron_martin::{expected_cm_norm, representative_at, CMReport};
use crate::error::{Error, Result};
use crate::levy::LevyConfig;
use crate::math::{exp, sqrt};
use crate::rng::{domain, ReplicaStreams};
use crate::simulate::{
    drift_convolution, jump_convolution, sample_jumps, simulate_ou_path, simulate_replica,
    SamplePath, TimeGrid,
};
use crate::spectral::{Direction, SpectralModel};
use crate::stats::{effective_sample_size, two_sample_z, Estimate, Running};

/// `log 𝓔 = Σ_k Σ_n u_n(t_k) Δβ_{n,k} - ½ Σ_k Σ_n u_n(t_k)² Δt_k`.
///
/// `u` holds the integrand at every grid point (or at every left
/// endpoint); `increments[k]` is the step `[t_k, t_{k+1}]`.
pub fn log_doleans_exponential(
    u: &[Vec<f64>],
    increments: &[Vec<f64>],
    grid: &TimeGrid,
) -> Result<f64> {
    let steps = grid.steps();
    if increments.len() != steps || !(u.len() == steps || u.len() == grid.len()) {
        return Err(Error::invalid(alloc::format!(
            "integrand ({}) and increments ({}) do not match a grid of {} steps",
            u.len(),
            increments.len(),
            steps
        )));
    }
    let times = grid.times();
    let mut acc = 0.0;
    for k in 0..steps {
        let dt = times[k + 1] - times[k];
        if u[k].len() != increments[k].len() {
            return Err(Error::DimensionMismatch {
                expected: increments[k].len(),
                got: u[k].len(),
            });
        }
        for (un, db) in u[k].iter().zip(&increments[k]) {
            acc += un * db - 0.5 * un * un * dt;
        }
    }
    Ok(acc)
}

pub fn doleans_exponential(
    u: &[Vec<f64>],
    increments: &[Vec<f64>],
    grid: &TimeGrid,
) -> Result<f64> {
    log_doleans_exponential(u, increments, grid).map(exp)
}

/// Statistic evaluated on the terminal state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    /// `⟨X(T), e_1⟩`.
    Coordinate,
    /// `‖X(T)‖²` over the stored modes.
    SquaredNorm,
}

impl Functional {
    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            Functional::Coordinate => x[0],
            Functional::SquaredNorm => x.iter().map(|v| v * v).sum(),
        }
    }
}

/// What to simulate for an importance experiment.
#[derive(Debug, Clone, Copy)]
pub struct ImportanceSetup<'a> {
    pub model: &'a SpectralModel,
    pub levy: &'a LevyConfig,
    pub horizon: f64,
    pub base_steps: usize,
    /// `AToATilde` simulates `X^Ã` and estimates `X^A` statistics.
    pub direction: Direction,
}

impl ImportanceSetup<'_> {
    /// Validates the configuration and the representability probe.
    pub fn check(&self) -> Result<CMReport> {
        self.levy.validate(self.model.dim())?;
        if !self.levy.gaussian {
            return Err(Error::Precondition(
                "reweighting needs the Gaussian channel; pure-jump laws are mutually singular"
                    .into(),
            ));
        }
        if (0..self.model.dim()).any(|n| !(self.model.q(n) > 0.0)) {
            return Err(Error::Precondition(
                "reweighting needs q_n > 0 on every mode".into(),
            ));
        }
        let report = expected_cm_norm(
            self.model,
            self.direction,
            &self.levy.jump_law,
            &self.levy.drift,
            self.horizon,
        )?;
        if !report.representable {
            return Err(Error::CameronMartinDivergent(report.l2_norm_sq));
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSample {
    pub weight: f64,
    pub terminal: Vec<f64>,
}

/// Per-grid-point, per-mode values.
pub type GridField = Vec<Vec<f64>>;

/// Integrand of the weight for a path of the target generator, split into
/// the Cameron–Martin and Gaussian channels. Indexed `[k][n]` over grid
/// points.
pub fn weight_integrand(
    setup: &ImportanceSetup<'_>,
    path: &SamplePath,
) -> Result<(GridField, GridField)> {
    let model = setup.model;
    let dir = setup.direction;
    let decay = dir.decay();
    let drift = &setup.levy.drift;
    let mut cm = Vec::with_capacity(path.grid.len());
    let mut gauss = Vec::with_capacity(path.grid.len());
    for (k, &t) in path.grid.times().iter().enumerate() {
        cm.push(representative_at(model, dir, &path.jumps, drift, t)?);
        let j = jump_convolution(model, decay, &path.jumps, t);
        let b = drift_convolution(model, decay, drift, t)?;
        gauss.push(
            (0..model.dim())
                .map(|n| {
                    let gap = model.rate(dir.target(), n) - model.rate(decay, n);
                    gap * (path.values[k][n] - j[n] - b[n]) / sqrt(model.q(n))
                })
                .collect(),
        );
    }
    Ok((cm, gauss))
}

/// One replica of the reweighted arm: jumps, target-generator path and
/// its weight.
pub fn weighted_replica(
    setup: &ImportanceSetup<'_>,
    streams: &ReplicaStreams,
) -> Result<(SamplePath, f64)> {
    let points = sample_jumps(setup.model, setup.levy, setup.horizon, streams)?;
    let grid = TimeGrid::new(setup.horizon, setup.base_steps, &points)?;
    let path = simulate_ou_path(
        setup.model,
        setup.direction.target(),
        setup.levy,
        &points,
        &grid,
        streams,
    )?;
    let (cm, gauss) = weight_integrand(setup, &path)?;
    let u: Vec<Vec<f64>> = cm
        .iter()
        .zip(&gauss)
        .map(|(c, g)| c.iter().zip(g).map(|(x, y)| x + y).collect())
        .collect();
    let w = doleans_exponential(&u, &path.increments, &grid)?;
    Ok((path, w))
}

/// Terminal state of one replica of the direct arm.
pub fn direct_replica(setup: &ImportanceSetup<'_>, streams: &ReplicaStreams) -> Result<Vec<f64>> {
    let path = simulate_replica(
        setup.model,
        setup.direction.decay(),
        setup.levy,
        setup.horizon,
        setup.base_steps,
        streams,
    )?;
    Ok(path.terminal().to_vec())
}

pub fn weighted_sample(
    setup: &ImportanceSetup<'_>,
    master_seed: u64,
    replica: u64,
) -> Result<WeightedSample> {
    let (path, weight) = weighted_replica(
        setup,
        &ReplicaStreams::new(master_seed, domain::REWEIGHTED, replica),
    )?;
    Ok(WeightedSample {
        weight,
        terminal: path.terminal().to_vec(),
    })
}

pub fn direct_sample(
    setup: &ImportanceSetup<'_>,
    master_seed: u64,
    replica: u64,
) -> Result<Vec<f64>> {
    direct_replica(
        setup,
        &ReplicaStreams::new(master_seed, domain::DIRECT, replica),
    )
}

/// Weights and terminal states for `replicas` reweighted replicas.
pub fn estimate_density_weights(
    setup: &ImportanceSetup<'_>,
    replicas: u64,
    master_seed: u64,
) -> Result<Vec<WeightedSample>> {
    setup.check()?;
    (0..replicas)
        .map(|r| weighted_sample(setup, master_seed, r))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub direction: Direction,
    pub functional: Functional,
    pub replicas: u64,
    pub mean_weight: f64,
    pub weight_se: f64,
    pub min_weight: f64,
    pub ess: f64,
    pub functional_direct: Estimate,
    pub functional_reweighted: Estimate,
    pub z_score: f64,
    /// `|z| < 3`.
    pub passed: bool,
}

/// Aggregates the two arms. Pure reduction, independent of the order in
/// which replicas were produced as long as slices are in replica order.
pub fn summarize(
    direction: Direction,
    functional: Functional,
    direct: &[Vec<f64>],
    weighted: &[WeightedSample],
) -> DensityReport {
    let weights: Vec<f64> = weighted.iter().map(|s| s.weight).collect();
    let w: Running = weights.iter().copied().collect();
    let d: Running = direct.iter().map(|x| functional.eval(x)).collect();
    let r: Running = weighted
        .iter()
        .map(|s| s.weight * functional.eval(&s.terminal))
        .collect();
    let z = two_sample_z(d.estimate(), r.estimate());
    DensityReport {
        direction,
        functional,
        replicas: weighted.len() as u64,
        mean_weight: w.mean(),
        weight_se: w.std_error(),
        min_weight: weights.iter().copied().fold(f64::INFINITY, f64::min),
        ess: effective_sample_size(&weights),
        functional_direct: d.estimate(),
        functional_reweighted: r.estimate(),
        z_score: z,
        passed: libm::fabs(z) < 3.0,
    }
}

/// Direct Monte Carlo of `E f(X^decay)` against `E[f(X^target) w]`.
pub fn importance_test(
    setup: &ImportanceSetup<'_>,
    functional: Functional,
    replicas: u64,
    master_seed: u64,
) -> Result<DensityReport> {
    let weighted = estimate_density_weights(setup, replicas, master_seed)?;
    let direct = (0..replicas)
        .map(|r| direct_sample(setup, master_seed, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(setup.direction, functional, &direct, &weighted))
}
