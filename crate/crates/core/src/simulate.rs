//! Exact per-mode simulation of the mild OU solution
//! `X(t) = ∫_0^t S(t-s) dL_s` on a grid that contains every jump time.
//!
//! Each grid step advances mode `n` by the exact transition
//! `x ← e^{-aΔ} x + b (1 - e^{-aΔ})/a + √q I + ξ`, where `I` is the
//! stochastic convolution over the step. `I` is drawn jointly with the
//! Brownian increment over the same step, so the path and the driving
//! increments are both exact and available to the Girsanov weights.

use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::{sample_compound_poisson, LevyConfig, MarkedPointSet};
use crate::math::{decay_integral, exp, sqrt};
use crate::rng::ReplicaStreams;
use crate::spectral::{Generator, SpectralModel};

/// Sorted simulation times: `0`, `T`, the `base_steps` equispaced points
/// and every jump time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    horizon: f64,
    base_steps: usize,
    times: Vec<f64>,
    /// For each grid point, the index of the jump occurring there.
    jump_index: Vec<Option<usize>>,
}

impl TimeGrid {
    pub fn new(horizon: f64, base_steps: usize, points: &MarkedPointSet) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::invalid("horizon must be positive and finite"));
        }
        if base_steps == 0 {
            return Err(Error::invalid("base_steps must be at least 1"));
        }
        if points.times().last().is_some_and(|t| *t > horizon) {
            return Err(Error::invalid("jump time beyond the horizon"));
        }
        let base = (0..=base_steps).map(|k| {
            if k == base_steps {
                horizon
            } else {
                horizon * k as f64 / base_steps as f64
            }
        });
        let mut times = Vec::with_capacity(base_steps + 1 + points.len());
        let mut jump_index = Vec::with_capacity(times.capacity());
        let jumps = points.times();
        let mut j = 0;
        for b in base {
            while j < jumps.len() && jumps[j] < b {
                times.push(jumps[j]);
                jump_index.push(Some(j));
                j += 1;
            }
            if j < jumps.len() && jumps[j] == b {
                times.push(b);
                jump_index.push(Some(j));
                j += 1;
            } else {
                times.push(b);
                jump_index.push(None);
            }
        }
        Ok(Self {
            horizon,
            base_steps,
            times,
            jump_index,
        })
    }

    /// Grid without jumps.
    pub fn uniform(horizon: f64, base_steps: usize) -> Result<Self> {
        Self::new(horizon, base_steps, &MarkedPointSet::empty())
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn base_steps(&self) -> usize {
        self.base_steps
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn jump_at(&self, k: usize) -> Option<usize> {
        self.jump_index[k]
    }

    /// Grid index of jump `j`.
    pub fn position_of_jump(&self, j: usize) -> Option<usize> {
        self.jump_index.iter().position(|x| *x == Some(j))
    }

    /// Checks that the grid was built for exactly these jump times.
    pub fn check_aligned(&self, points: &MarkedPointSet) -> Result<()> {
        let on_grid: Vec<f64> = self
            .jump_index
            .iter()
            .zip(&self.times)
            .filter_map(|(j, t)| j.map(|_| *t))
            .collect();
        if on_grid.as_slice() != points.times() {
            return Err(Error::invalid(
                "time grid is not aligned with the jump times",
            ));
        }
        Ok(())
    }
}

/// A simulated path: values and left limits at every grid point, the
/// driving jumps, and the standard Brownian increments of each step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePath {
    pub generator: Generator,
    pub grid: TimeGrid,
    pub values: Vec<Vec<f64>>,
    /// `X(t_k-)`; equal to `values[k]` except at jump times.
    pub left_limits: Vec<Vec<f64>>,
    pub jumps: MarkedPointSet,
    /// `increments[k][n]` is `β_n(t_{k+1}) - β_n(t_k)`; empty when the
    /// Gaussian channel is off.
    pub increments: Vec<Vec<f64>>,
}

impl SamplePath {
    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn terminal(&self) -> &[f64] {
        self.values.last().expect("grid has at least two points")
    }

    /// Largest Euclidean norm over the grid.
    pub fn max_norm(&self) -> f64 {
        self.values
            .iter()
            .map(|v| crate::math::norm(v))
            .fold(0.0, f64::max)
    }
}

struct Channels<'a> {
    drift: Option<&'a [f64]>,
    gaussian: bool,
    points: &'a MarkedPointSet,
}

fn run(
    model: &SpectralModel,
    which: Generator,
    channels: Channels<'_>,
    grid: &TimeGrid,
    streams: &ReplicaStreams,
) -> Result<SamplePath> {
    let dim = model.dim();
    channels.points.check(dim, grid.horizon())?;
    grid.check_aligned(channels.points)?;
    let rates = model.rates(which);
    let scales: Vec<f64> = model.covariances().iter().map(|q| sqrt(*q)).collect();
    let mut rngs: Vec<_> = if channels.gaussian {
        (0..dim).map(|n| streams.mode(n)).collect()
    } else {
        Vec::new()
    };

    let steps = grid.steps();
    let mut values = Vec::with_capacity(grid.len());
    let mut left_limits = Vec::with_capacity(grid.len());
    let mut increments = Vec::with_capacity(if channels.gaussian { steps } else { 0 });
    values.push(alloc::vec![0.0; dim]);
    left_limits.push(alloc::vec![0.0; dim]);

    let times = grid.times();
    for k in 0..steps {
        let dt = times[k + 1] - times[k];
        let prev = &values[k];
        let mut left = alloc::vec![0.0; dim];
        let mut dbeta = if channels.gaussian {
            alloc::vec![0.0; dim]
        } else {
            Vec::new()
        };
        for n in 0..dim {
            let r = rates[n];
            let mut x = exp(-r * dt) * prev[n];
            if let Some(b) = channels.drift {
                x += b[n] * decay_integral(r, dt);
            }
            if channels.gaussian {
                let z1: f64 = StandardNormal.sample(&mut rngs[n]);
                let z2: f64 = StandardNormal.sample(&mut rngs[n]);
                let db = sqrt(dt) * z1;
                let cov = decay_integral(r, dt);
                let var = decay_integral(2.0 * r, dt);
                let resid = (var - cov * cov / dt).max(0.0);
                let conv = cov / dt * db + sqrt(resid) * z2;
                x += scales[n] * conv;
                dbeta[n] = db;
            }
            left[n] = x;
        }
        let value = match grid.jump_at(k + 1) {
            Some(j) => left
                .iter()
                .zip(&channels.points.marks()[j])
                .map(|(l, m)| l + m)
                .collect(),
            None => left.clone(),
        };
        left_limits.push(left);
        values.push(value);
        if channels.gaussian {
            increments.push(dbeta);
        }
    }

    Ok(SamplePath {
        generator: which,
        grid: grid.clone(),
        values,
        left_limits,
        jumps: channels.points.clone(),
        increments,
    })
}

/// Simulates `X^B` for the given jump record on a grid aligned with it.
pub fn simulate_ou_path(
    model: &SpectralModel,
    which: Generator,
    levy: &LevyConfig,
    points: &MarkedPointSet,
    grid: &TimeGrid,
    streams: &ReplicaStreams,
) -> Result<SamplePath> {
    levy.validate(model.dim())?;
    if !levy.jumps_active() && !points.is_empty() {
        return Err(Error::invalid(
            "jump record supplied but the jump channel is off",
        ));
    }
    run(
        model,
        which,
        Channels {
            drift: levy.has_drift().then_some(levy.drift.as_slice()),
            gaussian: levy.gaussian,
            points,
        },
        grid,
        streams,
    )
}

/// Samples the jump record from the replica's jump lane, builds the hybrid
/// grid and simulates `X^B`.
pub fn simulate_replica(
    model: &SpectralModel,
    which: Generator,
    levy: &LevyConfig,
    horizon: f64,
    base_steps: usize,
    streams: &ReplicaStreams,
) -> Result<SamplePath> {
    let points = sample_jumps(model, levy, horizon, streams)?;
    let grid = TimeGrid::new(horizon, base_steps, &points)?;
    simulate_ou_path(model, which, levy, &points, &grid, streams)
}

/// The replica's compound Poisson record (empty when the channel is off).
pub fn sample_jumps(
    model: &SpectralModel,
    levy: &LevyConfig,
    horizon: f64,
    streams: &ReplicaStreams,
) -> Result<MarkedPointSet> {
    sample_compound_poisson(
        levy.rate,
        &levy.jump_law,
        horizon,
        model.dim(),
        &mut streams.jumps(),
    )
}

/// The Gaussian channel `Y_B(W)` alone, consuming the same increments as
/// [`simulate_ou_path`] with the same streams.
pub fn gaussian_convolution(
    model: &SpectralModel,
    which: Generator,
    grid: &TimeGrid,
    streams: &ReplicaStreams,
) -> Result<SamplePath> {
    run(
        model,
        which,
        Channels {
            drift: None,
            gaussian: true,
            points: &MarkedPointSet::empty(),
        },
        &TimeGrid::uniform_with_times(grid),
        streams,
    )
}

impl TimeGrid {
    // Same times, jump markers stripped.
    fn uniform_with_times(grid: &TimeGrid) -> TimeGrid {
        TimeGrid {
            horizon: grid.horizon,
            base_steps: grid.base_steps,
            times: grid.times.clone(),
            jump_index: alloc::vec![None; grid.times.len()],
        }
    }
}

/// `J_B(Z)(t) = Σ_{τ_i ≤ t} S_B(t - τ_i) ξ_i`, evaluated without a grid.
pub fn jump_convolution(
    model: &SpectralModel,
    which: Generator,
    points: &MarkedPointSet,
    t: f64,
) -> Vec<f64> {
    let mut out = alloc::vec![0.0; model.dim()];
    for (tau, mark) in points.iter() {
        if tau > t {
            break;
        }
        for n in 0..out.len() {
            out[n] += exp(-model.rate(which, n) * (t - tau)) * mark[n];
        }
    }
    out
}

/// `B_B(t) = ∫_0^t S_B(t - s) b ds`.
pub fn drift_convolution(
    model: &SpectralModel,
    which: Generator,
    drift: &[f64],
    t: f64,
) -> Result<Vec<f64>> {
    model.check_len(drift.len())?;
    if !(t >= 0.0) {
        return Err(Error::invalid("time must be nonnegative"));
    }
    Ok(drift
        .iter()
        .enumerate()
        .map(|(n, b)| b * decay_integral(model.rate(which, n), t))
        .collect())
}
