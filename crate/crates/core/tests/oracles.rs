//! Deterministic criteria checked against independent quadrature and
//! hand-derived values.

mod common;

use common::{m1, simpson, simpson_piecewise};
use ou_levy_core::cameron_martin::{
    cm_l2_norm, discrepancy, factorisation_check, representative_at,
};
use ou_levy_core::expr::Expr;
use ou_levy_core::levy::MarkedPointSet;
use ou_levy_core::spectral::{
    duhamel_residual, fractional_bound, hs_perturbation_integral, resolvent_criterion, sector_grid,
    smoothing_constant, smoothing_extremum,
};
use ou_levy_core::{Direction, Sequence, SpectralModel};

fn no_l2(n_max: usize) -> SpectralModel {
    let s = |e: &str| Sequence::Symbolic(Expr::parse(e).unwrap());
    SpectralModel::from_sequences(n_max, s("1"), s("1 + n^2"), s("exp(-n^2)")).unwrap()
}

fn hs_by_quadrature(model: &SpectralModel, horizon: f64) -> f64 {
    let integrand = |t: f64| {
        (0..model.dim())
            .map(|n| {
                let g = model.rate_gap(n);
                g * g * (-2.0 * model.a(n) * t).exp() * model.q(n)
            })
            .sum::<f64>()
    };
    simpson(&integrand, 0.0, horizon, 1e-15)
}

#[test]
fn hs_closed_form_matches_quadrature() {
    for (model, horizon) in [
        (m1(), 1.0),
        (m1(), 0.25),
        (no_l2(32), 1.0),
        (no_l2(32), 3.0),
    ] {
        let closed = hs_perturbation_integral(&model, horizon)
            .unwrap()
            .value()
            .unwrap();
        let quad = hs_by_quadrature(&model, horizon);
        assert!(((closed - quad) / quad).abs() < 1e-8, "{closed} vs {quad}");
    }
}

#[test]
fn hs_nondecreasing_in_horizon() {
    let m = m1();
    let mut prev = 0.0;
    for k in 1..=40 {
        let v = hs_perturbation_integral(&m, 0.05 * k as f64)
            .unwrap()
            .value()
            .unwrap();
        assert!(v >= prev);
        prev = v;
    }
}

#[test]
fn no_l2_hs_term_shape() {
    // term n: n^4 e^{-n^2} (1 - e^{-2T}) / 2
    let m = no_l2(32);
    let v = hs_perturbation_integral(&m, 1.0).unwrap();
    let expect: f64 = (1..=32)
        .map(|n| {
            let n = n as f64;
            n.powi(4) * (-n * n).exp() * (1.0 - (-2.0f64).exp()) / 2.0
        })
        .sum();
    assert!((v.value().unwrap() - expect).abs() < 1e-15);
}

#[test]
fn duhamel_identity_on_all_modes() {
    let scalar = SpectralModel::new(vec![1.0], vec![2.0], vec![1.0]).unwrap();
    for model in [m1(), scalar] {
        for n in 0..model.dim() {
            for t in [0.1, 0.5, 1.0] {
                let r = duhamel_residual(&model, n, t).unwrap();
                assert!(r < 1e-10, "mode {n} t {t}: {r}");
            }
        }
    }
}

#[test]
fn duhamel_identity_on_stiff_modes() {
    for (a, at) in [(6.9e10, 1.0), (1.0, 6.9e10), (1e4, 2e4)] {
        let model = SpectralModel::new(vec![a], vec![at], vec![1.0]).unwrap();
        for t in [0.1, 0.5, 1.0] {
            assert!(
                duhamel_residual(&model, 0, t).unwrap() < 1e-10,
                "a={a} at={at} t={t}"
            );
        }
    }
}

#[test]
fn duhamel_scalar_integral_by_hand() {
    // ∫_0^1 e^{-2(1-s)} (1-2) e^{-s} ds = -e^{-2}(e - 1) = e^{-2} - e^{-1}
    let lhs = (-2.0f64).exp() - (-1.0f64).exp();
    let rhs = simpson(
        &|s: f64| -(-2.0 * (1.0 - s)).exp() * (-s).exp(),
        0.0,
        1.0,
        1e-15,
    );
    assert!((lhs - rhs).abs() < 1e-13);
}

#[test]
fn smoothing_bound_holds() {
    let grid: Vec<f64> = (1..=1000).map(|k| k as f64 / 1000.0).collect();
    let dense = SpectralModel::new(
        (1..=512).map(|n| (n as f64).powf(1.5) * 0.1).collect(),
        vec![1.0; 512],
        vec![1.0; 512],
    )
    .unwrap();
    for beta in [0.1, 0.25, 0.49] {
        for model in [m1(), dense.clone()] {
            let c = smoothing_constant(&model, beta, &grid).unwrap();
            assert!(c <= smoothing_extremum(beta) + 1e-12, "beta {beta}: {c}");
        }
    }
}

#[test]
fn smoothing_extremum_by_calculus() {
    // max_x x^β e^{-x}: derivative zero at x = β
    for beta in [0.1, 0.25, 0.49, 0.9] {
        let brute = (1..200_000)
            .map(|k| {
                let x = k as f64 * 1e-5;
                x.powf(beta) * (-x).exp()
            })
            .fold(0.0, f64::max);
        assert!((brute - smoothing_extremum(beta)).abs() < 1e-9);
    }
}

#[test]
fn resolvent_and_fractional_agree_on_m1() {
    let m = m1();
    let frac = fractional_bound(&m, 0.25).unwrap();
    assert!(frac.converged);
    let grid = sector_grid(1.0, 1e-3, 1e3, 61, 1).unwrap();
    assert!(grid.iter().all(|z| z.im == 0.0));
    let res = resolvent_criterion(&m, 0.25, 1.0, &grid).unwrap();
    assert!(res.is_finite() && res > 0.0);
    // |λ|^β / |λ + a| ≤ a^{β - 1} · const on the positive axis, so the
    // resolvent sup cannot exceed sup_n |ã_n - a_n| a_n^{-β} by much
    assert!(res <= frac.value().unwrap());
}

#[test]
fn factorisation_finite_on_m1_partial_sums_stabilise() {
    let m = SpectralModel::m1(64);
    let v = factorisation_check(&m, 1.0).unwrap();
    assert!(v.converged);
    let full = v.value().unwrap();
    let partial: f64 = (1..=8)
        .map(|n| {
            let n = n as f64;
            (-2.0 * n * n).exp() * n * n
        })
        .sum();
    assert!((full - partial).abs() < 1e-20 + 1e-15 * full);
}

fn three_jump_record() -> MarkedPointSet {
    MarkedPointSet::new(
        vec![0.137, 0.42, 0.811],
        vec![
            (1..=8).map(|n| 1.0 / n as f64).collect(),
            (1..=8)
                .map(|n| if n % 2 == 0 { -0.5 } else { 0.75 })
                .collect(),
            (1..=8).map(|n| (n as f64).sin()).collect(),
        ],
    )
    .unwrap()
}

#[test]
fn cm_identity_reconstructs_discrepancy() {
    let m = m1();
    let points = three_jump_record();
    let drift: Vec<f64> = (1..=8).map(|n| 0.5 + 1.0 / n as f64).collect();
    for dir in [Direction::AToATilde, Direction::ATildeToA] {
        let target = dir.target();
        for k in 1..=16 {
            let t = k as f64 / 16.0;
            let direct = discrepancy(&m, dir, &points, &drift, t).unwrap();
            let mut breaks = vec![0.0];
            breaks.extend(points.times().iter().copied().filter(|s| *s < t));
            breaks.push(t);
            for n in 0..8 {
                let integrand = |s: f64| {
                    let u = representative_at(&m, dir, &points, &drift, s).unwrap();
                    (-m.rate(target, n) * (t - s)).exp() * m.q(n).sqrt() * u[n]
                };
                let rebuilt = simpson_piecewise(&integrand, &breaks, 1e-13);
                assert!(
                    (rebuilt - direct[n]).abs() < 1e-8,
                    "{dir:?} t={t} n={n}: {rebuilt} vs {}",
                    direct[n]
                );
            }
        }
    }
}

#[test]
fn cm_norm_single_jump_closed_form_matches_quadrature() {
    let m = m1();
    let mark: Vec<f64> = (1..=8).map(|n| 1.0 / (n as f64).powi(2)).collect();
    let s = 0.3;
    let points = MarkedPointSet::single(s, mark).unwrap();
    for dir in [Direction::AToATilde, Direction::ATildeToA] {
        let closed = cm_l2_norm(&m, dir, &points, &[0.0; 8], 1.0).unwrap();
        let total = closed.l2_norm_sq.value().unwrap();
        let quad: f64 = (0..8)
            .map(|n| {
                simpson(
                    &|t: f64| {
                        let u = representative_at(&m, dir, &points, &[0.0; 8], t).unwrap();
                        u[n] * u[n]
                    },
                    s,
                    1.0,
                    1e-15,
                )
            })
            .sum();
        assert!(((total - quad) / quad).abs() < 1e-8, "{total} vs {quad}");
    }
}

#[test]
fn cm_norm_multi_jump_matches_quadrature() {
    let m = m1();
    let points = three_jump_record();
    let drift = vec![0.25; 8];
    let r = cm_l2_norm(&m, Direction::AToATilde, &points, &drift, 1.0).unwrap();
    let mut breaks = vec![0.0];
    breaks.extend_from_slice(points.times());
    breaks.push(1.0);
    let quad: f64 = simpson_piecewise(
        &|t: f64| {
            representative_at(&m, Direction::AToATilde, &points, &drift, t)
                .unwrap()
                .iter()
                .map(|u| u * u)
                .sum::<f64>()
        },
        &breaks,
        1e-14,
    );
    let v = r.l2_norm_sq.value().unwrap();
    assert!(((v - quad) / quad).abs() < 1e-8);
}
