//! The five subcommands. Each writes its files into the configured output
//! directory and returns an [`Outcome`] describing what it did.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ou_levy_core::cameron_martin::{
    expected_cm_norm, factorisation_check, novikov_bound, reproduce_example, CMReport, ExampleId,
    ExampleReport, NovikovReport,
};
use ou_levy_core::girsanov::{
    direct_sample, summarize, weighted_sample, DensityReport, Functional, ImportanceSetup,
};
use ou_levy_core::math::decay_integral;
use ou_levy_core::rigidity::{aggregate_rigidity, rigidity_replica, RigidityReport};
use ou_levy_core::rng::{domain, ReplicaStreams};
use ou_levy_core::series::Witness;
use ou_levy_core::simulate::simulate_replica;
use ou_levy_core::spectral::{
    duhamel_residual, fractional_bound, hs_perturbation_integral, resolvent_criterion, sector_grid,
    smoothing_constant, smoothing_extremum,
};
use ou_levy_core::stats::Running;
use ou_levy_core::{Direction, ExtendedReal, Generator, SeriesVerdict};
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Format};
use crate::error::CliError;
use crate::io::{self, fmt_f64, sha256_hex, write_atomic, write_json};
use crate::report::Report;

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// Human-readable summary printed to stdout.
    pub summary: String,
    /// Why the run's own acceptance check failed, if it did.
    pub self_check_failure: Option<String>,
}

// ---------------------------------------------------------------- check

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionRecord {
    pub criterion: String,
    pub value: ExtendedReal,
    pub converged: bool,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms_examined: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CriterionRecord {
    fn series(name: &str, v: SeriesVerdict) -> Self {
        Self {
            criterion: name.to_string(),
            value: v.value,
            converged: v.converged,
            witness: v.divergence_witness,
            terms_examined: Some(v.terms_examined),
            note: None,
        }
    }

    fn scalar(name: &str, value: ExtendedReal, note: String) -> Self {
        Self {
            criterion: name.to_string(),
            converged: value.is_finite(),
            value,
            witness: None,
            terms_examined: None,
            note: Some(note),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub invariant: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckBundle {
    pub dim: usize,
    pub criteria: Vec<CriterionRecord>,
    pub invariants: Vec<InvariantRecord>,
    pub cm: Vec<CMReport>,
    pub novikov: Vec<NovikovRecord>,
    pub all_finite: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NovikovRecord {
    pub direction: Direction,
    /// `None` when the bound does not apply (no perturbation or no jumps).
    pub bound: Option<NovikovReport>,
    /// `E exp(½‖U‖²)` or its upper bound.
    pub value: ExtendedReal,
    pub note: String,
}

const DUHAMEL_TIMES: [f64; 3] = [0.1, 0.5, 1.0];
const DUHAMEL_TOLERANCE: f64 = 1e-10;
const SMOOTHING_SLACK: f64 = 1e-12;

fn novikov_record(config: &ExperimentConfig, cm: &CMReport) -> Result<NovikovRecord, CliError> {
    let model = config.model()?;
    let levy = config.levy()?;
    let dir = cm.direction;
    if !model.has_perturbation() {
        return Ok(NovikovRecord {
            direction: dir,
            bound: None,
            value: ExtendedReal::Finite(1.0),
            note: "identical generators: U = 0".into(),
        });
    }
    if !levy.jumps_active() {
        let value = match cm.l2_norm_sq.value {
            ExtendedReal::Finite(v) => ExtendedReal::from_f64((0.5 * v).exp()),
            ExtendedReal::Infinite => ExtendedReal::Infinite,
        };
        return Ok(NovikovRecord {
            direction: dir,
            bound: None,
            value,
            note: "no jumps: U is deterministic".into(),
        });
    }
    let b = novikov_bound(&model, dir, levy.rate, &levy.jump_law, config.grid.horizon)?;
    Ok(NovikovRecord {
        direction: dir,
        value: b.bound_value,
        note: match b.max_horizon {
            ExtendedReal::Finite(t) => format!("bound finite for horizons below {t}"),
            ExtendedReal::Infinite => "bound finite for every horizon".into(),
        },
        bound: Some(b),
    })
}

pub fn check_bundle(config: &ExperimentConfig) -> Result<CheckBundle, CliError> {
    let model = config.model()?;
    let levy = config.levy()?;
    let horizon = config.grid.horizon;
    let run = &config.run;
    let mut criteria = vec![
        CriterionRecord::series(
            "hs_perturbation_integral",
            hs_perturbation_integral(&model, horizon)?,
        ),
        CriterionRecord::series("fractional_bound", fractional_bound(&model, run.beta)?),
    ];
    let g = &run.resolvent;
    let grid = sector_grid(run.theta, g.r_min, g.r_max, g.points, g.rays)?;
    let res = resolvent_criterion(&model, run.beta, run.theta, &grid)?;
    criteria.push(CriterionRecord::scalar(
        "resolvent_criterion",
        ExtendedReal::from_f64(res),
        format!(
            "max over {} sampled points on {} rays, |lambda| in [{}, {}]",
            grid.len(),
            g.rays,
            g.r_min,
            g.r_max
        ),
    ));
    let mut cm = Vec::new();
    let mut novikov = Vec::new();
    for dir in [Direction::AToATilde, Direction::ATildeToA] {
        let report = expected_cm_norm(&model, dir, &levy.jump_law, &levy.drift, horizon)?;
        criteria.push(CriterionRecord {
            note: Some("E||U||^2 per jump plus drift part".into()),
            ..CriterionRecord::series(
                &format!("cm_l2_norm {}", dir.label()),
                report.l2_norm_sq.clone(),
            )
        });
        let nov = novikov_record(config, &report)?;
        criteria.push(CriterionRecord::scalar(
            &format!("novikov_bound {}", dir.label()),
            nov.value,
            nov.note.clone(),
        ));
        cm.push(report);
        novikov.push(nov);
    }
    criteria.push(CriterionRecord::series(
        "factorisation_check",
        factorisation_check(&model, horizon)?,
    ));

    let mut duhamel = 0.0f64;
    for n in 0..model.dim() {
        for t in DUHAMEL_TIMES {
            duhamel = duhamel.max(duhamel_residual(&model, n, t)?);
        }
    }
    let points = run.smoothing_points;
    let t_grid: Vec<f64> = (1..=points)
        .map(|k| horizon * k as f64 / points as f64)
        .collect();
    let smoothing = smoothing_constant(&model, run.beta, &t_grid)?;
    let bound = smoothing_extremum(run.beta) + SMOOTHING_SLACK;
    let invariants = vec![
        InvariantRecord {
            invariant: "duhamel_residual".into(),
            value: duhamel,
            bound: DUHAMEL_TOLERANCE,
            passed: duhamel < DUHAMEL_TOLERANCE,
        },
        InvariantRecord {
            invariant: "smoothing_constant".into(),
            value: smoothing,
            bound,
            passed: smoothing <= bound,
        },
    ];
    Ok(CheckBundle {
        dim: model.dim(),
        all_finite: criteria.iter().all(|c| c.converged),
        criteria,
        invariants,
        cm,
        novikov,
    })
}

fn fmt_value(v: &ExtendedReal) -> String {
    match v {
        ExtendedReal::Finite(x) => format!("{x:.6e}"),
        ExtendedReal::Infinite => "inf".into(),
    }
}

pub fn cmd_check(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let bundle = check_bundle(config)?;
    let dir = &config.output.directory;
    io::ensure_dir(dir)?;
    let path = dir.join("check.json");
    let mut summary = String::new();
    for c in &bundle.criteria {
        let witness = c
            .witness
            .as_ref()
            .map(|w| format!(" (witness n={} term={:.3e})", w.index, w.term))
            .unwrap_or_default();
        let verdict = if c.converged { "finite" } else { "DIVERGENT" };
        let _ = writeln!(
            summary,
            "{:<28} {:>14} {verdict}{witness}",
            c.criterion,
            fmt_value(&c.value)
        );
    }
    for i in &bundle.invariants {
        let _ = writeln!(
            summary,
            "{:<28} {:>14.6e} {} (bound {:.3e})",
            i.invariant,
            i.value,
            if i.passed { "ok" } else { "FAILED" },
            i.bound
        );
    }
    let failed: Vec<String> = bundle
        .invariants
        .iter()
        .filter(|i| !i.passed)
        .map(|i| i.invariant.clone())
        .collect();
    write_json(&path, &Report::new("check", config, bundle))?;
    Ok(Outcome {
        files: vec![path],
        summary,
        self_check_failure: (!failed.is_empty())
            .then(|| format!("invariants failed: {}", failed.join(", "))),
    })
}

// ---------------------------------------------------------------- simulate

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeMoment {
    pub mode: usize,
    pub mean_analytic: f64,
    pub second_moment_analytic: f64,
    pub second_moment_empirical: f64,
    pub standard_error: f64,
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationStats {
    pub generator: Generator,
    pub horizon: f64,
    pub replicas: u64,
    /// `E X_n(T)²` against its closed form, per mode.
    pub modes: Vec<ModeMoment>,
    pub max_abs_z: f64,
    /// Every `|z| < 3`.
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub replica: u64,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub generator: Generator,
    pub replicas: u64,
    pub files: Vec<FileEntry>,
    pub stats_file: String,
}

/// `E X_n(T)` and `E X_n(T)²` of the exact mild solution.
pub fn analytic_moments(
    config: &ExperimentConfig,
    which: Generator,
) -> Result<Vec<(f64, f64)>, CliError> {
    let model = config.model()?;
    let levy = config.levy()?;
    let t = config.grid.horizon;
    let dim = model.dim();
    let (mean_jump, square_jump) = if levy.jumps_active() {
        (levy.jump_law.mean(dim), levy.jump_law.mean_square(dim))
    } else {
        (vec![0.0; dim], vec![0.0; dim])
    };
    Ok((0..dim)
        .map(|n| {
            let a = model.rate(which, n);
            let mean = (levy.drift[n] + levy.rate * mean_jump[n]) * decay_integral(a, t);
            let gauss = if levy.gaussian { model.q(n) } else { 0.0 };
            let var = (gauss + levy.rate * square_jump[n]) * decay_integral(2.0 * a, t);
            (mean, var + mean * mean)
        })
        .collect())
}

fn z_or_exact(est: f64, se: f64, target: f64) -> f64 {
    if se > 0.0 {
        (est - target) / se
    } else if (est - target).abs() <= 1e-12 * target.abs().max(1.0) {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn cmd_simulate(config: &ExperimentConfig, pool: &ThreadPool) -> Result<Outcome, CliError> {
    let model = config.model()?;
    let levy = config.levy()?;
    let (horizon, steps) = (config.grid.horizon, config.grid.base_steps);
    let which = config.run.generator;
    let seed = config.run.master_seed;
    let out = &config.output;
    let dir = out.directory.clone();
    let paths_dir = dir.join("paths");
    io::ensure_dir(&paths_dir)?;

    let per = crate::parallel::map_replicas(pool, config.run.replicas, |r| {
        let path = simulate_replica(
            &model,
            which,
            &levy,
            horizon,
            steps,
            &ReplicaStreams::new(seed, domain::SIMULATE, r),
        )?;
        let mut entries = Vec::new();
        if out.wants(Format::Json) {
            entries.push(write_replica(&paths_dir, r, "json", &io::to_json(&path))?);
        }
        if out.wants(Format::Csv) {
            let tmp = path_csv_bytes(&path)?;
            entries.push(write_replica(&paths_dir, r, "csv", &tmp)?);
        }
        Ok((entries, path.terminal().to_vec()))
    })?;

    let analytic = analytic_moments(config, which)?;
    let mut acc = vec![Running::new(); model.dim()];
    for (_, terminal) in &per {
        for (n, x) in terminal.iter().enumerate() {
            acc[n].push(x * x);
        }
    }
    let modes: Vec<ModeMoment> = analytic
        .iter()
        .zip(&acc)
        .enumerate()
        .map(|(n, ((mean, second), run))| {
            let est = run.estimate();
            ModeMoment {
                mode: n + 1,
                mean_analytic: *mean,
                second_moment_analytic: *second,
                second_moment_empirical: est.mean,
                standard_error: est.se,
                z_score: z_or_exact(est.mean, est.se, *second),
            }
        })
        .collect();
    let max_abs_z = modes.iter().map(|m| m.z_score.abs()).fold(0.0, f64::max);
    let stats = SimulationStats {
        generator: which,
        horizon,
        replicas: config.run.replicas,
        passed: config.run.replicas >= 2 && max_abs_z < 3.0,
        max_abs_z,
        modes,
    };
    let stats_path = dir.join("stats.json");
    write_json(&stats_path, &Report::new("simulate", config, stats.clone()))?;

    let files: Vec<FileEntry> = per.into_iter().flat_map(|(e, _)| e).collect();
    let manifest = Manifest {
        generator: which,
        replicas: config.run.replicas,
        files,
        stats_file: "stats.json".into(),
    };
    let manifest_path = dir.join("manifest.json");
    let file_count = manifest.files.len();
    write_json(&manifest_path, &Report::new("simulate", config, manifest))?;

    let mut summary = format!(
        "simulated {} replica(s) of X^{} on {} base steps, {file_count} path file(s)\n",
        config.run.replicas,
        which_label(which),
        steps
    );
    for m in &stats.modes {
        let _ = writeln!(
            summary,
            "mode {:>3}: E X^2 = {:.6e} (analytic {:.6e}, z = {:+.2})",
            m.mode, m.second_moment_empirical, m.second_moment_analytic, m.z_score
        );
    }
    Ok(Outcome {
        files: vec![manifest_path, stats_path],
        summary,
        self_check_failure: (!stats.passed)
            .then(|| format!("terminal second moments: max |z| = {max_abs_z:.3}")),
    })
}

fn which_label(g: Generator) -> &'static str {
    match g {
        Generator::A => "A",
        Generator::ATilde => "Atilde",
    }
}

fn path_csv_bytes(path: &ou_levy_core::simulate::SamplePath) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |e: csv::Error| CliError::Other(format!("csv: {e}"));
    let mut header = vec!["time".to_string()];
    header.extend((1..=path.dim()).map(|n| format!("mode_{n}")));
    w.write_record(&header).map_err(wrap)?;
    for (t, x) in path.grid.times().iter().zip(&path.values) {
        w.write_record(std::iter::once(fmt_f64(*t)).chain(x.iter().map(|v| fmt_f64(*v))))
            .map_err(wrap)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Other(format!("csv: {e}")))
}

fn write_replica(dir: &Path, replica: u64, ext: &str, bytes: &[u8]) -> Result<FileEntry, CliError> {
    let name = format!("replica_{replica:06}.{ext}");
    write_atomic(&dir.join(&name), bytes)?;
    Ok(FileEntry {
        replica,
        path: format!("paths/{name}"),
        sha256: sha256_hex(bytes),
    })
}

// ---------------------------------------------------------------- girsanov

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GirsanovResult {
    pub direction: Direction,
    pub representability: CMReport,
    pub novikov: Option<NovikovReport>,
    pub reports: Vec<DensityReport>,
    /// Mean weight within 3 standard errors of one and every functional
    /// with `|z| < 3`.
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refusal {
    pub status: String,
    pub reason: String,
    pub verdict: Option<SeriesVerdict>,
}

pub fn cmd_girsanov(config: &ExperimentConfig, pool: &ThreadPool) -> Result<Outcome, CliError> {
    let model = config.model()?;
    let levy = config.levy()?;
    let setup = ImportanceSetup {
        model: &model,
        levy: &levy,
        horizon: config.grid.horizon,
        base_steps: config.grid.base_steps,
        direction: config.run.direction,
    };
    let dir = &config.output.directory;
    io::ensure_dir(dir)?;
    let path = dir.join("girsanov.json");
    let representability = match setup.check() {
        Ok(r) => r,
        Err(e) => {
            let err = CliError::from(e);
            if let CliError::Precondition { message, verdict } = &err {
                let refusal = Refusal {
                    status: "refused".into(),
                    reason: message.clone(),
                    verdict: verdict.clone(),
                };
                write_json(&path, &Report::new("girsanov", config, refusal))?;
            }
            return Err(err);
        }
    };
    let seed = config.run.master_seed;
    let replicas = config.run.replicas;
    let weighted =
        crate::parallel::map_replicas(pool, replicas, |r| Ok(weighted_sample(&setup, seed, r)?))?;
    let direct =
        crate::parallel::map_replicas(pool, replicas, |r| Ok(direct_sample(&setup, seed, r)?))?;
    let reports: Vec<DensityReport> = config
        .run
        .functional
        .functionals()
        .into_iter()
        .map(|f| summarize(setup.direction, f, &direct, &weighted))
        .collect();
    let novikov = if levy.jumps_active() {
        Some(novikov_bound(
            &model,
            setup.direction,
            levy.rate,
            &levy.jump_law,
            setup.horizon,
        )?)
    } else {
        None
    };
    let mean_ok = reports.first().is_some_and(|r| {
        (r.mean_weight - 1.0).abs() < 3.0 * r.weight_se
            || r.weight_se == 0.0 && r.mean_weight == 1.0
    });
    let passed = mean_ok && reports.iter().all(|r| r.passed);

    let mut files = vec![path.clone()];
    if config.output.wants(Format::Csv) {
        let wpath = dir.join("weights.csv");
        let header: Vec<String> = ["replica", "weight", "coordinate", "squared_norm"]
            .map(String::from)
            .to_vec();
        let rows = weighted.iter().enumerate().map(|(r, s)| {
            vec![
                r.to_string(),
                fmt_f64(s.weight),
                fmt_f64(Functional::Coordinate.eval(&s.terminal)),
                fmt_f64(Functional::SquaredNorm.eval(&s.terminal)),
            ]
        });
        io::write_csv(&wpath, &header, rows)?;
        files.push(wpath);
    }
    let mut summary = format!(
        "direction {}: {} replicas, E||U||^2 = {}\n",
        setup.direction.label(),
        replicas,
        fmt_value(&representability.l2_norm_sq.value)
    );
    if let Some(r) = reports.first() {
        let _ = writeln!(
            summary,
            "mean weight {:.6} +- {:.6}, min {:.3e}, ESS {:.1}",
            r.mean_weight, r.weight_se, r.min_weight, r.ess
        );
    }
    for r in &reports {
        let _ = writeln!(
            summary,
            "{:<14} direct {:.6} +- {:.6}  reweighted {:.6} +- {:.6}  z = {:+.3} {}",
            format!("{:?}", r.functional),
            r.functional_direct.mean,
            r.functional_direct.se,
            r.functional_reweighted.mean,
            r.functional_reweighted.se,
            r.z_score,
            if r.passed { "ok" } else { "FAILED" }
        );
    }
    let result = GirsanovResult {
        direction: setup.direction,
        representability,
        novikov,
        reports,
        passed,
    };
    write_json(&path, &Report::new("girsanov", config, result))?;
    Ok(Outcome {
        files,
        summary,
        self_check_failure: (!passed)
            .then(|| "reweighted estimates disagree with direct Monte Carlo".into()),
    })
}

// ---------------------------------------------------------------- rigidity

pub fn rigidity_report(
    config: &ExperimentConfig,
    pool: &ThreadPool,
) -> Result<RigidityReport, CliError> {
    let model = config.model()?;
    let levy = config.levy()?;
    let (horizon, steps, seed) = (
        config.grid.horizon,
        config.grid.base_steps,
        config.run.master_seed,
    );
    let per = crate::parallel::map_replicas(pool, config.run.replicas, |r| {
        Ok(rigidity_replica(
            &model,
            &levy,
            horizon,
            steps,
            config.run.epsilon,
            &ReplicaStreams::new(seed, domain::RIGIDITY, r),
        )?)
    })?;
    Ok(aggregate_rigidity(per))
}

pub fn cmd_rigidity(config: &ExperimentConfig, pool: &ThreadPool) -> Result<Outcome, CliError> {
    let report = rigidity_report(config, pool)?;
    let dir = &config.output.directory;
    io::ensure_dir(dir)?;
    let path = dir.join("rigidity.json");
    let mut files = vec![path.clone()];
    if config.output.wants(Format::Csv) {
        let cpath = dir.join("residuals.csv");
        let header: Vec<String> = [
            "replica",
            "jumps",
            "residual_own",
            "residual_other",
            "lower_bound",
            "jumps_recovered",
            "jump_identity_error",
        ]
        .map(String::from)
        .to_vec();
        let rows = report.per_replica.iter().map(|r| {
            vec![
                r.replica.to_string(),
                r.jumps.to_string(),
                fmt_f64(r.residual_own),
                fmt_f64(r.residual_other),
                r.lower_bound.map(fmt_f64).unwrap_or_default(),
                r.jumps_recovered.to_string(),
                fmt_f64(r.jump_identity_error),
            ]
        });
        io::write_csv(&cpath, &header, rows)?;
        files.push(cpath);
    }
    let mut summary = format!(
        "{} replicas, {} with jumps, {} discriminating\nmax own residual {:.3e}, min wrong-generator residual {}\njump identity error {:.3e}, paths equal: {}\n",
        report.replicas,
        report.replicas_with_jumps,
        report.discriminating_replicas,
        report.max_residual_own,
        report
            .min_residual_other_discriminating
            .map_or_else(|| "n/a".to_string(), |v| format!("{v:.3e}")),
        report.max_jump_identity_error,
        report.paths_equal
    );
    if report.vacuous {
        summary.push_str("no replica had a jump: equality holds vacuously\n");
    }
    let passed = report.passed();
    write_json(&path, &Report::new("rigidity", config, report))?;
    Ok(Outcome {
        files,
        summary,
        self_check_failure: (!passed).then(|| "rigidity checks failed".into()),
    })
}

// ---------------------------------------------------------------- reproduce

pub const ALL_EXAMPLES: [ExampleId; 4] = [
    ExampleId::NoL2,
    ExampleId::OneSided,
    ExampleId::NovikovFails,
    ExampleId::NoFactorisation,
];

pub fn cmd_reproduce(ids: &[ExampleId], output: &ExperimentConfig) -> Result<Outcome, CliError> {
    let dir = &output.output.directory;
    io::ensure_dir(dir)?;
    let mut files = Vec::new();
    let mut summary = String::new();
    let mut failed = Vec::new();
    for id in ids {
        let report: ExampleReport = reproduce_example(*id)?;
        let mut config = ExperimentConfig::for_example(*id);
        config.output = output.output.clone();
        config.run.master_seed = output.run.master_seed;
        let config = config.resolved()?;
        let _ = writeln!(
            summary,
            "{} [{}]",
            id.as_str(),
            if report.reproduced {
                "reproduced"
            } else {
                "MISMATCH"
            }
        );
        for c in &report.checks {
            let witness = c
                .verdict
                .as_ref()
                .and_then(|v| v.divergence_witness.as_ref())
                .map(|w| format!(" witness n={} term={:.3e}", w.index, w.term))
                .unwrap_or_default();
            let _ = writeln!(
                summary,
                "  {:<48} expected {:<10} observed {:<10}{witness}",
                c.criterion,
                format!("{:?}", c.expected),
                format!("{:?}", c.observed)
            );
        }
        if !report.reproduced {
            failed.push(id.as_str());
        }
        let path = dir.join(format!("reproduce_{}.json", id.as_str()));
        write_json(&path, &Report::new("reproduce", &config, report))?;
        files.push(path);
    }
    Ok(Outcome {
        files,
        summary,
        self_check_failure: (!failed.is_empty())
            .then(|| format!("not reproduced: {}", failed.join(", "))),
    })
}
