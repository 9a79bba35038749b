//! Multi-run experiments: seeded batches, summary statistics, the L8 factor
//! screen and CSV output.
//!
//! Runs are independent and may execute in parallel. Results always come
//! back in run-index order, so output never depends on scheduling.

mod config;
mod report;

use std::path::PathBuf;

use rayon::prelude::*;

pub use config::parse_config;
pub use report::{write_screen_csv, write_solve_csv, CSV_HEADER};

use crate::error::{Error, Result};
use crate::optim::{Algorithm, FactorLevels, PreparedProblem, RunResult, SwarmConfig};

/// Environment variable capping how many runs execute at once.
pub const THREADS_ENV: &str = "GRRAP_THREADS";

/// What to run and where to write it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub network: Option<PathBuf>,
    pub instance: Option<PathBuf>,
    pub algorithms: Vec<Algorithm>,
    pub runs: usize,
    /// Base settings. `seed` is the master seed; run `k` uses `seed + k`.
    pub config: SwarmConfig,
    /// Factor levels for `bsso` runs when not all four are wanted.
    pub factors: Option<FactorLevels>,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            network: None,
            instance: None,
            algorithms: vec![Algorithm::Bsso],
            runs: 1,
            config: SwarmConfig::default(),
            factors: None,
            out: None,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithm selected".into()));
        }
        if self.factors.is_some() && self.algorithms.iter().any(|&a| a != Algorithm::Bsso) {
            return Err(Error::Config(
                "factor levels can only be set for the bsso algorithm".into(),
            ));
        }
        self.config.validate()
    }
}

/// Sample statistics over the best fitness of each run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub runs: usize,
    pub f_avg: f64,
    pub f_max: f64,
    pub f_min: f64,
    /// Sample standard deviation (`n - 1` denominator), zero for one run.
    pub f_stdev: f64,
    /// Mean wall time in seconds.
    pub t_avg: f64,
}

impl SummaryStats {
    pub fn from_runs(results: &[RunResult]) -> Result<Self> {
        if results.is_empty() {
            return Err(Error::Domain("no runs to summarize".into()));
        }
        let n = results.len() as f64;
        let fit = results.iter().map(|r| r.best_fitness);
        let f_avg = fit.clone().sum::<f64>() / n;
        let f_max = fit.clone().fold(f64::NEG_INFINITY, f64::max);
        let f_min = fit.clone().fold(f64::INFINITY, f64::min);
        let f_stdev = if results.len() > 1 {
            (fit.map(|f| (f - f_avg).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Ok(SummaryStats {
            runs: results.len(),
            // Rounding in the mean can push it a hair outside [min, max].
            f_avg: f_avg.clamp(f_min, f_max),
            f_max,
            f_min,
            f_stdev,
            t_avg: results.iter().map(|r| r.wall_time).sum::<f64>() / n,
        })
    }
}

/// Runs of one algorithm (or one factor combination) with their summary.
#[derive(Debug, Clone)]
pub struct Batch {
    pub algorithm: Algorithm,
    /// Set for swarm runs.
    pub factors: Option<FactorLevels>,
    pub runs: Vec<RunResult>,
    pub summary: SummaryStats,
}

/// What one batch runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Algorithm(Algorithm),
    Swarm(FactorLevels),
}

/// Thread cap from `GRRAP_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match thread_cap()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::Config(format!("cannot start thread pool: {e}"))),
        None => Ok(f()),
    }
}

/// `runs` seeded runs of `method`; run `k` uses seed `cfg.seed + k`.
pub fn run_batch(
    problem: &PreparedProblem<'_>,
    method: Method,
    cfg: &SwarmConfig,
    runs: usize,
) -> Result<Batch> {
    if runs == 0 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    let results: Vec<Result<RunResult>> = with_pool(|| {
        (0..runs)
            .into_par_iter()
            .map(|k| {
                let cfg = SwarmConfig {
                    seed: cfg.seed.wrapping_add(k as u64),
                    ..cfg.clone()
                };
                match method {
                    Method::Algorithm(a) => problem.run(a, &cfg),
                    Method::Swarm(f) => problem.run_swarm(&SwarmConfig { factors: f, ..cfg }),
                }
            })
            .collect()
    })?;
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;
    let (algorithm, factors) = match method {
        Method::Algorithm(a) => (a, runs[0].factors),
        Method::Swarm(f) => (runs[0].algorithm, Some(f)),
    };
    Ok(Batch {
        algorithm,
        factors,
        summary: SummaryStats::from_runs(&runs)?,
        runs,
    })
}

/// One batch per algorithm of the spec, in the spec's order.
pub fn solve(problem: &PreparedProblem<'_>, spec: &ExperimentSpec) -> Result<Vec<Batch>> {
    spec.validate()?;
    spec.algorithms
        .iter()
        .map(|&a| {
            let method = match (a, spec.factors) {
                (Algorithm::Bsso, Some(f)) => Method::Swarm(f),
                _ => Method::Algorithm(a),
            };
            run_batch(problem, method, &spec.config, spec.runs)
        })
        .collect()
}

/// The L8(2^4) orthogonal array over factors A to D (columns 1, 2, 4 and 7
/// of the standard array). Row 1 is all off, row 8 is A and B on.
pub const L8_DESIGN: [FactorLevels; 8] = {
    const fn row(a: bool, b: bool, c: bool, d: bool) -> FactorLevels {
        FactorLevels {
            comb_num: a,
            two_stage_cg: b,
            pbest_in_rum: c,
            adaptive_uj: d,
        }
    }
    [
        row(false, false, false, false),
        row(false, false, true, true),
        row(false, true, false, true),
        row(false, true, true, false),
        row(true, false, false, true),
        row(true, false, true, false),
        row(true, true, false, false),
        row(true, true, true, true),
    ]
};

/// Runs every L8 combination `runs` times from the same master seed.
/// Returns the batches in design order.
pub fn factor_screen(
    problem: &PreparedProblem<'_>,
    cfg: &SwarmConfig,
    runs: usize,
) -> Result<Vec<Batch>> {
    cfg.validate()?;
    L8_DESIGN
        .iter()
        .map(|&f| run_batch(problem, Method::Swarm(f), cfg, runs))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Solution;
    use crate::optim::RunDiagnostics;
    use crate::testutil::bench3_instance;

    fn fake(fitness: f64, wall: f64) -> RunResult {
        RunResult {
            algorithm: Algorithm::Ga,
            factors: None,
            best: Solution::new(vec![1], vec![0.5]),
            best_fitness: fitness,
            history: vec![fitness],
            wall_time: wall,
            seed: 0,
            diagnostics: RunDiagnostics::default(),
        }
    }

    #[test]
    fn stats_use_sample_deviation() {
        let runs = [
            fake(1.0, 1.0),
            fake(2.0, 2.0),
            fake(3.0, 3.0),
            fake(4.0, 6.0),
        ];
        let s = SummaryStats::from_runs(&runs).unwrap();
        assert_eq!((s.f_min, s.f_avg, s.f_max), (1.0, 2.5, 4.0));
        assert!((s.f_stdev - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(s.t_avg, 3.0);
    }

    #[test]
    fn single_run_has_zero_deviation() {
        let s = SummaryStats::from_runs(&[fake(0.7, 0.0)]).unwrap();
        assert_eq!(s.f_stdev, 0.0);
        assert_eq!((s.f_min, s.f_avg, s.f_max), (0.7, 0.7, 0.7));
        assert!(SummaryStats::from_runs(&[]).is_err());
    }

    #[test]
    fn l8_is_orthogonal() {
        let rows: Vec<[bool; 4]> = L8_DESIGN.iter().map(|f| f.as_array()).collect();
        for a in 0..4 {
            assert_eq!(rows.iter().filter(|r| r[a]).count(), 4);
            for b in a + 1..4 {
                for lv in [(false, false), (false, true), (true, false), (true, true)] {
                    let n = rows.iter().filter(|r| (r[a], r[b]) == lv).count();
                    assert_eq!(n, 2, "columns {a} {b}");
                }
            }
        }
        assert_eq!(L8_DESIGN[0], FactorLevels::SSO);
        assert_eq!(L8_DESIGN[7], FactorLevels::BSSO);
    }

    #[test]
    fn batch_seeds_follow_run_index_and_ignore_parallelism() {
        let inst = bench3_instance();
        let problem = PreparedProblem::new(&inst).unwrap();
        let cfg = SwarmConfig {
            nsol: 10,
            ngen: 5,
            seed: 40,
            ..SwarmConfig::default()
        };
        let batch = run_batch(&problem, Method::Algorithm(Algorithm::Pso), &cfg, 4).unwrap();
        let seeds: Vec<u64> = batch.runs.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![40, 41, 42, 43]);
        for (k, r) in batch.runs.iter().enumerate() {
            let alone = problem
                .run(
                    Algorithm::Pso,
                    &SwarmConfig {
                        seed: 40 + k as u64,
                        ..cfg.clone()
                    },
                )
                .unwrap();
            assert!(alone.same_outcome(r));
        }
    }

    #[test]
    fn factors_only_apply_to_bsso() {
        let spec = ExperimentSpec {
            algorithms: vec![Algorithm::Ga],
            factors: Some(FactorLevels::SSO),
            ..ExperimentSpec::default()
        };
        assert!(spec.validate().is_err());
        let spec = ExperimentSpec {
            runs: 0,
            ..ExperimentSpec::default()
        };
        assert!(spec.validate().is_err());
    }
}
