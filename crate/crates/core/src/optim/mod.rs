//! Optimizers: the factorized simplified swarm (BSSO at one corner, SSO at
//! the other) and the GA and PSO baselines.
//!
//! Every algorithm evaluates exactly `nsol` solutions per generation, plus
//! `nsol` for the initial population, and draws all of its random numbers
//! from one ChaCha8 stream seeded with the run seed.

mod config;
mod ga;
mod pso;
mod swarm;
pub mod update;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use rand::Rng;

pub use config::{effective_cg, FactorLevels, GaParams, PsoParams, SwarmConfig, Thresholds};

use crate::comb::{enumerate_feasible_counts, CombSet};
use crate::error::{Error, Result};
use crate::model::{ProblemInstance, Solution};
use crate::objective::{Evaluation, Evaluator, PenaltyConfig, PenaltyMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Bsso,
    Sso,
    Ga,
    Pso,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Bsso,
        Algorithm::Sso,
        Algorithm::Ga,
        Algorithm::Pso,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Bsso => "bsso",
            Algorithm::Sso => "sso",
            Algorithm::Ga => "ga",
            Algorithm::Pso => "pso",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bsso" => Ok(Algorithm::Bsso),
            "sso" => Ok(Algorithm::Sso),
            "ga" => Ok(Algorithm::Ga),
            "pso" => Ok(Algorithm::Pso),
            other => Err(Error::Config(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Counters collected during a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunDiagnostics {
    pub evaluations: u64,
    /// Evaluated solutions that broke the volume or weight limit.
    pub volume_weight_violations: u64,
    /// gBest-branch selections made while the two-stage schedule held the
    /// gBest threshold at zero.
    pub first_stage_gbest_copies: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub factors: Option<FactorLevels>,
    pub best: Solution,
    pub best_fitness: f64,
    /// gBest fitness after initialization (index 0) and after each generation.
    pub history: Vec<f64>,
    pub wall_time: f64,
    pub seed: u64,
    pub diagnostics: RunDiagnostics,
}

impl RunResult {
    /// Equality ignoring wall-clock time.
    pub fn same_outcome(&self, other: &RunResult) -> bool {
        RunResult {
            wall_time: 0.0,
            ..self.clone()
        } == RunResult {
            wall_time: 0.0,
            ..other.clone()
        }
    }
}

/// An instance with its compiled reliability structure and, on first use,
/// its feasible-count set. Shareable across threads.
#[derive(Debug)]
pub struct PreparedProblem<'a> {
    evaluator: Evaluator<'a>,
    comb: OnceLock<Result<CombSet>>,
}

impl<'a> PreparedProblem<'a> {
    pub fn new(inst: &'a ProblemInstance) -> Result<Self> {
        inst.validate()?;
        Ok(PreparedProblem {
            evaluator: Evaluator::new(inst)?,
            comb: OnceLock::new(),
        })
    }

    pub fn instance(&self) -> &ProblemInstance {
        self.evaluator.instance()
    }

    pub fn evaluator(&self) -> &Evaluator<'a> {
        &self.evaluator
    }

    pub fn comb(&self) -> Result<&CombSet> {
        self.comb
            .get_or_init(|| enumerate_feasible_counts(self.instance()))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Runs `algo` once with `cfg` (its `seed` included).
    pub fn run(&self, algo: Algorithm, cfg: &SwarmConfig) -> Result<RunResult> {
        match algo {
            Algorithm::Bsso => self.run_swarm(&SwarmConfig {
                factors: FactorLevels::BSSO,
                ..cfg.clone()
            }),
            Algorithm::Sso => self.run_swarm(&SwarmConfig {
                factors: FactorLevels::SSO,
                ..cfg.clone()
            }),
            Algorithm::Ga => timed(|| ga::run(self, cfg)),
            Algorithm::Pso => timed(|| pso::run(self, cfg)),
        }
    }

    /// Runs the swarm with whatever factor levels `cfg` carries.
    pub fn run_swarm(&self, cfg: &SwarmConfig) -> Result<RunResult> {
        timed(|| swarm::run(self, cfg))
    }
}

fn timed(f: impl FnOnce() -> Result<RunResult>) -> Result<RunResult> {
    let start = Instant::now();
    let mut res = f()?;
    res.wall_time = start.elapsed().as_secs_f64();
    Ok(res)
}

/// BSSO: all four factors at level 2.
pub fn bsso_run(inst: &ProblemInstance, cfg: &SwarmConfig) -> Result<RunResult> {
    PreparedProblem::new(inst)?.run(Algorithm::Bsso, cfg)
}

/// Plain SSO: all four factors at level 1.
pub fn sso_run(inst: &ProblemInstance, cfg: &SwarmConfig) -> Result<RunResult> {
    PreparedProblem::new(inst)?.run(Algorithm::Sso, cfg)
}

pub fn ga_run(inst: &ProblemInstance, cfg: &SwarmConfig) -> Result<RunResult> {
    PreparedProblem::new(inst)?.run(Algorithm::Ga, cfg)
}

pub fn pso_run(inst: &ProblemInstance, cfg: &SwarmConfig) -> Result<RunResult> {
    PreparedProblem::new(inst)?.run(Algorithm::Pso, cfg)
}

/// Evaluation bookkeeping shared by the algorithms.
pub(crate) struct Scorer<'p, 'a> {
    evaluator: &'p Evaluator<'a>,
    penalty: PenaltyConfig,
    pub(crate) diag: RunDiagnostics,
}

impl<'p, 'a> Scorer<'p, 'a> {
    pub(crate) fn new(
        problem: &'p PreparedProblem<'a>,
        gamma: f64,
        mode: PenaltyMode,
    ) -> Result<Self> {
        Ok(Scorer {
            evaluator: &problem.evaluator,
            penalty: PenaltyConfig::new(gamma, mode)?,
            diag: RunDiagnostics::default(),
        })
    }

    pub(crate) fn score(&mut self, sol: &Solution) -> Result<Evaluation> {
        let ev = self.evaluator.evaluate(sol, &self.penalty)?;
        self.diag.evaluations += 1;
        if !ev.report.volume_weight_ok() {
            self.diag.volume_weight_violations += 1;
        }
        Ok(ev)
    }
}

pub(crate) fn uniform_rels<R: Rng + ?Sized>(inst: &ProblemInstance, rng: &mut R) -> Vec<f64> {
    (0..inst.subsystem_count())
        .map(|j| rng.random_range(inst.r_lb[j]..=inst.r_ub[j]))
        .collect()
}

pub(crate) fn uniform_counts<R: Rng + ?Sized>(inst: &ProblemInstance, rng: &mut R) -> Vec<u32> {
    (0..inst.subsystem_count())
        .map(|j| rng.random_range(inst.n_lb[j]..=inst.n_ub[j]))
        .collect()
}

/// Index of the first maximum.
pub(crate) fn argmax(vals: impl IntoIterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in vals.into_iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}
