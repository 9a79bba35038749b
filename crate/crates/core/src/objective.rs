//! Objective and constraints: subsystem reliability, resource usage,
//! feasibility and the penalized fitness.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{ProblemInstance, Solution};
use crate::reliability::ConnectedStates;

/// Reliability of `n` identical components of reliability `r` in parallel.
pub fn subsystem_reliability(r: f64, n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain(
            "a subsystem needs at least one component".into(),
        ));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!(
            "component reliability {r} outside [0, 1]"
        )));
    }
    Ok(1.0 - (1.0 - r).powi(n as i32))
}

/// Cost of one subsystem: `alpha * (-1000 / ln r)^beta * (n + e^(n/4))`.
pub fn subsystem_cost(alpha: f64, beta: f64, r: f64, n: u32) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!(
            "cost is undefined for component reliability {r} (needs 0 < r < 1)"
        )));
    }
    let n = f64::from(n);
    Ok(alpha * (-1000.0 / r.ln()).powf(beta) * (n + (n / 4.0).exp()))
}

pub fn system_cost(inst: &ProblemInstance, sol: &Solution) -> Result<f64> {
    check_len(inst, sol)?;
    inst.params
        .iter()
        .zip(sol.counts.iter().zip(&sol.rels))
        .map(|(p, (&n, &r))| subsystem_cost(p.alpha, p.beta, r, n))
        .sum()
}

pub fn system_volume(inst: &ProblemInstance, counts: &[u32]) -> f64 {
    inst.params
        .iter()
        .zip(counts)
        .map(|(p, &n)| p.wv2 * f64::from(n) * f64::from(n))
        .sum()
}

pub fn system_weight(inst: &ProblemInstance, counts: &[u32]) -> f64 {
    inst.params
        .iter()
        .zip(counts)
        .map(|(p, &n)| {
            let n = f64::from(n);
            p.w * n * (n / 4.0).exp()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Violation {
    Cost,
    Volume,
    Weight,
    NBounds,
    RBounds,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::Cost => "COST",
            Violation::Volume => "VOLUME",
            Violation::Weight => "WEIGHT",
            Violation::NBounds => "N_BOUNDS",
            Violation::RBounds => "R_BOUNDS",
        })
    }
}

/// Resource usage of a solution and the constraint families it breaks.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub cost: f64,
    pub volume: f64,
    pub weight: f64,
    pub violated: BTreeSet<Violation>,
}

impl ConstraintReport {
    pub fn feasible(&self) -> bool {
        self.violated.is_empty()
    }

    /// True when volume and weight are both within their limits.
    pub fn volume_weight_ok(&self) -> bool {
        !self.violated.contains(&Violation::Volume) && !self.violated.contains(&Violation::Weight)
    }
}

/// Evaluates cost, volume, weight and both bound families.
///
/// The cost is reported as infinite when some `r_i` is outside `(0, 1)`;
/// that case is always an `R_BOUNDS` violation as well.
pub fn check_constraints(inst: &ProblemInstance, sol: &Solution) -> Result<ConstraintReport> {
    check_len(inst, sol)?;
    let cost = system_cost(inst, sol).unwrap_or(f64::INFINITY);
    let volume = system_volume(inst, &sol.counts);
    let weight = system_weight(inst, &sol.counts);
    let mut violated = BTreeSet::new();
    if cost.is_nan() || cost > inst.c_ub {
        violated.insert(Violation::Cost);
    }
    if volume > inst.v_ub {
        violated.insert(Violation::Volume);
    }
    if weight > inst.w_ub {
        violated.insert(Violation::Weight);
    }
    if (0..sol.len()).any(|i| sol.counts[i] < inst.n_lb[i] || sol.counts[i] > inst.n_ub[i]) {
        violated.insert(Violation::NBounds);
    }
    if (0..sol.len()).any(|i| !(inst.r_lb[i] <= sol.rels[i] && sol.rels[i] <= inst.r_ub[i])) {
        violated.insert(Violation::RBounds);
    }
    Ok(ConstraintReport {
        cost,
        volume,
        weight,
        violated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyMode {
    /// Penalize by the smallest of the three resource ratios.
    General,
    /// Penalize by the cost ratio only; volume and weight are feasible by
    /// construction.
    CostOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyConfig {
    pub gamma: f64,
    pub mode: PenaltyMode,
}

impl PenaltyConfig {
    pub const DEFAULT_GAMMA: f64 = 3.0;

    pub fn new(gamma: f64, mode: PenaltyMode) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Config(format!(
                "penalty exponent must be positive, got {gamma}"
            )));
        }
        Ok(PenaltyConfig { gamma, mode })
    }

    pub fn general() -> Self {
        PenaltyConfig {
            gamma: Self::DEFAULT_GAMMA,
            mode: PenaltyMode::General,
        }
    }

    pub fn cost_only() -> Self {
        PenaltyConfig {
            gamma: Self::DEFAULT_GAMMA,
            mode: PenaltyMode::CostOnly,
        }
    }
}

/// Penalized reliability. Feasible solutions score `rs`; others are scaled by
/// a power of the worst limit-to-usage ratio. Bound violations are reported
/// but never penalized, since optimizers keep solutions inside the bounds.
pub fn penalized_fitness(
    inst: &ProblemInstance,
    report: &ConstraintReport,
    rs: f64,
    cfg: &PenaltyConfig,
) -> f64 {
    let resource_violated = [Violation::Cost, Violation::Volume, Violation::Weight]
        .iter()
        .any(|v| report.violated.contains(v));
    if !resource_violated {
        return rs;
    }
    let ratio = match cfg.mode {
        PenaltyMode::General => (inst.v_ub / report.volume)
            .min(inst.c_ub / report.cost)
            .min(inst.w_ub / report.weight),
        PenaltyMode::CostOnly => inst.c_ub / report.cost,
    };
    rs * ratio.min(1.0).powf(cfg.gamma)
}

/// Everything known about one evaluated solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub fitness: f64,
    pub rs: f64,
    pub subsystem_rels: Vec<f64>,
    pub report: ConstraintReport,
}

/// Reusable evaluator: the network's connected state vectors are computed
/// once, then every solution costs one pass over them.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    inst: &'a ProblemInstance,
    states: ConnectedStates,
}

impl<'a> Evaluator<'a> {
    pub fn new(inst: &'a ProblemInstance) -> Result<Self> {
        Ok(Evaluator {
            inst,
            states: ConnectedStates::compile(&inst.network)?,
        })
    }

    pub fn instance(&self) -> &ProblemInstance {
        self.inst
    }

    pub fn evaluate(&self, sol: &Solution, cfg: &PenaltyConfig) -> Result<Evaluation> {
        check_len(self.inst, sol)?;
        let subsystem_rels = sol
            .counts
            .iter()
            .zip(&sol.rels)
            .map(|(&n, &r)| subsystem_reliability(r, n))
            .collect::<Result<Vec<_>>>()?;
        let rs = self.states.reliability(&subsystem_rels)?.value;
        let report = check_constraints(self.inst, sol)?;
        let fitness = penalized_fitness(self.inst, &report, rs, cfg);
        Ok(Evaluation {
            fitness,
            rs,
            subsystem_rels,
            report,
        })
    }
}

/// One-shot evaluation: subsystem reliabilities, exact network reliability,
/// constraint report and penalized fitness.
pub fn evaluate_solution(
    inst: &ProblemInstance,
    sol: &Solution,
    cfg: &PenaltyConfig,
) -> Result<Evaluation> {
    Evaluator::new(inst)?.evaluate(sol, cfg)
}

fn check_len(inst: &ProblemInstance, sol: &Solution) -> Result<()> {
    let m = inst.subsystem_count();
    for got in [sol.counts.len(), sol.rels.len()] {
        if got != m {
            return Err(Error::LengthMismatch { expected: m, got });
        }
    }
    Ok(())
}
