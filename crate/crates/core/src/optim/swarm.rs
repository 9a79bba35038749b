use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{in_first_stage, SwarmConfig};
use super::update::{n_um_comb, n_um_raw, r_um, u_radius, BranchCounter, CoordDraw};
use super::{argmax, uniform_counts, uniform_rels, PreparedProblem, RunResult, Scorer};
use crate::error::{Error, Result};
use crate::model::Solution;
use crate::objective::PenaltyMode;

#[derive(Debug, Clone)]
struct Particle {
    /// Member index into the feasible-count set, when counts are combined.
    comb: Option<usize>,
    sol: Solution,
    fitness: f64,
    pbest_comb: Option<usize>,
    pbest: Solution,
    pbest_fitness: f64,
}

/// One run of the factorized swarm.
///
/// Draw order per generation, particle by particle: the count update (one
/// `rho` for a combined index, otherwise one per coordinate, each followed by
/// its resample draw when the random branch fires), then for each
/// reliability coordinate `rho` and `delta`, followed by a resample draw if
/// the proposal leaves the bounds. Evaluation happens after all particles
/// have moved.
pub(super) fn run(problem: &PreparedProblem<'_>, cfg: &SwarmConfig) -> Result<RunResult> {
    cfg.validate()?;
    let inst = problem.instance();
    let m = inst.subsystem_count();
    let f = cfg.factors;
    let comb = if f.comb_num {
        let c = problem.comb()?;
        if c.is_empty() {
            return Err(Error::Config(
                "no component-count vector satisfies the volume and weight limits".into(),
            ));
        }
        Some(c)
    } else {
        None
    };
    let mode = if f.comb_num {
        PenaltyMode::CostOnly
    } else {
        PenaltyMode::General
    };
    let mut scorer = Scorer::new(problem, cfg.gamma, mode)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut swarm = Vec::with_capacity(cfg.nsol);
    for _ in 0..cfg.nsol {
        let (idx, counts) = match comb {
            Some(c) => {
                let k = rng.random_range(0..c.len());
                (Some(k), c.get(k).to_vec())
            }
            None => (None, uniform_counts(inst, &mut rng)),
        };
        let sol = Solution::new(counts, uniform_rels(inst, &mut rng));
        swarm.push(Particle {
            comb: idx,
            pbest_comb: idx,
            pbest: sol.clone(),
            sol,
            fitness: f64::NEG_INFINITY,
            pbest_fitness: f64::NEG_INFINITY,
        });
    }
    for p in &mut swarm {
        p.fitness = scorer.score(&p.sol)?.fitness;
        p.pbest_fitness = p.fitness;
    }
    let mut g = argmax(swarm.iter().map(|p| p.pbest_fitness));
    let mut history = Vec::with_capacity(cfg.ngen + 1);
    history.push(swarm[g].pbest_fitness);

    let mut draws = vec![
        CoordDraw {
            rho: 0.0,
            delta: 0.0
        };
        m
    ];
    let mut rho = vec![0.0; m];
    for t in 0..cfg.ngen {
        let th = cfg.thresholds(t);
        let u: Vec<f64> = (0..m)
            .map(|j| u_radius(inst.r_lb[j], inst.r_ub[j], m, cfg.ngen, t, f.adaptive_uj))
            .collect();
        let gbest = swarm[g].pbest.clone();
        let gbest_comb = swarm[g].pbest_comb;
        let mut counter = BranchCounter::default();

        for p in &mut swarm {
            match (comb, p.comb) {
                (Some(c), Some(cur)) => {
                    let k = n_um_comb(
                        cur,
                        p.pbest_comb.unwrap_or(cur),
                        gbest_comb.unwrap_or(cur),
                        c.len(),
                        rng.random(),
                        &th,
                        &mut counter,
                        &mut rng,
                    );
                    p.comb = Some(k);
                    p.sol.counts = c.get(k).to_vec();
                }
                _ => {
                    for r in rho.iter_mut() {
                        *r = rng.random();
                    }
                    p.sol.counts = n_um_raw(
                        &p.sol.counts,
                        &p.pbest.counts,
                        &gbest.counts,
                        &inst.n_lb,
                        &inst.n_ub,
                        &rho,
                        &th,
                        &mut counter,
                        &mut rng,
                    );
                }
            }
            for d in draws.iter_mut() {
                d.rho = rng.random();
                d.delta = rng.random::<f64>() - 0.5;
            }
            p.sol.rels = r_um(
                &p.sol.rels,
                &p.pbest.rels,
                &gbest.rels,
                &u,
                &draws,
                &th,
                f.pbest_in_rum,
                &inst.r_lb,
                &inst.r_ub,
                &mut counter,
                &mut rng,
            );
        }
        if f.two_stage_cg && in_first_stage(cfg.ngen, t) {
            scorer.diag.first_stage_gbest_copies += counter.global;
        }

        for p in &mut swarm {
            p.fitness = scorer.score(&p.sol)?.fitness;
            if p.fitness > p.pbest_fitness {
                p.pbest_fitness = p.fitness;
                p.pbest = p.sol.clone();
                p.pbest_comb = p.comb;
            }
        }
        let cand = argmax(swarm.iter().map(|p| p.pbest_fitness));
        if swarm[cand].pbest_fitness > swarm[g].pbest_fitness {
            g = cand;
        }
        history.push(swarm[g].pbest_fitness);
    }

    Ok(RunResult {
        algorithm: if f == super::FactorLevels::BSSO {
            super::Algorithm::Bsso
        } else {
            super::Algorithm::Sso
        },
        factors: Some(f),
        best: swarm[g].pbest.clone(),
        best_fitness: swarm[g].pbest_fitness,
        history,
        wall_time: 0.0,
        seed: cfg.seed,
        diagnostics: scorer.diag,
    })
}
