//! Global-best PSO on the flat `2m` real vector. Count coordinates move as
//! reals inside `[n_lb, n_ub]` and are rounded to the nearest integer (then
//! clamped) before evaluation. Inertia decreases linearly from `w_max` to
//! `w_min`; velocities start at zero and are clamped per coordinate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::SwarmConfig;
use super::{argmax, uniform_rels, Algorithm, PreparedProblem, RunResult, Scorer};
use crate::error::Result;
use crate::model::{ProblemInstance, Solution};
use crate::objective::PenaltyMode;

struct Bounds {
    lo: Vec<f64>,
    hi: Vec<f64>,
    vmax: Vec<f64>,
}

impl Bounds {
    fn new(inst: &ProblemInstance, vmax_fraction: f64) -> Self {
        let lo: Vec<f64> = inst
            .n_lb
            .iter()
            .map(|&v| f64::from(v))
            .chain(inst.r_lb.iter().copied())
            .collect();
        let hi: Vec<f64> = inst
            .n_ub
            .iter()
            .map(|&v| f64::from(v))
            .chain(inst.r_ub.iter().copied())
            .collect();
        let vmax = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| vmax_fraction * (h - l))
            .collect();
        Bounds { lo, hi, vmax }
    }
}

fn decode(x: &[f64], inst: &ProblemInstance) -> Solution {
    let m = inst.subsystem_count();
    let counts = (0..m)
        .map(|j| (x[j].round().max(0.0) as u32).clamp(inst.n_lb[j], inst.n_ub[j]))
        .collect();
    Solution::new(counts, x[m..].to_vec())
}

struct Swarm {
    x: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    fitness: Vec<f64>,
    pbest: Vec<Vec<f64>>,
    pbest_fitness: Vec<f64>,
    g: usize,
}

/// One velocity and position update for every particle. Random factors are
/// drawn per coordinate, `r1` then `r2`.
#[allow(clippy::needless_range_loop)]
fn step<R: Rng + ?Sized>(sw: &mut Swarm, b: &Bounds, w: f64, c1: f64, c2: f64, rng: &mut R) {
    let gbest = sw.pbest[sw.g].clone();
    for i in 0..sw.x.len() {
        for d in 0..b.lo.len() {
            let r1: f64 = rng.random();
            let r2: f64 = rng.random();
            let x = sw.x[i][d];
            let v = w * sw.v[i][d] + c1 * r1 * (sw.pbest[i][d] - x) + c2 * r2 * (gbest[d] - x);
            let v = v.clamp(-b.vmax[d], b.vmax[d]);
            sw.v[i][d] = v;
            sw.x[i][d] = (x + v).clamp(b.lo[d], b.hi[d]);
        }
    }
}

pub(super) fn run(problem: &PreparedProblem<'_>, cfg: &SwarmConfig) -> Result<RunResult> {
    cfg.validate()?;
    let inst = problem.instance();
    let p = cfg.pso;
    let bounds = Bounds::new(inst, p.vmax_fraction);
    let mut scorer = Scorer::new(problem, cfg.gamma, PenaltyMode::General)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let m = inst.subsystem_count();

    let x: Vec<Vec<f64>> = (0..cfg.nsol)
        .map(|_| {
            let mut pos: Vec<f64> = (0..m)
                .map(|j| rng.random_range(bounds.lo[j]..=bounds.hi[j]))
                .collect();
            pos.extend(uniform_rels(inst, &mut rng));
            pos
        })
        .collect();
    let mut fitness = Vec::with_capacity(cfg.nsol);
    for pos in &x {
        fitness.push(scorer.score(&decode(pos, inst))?.fitness);
    }
    let mut sw = Swarm {
        v: vec![vec![0.0; 2 * m]; cfg.nsol],
        pbest: x.clone(),
        pbest_fitness: fitness.clone(),
        g: argmax(fitness.iter().copied()),
        x,
        fitness,
    };
    let mut history = Vec::with_capacity(cfg.ngen + 1);
    history.push(sw.pbest_fitness[sw.g]);

    for t in 0..cfg.ngen {
        let w = p.w_max - (p.w_max - p.w_min) * t as f64 / cfg.ngen as f64;
        step(&mut sw, &bounds, w, p.c1, p.c2, &mut rng);
        for i in 0..cfg.nsol {
            sw.fitness[i] = scorer.score(&decode(&sw.x[i], inst))?.fitness;
            if sw.fitness[i] > sw.pbest_fitness[i] {
                sw.pbest_fitness[i] = sw.fitness[i];
                sw.pbest[i] = sw.x[i].clone();
            }
        }
        let cand = argmax(sw.pbest_fitness.iter().copied());
        if sw.pbest_fitness[cand] > sw.pbest_fitness[sw.g] {
            sw.g = cand;
        }
        history.push(sw.pbest_fitness[sw.g]);
    }

    Ok(RunResult {
        algorithm: Algorithm::Pso,
        factors: None,
        best: decode(&sw.pbest[sw.g], inst),
        best_fitness: sw.pbest_fitness[sw.g],
        history,
        wall_time: 0.0,
        seed: cfg.seed,
        diagnostics: scorer.diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::bench3_instance;

    #[test]
    fn no_pull_and_no_velocity_means_no_motion() {
        let inst = bench3_instance();
        let b = Bounds::new(&inst, 0.2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x: Vec<Vec<f64>> = (0..5)
            .map(|k| {
                let mut v = vec![1.0 + k as f64 * 0.5; 6];
                v.extend([0.7; 6]);
                v
            })
            .collect();
        let mut sw = Swarm {
            v: vec![vec![0.0; 12]; 5],
            pbest: x
                .iter()
                .map(|p| p.iter().map(|v| v * 0.9).collect())
                .collect(),
            pbest_fitness: vec![0.0; 5],
            fitness: vec![0.0; 5],
            g: 2,
            x: x.clone(),
        };
        for t in 0..10 {
            step(&mut sw, &b, 0.9 - 0.05 * t as f64, 0.0, 0.0, &mut rng);
        }
        assert_eq!(sw.x, x);
    }

    #[test]
    fn velocity_is_clamped_and_positions_stay_in_bounds() {
        let inst = bench3_instance();
        let b = Bounds::new(&inst, 0.2);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut lo = b.lo.clone();
        lo[0] = 1.0;
        let mut sw = Swarm {
            v: vec![vec![0.0; 12]; 2],
            pbest: vec![b.hi.clone(), b.hi.clone()],
            pbest_fitness: vec![0.0; 2],
            fitness: vec![0.0; 2],
            g: 0,
            x: vec![lo.clone(), lo],
        };
        for _ in 0..50 {
            step(&mut sw, &b, 0.9, 2.0, 2.0, &mut rng);
            for (x, v) in sw.x.iter().zip(&sw.v) {
                for d in 0..12 {
                    assert!(x[d] >= b.lo[d] && x[d] <= b.hi[d]);
                    assert!(v[d].abs() <= b.vmax[d] + 1e-15);
                }
            }
        }
    }

    #[test]
    fn decoding_rounds_then_clamps() {
        let inst = bench3_instance();
        let mut x = vec![1.49, 1.5, 4.6, 5.0, 2.51, 3.0];
        x.extend([0.8; 6]);
        assert_eq!(decode(&x, &inst).counts, vec![1, 2, 5, 5, 3, 3]);
    }
}
