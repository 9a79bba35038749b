//! Generational GA on the flat `(N, R)` chromosome: random pairing,
//! two-point crossover, per-gene uniform mutation, and elitist
//! parents-plus-offspring truncation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::SwarmConfig;
use super::{argmax, uniform_counts, uniform_rels, Algorithm, PreparedProblem, RunResult, Scorer};
use crate::error::Result;
use crate::model::{ProblemInstance, Solution};
use crate::objective::PenaltyMode;

#[derive(Debug, Clone, PartialEq)]
struct Individual {
    genes: Vec<f64>,
    fitness: f64,
}

fn decode(genes: &[f64]) -> Solution {
    let m = genes.len() / 2;
    Solution::new(
        genes[..m].iter().map(|&g| g as u32).collect(),
        genes[m..].to_vec(),
    )
}

fn encode(sol: &Solution) -> Vec<f64> {
    sol.counts
        .iter()
        .map(|&n| f64::from(n))
        .chain(sol.rels.iter().copied())
        .collect()
}

/// Resamples gene `k` uniformly inside its bounds.
fn random_gene<R: Rng + ?Sized>(inst: &ProblemInstance, k: usize, rng: &mut R) -> f64 {
    let m = inst.subsystem_count();
    if k < m {
        f64::from(rng.random_range(inst.n_lb[k]..=inst.n_ub[k]))
    } else {
        rng.random_range(inst.r_lb[k - m]..=inst.r_ub[k - m])
    }
}

/// Swaps the genes in `[a, b)` between two chromosomes, with cut points drawn
/// from the interior positions `1..len`.
fn two_point_crossover<R: Rng + ?Sized>(x: &mut [f64], y: &mut [f64], rng: &mut R) {
    let len = x.len();
    if len < 2 {
        return;
    }
    let (mut a, mut b) = if len == 2 {
        (1, 2)
    } else {
        (rng.random_range(1..len), rng.random_range(1..len))
    };
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    if a == b {
        b = len;
    }
    x[a..b].swap_with_slice(&mut y[a..b]);
}

struct Ga<'s, 'p, 'a> {
    inst: &'p ProblemInstance,
    cfg: &'s SwarmConfig,
    scorer: Scorer<'p, 'a>,
    rng: ChaCha8Rng,
    pop: Vec<Individual>,
}

impl<'s, 'p, 'a> Ga<'s, 'p, 'a> {
    fn new(problem: &'p PreparedProblem<'a>, cfg: &'s SwarmConfig) -> Result<Self> {
        cfg.validate()?;
        let inst = problem.instance();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut scorer = Scorer::new(problem, cfg.gamma, PenaltyMode::General)?;
        let mut pop = Vec::with_capacity(cfg.nsol);
        let sols: Vec<Solution> = (0..cfg.nsol)
            .map(|_| {
                let counts = uniform_counts(inst, &mut rng);
                Solution::new(counts, uniform_rels(inst, &mut rng))
            })
            .collect();
        for sol in &sols {
            let fitness = scorer.score(sol)?.fitness;
            pop.push(Individual {
                genes: encode(sol),
                fitness,
            });
        }
        Ok(Ga {
            inst,
            cfg,
            scorer,
            rng,
            pop,
        })
    }

    fn best(&self) -> &Individual {
        &self.pop[argmax(self.pop.iter().map(|i| i.fitness))]
    }

    fn step(&mut self) -> Result<()> {
        let n = self.pop.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut self.rng);

        // (child genes, parent index)
        let mut children: Vec<(Vec<f64>, usize)> = Vec::with_capacity(n);
        let mut k = 0;
        while children.len() < n {
            let a = order[k % n];
            let b = order[(k + 1) % n];
            let mut x = self.pop[a].genes.clone();
            let mut y = self.pop[b].genes.clone();
            if self.rng.random::<f64>() < self.cfg.ga.crossover_rate {
                two_point_crossover(&mut x, &mut y, &mut self.rng);
            }
            children.push((x, a));
            if children.len() < n {
                children.push((y, b));
            }
            k += 2;
        }
        for (genes, _) in &mut children {
            for (g, gene) in genes.iter_mut().enumerate() {
                if self.rng.random::<f64>() < self.cfg.ga.mutation_rate {
                    *gene = random_gene(self.inst, g, &mut self.rng);
                }
            }
        }

        let mut pool = std::mem::take(&mut self.pop);
        for (genes, parent) in children {
            let fitness = self.scorer.score(&decode(&genes))?.fitness;
            // An untouched copy of its own parent adds nothing to the pool.
            if genes != pool[parent].genes {
                pool.push(Individual { genes, fitness });
            }
        }
        pool.sort_by(|x, y| y.fitness.total_cmp(&x.fitness));
        pool.truncate(n);
        self.pop = pool;
        Ok(())
    }
}

pub(super) fn run(problem: &PreparedProblem<'_>, cfg: &SwarmConfig) -> Result<RunResult> {
    let mut ga = Ga::new(problem, cfg)?;
    let mut history = Vec::with_capacity(cfg.ngen + 1);
    history.push(ga.best().fitness);
    for _ in 0..cfg.ngen {
        ga.step()?;
        history.push(ga.best().fitness);
    }
    let best = ga.best().clone();
    Ok(RunResult {
        algorithm: Algorithm::Ga,
        factors: None,
        best: decode(&best.genes),
        best_fitness: best.fitness,
        history,
        wall_time: 0.0,
        seed: cfg.seed,
        diagnostics: ga.scorer.diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::GaParams;
    use crate::testutil::bench3_instance;

    #[test]
    fn crossover_swaps_a_proper_segment() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let mut x = vec![0.0; 8];
            let mut y = vec![1.0; 8];
            two_point_crossover(&mut x, &mut y, &mut rng);
            let swapped = x.iter().filter(|&&v| v == 1.0).count();
            assert!((1..8).contains(&swapped));
            assert!(x.iter().zip(&y).all(|(a, b)| a + b == 1.0));
        }
    }

    #[test]
    fn without_variation_the_population_is_frozen() {
        let inst = bench3_instance();
        let problem = PreparedProblem::new(&inst).unwrap();
        let cfg = SwarmConfig {
            nsol: 15,
            ngen: 5,
            seed: 4,
            ga: GaParams {
                crossover_rate: 0.0,
                mutation_rate: 0.0,
            },
            ..SwarmConfig::default()
        };
        let mut ga = Ga::new(&problem, &cfg).unwrap();
        let mut before: Vec<f64> = ga.pop.iter().map(|i| i.fitness).collect();
        before.sort_by(f64::total_cmp);
        for _ in 0..cfg.ngen {
            ga.step().unwrap();
            let mut now: Vec<f64> = ga.pop.iter().map(|i| i.fitness).collect();
            now.sort_by(f64::total_cmp);
            assert_eq!(now, before);
        }
        assert_eq!(ga.scorer.diag.evaluations, 15 * 6);
    }

    #[test]
    fn mutation_respects_bounds() {
        let inst = bench3_instance();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 0..12 {
            for _ in 0..100 {
                let g = random_gene(&inst, k, &mut rng);
                if k < 6 {
                    assert!((1.0..=5.0).contains(&g) && g.fract() == 0.0);
                } else {
                    assert!(g >= inst.r_lb[k - 6] && g <= inst.r_ub[k - 6]);
                }
            }
        }
    }
}
