mod common;

use common::{bench, published_best};
use grrap::benchmarks::{TopologyStatus, BENCHMARKS};
use grrap::{check_constraints, evaluate_solution, PenaltyConfig};

#[test]
fn published_best_solutions_reproduce() {
    for b in BENCHMARKS
        .iter()
        .filter(|b| b.status() == TopologyStatus::Recovered)
    {
        let inst = bench(b.id);
        for (algo, sol, reported) in published_best(b.id) {
            let ev = evaluate_solution(&inst, &sol, &PenaltyConfig::general()).unwrap();
            assert!(
                (ev.rs - reported).abs() <= 1e-6,
                "benchmark {} {algo}: {} vs {reported}",
                b.id,
                ev.rs
            );
            assert!(
                ev.report.feasible(),
                "benchmark {} {algo}: {:?}",
                b.id,
                ev.report
            );
        }
    }
}

#[test]
fn cost_limits_are_nearly_exhausted_by_the_best_solutions() {
    for id in 1..=4 {
        let inst = bench(id);
        for (_, sol, _) in published_best(id) {
            let r = check_constraints(&inst, &sol).unwrap();
            assert!(
                r.cost / inst.c_ub > 0.999,
                "benchmark {id}: cost {}",
                r.cost
            );
        }
    }
}

#[test]
fn bridge_and_benchmark_three_are_mirror_images() {
    let a = common::bridge();
    let b = bench(3);
    assert_eq!(a.params, b.params);
    // Swapping the two middle columns maps one onto the other.
    let swap = |v: usize| match v {
        1 => 2,
        2 => 1,
        3 => 4,
        4 => 3,
        v => v,
    };
    let mut mapped: Vec<_> = a
        .network
        .edges()
        .iter()
        .map(|&(u, v)| (swap(u), swap(v)))
        .collect();
    mapped.sort();
    assert_eq!(mapped, b.network.edges());
}
