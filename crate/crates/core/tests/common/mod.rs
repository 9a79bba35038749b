#![allow(dead_code)]

use std::collections::VecDeque;

use grrap::benchmarks::{benchmark, bridge_instance};
use grrap::{Network, ProblemInstance, Solution};
use proptest::prelude::*;

pub fn bench(id: usize) -> ProblemInstance {
    benchmark(id).unwrap().load().unwrap()
}

pub fn bridge() -> ProblemInstance {
    bridge_instance().unwrap()
}

/// Worked evaluation example on the bridge.
pub fn worked_solution() -> Solution {
    Solution::new(
        vec![4, 2, 2, 2, 2, 3],
        vec![0.8168, 0.8534, 0.8554, 0.8740, 0.8288, 0.8781],
    )
}

/// Published best solutions with their reported system reliability, for the
/// benchmarks whose topology reproduces them.
pub fn published_best(id: usize) -> Vec<(&'static str, Solution, f64)> {
    let s = |n: &[u32], r: &[f64]| Solution::new(n.to_vec(), r.to_vec());
    match id {
        1 => vec![(
            "bsso",
            s(&[2, 1, 2, 3], &[0.894528, 0.583716, 0.904896, 0.794840]),
            0.9766455382,
        )],
        2 => vec![(
            "bsso",
            s(
                &[3, 2, 3, 1, 3],
                &[0.874185, 0.209394, 0.905545, 0.051240, 0.879303],
            ),
            0.9954302822,
        )],
        3 => vec![(
            "bsso",
            s(
                &[4, 2, 2, 2, 2, 3],
                &[0.822230, 0.791277, 0.899235, 0.909321, 0.752224, 0.883995],
            ),
            0.9964225431,
        )],
        4 => vec![(
            "bsso",
            s(
                &[4, 1, 3, 2, 1, 3, 2, 3],
                &[
                    0.869102, 0.747483, 0.918943, 0.867583, 0.045560, 0.843024, 0.826362, 0.939676,
                ],
            ),
            0.9991521239,
        )],
        _ => vec![],
    }
}

/// Plain breadth-first search over up nodes, written independently of the
/// library's layered search.
pub fn bfs_connected(net: &Network, up: u64) -> bool {
    let (s, t) = (net.source(), net.sink());
    if up >> s & 1 == 0 || up >> t & 1 == 0 {
        return false;
    }
    let mut seen = vec![false; net.node_count()];
    let mut q = VecDeque::from([s]);
    seen[s] = true;
    while let Some(u) = q.pop_front() {
        if u == t {
            return true;
        }
        for &(a, b) in net.edges() {
            if a == u && up >> b & 1 == 1 && !seen[b] {
                seen[b] = true;
                q.push_back(b);
            }
        }
    }
    false
}

/// Random directed network on `lo..=hi` nodes with source 0, sink `m - 1`
/// and a planted source-to-sink path. Cycles and back arcs are allowed.
pub fn arb_network(lo: usize, hi: usize) -> impl Strategy<Value = Network> {
    (lo..=hi)
        .prop_flat_map(|m| {
            (
                Just(m),
                proptest::collection::vec(0.0f64..1.0, m * m),
                proptest::sample::subsequence((1..m - 1).collect::<Vec<_>>(), 0..=m - 2),
                0.05f64..0.6,
            )
        })
        .prop_map(|(m, coin, path, density)| {
            let mut edges = Vec::new();
            let mut prev = 0;
            for &v in &path {
                edges.push((prev, v));
                prev = v;
            }
            edges.push((prev, m - 1));
            for u in 0..m {
                for v in 0..m {
                    if u != v && coin[u * m + v] < density && !edges.contains(&(u, v)) {
                        edges.push((u, v));
                    }
                }
            }
            Network::new(m, 0, m - 1, &edges).unwrap()
        })
}

pub fn arb_rels(m: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0f64..=1.0, m)
}
