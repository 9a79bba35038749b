//! Exact two-terminal reliability of a network with unreliable nodes and
//! perfect arcs.
//!
//! The exact engine enumerates node state vectors by binary addition with both
//! terminals fixed up, drops every vector with fewer active nodes than the
//! shortest source-sink path, tests the survivors with a layered search from
//! the source, and sums the occurrence probabilities of the connected ones.
//! Two independent estimators are kept next to it: a full `2^m` brute-force
//! sum and a seeded Monte Carlo sampler.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Network;

/// Default cap on the number of intermediate (non-terminal) nodes enumerated.
pub const DEFAULT_ENUMERATION_CAP: usize = 30;

/// Largest network the brute-force oracle accepts.
pub const BRUTE_FORCE_MAX_NODES: usize = 20;

/// A binary up/down state for every node, packed little-endian by node index.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeStateVector {
    bits: u64,
    len: usize,
}

impl NodeStateVector {
    pub fn from_bits(bits: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        let mask = if len == 64 {
            u64::MAX
        } else {
            (1u64 << len) - 1
        };
        NodeStateVector {
            bits: bits & mask,
            len,
        }
    }

    /// Builds a vector from 0/1 states in node order.
    pub fn from_states(states: &[u8]) -> Self {
        let bits = states
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &s)| acc | (u64::from(s != 0) << j));
        NodeStateVector::from_bits(bits, states.len())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_up(&self, node: usize) -> bool {
        self.bits >> node & 1 == 1
    }

    /// Number of active nodes.
    pub fn active_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn states(&self) -> Vec<u8> {
        (0..self.len).map(|j| u8::from(self.is_up(j))).collect()
    }
}

impl std::fmt::Debug for NodeStateVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for j in 0..self.len {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", u8::from(self.is_up(j)))?;
        }
        write!(f, ")")
    }
}

/// Binary-addition enumeration of every state vector with both terminals up.
///
/// Intermediate nodes are the coordinates, in ascending node order; the last
/// coordinate is incremented first and carries move left, so the sequence is
/// ordinary binary counting from all-down to all-up.
#[derive(Debug, Clone)]
pub struct StateVectors {
    m: usize,
    base: u64,
    coords: Vec<usize>,
    current: u64,
    started: bool,
    done: bool,
}

impl Iterator for StateVectors {
    type Item = NodeStateVector;

    fn next(&mut self) -> Option<NodeStateVector> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.coords.is_empty() {
                self.done = true;
            }
            return Some(NodeStateVector::from_bits(self.base | self.current, self.m));
        }
        let mut i = self.coords.len();
        loop {
            i -= 1;
            let bit = 1u64 << self.coords[i];
            if self.current & bit == 0 {
                self.current |= bit;
                if self.current.count_ones() as usize == self.coords.len() {
                    self.done = true;
                }
                return Some(NodeStateVector::from_bits(self.base | self.current, self.m));
            }
            self.current &= !bit;
            if i == 0 {
                self.done = true;
                return None;
            }
        }
    }
}

/// Enumerates all `2^(m-2)` terminal-up state vectors in binary-addition order.
pub fn enumerate_state_vectors(net: &Network) -> Result<StateVectors> {
    enumerate_state_vectors_capped(net, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_state_vectors_capped(net: &Network, cap: usize) -> Result<StateVectors> {
    let coords = net.intermediate_nodes();
    if coords.len() > cap {
        return Err(Error::Capacity {
            what: "intermediate node count",
            size: coords.len(),
            cap,
        });
    }
    Ok(StateVectors {
        m: net.node_count(),
        base: (1u64 << net.source()) | (1u64 << net.sink()),
        coords,
        current: 0,
        started: false,
        done: false,
    })
}

/// Layered search: `L1 = {source}`, each next layer holds the active,
/// not yet visited successors of the previous one. Stops when the sink shows
/// up or a layer comes out empty.
pub fn is_connected(net: &Network, x: NodeStateVector) -> bool {
    debug_assert_eq!(x.len(), net.node_count());
    let (s, t) = (net.source(), net.sink());
    if !x.is_up(s) || !x.is_up(t) {
        return false;
    }
    let mut visited = 1u64 << s;
    let mut layer = vec![s];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &u in &layer {
            for &v in net.successors(u) {
                if v == t {
                    return true;
                }
                let bit = 1u64 << v;
                if x.bits & bit != 0 && visited & bit == 0 {
                    visited |= bit;
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    false
}

/// Occurrence probability of a state vector: the product over every node
/// (terminals included) of `r_j` when up and `1 - r_j` when down.
pub fn state_probability(x: NodeStateVector, rels: &[f64]) -> Result<f64> {
    if rels.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: rels.len(),
        });
    }
    Ok(product(x.bits, rels))
}

#[inline]
fn product(bits: u64, rels: &[f64]) -> f64 {
    rels.iter()
        .enumerate()
        .map(|(j, &r)| if bits >> j & 1 == 1 { r } else { 1.0 - r })
        .product()
}

/// Outcome of an exact evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReliabilityResult {
    pub value: f64,
    pub connected_vectors: usize,
    pub enumerated_vectors: usize,
}

/// The connected state vectors of a network, computed once and reused for any
/// number of reliability vectors.
#[derive(Debug, Clone)]
pub struct ConnectedStates {
    m: usize,
    connected: Vec<u64>,
    enumerated: usize,
    min_path_nodes: usize,
}

impl ConnectedStates {
    pub fn compile(net: &Network) -> Result<Self> {
        Self::compile_capped(net, DEFAULT_ENUMERATION_CAP)
    }

    pub fn compile_capped(net: &Network, cap: usize) -> Result<Self> {
        let np = net.min_path_node_count();
        let mut enumerated = 0usize;
        let mut connected = Vec::new();
        for x in enumerate_state_vectors_capped(net, cap)? {
            enumerated += 1;
            if x.active_count() < np {
                continue;
            }
            if is_connected(net, x) {
                connected.push(x.bits);
            }
        }
        Ok(ConnectedStates {
            m: net.node_count(),
            connected,
            enumerated,
            min_path_nodes: np,
        })
    }

    pub fn node_count(&self) -> usize {
        self.m
    }

    pub fn min_path_nodes(&self) -> usize {
        self.min_path_nodes
    }

    pub fn enumerated_vectors(&self) -> usize {
        self.enumerated
    }

    /// Connected vectors in enumeration order.
    pub fn vectors(&self) -> impl Iterator<Item = NodeStateVector> + '_ {
        self.connected
            .iter()
            .map(|&b| NodeStateVector::from_bits(b, self.m))
    }

    pub fn reliability(&self, rels: &[f64]) -> Result<ReliabilityResult> {
        check_rels(rels, self.m)?;
        let mut sum = NeumaierSum::default();
        for &bits in &self.connected {
            sum.add(product(bits, rels));
        }
        Ok(ReliabilityResult {
            value: sum.total().clamp(0.0, 1.0),
            connected_vectors: self.connected.len(),
            enumerated_vectors: self.enumerated,
        })
    }
}

/// Exact two-terminal reliability for node reliabilities `rels`.
pub fn exact_reliability(net: &Network, rels: &[f64]) -> Result<ReliabilityResult> {
    check_rels(rels, net.node_count())?;
    ConnectedStates::compile(net)?.reliability(rels)
}

/// Independent oracle: sums the probability of every one of the `2^m` node
/// states (terminals free) whose active subgraph links source to sink.
pub fn brute_force_reliability(net: &Network, rels: &[f64]) -> Result<f64> {
    let m = net.node_count();
    if m > BRUTE_FORCE_MAX_NODES {
        return Err(Error::Capacity {
            what: "brute-force node count",
            size: m,
            cap: BRUTE_FORCE_MAX_NODES,
        });
    }
    check_rels(rels, m)?;
    let mut total = 0.0;
    let mut queue = VecDeque::with_capacity(m);
    let mut seen = vec![false; m];
    for state in 0u64..(1u64 << m) {
        let up = |v: usize| state >> v & 1 == 1;
        if !bfs_reaches(net, &up, &mut queue, &mut seen) {
            continue;
        }
        let mut p = 1.0;
        for (j, &r) in rels.iter().enumerate() {
            p *= if up(j) { r } else { 1.0 - r };
        }
        total += p;
    }
    Ok(total)
}

fn bfs_reaches(
    net: &Network,
    up: &dyn Fn(usize) -> bool,
    queue: &mut VecDeque<usize>,
    seen: &mut [bool],
) -> bool {
    let (s, t) = (net.source(), net.sink());
    if !up(s) || !up(t) {
        return false;
    }
    seen.iter_mut().for_each(|v| *v = false);
    queue.clear();
    queue.push_back(s);
    seen[s] = true;
    while let Some(u) = queue.pop_front() {
        if u == t {
            return true;
        }
        for &v in net.successors(u) {
            if up(v) && !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

/// Monte Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Samples every node state independently `samples` times and counts
/// realizations that connect the terminals. Deterministic for a fixed `seed`.
pub fn monte_carlo_reliability(
    net: &Network,
    rels: &[f64],
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    let m = net.node_count();
    check_rels(rels, m)?;
    if samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut queue = VecDeque::with_capacity(m);
    let mut seen = vec![false; m];
    let mut hits = 0u64;
    for _ in 0..samples {
        let mut state = 0u64;
        for (j, &r) in rels.iter().enumerate() {
            if rng.random::<f64>() < r {
                state |= 1 << j;
            }
        }
        let up = |v: usize| state >> v & 1 == 1;
        if bfs_reaches(net, &up, &mut queue, &mut seen) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok(MonteCarloEstimate {
        estimate: p,
        std_error: (p * (1.0 - p) / samples as f64).sqrt(),
    })
}

fn check_rels(rels: &[f64], m: usize) -> Result<()> {
    if rels.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: rels.len(),
        });
    }
    if let Some((j, r)) = rels
        .iter()
        .enumerate()
        .find(|(_, r)| !(0.0..=1.0).contains(*r))
    {
        return Err(Error::Domain(format!(
            "reliability of node {} is {r}, outside [0, 1]",
            j + 1
        )));
    }
    Ok(())
}

/// Kahan-Babuska-Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bridge() -> Network {
        let e = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 4), (3, 5), (4, 5)];
        Network::new(6, 0, 5, &e).unwrap()
    }

    const TABLE2_R: [f64; 6] = [0.99887, 0.97851, 0.97909, 0.98412, 0.97069, 0.99819];

    fn sv(s: &[u8]) -> NodeStateVector {
        NodeStateVector::from_states(s)
    }

    #[test]
    fn bridge_enumeration_matches_binary_counting() {
        let got: Vec<_> = enumerate_state_vectors(&bridge()).unwrap().collect();
        assert_eq!(got.len(), 16);
        for (k, x) in got.iter().enumerate() {
            let mid = [(k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1].map(|b| b as u8);
            assert_eq!(x.states(), vec![1, mid[0], mid[1], mid[2], mid[3], 1]);
        }
    }

    #[test]
    fn two_node_network_has_one_vector() {
        let net = Network::new(2, 0, 1, &[(0, 1)]).unwrap();
        let got: Vec<_> = enumerate_state_vectors(&net).unwrap().collect();
        assert_eq!(got, vec![sv(&[1, 1])]);
    }

    #[test]
    fn three_node_chain_has_two_vectors() {
        let net = Network::new(3, 0, 2, &[(0, 1), (1, 2)]).unwrap();
        let got: Vec<_> = enumerate_state_vectors(&net).unwrap().collect();
        assert_eq!(got, vec![sv(&[1, 0, 1]), sv(&[1, 1, 1])]);
    }

    #[test]
    fn terminals_need_not_be_first_and_last() {
        let net = Network::new(4, 2, 0, &[(2, 1), (1, 0), (2, 3), (3, 0)]).unwrap();
        let got: Vec<_> = enumerate_state_vectors(&net).unwrap().collect();
        assert_eq!(got.len(), 4);
        assert!(got.iter().all(|x| x.is_up(0) && x.is_up(2)));
        assert_eq!(got[1].states(), vec![1, 0, 1, 1]);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let edges: Vec<_> = (0..9).map(|i| (i, i + 1)).collect();
        let net = Network::new(10, 0, 9, &edges).unwrap();
        assert!(matches!(
            enumerate_state_vectors_capped(&net, 7),
            Err(Error::Capacity {
                size: 8,
                cap: 7,
                ..
            })
        ));
        assert_eq!(
            enumerate_state_vectors_capped(&net, 8).unwrap().count(),
            256
        );
    }

    #[test]
    fn layered_search_on_bridge() {
        let net = bridge();
        assert!(!is_connected(&net, sv(&[1, 0, 1, 1, 0, 1])));
        assert!(is_connected(&net, sv(&[1, 0, 1, 0, 1, 1])));
        assert!(is_connected(&net, sv(&[1; 6])));
        assert!(!is_connected(&net, sv(&[0, 1, 1, 1, 1, 1])));
    }

    #[test]
    fn table6_state_probabilities() {
        let p = state_probability(sv(&[1; 6]), &TABLE2_R).unwrap();
        assert!((p - 0.91251).abs() < 5e-6, "{p}");
        let p = state_probability(sv(&[1, 0, 1, 0, 1, 1]), &TABLE2_R).unwrap();
        assert!((p - 0.00032).abs() < 5e-6, "{p}");
        assert_eq!(state_probability(sv(&[1; 6]), &[1.0; 6]).unwrap(), 1.0);
        assert!(state_probability(sv(&[1; 6]), &[1.0; 5]).is_err());
    }

    #[test]
    fn bridge_with_table2_reliabilities() {
        let res = exact_reliability(&bridge(), &TABLE2_R).unwrap();
        assert_eq!(res.connected_vectors, 8);
        assert_eq!(res.enumerated_vectors, 16);
        // The published total adds eight terms each rounded to 5 decimals.
        assert!((res.value - 0.99553).abs() < 8.0 * 5e-6, "{}", res.value);
        let bf = brute_force_reliability(&bridge(), &TABLE2_R).unwrap();
        assert!((res.value - bf).abs() < 1e-12);
    }

    #[test]
    fn perfect_and_dead_nodes() {
        assert_eq!(exact_reliability(&bridge(), &[1.0; 6]).unwrap().value, 1.0);
        assert_eq!(brute_force_reliability(&bridge(), &[0.0; 6]).unwrap(), 0.0);
        let net = Network::new(2, 0, 1, &[(0, 1)]).unwrap();
        let r = brute_force_reliability(&net, &[0.9, 0.8]).unwrap();
        assert!((r - 0.72).abs() < 1e-15);
    }

    #[test]
    fn uniform_point_nine_matches_oracle() {
        let r = [0.9; 6];
        let exact = exact_reliability(&bridge(), &r).unwrap().value;
        let bf = brute_force_reliability(&bridge(), &r).unwrap();
        assert!((exact - bf).abs() < 1e-12);
    }

    #[test]
    fn invalid_rels_are_domain_errors() {
        assert!(matches!(
            exact_reliability(&bridge(), &[1.2, 0.5, 0.5, 0.5, 0.5, 0.5]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            exact_reliability(&bridge(), &[0.5; 3]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn brute_force_rejects_large_networks() {
        let edges: Vec<_> = (0..21).map(|i| (i, i + 1)).collect();
        let net = Network::new(22, 0, 21, &edges).unwrap();
        assert!(matches!(
            brute_force_reliability(&net, &[0.5; 22]),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn monte_carlo_degenerate_and_deterministic() {
        let net = bridge();
        let est = monte_carlo_reliability(&net, &[1.0; 6], 1000, 3).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.std_error, 0.0);
        let a = monte_carlo_reliability(&net, &TABLE2_R, 10_000, 11).unwrap();
        let b = monte_carlo_reliability(&net, &TABLE2_R, 10_000, 11).unwrap();
        assert_eq!(a, b);
        assert!(monte_carlo_reliability(&net, &TABLE2_R, 0, 1).is_err());
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let mut s = NeumaierSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.total(), 2.0);
    }
}
