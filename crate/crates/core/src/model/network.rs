use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{parse_err, Error, Result};

/// Largest node count supported. State vectors are packed into a `u64`.
pub const MAX_NODES: usize = 64;

/// A directed activity-on-node network with a designated source and sink.
///
/// Nodes are the subsystems; arcs are perfectly reliable. Indices are 0-based
/// in memory and 1-based in the text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    m: usize,
    source: usize,
    sink: usize,
    edges: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
}

impl Network {
    /// Builds and validates a network from 0-based arcs.
    pub fn new(m: usize, source: usize, sink: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if m < 2 {
            return Err(Error::Validation(format!(
                "network needs at least 2 nodes, got {m}"
            )));
        }
        if m > MAX_NODES {
            return Err(Error::Capacity {
                what: "node count",
                size: m,
                cap: MAX_NODES,
            });
        }
        if source >= m || sink >= m {
            return Err(Error::Validation("source or sink out of range".into()));
        }
        if source == sink {
            return Err(Error::Validation("source and sink must differ".into()));
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= m || v >= m {
                return Err(Error::Validation(format!(
                    "edge {}->{} references a node outside 1..={m}",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::Validation(format!("self-loop on node {}", u + 1)));
            }
            if !set.insert((u, v)) {
                return Err(Error::Validation(format!(
                    "duplicate edge {}->{}",
                    u + 1,
                    v + 1
                )));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut succ = vec![Vec::new(); m];
        for &(u, v) in &edges {
            succ[u].push(v);
        }
        let net = Network {
            m,
            source,
            sink,
            edges,
            succ,
        };
        if net.shortest_path_nodes(u64::MAX).is_none() {
            return Err(Error::Validation(format!(
                "sink {} is unreachable from source {}",
                sink + 1,
                source + 1
            )));
        }
        Ok(net)
    }

    /// Parses the line-oriented network format:
    ///
    /// ```text
    /// nodes 6
    /// source 1
    /// sink 6
    /// edge 1 2
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut nodes = None;
        let mut source = None;
        let mut sink = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let toks = tokens(raw);
            let Some((&key, args)) = toks.split_first() else {
                continue;
            };
            match key {
                "nodes" => {
                    let [n] = ints::<1>(args, line_no)?;
                    if n < 2 {
                        return Err(parse_err(line_no, "nodes must be at least 2"));
                    }
                    nodes = Some(n);
                }
                "source" => source = Some(ints::<1>(args, line_no)?[0]),
                "sink" => sink = Some(ints::<1>(args, line_no)?[0]),
                "edge" => {
                    let [u, v] = ints::<2>(args, line_no)?;
                    if let Some(m) = nodes {
                        if u == 0 || v == 0 || u > m || v > m {
                            return Err(parse_err(
                                line_no,
                                format!("edge {u} {v} outside node range 1..={m}"),
                            ));
                        }
                    } else {
                        return Err(parse_err(line_no, "edge before nodes declaration"));
                    }
                    edges.push((u - 1, v - 1));
                }
                other => return Err(parse_err(line_no, format!("unknown keyword `{other}`"))),
            }
        }
        let m = nodes.ok_or_else(|| Error::Validation("missing `nodes` line".into()))?;
        let source = source.ok_or_else(|| Error::Validation("missing `source` line".into()))?;
        let sink = sink.ok_or_else(|| Error::Validation("missing `sink` line".into()))?;
        if source == 0 || source > m || sink == 0 || sink > m {
            return Err(Error::Validation(format!("terminals must lie in 1..={m}")));
        }
        Network::new(m, source - 1, sink - 1, &edges)
    }

    /// Serializes back to the text format (1-based).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "nodes {}", self.m);
        let _ = writeln!(out, "source {}", self.source + 1);
        let _ = writeln!(out, "sink {}", self.sink + 1);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "edge {} {}", u + 1, v + 1);
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.m
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Arcs in ascending `(from, to)` order, 0-based.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.succ[node]
    }

    /// Nodes other than the two terminals, ascending.
    pub fn intermediate_nodes(&self) -> Vec<usize> {
        (0..self.m)
            .filter(|&v| v != self.source && v != self.sink)
            .collect()
    }

    /// Number of nodes on a shortest source-to-sink path, found by
    /// breadth-first layering over the full network.
    pub fn min_path_node_count(&self) -> usize {
        self.shortest_path_nodes(u64::MAX)
            .expect("validated network always has a source-sink path")
    }

    /// Layered search restricted to the active nodes in `mask`. Returns the
    /// number of nodes on the shortest path, or `None` if the sink is cut off.
    fn shortest_path_nodes(&self, mask: u64) -> Option<usize> {
        if mask >> self.source & 1 == 0 || mask >> self.sink & 1 == 0 {
            return None;
        }
        let mut visited = 1u64 << self.source;
        let mut layer = vec![self.source];
        let mut depth = 1;
        while !layer.is_empty() {
            if layer.contains(&self.sink) {
                return Some(depth);
            }
            let mut next = Vec::new();
            for &u in &layer {
                for &v in &self.succ[u] {
                    let bit = 1u64 << v;
                    if mask & bit != 0 && visited & bit == 0 {
                        visited |= bit;
                        next.push(v);
                    }
                }
            }
            layer = next;
            depth += 1;
        }
        None
    }
}

pub(crate) fn tokens(line: &str) -> Vec<&str> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    body.split_whitespace().collect()
}

fn ints<const N: usize>(args: &[&str], line: usize) -> Result<[usize; N]> {
    if args.len() != N {
        return Err(parse_err(line, format!("expected {N} integer argument(s)")));
    }
    let mut out = [0usize; N];
    for (slot, tok) in out.iter_mut().zip(args) {
        *slot = tok
            .parse()
            .map_err(|_| parse_err(line, format!("`{tok}` is not a non-negative integer")))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BRIDGE: &str = "nodes 6\nsource 1\nsink 6\n\
        edge 1 2\nedge 1 3\nedge 2 4\nedge 2 5\nedge 3 5\nedge 4 6\nedge 5 6\n";

    #[test]
    fn parses_bridge() {
        let net = Network::parse(BRIDGE).unwrap();
        assert_eq!(net.node_count(), 6);
        assert_eq!(net.source(), 0);
        assert_eq!(net.sink(), 5);
        assert_eq!(net.edges().len(), 7);
        assert_eq!(net.min_path_node_count(), 4);
    }

    #[test]
    fn parses_two_node_network() {
        let net = Network::parse("nodes 2\nsource 1\nsink 2\nedge 1 2\n").unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.min_path_node_count(), 2);
        assert!(net.intermediate_nodes().is_empty());
    }

    #[test]
    fn chain_path_length_is_forced() {
        let edges: Vec<_> = (0..5).map(|i| (i, i + 1)).collect();
        let net = Network::new(6, 0, 5, &edges).unwrap();
        assert_eq!(net.min_path_node_count(), 6);
    }

    #[test]
    fn edge_out_of_range_is_a_parse_error() {
        let err = Network::parse("nodes 6\nsource 1\nsink 6\nedge 1 9\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 4,
                msg: "edge 1 9 outside node range 1..=6".into()
            }
        );
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = Network::parse("nodes 3\n# comment\nsource x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = Network::parse("nodes 3\nfoo 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn unreachable_sink_is_rejected() {
        let err = Network::parse("nodes 3\nsource 1\nsink 3\nedge 1 2\nedge 3 2\n").unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn structural_defects_are_rejected() {
        assert!(Network::new(3, 0, 0, &[(0, 1)]).is_err());
        assert!(Network::new(3, 0, 2, &[(0, 0), (0, 2)]).is_err());
        assert!(Network::new(3, 0, 2, &[(0, 2), (0, 2)]).is_err());
        assert!(Network::new(1, 0, 0, &[]).is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# bridge\n\nnodes 2 # two\nsource 1\nsink 2\nedge 1 2 # only arc\n";
        assert_eq!(Network::parse(text).unwrap().edges(), &[(0, 1)]);
    }

    #[test]
    fn serialization_restores_one_based_indices() {
        let net = Network::parse(BRIDGE).unwrap();
        let text = net.to_text();
        assert!(text.contains("edge 2 5"));
        assert_eq!(Network::parse(&text).unwrap(), net);
    }
}
