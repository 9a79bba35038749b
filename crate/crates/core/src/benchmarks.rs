//! The six benchmark problems and the bridge example, bundled from `data/`.

use crate::error::{Error, Result};
use crate::model::{Network, ProblemInstance};

/// Text of the six-node bridge network.
pub const BRIDGE_NET: &str = include_str!("../../../data/bridge.net");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyStatus {
    /// Topology reproduces the published best solutions.
    Recovered,
    /// Stand-in topology with the right node count. Reliabilities are not
    /// comparable with published values.
    Surrogate,
}

#[derive(Debug, Clone, Copy)]
pub struct Benchmark {
    pub id: usize,
    pub network: &'static str,
    pub instance: &'static str,
}

impl Benchmark {
    /// Reads the `status:` line from the network header.
    pub fn status(&self) -> TopologyStatus {
        let surrogate = self.network.lines().any(|l| {
            l.trim_start()
                .strip_prefix('#')
                .is_some_and(|c| c.trim() == "status: surrogate")
        });
        if surrogate {
            TopologyStatus::Surrogate
        } else {
            TopologyStatus::Recovered
        }
    }

    pub fn load(&self) -> Result<ProblemInstance> {
        ProblemInstance::parse(self.instance, Network::parse(self.network)?)
    }
}

pub const BENCHMARKS: [Benchmark; 6] = [
    Benchmark {
        id: 1,
        network: include_str!("../../../data/bench1.net"),
        instance: include_str!("../../../data/bench1.inst"),
    },
    Benchmark {
        id: 2,
        network: include_str!("../../../data/bench2.net"),
        instance: include_str!("../../../data/bench2.inst"),
    },
    Benchmark {
        id: 3,
        network: include_str!("../../../data/bench3.net"),
        instance: include_str!("../../../data/bench3.inst"),
    },
    Benchmark {
        id: 4,
        network: include_str!("../../../data/bench4.net"),
        instance: include_str!("../../../data/bench4.inst"),
    },
    Benchmark {
        id: 5,
        network: include_str!("../../../data/bench5.net"),
        instance: include_str!("../../../data/bench5.inst"),
    },
    Benchmark {
        id: 6,
        network: include_str!("../../../data/bench6.net"),
        instance: include_str!("../../../data/bench6.inst"),
    },
];

/// Benchmark `id` (1 to 6).
pub fn benchmark(id: usize) -> Result<&'static Benchmark> {
    BENCHMARKS
        .iter()
        .find(|b| b.id == id)
        .ok_or_else(|| Error::Config(format!("no benchmark {id}; expected 1 to 6")))
}

/// The bridge network with the parameters and limits of benchmark 3.
pub fn bridge_instance() -> Result<ProblemInstance> {
    ProblemInstance::parse(benchmark(3)?.instance, Network::parse(BRIDGE_NET)?)
}
