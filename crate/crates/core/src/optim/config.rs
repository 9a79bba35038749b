use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The four two-level factors of the swarm. All on is BSSO, all off is the
/// plain SSO baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FactorLevels {
    /// A: update component counts as one index into the feasible-count set.
    pub comb_num: bool,
    /// B: zero the gBest threshold during the first half of the run.
    pub two_stage_cg: bool,
    /// C: four-branch reliability update that reinserts pBest.
    pub pbest_in_rum: bool,
    /// D: shrink the reliability step radius as generations advance.
    pub adaptive_uj: bool,
}

impl FactorLevels {
    pub const BSSO: FactorLevels = FactorLevels {
        comb_num: true,
        two_stage_cg: true,
        pbest_in_rum: true,
        adaptive_uj: true,
    };

    pub const SSO: FactorLevels = FactorLevels {
        comb_num: false,
        two_stage_cg: false,
        pbest_in_rum: false,
        adaptive_uj: false,
    };

    pub fn as_array(&self) -> [bool; 4] {
        [
            self.comb_num,
            self.two_stage_cg,
            self.pbest_in_rum,
            self.adaptive_uj,
        ]
    }

    pub fn from_array(a: [bool; 4]) -> Self {
        FactorLevels {
            comb_num: a[0],
            two_stage_cg: a[1],
            pbest_in_rum: a[2],
            adaptive_uj: a[3],
        }
    }
}

impl fmt::Display for FactorLevels {
    /// Four characters in `A B C D` order, `1` for level 2 (on).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for on in self.as_array() {
            f.write_str(if on { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for FactorLevels {
    type Err = Error;

    /// Accepts a 4-digit bitmask in `ABCD` order (`"1011"`) or the letters of
    /// the factors that are on (`"ACD"`, `"-"` for none).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() == 4 && s.chars().all(|c| c == '0' || c == '1') {
            let b: Vec<bool> = s.chars().map(|c| c == '1').collect();
            return Ok(FactorLevels::from_array([b[0], b[1], b[2], b[3]]));
        }
        let mut a = [false; 4];
        for c in s.chars() {
            match c.to_ascii_uppercase() {
                'A' => a[0] = true,
                'B' => a[1] = true,
                'C' => a[2] = true,
                'D' => a[3] = true,
                '-' => {}
                _ => {
                    return Err(Error::Config(format!(
                        "factor mask `{s}` must be 4 binary digits or letters from ABCD"
                    )))
                }
            }
        }
        Ok(FactorLevels::from_array(a))
    }
}

/// Cumulative branch thresholds for one update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub cg: f64,
    pub cp: f64,
    pub cw: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaParams {
    pub crossover_rate: f64,
    pub mutation_rate: f64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            crossover_rate: 0.6,
            mutation_rate: 0.4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoParams {
    pub w_max: f64,
    pub w_min: f64,
    pub c1: f64,
    pub c2: f64,
    /// Velocity limit as a fraction of each coordinate's range.
    pub vmax_fraction: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        PsoParams {
            w_max: 0.9,
            w_min: 0.4,
            c1: 2.0,
            c2: 2.0,
            vmax_fraction: 0.2,
        }
    }
}

/// Settings shared by every algorithm for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmConfig {
    pub nsol: usize,
    pub ngen: usize,
    pub cg: f64,
    pub cp: f64,
    pub cw: f64,
    pub gamma: f64,
    pub seed: u64,
    pub factors: FactorLevels,
    pub ga: GaParams,
    pub pso: PsoParams,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        SwarmConfig {
            nsol: 100,
            ngen: 1000,
            cg: 0.25,
            cp: 0.5,
            cw: 0.6,
            gamma: 3.0,
            seed: 0,
            factors: FactorLevels::BSSO,
            ga: GaParams::default(),
            pso: PsoParams::default(),
        }
    }
}

impl SwarmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nsol == 0 {
            return Err(Error::Config("nsol must be at least 1".into()));
        }
        if !(0.0 <= self.cg && self.cg <= self.cp && self.cp <= self.cw && self.cw <= 1.0) {
            return Err(Error::Config(format!(
                "thresholds must satisfy 0 <= cg <= cp <= cw <= 1, got {}/{}/{}",
                self.cg, self.cp, self.cw
            )));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Config("gamma must be positive".into()));
        }
        let rate = |v: f64| (0.0..=1.0).contains(&v);
        if !rate(self.ga.crossover_rate) || !rate(self.ga.mutation_rate) {
            return Err(Error::Config("GA rates must lie in [0, 1]".into()));
        }
        let p = &self.pso;
        if !(p.w_min >= 0.0
            && p.w_min <= p.w_max
            && p.c1 >= 0.0
            && p.c2 >= 0.0
            && p.vmax_fraction > 0.0)
        {
            return Err(Error::Config("invalid PSO parameters".into()));
        }
        Ok(())
    }

    /// Thresholds with the gBest threshold scheduled for generation `t`.
    pub fn thresholds(&self, t: usize) -> Thresholds {
        Thresholds {
            cg: effective_cg(self, t),
            cp: self.cp,
            cw: self.cw,
        }
    }
}

/// gBest threshold at generation `t`: zero through the first half of the run
/// when the two-stage schedule is on, `cg` otherwise.
pub fn effective_cg(cfg: &SwarmConfig, t: usize) -> f64 {
    if cfg.factors.two_stage_cg && in_first_stage(cfg.ngen, t) {
        0.0
    } else {
        cfg.cg
    }
}

/// `t < ngen / 2`, evaluated exactly for odd `ngen`.
pub(crate) fn in_first_stage(ngen: usize, t: usize) -> bool {
    2 * t < ngen
}
