//! `key = value` experiment files.
//!
//! ```text
//! # benchmark 3, ten runs of every algorithm
//! instance = data/bench3.inst
//! network = data/bench3.net
//! algorithm = bsso, sso, ga, pso
//! runs = 10
//! ngen = 300
//! factor_b = off
//! ```

use std::path::PathBuf;
use std::str::FromStr;

use super::ExperimentSpec;
use crate::error::{parse_err, Result};
use crate::optim::{Algorithm, FactorLevels};

fn value<T: FromStr>(key: &str, v: &str, line: usize) -> Result<T> {
    v.parse()
        .map_err(|_| parse_err(line, format!("bad value `{v}` for `{key}`")))
}

fn flag(key: &str, v: &str, line: usize) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" | "2" => Ok(true),
        "off" | "false" | "no" | "1" => Ok(false),
        _ => Err(parse_err(
            line,
            format!("`{key}` takes on/off (or level 1/2), got `{v}`"),
        )),
    }
}

/// Applies the settings in `text` on top of `base`. Later keys override
/// earlier ones; unknown keys are errors.
pub fn parse_config(text: &str, base: ExperimentSpec) -> Result<ExperimentSpec> {
    let mut spec = base;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, v)) = body.split_once('=') else {
            return Err(parse_err(line, "expected `key = value`"));
        };
        let (key, v) = (key.trim().to_ascii_lowercase(), v.trim());
        let c = &mut spec.config;
        match key.as_str() {
            "network" => spec.network = Some(PathBuf::from(v)),
            "instance" => spec.instance = Some(PathBuf::from(v)),
            "out" => spec.out = Some(PathBuf::from(v)),
            "algorithm" | "algorithms" => {
                spec.algorithms = v
                    .split(',')
                    .map(|a| Algorithm::from_str(a).map_err(|e| parse_err(line, e.to_string())))
                    .collect::<Result<_>>()?;
            }
            "runs" => spec.runs = value(&key, v, line)?,
            "nsol" => c.nsol = value(&key, v, line)?,
            "ngen" => c.ngen = value(&key, v, line)?,
            "seed" => c.seed = value(&key, v, line)?,
            "cg" => c.cg = value(&key, v, line)?,
            "cp" => c.cp = value(&key, v, line)?,
            "cw" => c.cw = value(&key, v, line)?,
            "gamma" => c.gamma = value(&key, v, line)?,
            "crossover_rate" => c.ga.crossover_rate = value(&key, v, line)?,
            "mutation_rate" => c.ga.mutation_rate = value(&key, v, line)?,
            "w_max" => c.pso.w_max = value(&key, v, line)?,
            "w_min" => c.pso.w_min = value(&key, v, line)?,
            "c1" => c.pso.c1 = value(&key, v, line)?,
            "c2" => c.pso.c2 = value(&key, v, line)?,
            "vmax_fraction" => c.pso.vmax_fraction = value(&key, v, line)?,
            "factors" => {
                spec.factors =
                    Some(FactorLevels::from_str(v).map_err(|e| parse_err(line, e.to_string()))?)
            }
            "factor_a" | "factor_b" | "factor_c" | "factor_d" => {
                let mut levels = spec.factors.unwrap_or(FactorLevels::BSSO).as_array();
                let slot = (key.as_bytes()[7] - b'a') as usize;
                levels[slot] = flag(&key, v, line)?;
                spec.factors = Some(FactorLevels::from_array(levels));
            }
            _ => return Err(parse_err(line, format!("unknown key `{key}`"))),
        }
    }
    Ok(spec)
}
