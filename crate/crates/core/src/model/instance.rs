use std::fmt::Write as _;

use super::network::{tokens, Network};
use crate::error::{parse_err, Error, Result};

/// Scale applied to the `alpha` column of instance files.
pub const ALPHA_SCALE_EXP: i32 = -5;

pub const DEFAULT_N_BOUNDS: (u32, u32) = (1, 5);
pub const DEFAULT_R_BOUNDS: (f64, f64) = (0.5, 1.0 - 1e-6);

/// Cost, volume and weight coefficients of one subsystem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsystemParams {
    /// Cost coefficient, already multiplied by `1e-5`.
    pub alpha: f64,
    pub beta: f64,
    /// Product of weight and squared volume coefficient.
    pub wv2: f64,
    pub w: f64,
}

/// A complete allocation problem: network, per-subsystem coefficients,
/// resource limits and variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub network: Network,
    pub params: Vec<SubsystemParams>,
    pub c_ub: f64,
    pub v_ub: f64,
    pub w_ub: f64,
    pub n_lb: Vec<u32>,
    pub n_ub: Vec<u32>,
    pub r_lb: Vec<f64>,
    pub r_ub: Vec<f64>,
}

impl ProblemInstance {
    /// Checks every structural and numeric invariant.
    pub fn validate(&self) -> Result<()> {
        let m = self.network.node_count();
        for (name, len) in [
            ("params", self.params.len()),
            ("n_lb", self.n_lb.len()),
            ("n_ub", self.n_ub.len()),
            ("r_lb", self.r_lb.len()),
            ("r_ub", self.r_ub.len()),
        ] {
            if len != m {
                return Err(Error::Validation(format!(
                    "{name} has {len} entries but the network has {m} subsystems"
                )));
            }
        }
        for (i, p) in self.params.iter().enumerate() {
            let ok = [p.alpha, p.beta, p.wv2, p.w]
                .iter()
                .all(|v| v.is_finite() && *v > 0.0);
            if !ok {
                return Err(Error::Validation(format!(
                    "subsystem {} has a non-positive coefficient",
                    i + 1
                )));
            }
        }
        for (name, v) in [("C", self.c_ub), ("V", self.v_ub), ("W", self.w_ub)] {
            if v.is_nan() || v <= 0.0 {
                return Err(Error::Validation(format!("limit {name} must be positive")));
            }
        }
        for i in 0..m {
            if !(1 <= self.n_lb[i] && self.n_lb[i] <= self.n_ub[i]) {
                return Err(Error::Validation(format!(
                    "component bounds of subsystem {} must satisfy 1 <= lb <= ub",
                    i + 1
                )));
            }
            if !(0.0 < self.r_lb[i] && self.r_lb[i] < self.r_ub[i] && self.r_ub[i] < 1.0) {
                return Err(Error::Validation(format!(
                    "reliability bounds of subsystem {} must satisfy 0 < lb < ub < 1",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn subsystem_count(&self) -> usize {
        self.params.len()
    }

    /// Parses an instance file against an already loaded network.
    ///
    /// ```text
    /// subsystems 4
    /// sub 1 alpha 1.0 beta 1.5 wv2 1 w 6
    /// ...
    /// limits C 80 V 50 W 100
    /// nbounds 1 5
    /// rbounds 0.5 0.999999
    /// ```
    pub fn parse(text: &str, network: Network) -> Result<Self> {
        let mut count = None;
        let mut rows: Vec<Option<SubsystemParams>> = Vec::new();
        let mut limits = None;
        let mut nb = DEFAULT_N_BOUNDS;
        let mut rb = DEFAULT_R_BOUNDS;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let toks = tokens(raw);
            let Some((&key, args)) = toks.split_first() else {
                continue;
            };
            match key {
                "subsystems" => {
                    if args.len() != 1 {
                        return Err(parse_err(line, "expected `subsystems <m>`"));
                    }
                    let m: usize = args[0]
                        .parse()
                        .map_err(|_| parse_err(line, "subsystem count is not an integer"))?;
                    count = Some(m);
                    rows = vec![None; m];
                }
                "sub" => {
                    let m = count.ok_or_else(|| parse_err(line, "`sub` before `subsystems`"))?;
                    if args.len() != 9 {
                        return Err(parse_err(
                            line,
                            "expected `sub <i> alpha <a> beta <b> wv2 <x> w <y>`",
                        ));
                    }
                    let i: usize = args[0]
                        .parse()
                        .map_err(|_| parse_err(line, "subsystem index is not an integer"))?;
                    if i == 0 || i > m {
                        return Err(parse_err(
                            line,
                            format!("subsystem index {i} outside 1..={m}"),
                        ));
                    }
                    let alpha = keyed(args, 1, "alpha", line).and_then(|t| {
                        parse_scaled(t, ALPHA_SCALE_EXP).ok_or_else(|| parse_err(line, "bad alpha"))
                    })?;
                    let beta = real(keyed(args, 3, "beta", line)?, line)?;
                    let wv2 = real(keyed(args, 5, "wv2", line)?, line)?;
                    let w = real(keyed(args, 7, "w", line)?, line)?;
                    if rows[i - 1].is_some() {
                        return Err(parse_err(line, format!("subsystem {i} defined twice")));
                    }
                    rows[i - 1] = Some(SubsystemParams {
                        alpha,
                        beta,
                        wv2,
                        w,
                    });
                }
                "limits" => {
                    if args.len() != 6 {
                        return Err(parse_err(line, "expected `limits C <c> V <v> W <w>`"));
                    }
                    let c = real(keyed(args, 0, "C", line)?, line)?;
                    let v = real(keyed(args, 2, "V", line)?, line)?;
                    let w = real(keyed(args, 4, "W", line)?, line)?;
                    limits = Some((c, v, w));
                }
                "nbounds" => {
                    if args.len() != 2 {
                        return Err(parse_err(line, "expected `nbounds <lb> <ub>`"));
                    }
                    let p = |t: &str| {
                        t.parse::<u32>()
                            .map_err(|_| parse_err(line, "component bound is not an integer"))
                    };
                    nb = (p(args[0])?, p(args[1])?);
                }
                "rbounds" => {
                    if args.len() != 2 {
                        return Err(parse_err(line, "expected `rbounds <lb> <ub>`"));
                    }
                    rb = (real(args[0], line)?, real(args[1], line)?);
                }
                other => return Err(parse_err(line, format!("unknown keyword `{other}`"))),
            }
        }
        let m = count.ok_or_else(|| Error::Validation("missing `subsystems` line".into()))?;
        if m != network.node_count() {
            return Err(Error::Validation(format!(
                "instance declares {m} subsystems but the network has {} nodes",
                network.node_count()
            )));
        }
        let params = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| Error::Validation(format!("subsystem {} missing", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        let (c_ub, v_ub, w_ub) =
            limits.ok_or_else(|| Error::Validation("missing `limits` line".into()))?;
        let inst = ProblemInstance {
            network,
            params,
            c_ub,
            v_ub,
            w_ub,
            n_lb: vec![nb.0; m],
            n_ub: vec![nb.1; m],
            r_lb: vec![rb.0; m],
            r_ub: vec![rb.1; m],
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Serializes to the instance format. Bounds are written uniformly, so
    /// per-subsystem bounds that differ cannot be represented.
    pub fn to_text(&self) -> Result<String> {
        let uniform = |a: &[u32]| a.windows(2).all(|w| w[0] == w[1]);
        let uniform_f = |a: &[f64]| a.windows(2).all(|w| w[0] == w[1]);
        if !(uniform(&self.n_lb)
            && uniform(&self.n_ub)
            && uniform_f(&self.r_lb)
            && uniform_f(&self.r_ub))
        {
            return Err(Error::Validation(
                "per-subsystem bounds are not uniform and cannot be serialized".into(),
            ));
        }
        let mut out = String::new();
        let _ = writeln!(out, "subsystems {}", self.params.len());
        for (i, p) in self.params.iter().enumerate() {
            let _ = writeln!(
                out,
                "sub {} alpha {} beta {} wv2 {} w {}",
                i + 1,
                format_scaled(p.alpha, ALPHA_SCALE_EXP),
                p.beta,
                p.wv2,
                p.w
            );
        }
        let _ = writeln!(
            out,
            "limits C {} V {} W {}",
            self.c_ub, self.v_ub, self.w_ub
        );
        let _ = writeln!(out, "nbounds {} {}", self.n_lb[0], self.n_ub[0]);
        let _ = writeln!(out, "rbounds {} {}", self.r_lb[0], self.r_ub[0]);
        Ok(out)
    }
}

/// A candidate allocation: component counts `N` and component reliabilities `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub counts: Vec<u32>,
    pub rels: Vec<f64>,
}

impl Solution {
    pub fn new(counts: Vec<u32>, rels: Vec<f64>) -> Self {
        Solution { counts, rels }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Parses a flat literal of `2m` comma- or whitespace-separated numbers:
    /// the `m` counts followed by the `m` reliabilities.
    pub fn parse_flat(text: &str) -> Result<Self> {
        let vals: Vec<&str> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if vals.is_empty() || !vals.len().is_multiple_of(2) {
            return Err(Error::Validation(format!(
                "solution literal needs an even number of values, got {}",
                vals.len()
            )));
        }
        let m = vals.len() / 2;
        let counts = vals[..m]
            .iter()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::Validation(format!("`{t}` is not a component count")))
            })
            .collect::<Result<Vec<_>>>()?;
        let rels = vals[m..]
            .iter()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Validation(format!("`{t}` is not a reliability")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Solution { counts, rels })
    }
}

fn keyed<'a>(args: &[&'a str], at: usize, key: &str, line: usize) -> Result<&'a str> {
    if args.get(at) != Some(&key) {
        return Err(parse_err(
            line,
            format!("expected `{key}` at position {}", at + 2),
        ));
    }
    args.get(at + 1)
        .copied()
        .ok_or_else(|| parse_err(line, format!("missing value for `{key}`")))
}

fn real(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| parse_err(line, format!("`{tok}` is not a finite number")))
}

/// Parses `tok` and multiplies it by `10^exp` by shifting the decimal exponent
/// in text, so the result is the correctly rounded value of the scaled decimal.
fn parse_scaled(tok: &str, exp: i32) -> Option<f64> {
    let (mant, e) = match tok.find(['e', 'E']) {
        Some(i) => (&tok[..i], tok[i + 1..].parse::<i32>().ok()?),
        None => (tok, 0),
    };
    mant.parse::<f64>().ok()?;
    let v: f64 = format!("{mant}e{}", e + exp).parse().ok()?;
    v.is_finite().then_some(v)
}

/// Inverse of [`parse_scaled`]: the shortest text that parses back to `v`.
fn format_scaled(v: f64, exp: i32) -> String {
    let s = format!("{v:e}");
    let (mant, e) = s.split_once('e').expect("`{:e}` always has an exponent");
    let e: i32 = e.parse::<i32>().expect("valid exponent") - exp;
    if e == 0 {
        mant.to_string()
    } else {
        format!("{mant}e{e}")
    }
}
