//! Stepwise update rules of the simplified swarm.
//!
//! Each rule draws a uniform `rho` and picks one of up to four branches from
//! the cumulative thresholds: `[0, cg)` follows gBest, `[cg, cp)` follows the
//! particle's pBest, `[cp, cw)` keeps (or locally perturbs) the current
//! value, and `[cw, 1)` moves randomly.

use rand::Rng;

use super::config::Thresholds;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Global,
    Personal,
    Keep,
    Random,
}

pub fn select_branch(rho: f64, th: &Thresholds) -> Branch {
    if rho < th.cg {
        Branch::Global
    } else if rho < th.cp {
        Branch::Personal
    } else if rho < th.cw {
        Branch::Keep
    } else {
        Branch::Random
    }
}

/// Number of times the gBest branch was taken.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BranchCounter {
    pub global: u64,
}

impl BranchCounter {
    fn record(&mut self, b: Branch) {
        if b == Branch::Global {
            self.global += 1;
        }
    }
}

/// Per-coordinate update of raw component counts. The random branch draws a
/// fresh count uniformly in `[lb_j, ub_j]`.
#[allow(clippy::too_many_arguments)]
pub fn n_um_raw<R: Rng + ?Sized>(
    counts: &[u32],
    pbest: &[u32],
    gbest: &[u32],
    lb: &[u32],
    ub: &[u32],
    rho: &[f64],
    th: &Thresholds,
    counter: &mut BranchCounter,
    rng: &mut R,
) -> Vec<u32> {
    (0..counts.len())
        .map(|j| {
            let b = select_branch(rho[j], th);
            counter.record(b);
            match b {
                Branch::Global => gbest[j],
                Branch::Personal => pbest[j],
                Branch::Keep => counts[j],
                Branch::Random => rng.random_range(lb[j]..=ub[j]),
            }
        })
        .collect()
}

/// Whole-vector update on feasible-count indices: a single `rho` per particle
/// chooses gBest's member, pBest's member, the current member, or a uniformly
/// random member of a set of `len` members.
#[allow(clippy::too_many_arguments)]
pub fn n_um_comb<R: Rng + ?Sized>(
    current: usize,
    pbest: usize,
    gbest: usize,
    len: usize,
    rho: f64,
    th: &Thresholds,
    counter: &mut BranchCounter,
    rng: &mut R,
) -> usize {
    let b = select_branch(rho, th);
    counter.record(b);
    match b {
        Branch::Global => gbest,
        Branch::Personal => pbest,
        Branch::Keep => current,
        Branch::Random => rng.random_range(0..len),
    }
}

/// Step radius for the reliability update, as a magnitude:
/// `(r_ub - r_lb) / (2 * s * nvar)` with `s = (ngen + t) / ngen` when the
/// adaptive schedule is on and `s = 1` otherwise.
pub fn u_radius(r_lb: f64, r_ub: f64, nvar: usize, ngen: usize, t: usize, adaptive: bool) -> f64 {
    let s = if adaptive && ngen > 0 {
        (ngen + t) as f64 / ngen as f64
    } else {
        1.0
    };
    (r_ub - r_lb).abs() / (2.0 * s * nvar as f64)
}

/// Random draws consumed by one reliability coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordDraw {
    /// Branch selector in `[0, 1)`.
    pub rho: f64,
    /// Step multiplier in `[-0.5, 0.5)`.
    pub delta: f64,
}

/// Update of one reliability coordinate before bounds handling.
///
/// With `with_pbest` (four branches):
/// 1. `[0, cg)`, `r != g`: `g + delta * u`
/// 2. `[cg, cp)`, `r != p`: `p + delta * u`
/// 3. `[cp, cw)`: `r + delta * u`
/// 4. `[cw, 1)`, `r != g`: `r + delta * (r - g)`
///
/// Branches 1, 2 and 4 fall through to 3 when `r` equals their reference.
///
/// Without it (three branches, gBest only, `[cg, cp)` merged into the middle):
/// 1. `r == g` or `[0, cg)`: `r + delta * u`
/// 2. `[cg, cw)`: `g - (delta + 0.5) * u`, a jump below gBest by a uniform
///    fraction of the radius
/// 3. `[cw, 1)`: `r + delta * (r - g)`
pub fn r_um_coord(
    r: f64,
    p: f64,
    g: f64,
    u: f64,
    draw: CoordDraw,
    th: &Thresholds,
    with_pbest: bool,
) -> (f64, Branch) {
    let CoordDraw { rho, delta } = draw;
    let local = r + delta * u;
    if with_pbest {
        match select_branch(rho, th) {
            Branch::Global if r != g => (g + delta * u, Branch::Global),
            Branch::Personal if r != p => (p + delta * u, Branch::Personal),
            Branch::Random if r != g => (r + delta * (r - g), Branch::Random),
            _ => (local, Branch::Keep),
        }
    } else if r == g || rho < th.cg {
        (local, Branch::Keep)
    } else if rho < th.cw {
        (g - (delta + 0.5) * u, Branch::Global)
    } else {
        (r + delta * (r - g), Branch::Random)
    }
}

/// Vector reliability update. Values leaving `[lb_j, ub_j]` are replaced by a
/// uniform draw inside the bounds.
#[allow(clippy::too_many_arguments)]
pub fn r_um<R: Rng + ?Sized>(
    rels: &[f64],
    pbest: &[f64],
    gbest: &[f64],
    u: &[f64],
    draws: &[CoordDraw],
    th: &Thresholds,
    with_pbest: bool,
    lb: &[f64],
    ub: &[f64],
    counter: &mut BranchCounter,
    rng: &mut R,
) -> Vec<f64> {
    (0..rels.len())
        .map(|j| {
            let (v, b) = r_um_coord(rels[j], pbest[j], gbest[j], u[j], draws[j], th, with_pbest);
            // Only the four-branch form has a gBest-copy branch gated by cg.
            if with_pbest {
                counter.record(b);
            }
            if v >= lb[j] && v <= ub[j] {
                v
            } else {
                rng.random_range(lb[j]..=ub[j])
            }
        })
        .collect()
}
