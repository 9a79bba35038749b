//! Enumeration of every component-count vector that satisfies the bounds and
//! the volume and weight limits.
//!
//! The vectors are produced by multi-state binary addition: start at the lower
//! bounds, increment the last coordinate, and carry left when a coordinate
//! runs past its upper bound. Volume and weight are strictly increasing in
//! every count, so once incrementing coordinate `i` breaks a limit, every
//! further increment of `i` under the same prefix breaks it too. The
//! enumeration then resets `i` and carries immediately, skipping the rest of
//! that coordinate's range together with all suffixes below it.

use crate::error::{Error, Result};
use crate::model::ProblemInstance;
use crate::objective::{system_volume, system_weight};

/// Upper bound on the grid size the nested-loop oracle will walk.
pub const BRUTE_FORCE_GRID_CAP: u64 = 10_000_000;

/// The feasible count vectors in addition order, each with its cached
/// volume and weight. Members are addressed by index.
#[derive(Debug, Clone, PartialEq)]
pub struct CombSet {
    m: usize,
    flat: Vec<u32>,
    usage: Vec<(f64, f64)>,
}

impl CombSet {
    fn new(m: usize) -> Self {
        CombSet {
            m,
            flat: Vec::new(),
            usage: Vec::new(),
        }
    }

    fn push(&mut self, counts: &[u32], volume: f64, weight: f64) {
        self.flat.extend_from_slice(counts);
        self.usage.push((volume, weight));
    }

    pub fn len(&self) -> usize {
        self.usage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.usage.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn get(&self, index: usize) -> &[u32] {
        &self.flat[index * self.m..(index + 1) * self.m]
    }

    /// Cached `(volume, weight)` of a member.
    pub fn usage(&self, index: usize) -> (f64, f64) {
        self.usage[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.flat.chunks_exact(self.m.max(1)).take(self.len())
    }

    /// Index of `counts`, if it is a member. Members are sorted
    /// lexicographically, so this is a binary search.
    pub fn position(&self, counts: &[u32]) -> Option<usize> {
        if counts.len() != self.m {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(counts) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

fn within_limits(inst: &ProblemInstance, x: &[u32]) -> Option<(f64, f64)> {
    let v = system_volume(inst, x);
    let w = system_weight(inst, x);
    (v <= inst.v_ub && w <= inst.w_ub).then_some((v, w))
}

fn assert_monotone(inst: &ProblemInstance) -> Result<()> {
    // Skip-on-violation relies on strictly positive volume and weight coefficients.
    if inst.params.iter().all(|p| p.wv2 > 0.0 && p.w > 0.0) {
        Ok(())
    } else {
        Err(Error::Validation(
            "volume and weight coefficients must be positive for pruned enumeration".into(),
        ))
    }
}

/// Multi-state binary-addition enumeration with skip-on-violation.
///
/// Returns an empty set (not an error) when the lower-bound vector already
/// breaks a limit.
pub fn enumerate_feasible_counts(inst: &ProblemInstance) -> Result<CombSet> {
    assert_monotone(inst)?;
    let m = inst.subsystem_count();
    let (lb, ub) = (&inst.n_lb, &inst.n_ub);
    let mut out = CombSet::new(m);
    if m == 0 {
        return Ok(out);
    }
    let mut x = lb.clone();
    match within_limits(inst, &x) {
        Some((v, w)) => out.push(&x, v, w),
        None => return Ok(out),
    }
    'outer: loop {
        let mut i = m - 1;
        loop {
            if x[i] < ub[i] {
                x[i] += 1;
                if let Some((v, w)) = within_limits(inst, &x) {
                    out.push(&x, v, w);
                    continue 'outer;
                }
            }
            // Either exhausted or violated: every further value of x[i]
            // under this prefix is infeasible, so carry left.
            x[i] = lb[i];
            if i == 0 {
                break 'outer;
            }
            i -= 1;
        }
    }
    Ok(out)
}

/// Independent oracle: walks the full bounded grid in lexicographic order and
/// keeps the vectors that satisfy both limits.
pub fn brute_force_counts(inst: &ProblemInstance) -> Result<CombSet> {
    let m = inst.subsystem_count();
    let grid: u64 = (0..m)
        .map(|i| u64::from(inst.n_ub[i] - inst.n_lb[i] + 1))
        .try_fold(1u64, |acc, s| acc.checked_mul(s))
        .unwrap_or(u64::MAX);
    if grid > BRUTE_FORCE_GRID_CAP {
        return Err(Error::Capacity {
            what: "count grid size",
            size: usize::try_from(grid).unwrap_or(usize::MAX),
            cap: BRUTE_FORCE_GRID_CAP as usize,
        });
    }
    let mut out = CombSet::new(m);
    let mut x = vec![0u32; m];
    for code in 0..grid {
        let mut rest = code;
        for i in (0..m).rev() {
            let span = u64::from(inst.n_ub[i] - inst.n_lb[i] + 1);
            x[i] = inst.n_lb[i] + (rest % span) as u32;
            rest /= span;
        }
        let v = system_volume(inst, &x);
        let w = system_weight(inst, &x);
        if v <= inst.v_ub && w <= inst.w_ub {
            out.push(&x, v, w);
        }
    }
    Ok(out)
}
