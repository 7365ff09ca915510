use rayon::prelude::*;

use crate::sequence::{SequenceItem, SimplexWiseSequence};
use crate::stack::{Level, Stack};

/// Where the collapse check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseViolation {
    pub level: Level,
    pub step: usize,
    pub reason: &'static str,
}

/// Replays `seq` once per level `λ` of `stack` and checks that every
/// regular pair with value at most `λ` is an elementary expansion of the
/// current complex intersected with the cut at `λ`, with `(σ, τ)` free once
/// added. Between two critical items the pairs then spell out a collapse of
/// the later cut-intersection onto the earlier one.
pub fn check_collapse_theorem(seq: &SimplexWiseSequence, stack: &Stack) -> bool {
    collapse_violation(seq, stack).is_none()
}

/// First violation in level order, if any.
pub fn collapse_violation(seq: &SimplexWiseSequence, stack: &Stack) -> Option<CollapseViolation> {
    let levels: Vec<Level> = stack.levels().iter().collect();
    levels
        .par_iter()
        .map(|&level| check_level(seq, stack, level))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next()
}

fn check_level(seq: &SimplexWiseSequence, stack: &Stack, level: Level) -> Option<CollapseViolation> {
    let k = stack.domain();
    let fail = |step: usize, reason: &'static str| Some(CollapseViolation { level, step, reason });
    if !stack.has_simplicial_domain() {
        return fail(0, "stack domain is not a simplicial complex");
    }
    let mut present = vec![false; k.len()];
    for f in seq.base().faces() {
        match k.id_of(f) {
            Some(id) => present[id as usize] = true,
            None => return fail(0, "base face outside the stack domain"),
        }
    }
    let in_cut = |id: u32| stack.value_of(id) <= level;
    for (step, item) in seq.items().iter().enumerate() {
        match item {
            SequenceItem::Critical(nu) => {
                let Some(id) = k.id_of(nu) else {
                    return fail(step, "face outside the stack domain");
                };
                if present[id as usize] {
                    return fail(step, "face added twice");
                }
                present[id as usize] = true;
            }
            SequenceItem::Regular(sigma, tau) => {
                let (Some(s), Some(t)) = (k.id_of(sigma), k.id_of(tau)) else {
                    return fail(step, "face outside the stack domain");
                };
                if present[s as usize] || present[t as usize] {
                    return fail(step, "face added twice");
                }
                present[s as usize] = true;
                present[t as usize] = true;
                if !in_cut(s) {
                    continue;
                }
                if !in_cut(t) {
                    return fail(step, "pair straddles the cut");
                }
                if !sigma.is_facet_of(tau) {
                    return fail(step, "not a codimension-1 pair");
                }
                let in_current = |id: u32| present[id as usize] && in_cut(id);
                if !k.boundary_ids(s).iter().all(|&b| in_current(b))
                    || !k.boundary_ids(t).iter().all(|&b| b == s || in_current(b))
                {
                    return fail(step, "pair added before its faces");
                }
                let cofaces = k.coboundary_ids(s).iter().filter(|&&c| in_current(c)).count();
                if cofaces != 1 {
                    return fail(step, "pair is not free in the cut");
                }
            }
        }
    }
    None
}
