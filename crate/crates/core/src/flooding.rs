//! Flooding sequences: one Morse sequence per level set of a stack,
//! concatenated in level order, plus the stable sort that turns any
//! F-sequence into an equivalent flooding sequence.

use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{CosimplicialComplex, FaceId, FaceSet, SimplicialComplex};
use crate::engine::{items_on, traced_items_on, Policy, Trace};
use crate::sequence::{is_f_sequence, validate_morse, MorseViolation, SequenceItem, SimplexWiseSequence};
use crate::stack::{Level, Stack};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FloodError {
    #[error("the stack domain is not a simplicial complex")]
    NotSimplicial,
    #[error("not a Morse sequence on the stack domain: {0}")]
    NotMorse(#[from] MorseViolation),
    #[error("a regular pair has unequal stack values")]
    NotFSequence,
    #[error("swap index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("worker pool: {0}")]
    Pool(String),
}

/// The level sets of a stack on a simplicial complex, ready to be processed
/// independently.
pub struct FloodPlan<'a> {
    stack: &'a Stack,
    sections: Vec<(Level, Vec<FaceId>)>,
    // position of each face within its own section
    local: Vec<FaceId>,
}

impl<'a> FloodPlan<'a> {
    pub fn new(stack: &'a Stack) -> Result<Self, FloodError> {
        if !stack.has_simplicial_domain() {
            return Err(FloodError::NotSimplicial);
        }
        let sections: Vec<(Level, Vec<FaceId>)> = stack
            .level_partition()
            .into_iter()
            .filter(|(_, ids)| !ids.is_empty())
            .collect();
        let mut local = vec![0; stack.domain().len()];
        for (_, ids) in &sections {
            for (i, &id) in ids.iter().enumerate() {
                local[id as usize] = i as FaceId;
            }
        }
        Ok(FloodPlan { stack, sections, local })
    }

    pub fn levels(&self) -> impl Iterator<Item = Level> + '_ {
        self.sections.iter().map(|(l, _)| *l)
    }

    pub fn section(&self, index: usize) -> CosimplicialComplex {
        CosimplicialComplex::new_unchecked(self.section_faces(index))
    }

    fn section_faces(&self, index: usize) -> FaceSet {
        let (level, members) = &self.sections[index];
        self.stack.domain().subset_with(members, |g| {
            (self.stack.value_of(g) == *level).then(|| self.local[g as usize])
        })
    }

    fn level_items(&self, index: usize, policy: Policy) -> Vec<SequenceItem> {
        items_on(&self.section_faces(index), policy)
    }

    /// Per-level contraction traces, in ascending level order.
    pub fn traces(&self, policy: Policy) -> Vec<(Level, Trace)> {
        (0..self.sections.len())
            .map(|i| {
                (self.sections[i].0, traced_items_on(&self.section_faces(i), policy).1)
            })
            .collect()
    }

    /// Per-level sequences, in ascending level order. With more than one
    /// worker the levels are processed on a dedicated pool; the output does
    /// not depend on the worker count.
    pub fn run(&self, policy: Policy, workers: usize) -> Result<Vec<(Level, Vec<SequenceItem>)>, FloodError> {
        let per_level = |i: usize| (self.sections[i].0, self.level_items(i, policy));
        if workers <= 1 || self.sections.len() <= 1 {
            return Ok((0..self.sections.len()).map(per_level).collect());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| FloodError::Pool(e.to_string()))?;
        Ok(pool.install(|| (0..self.sections.len()).into_par_iter().map(per_level).collect()))
    }
}

fn assemble(segments: Vec<(Level, Vec<SequenceItem>)>) -> SimplexWiseSequence {
    let total = segments.iter().map(|(_, s)| s.len()).sum();
    let mut items = Vec::with_capacity(total);
    for (_, mut segment) in segments {
        items.append(&mut segment);
    }
    SimplexWiseSequence::new_unchecked(SimplicialComplex::empty(), items)
}

/// Flooding sequence on `stack` built level by level with `policy`.
pub fn flood(stack: &Stack, policy: Policy) -> Result<SimplexWiseSequence, FloodError> {
    flood_parallel(stack, policy, 1)
}

/// Same output as [`flood`], with levels processed by up to `workers`
/// threads.
pub fn flood_parallel(stack: &Stack, policy: Policy, workers: usize) -> Result<SimplexWiseSequence, FloodError> {
    let plan = FloodPlan::new(stack)?;
    Ok(assemble(plan.run(policy, workers)?))
}

fn require_f_sequence(seq: &SimplexWiseSequence, stack: &Stack) -> Result<(), FloodError> {
    let k = stack.complex().map_err(|_| FloodError::NotSimplicial)?;
    validate_morse(seq, &k)?;
    if !is_f_sequence(seq, stack) {
        return Err(FloodError::NotFSequence);
    }
    Ok(())
}

/// Stable sort of the items of an F-sequence by stack value. The result is
/// a flooding sequence with the same gradient vector field.
pub fn stable_sort_to_flooding(seq: &SimplexWiseSequence, stack: &Stack) -> Result<SimplexWiseSequence, FloodError> {
    require_f_sequence(seq, stack)?;
    let mut keyed: Vec<(Level, SequenceItem)> = seq
        .items()
        .iter()
        .map(|item| (item.value(stack).expect("checked F-sequence"), item.clone()))
        .collect();
    keyed.sort_by_key(|(v, _)| *v);
    Ok(SimplexWiseSequence::new_unchecked(
        seq.base().clone(),
        keyed.into_iter().map(|(_, item)| item).collect(),
    ))
}

/// Swaps items `index` and `index + 1` when the first has the larger value
/// and reports whether the result is still a Morse F-sequence. Returns
/// `None` when the pair is not inverted and nothing is swapped.
pub fn check_swap(seq: &SimplexWiseSequence, index: usize, stack: &Stack) -> Result<Option<bool>, FloodError> {
    let len = seq.len();
    if index + 1 >= len {
        return Err(FloodError::IndexOutOfRange { index, len });
    }
    let items = seq.items();
    let (a, b) = (items[index].value(stack), items[index + 1].value(stack));
    let (Some(a), Some(b)) = (a, b) else {
        return Err(FloodError::NotFSequence);
    };
    if a <= b {
        return Ok(None);
    }
    let mut swapped = items.to_vec();
    swapped.swap(index, index + 1);
    let swapped = SimplexWiseSequence::new_unchecked(seq.base().clone(), swapped);
    Ok(Some(require_f_sequence(&swapped, stack).is_ok()))
}

/// Whether two consecutive items can trade places in a Morse sequence: no
/// face of the first is a codimension-1 face of a face of the second.
pub fn swap_is_legal(first: &SequenceItem, second: &SequenceItem) -> bool {
    !first
        .faces()
        .any(|f| second.faces().any(|g| f.is_facet_of(g)))
}
